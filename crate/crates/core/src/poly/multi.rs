//! Commutative multivariate polynomials over `Q(i)` in graded-lex order.

use std::cmp::Ordering;
use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};

use super::algebra::Algebra;
use crate::error::{Error, Result};
use crate::ring::join_terms;
use crate::scalar::GaussianRational;

/// Exponent vector ordered graded-lexicographically with the first variable
/// largest.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Monomial(pub Vec<u32>);

impl Monomial {
    pub fn one(nvars: usize) -> Self {
        Self(vec![0; nvars])
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        Self(e)
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn mul(&self, o: &Self) -> Self {
        Self(self.0.iter().zip(&o.0).map(|(a, b)| a + b).collect())
    }

    pub fn divides(&self, o: &Self) -> bool {
        self.0.iter().zip(&o.0).all(|(a, b)| a <= b)
    }

    /// All exponent vectors of total degree `d`, ascending.
    pub fn of_degree(nvars: usize, d: u32) -> Vec<Self> {
        fn rec(nvars: usize, d: u32, prefix: &mut Vec<u32>, out: &mut Vec<Monomial>) {
            if prefix.len() + 1 == nvars {
                prefix.push(d);
                out.push(Monomial(prefix.clone()));
                prefix.pop();
                return;
            }
            for e in 0..=d {
                prefix.push(e);
                rec(nvars, d - e, prefix, out);
                prefix.pop();
            }
        }
        if nvars == 0 {
            return if d == 0 { vec![Monomial(Vec::new())] } else { Vec::new() };
        }
        let mut out = Vec::new();
        rec(nvars, d, &mut Vec::new(), &mut out);
        out.sort();
        out
    }

    pub fn render(&self, names: &[String]) -> String {
        let parts: Vec<String> = self
            .0
            .iter()
            .zip(names)
            .filter(|(e, _)| **e > 0)
            .map(|(e, n)| if *e == 1 { n.clone() } else { format!("{n}^{e}") })
            .collect();
        parts.join("*")
    }
}

impl Ord for Monomial {
    fn cmp(&self, o: &Self) -> Ordering {
        self.degree().cmp(&o.degree()).then_with(|| self.0.cmp(&o.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}

/// Polynomial in named commuting variables; no zero coefficients are stored.
#[derive(Clone, PartialEq, Eq)]
pub struct MultiPoly {
    variables: Vec<String>,
    terms: BTreeMap<Monomial, GaussianRational>,
}

impl MultiPoly {
    pub fn zero(variables: &[String]) -> Self {
        Self { variables: variables.to_vec(), terms: BTreeMap::new() }
    }

    pub fn constant(variables: &[String], c: GaussianRational) -> Self {
        Self::term(variables, Monomial::one(variables.len()), c)
    }

    pub fn term(variables: &[String], m: Monomial, c: GaussianRational) -> Self {
        assert_eq!(m.0.len(), variables.len(), "exponent vector length mismatch");
        let mut p = Self::zero(variables);
        if !c.is_zero() {
            p.terms.insert(m, c);
        }
        p
    }

    pub fn var(variables: &[String], i: usize) -> Self {
        Self::term(variables, Monomial::var(variables.len(), i), GaussianRational::one())
    }

    pub fn from_terms(variables: &[String], terms: impl IntoIterator<Item = (Monomial, GaussianRational)>) -> Self {
        let mut p = Self::zero(variables);
        for (m, c) in terms {
            p.add_term(m, &c);
        }
        p
    }

    pub fn variables(&self) -> &[String] {
        &self.variables
    }

    pub fn nvars(&self) -> usize {
        self.variables.len()
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &GaussianRational)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(Monomial::degree).max()
    }

    pub fn leading(&self) -> Option<(&Monomial, &GaussianRational)> {
        self.terms.iter().next_back()
    }

    pub fn coefficient(&self, m: &Monomial) -> GaussianRational {
        self.terms.get(m).cloned().unwrap_or_else(GaussianRational::zero)
    }

    pub fn is_homogeneous(&self) -> bool {
        let mut degs = self.terms.keys().map(Monomial::degree);
        match degs.next() {
            Some(d) => degs.all(|e| e == d),
            None => true,
        }
    }

    fn add_term(&mut self, m: Monomial, c: &GaussianRational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            Entry::Vacant(v) => {
                v.insert(c.clone());
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    fn check_same_ring(&self, o: &Self) {
        assert_eq!(self.variables, o.variables, "polynomials over different variable lists");
    }

    pub fn add(&self, o: &Self) -> Self {
        self.check_same_ring(o);
        let mut p = self.clone();
        for (m, c) in &o.terms {
            p.add_term(m.clone(), c);
        }
        p
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> Self {
        self.scale(&-GaussianRational::one())
    }

    pub fn scale(&self, c: &GaussianRational) -> Self {
        if c.is_zero() {
            return Self::zero(&self.variables);
        }
        Self { variables: self.variables.clone(), terms: self.terms.iter().map(|(m, a)| (m.clone(), a * c)).collect() }
    }

    pub fn mul(&self, o: &Self) -> Self {
        self.check_same_ring(o);
        let mut p = Self::zero(&self.variables);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &o.terms {
                p.add_term(ma.mul(mb), &(ca * cb));
            }
        }
        p
    }

    pub fn mul_monomial(&self, m: &Monomial) -> Self {
        Self {
            variables: self.variables.clone(),
            terms: self.terms.iter().map(|(k, c)| (k.mul(m), c.clone())).collect(),
        }
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::constant(&self.variables, GaussianRational::one());
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// Scales so the leading coefficient is one (zero stays zero).
    pub fn monic(&self) -> Self {
        match self.leading() {
            Some((_, c)) => self.scale(&c.inv().expect("nonzero leading coefficient")),
            None => self.clone(),
        }
    }

    /// Remainder of multivariate division by `divisors`, each leading term
    /// tried in list order.
    pub fn remainder(&self, divisors: &[MultiPoly]) -> Self {
        let leads: Vec<(&Monomial, &GaussianRational, &MultiPoly)> =
            divisors.iter().filter_map(|g| g.leading().map(|(m, c)| (m, c, g))).collect();
        let mut rest = self.clone();
        let mut out = Self::zero(&self.variables);
        while let Some((m, c)) = rest.leading().map(|(m, c)| (m.clone(), c.clone())) {
            match leads.iter().find(|(l, _, _)| l.divides(&m)) {
                Some((l, lc, g)) => {
                    let quotient = Monomial(m.0.iter().zip(&l.0).map(|(a, b)| a - b).collect());
                    let factor = &c / *lc;
                    rest = rest.sub(&g.mul_monomial(&quotient).scale(&factor));
                }
                None => {
                    rest.terms.remove(&m);
                    out.terms.insert(m, c);
                }
            }
        }
        out
    }

    /// Same polynomial over a different ordered variable list; each variable
    /// must appear in `target` unless its exponents are all zero.
    pub fn rename_into(&self, target: &[String]) -> Result<Self> {
        let map: Vec<Option<usize>> = self.variables.iter().map(|v| target.iter().position(|t| t == v)).collect();
        let mut p = Self::zero(target);
        for (m, c) in &self.terms {
            let mut e = vec![0; target.len()];
            for (k, &x) in m.0.iter().enumerate() {
                if x == 0 {
                    continue;
                }
                let idx = map[k]
                    .ok_or_else(|| Error::Shape(format!("variable `{}` not among {:?}", self.variables[k], target)))?;
                e[idx] += x;
            }
            p.add_term(Monomial(e), c);
        }
        Ok(p)
    }

    /// Evaluates with `values[i]` substituted for variable `i`; each monomial is
    /// multiplied out in variable order, so noncommutative carriers should only
    /// receive commuting values.
    pub fn evaluate<A: Algebra>(&self, values: &[A], one: &A) -> Result<A> {
        if values.len() != self.nvars() {
            return Err(Error::Shape(format!("{} values supplied for {} variables", values.len(), self.nvars())));
        }
        let mut powers: Vec<Vec<A>> = values.iter().map(|v| vec![one.clone(), v.clone()]).collect();
        let mut acc = one.scale(&GaussianRational::zero());
        for (m, c) in &self.terms {
            let mut val = one.clone();
            for (i, &e) in m.0.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                while powers[i].len() <= e as usize {
                    let next = powers[i].last().expect("seeded").mul(&values[i])?;
                    powers[i].push(next);
                }
                val = val.mul(&powers[i][e as usize])?;
            }
            acc = acc.add(&val.scale(c))?;
        }
        Ok(acc)
    }

    /// Partial evaluation of a single-variable polynomial at a scalar.
    pub fn eval_scalar(&self, point: &[GaussianRational]) -> GaussianRational {
        assert_eq!(point.len(), self.nvars(), "point dimension mismatch");
        self.terms.iter().fold(GaussianRational::zero(), |acc, (m, c)| {
            let v = m.0.iter().zip(point).fold(c.clone(), |v, (&e, x)| &v * &x.pow(e));
            &acc + &v
        })
    }
}

impl Algebra for MultiPoly {
    fn add(&self, other: &Self) -> Result<Self> {
        Ok(MultiPoly::add(self, other))
    }
    fn mul(&self, other: &Self) -> Result<Self> {
        Ok(MultiPoly::mul(self, other))
    }
    fn scale(&self, c: &GaussianRational) -> Self {
        MultiPoly::scale(self, c)
    }
}

impl fmt::Display for MultiPoly {
    /// Terms in descending graded-lex order, e.g. `3/2*y1^2*y2 - y3 + 5`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let text = join_terms(self.terms.iter().rev().map(|(m, c)| (c.to_string(), m.render(&self.variables))));
        write!(f, "{text}")
    }
}

impl fmt::Debug for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "MultiPoly({self})")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn vars(names: &[&str]) -> Vec<String> {
        names.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn graded_lex_order() {
        let mut ms = Monomial::of_degree(2, 2);
        ms.sort();
        assert_eq!(ms, vec![Monomial(vec![0, 2]), Monomial(vec![1, 1]), Monomial(vec![2, 0])]);
        assert!(Monomial(vec![0, 3]) > Monomial(vec![2, 0]));
        assert!(Monomial(vec![1, 0]) > Monomial(vec![0, 1]));
    }

    #[test]
    fn arithmetic_and_display() {
        let v = vars(&["y1", "y2", "y3"]);
        let y1 = MultiPoly::var(&v, 0);
        let y2 = MultiPoly::var(&v, 1);
        let y3 = MultiPoly::var(&v, 2);
        let p = y1
            .pow(2)
            .mul(&y2)
            .scale(&GaussianRational::from_ratio(3, 2))
            .sub(&y3)
            .add(&MultiPoly::constant(&v, GaussianRational::from_int(5)));
        assert_eq!(p.to_string(), "3/2*y1^2*y2 - y3 + 5");
        assert!(p.sub(&p).is_zero());
        assert_eq!(p.total_degree(), Some(3));
    }

    #[test]
    fn evaluation_in_polynomials() {
        let v = vars(&["z1", "z2"]);
        let w = vars(&["t"]);
        let t = MultiPoly::var(&w, 0);
        let p = MultiPoly::var(&v, 0).mul(&MultiPoly::var(&v, 1));
        let one = MultiPoly::constant(&w, GaussianRational::one());
        let val = p.evaluate(&[t.clone(), t.pow(2)], &one).unwrap();
        assert_eq!(val, t.pow(3));
    }
}
