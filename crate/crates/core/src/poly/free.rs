//! Elements of the free associative algebra `Q(i)⟨ξ₁,…,ξₙ⟩` with a hard cap on
//! word length.

use std::cmp::Ordering;
use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};

use super::algebra::Algebra;
use crate::error::{Error, Result};
use crate::ring::join_terms;
use crate::scalar::GaussianRational;

/// A word in the generators, ordered by length and then lexicographically.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Word(pub Vec<usize>);

impl Ord for Word {
    fn cmp(&self, o: &Self) -> Ordering {
        self.0.len().cmp(&o.0.len()).then_with(|| self.0.cmp(&o.0))
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}

impl Word {
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn concat(&self, o: &Self) -> Self {
        Self(self.0.iter().chain(&o.0).copied().collect())
    }

    /// Every word of exactly `len` letters over `n` generators, ascending.
    pub fn all_of_length(n: usize, len: usize) -> Vec<Self> {
        let mut out = vec![Word(Vec::new())];
        for _ in 0..len {
            out = out
                .into_iter()
                .flat_map(|w| (0..n).map(move |g| Word(w.0.iter().copied().chain([g]).collect())))
                .collect();
        }
        out
    }

    pub fn render(&self, names: &[String]) -> String {
        self.0.iter().map(|&g| names[g].as_str()).collect::<Vec<_>>().join("*")
    }
}

#[derive(Clone, PartialEq, Eq)]
pub struct FreePoly {
    generators: Vec<String>,
    cap: usize,
    terms: BTreeMap<Word, GaussianRational>,
}

impl FreePoly {
    pub fn zero(generators: &[String], cap: usize) -> Self {
        Self { generators: generators.to_vec(), cap, terms: BTreeMap::new() }
    }

    pub fn constant(generators: &[String], cap: usize, c: GaussianRational) -> Self {
        let mut p = Self::zero(generators, cap);
        if !c.is_zero() {
            p.terms.insert(Word(Vec::new()), c);
        }
        p
    }

    pub fn var(generators: &[String], cap: usize, i: usize) -> Self {
        Self::word(generators, cap, Word(vec![i]), GaussianRational::one()).expect("cap admits length one")
    }

    pub fn word(generators: &[String], cap: usize, w: Word, c: GaussianRational) -> Result<Self> {
        if w.len() > cap {
            return Err(Error::DegreeCapExceeded { degree: w.len(), cap });
        }
        let mut p = Self::zero(generators, cap);
        p.add_term(w, &c);
        Ok(p)
    }

    pub fn generators(&self) -> &[String] {
        &self.generators
    }

    pub fn cap(&self) -> usize {
        self.cap
    }

    /// Same element with a different cap; fails if a word is too long.
    pub fn with_cap(&self, cap: usize) -> Result<Self> {
        if let Some(d) = self.degree().filter(|&d| d > cap) {
            return Err(Error::DegreeCapExceeded { degree: d, cap });
        }
        Ok(Self { cap, ..self.clone() })
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Word, &GaussianRational)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.terms.keys().map(Word::len).max()
    }

    pub fn coefficient(&self, w: &Word) -> GaussianRational {
        self.terms.get(w).cloned().unwrap_or_else(GaussianRational::zero)
    }

    fn add_term(&mut self, w: Word, c: &GaussianRational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(w) {
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

    fn check_same_algebra(&self, o: &Self) {
        assert_eq!(self.generators, o.generators, "free polynomials over different generators");
    }

    pub fn add(&self, o: &Self) -> Self {
        self.check_same_algebra(o);
        let mut p = self.clone();
        p.cap = self.cap.max(o.cap);
        for (w, c) in &o.terms {
            p.add_term(w.clone(), c);
        }
        p
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.scale(&-GaussianRational::one()))
    }

    pub fn scale(&self, c: &GaussianRational) -> Self {
        let mut p = Self::zero(&self.generators, self.cap);
        for (w, a) in &self.terms {
            p.add_term(w.clone(), &(a * c));
        }
        p
    }

    /// Product; fails with `DegreeCapExceeded` if a nonzero word would exceed
    /// the cap.
    pub fn mul(&self, o: &Self) -> Result<Self> {
        self.check_same_algebra(o);
        let cap = self.cap.max(o.cap);
        let mut p = Self::zero(&self.generators, cap);
        for (wa, ca) in &self.terms {
            for (wb, cb) in &o.terms {
                let w = wa.concat(wb);
                if w.len() > cap {
                    return Err(Error::DegreeCapExceeded { degree: w.len(), cap });
                }
                p.add_term(w, &(ca * cb));
            }
        }
        Ok(p)
    }

    /// `[a, b] = ab − ba`.
    pub fn commutator(a: &Self, b: &Self) -> Result<Self> {
        Ok(a.mul(b)?.sub(&b.mul(a)?))
    }

    /// Substitutes `values[g]` for generator `g`, multiplying letters left to right.
    pub fn evaluate<A: Algebra>(&self, values: &[A], one: &A) -> Result<A> {
        if values.len() != self.generators.len() {
            return Err(Error::Shape(format!(
                "{} values supplied for {} generators",
                values.len(),
                self.generators.len()
            )));
        }
        let mut acc = one.scale(&GaussianRational::zero());
        for (w, c) in &self.terms {
            let mut val = one.clone();
            for &g in &w.0 {
                val = val.mul(&values[g])?;
            }
            acc = acc.add(&val.scale(c))?;
        }
        Ok(acc)
    }
}

impl Algebra for FreePoly {
    fn add(&self, other: &Self) -> Result<Self> {
        Ok(FreePoly::add(self, other))
    }
    fn mul(&self, other: &Self) -> Result<Self> {
        FreePoly::mul(self, other)
    }
    fn scale(&self, c: &GaussianRational) -> Self {
        FreePoly::scale(self, c)
    }
}

impl fmt::Display for FreePoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let text = join_terms(self.terms.iter().rev().map(|(w, c)| (c.to_string(), w.render(&self.generators))));
        write!(f, "{text}")
    }
}

impl fmt::Debug for FreePoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FreePoly({self})")
    }
}
