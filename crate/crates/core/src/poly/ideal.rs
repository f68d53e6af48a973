//! Vanishing ideals of commuting matrix tuples.
//!
//! Monomials are visited in ascending graded-lex order and their matrix values
//! fed to an exact span. A monomial whose value depends on the earlier
//! standard monomials yields the generator `m − Σ c_s s`; the generators
//! obtained this way form the reduced Gröbner basis of the kernel of
//! evaluation, so equal ideals give equal generator lists.

use std::collections::HashMap;
use std::fmt;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::multi::{Monomial, MultiPoly};
use super::parse::parse_multi;
use super::univariate::UniPoly;
use crate::error::{Error, ParseError, Result};
use crate::linalg::{characteristic_polynomial, check_commuting, vectorize, ExactMatrix, Insertion, SpanBuilder};
use crate::scalar::GaussianRational;

/// Generator names `y` for one variable, `y1, …, yl` otherwise.
pub fn default_variables(l: usize) -> Vec<String> {
    if l == 1 {
        vec!["y".to_string()]
    } else {
        (1..=l).map(|k| format!("y{k}")).collect()
    }
}

/// Zero-dimensional ideal given by its reduced graded-lex Gröbner basis and the
/// standard monomials spanning the quotient.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "IdealJson", into = "IdealJson")]
pub struct IdealPresentation {
    variables: Vec<String>,
    generators: Vec<MultiPoly>,
    standard_monomials: Vec<Monomial>,
}

#[derive(Serialize, Deserialize)]
struct IdealJson {
    variables: Vec<String>,
    generators: Vec<String>,
    standard_monomials: Vec<Vec<u32>>,
}

impl From<IdealPresentation> for IdealJson {
    fn from(p: IdealPresentation) -> Self {
        Self {
            generators: p.generators.iter().map(ToString::to_string).collect(),
            standard_monomials: p.standard_monomials.iter().map(|m| m.0.clone()).collect(),
            variables: p.variables,
        }
    }
}

impl TryFrom<IdealJson> for IdealPresentation {
    type Error = Error;

    fn try_from(j: IdealJson) -> Result<Self> {
        let generators = j.generators.iter().map(|g| parse_multi(g, &j.variables)).collect::<Result<Vec<_>>>()?;
        if let Some(bad) = j.standard_monomials.iter().find(|m| m.len() != j.variables.len()) {
            return Err(ParseError::Schema(format!("standard monomial {bad:?} has the wrong length")).into());
        }
        let standard_monomials = j.standard_monomials.into_iter().map(Monomial).collect();
        Ok(Self { variables: j.variables, generators, standard_monomials })
    }
}

impl IdealPresentation {
    pub fn variables(&self) -> &[String] {
        &self.variables
    }

    pub fn generators(&self) -> &[MultiPoly] {
        &self.generators
    }

    pub fn standard_monomials(&self) -> &[Monomial] {
        &self.standard_monomials
    }

    pub fn quotient_dimension(&self) -> usize {
        self.standard_monomials.len()
    }

    /// Remainder of `p` on division by the generators; zero iff `p` lies in
    /// the ideal.
    pub fn normal_form(&self, p: &MultiPoly) -> MultiPoly {
        p.remainder(&self.generators)
    }

    pub fn contains(&self, p: &MultiPoly) -> bool {
        self.normal_form(p).is_zero()
    }

    /// Generators written with repeated linear factors grouped, e.g.
    /// `(y-3)^2`; other generators keep the expanded form.
    pub fn generator_text(&self, g: &MultiPoly) -> String {
        if self.variables.len() != 1 {
            return g.to_string();
        }
        let coeffs: Vec<GaussianRational> =
            (0..=g.total_degree().unwrap_or(0)).map(|k| g.coefficient(&Monomial(vec![k]))).collect();
        let u = UniPoly::new(coeffs);
        let parts = u.squarefree_decomposition();
        if parts.iter().all(|(_, k)| *k == 1) {
            return g.to_string();
        }
        let var = &self.variables[0];
        let mut factors = Vec::new();
        for (f, k) in parts {
            let base = match f.degree() {
                Some(1) => linear_text(var, &-f.coeff(0)),
                _ => format!("({})", u_text(&f, var)),
            };
            let base = if base.contains(['+', '-']) && !base.starts_with('(') { format!("({base})") } else { base };
            factors.push(if k > 1 { format!("{base}^{k}") } else { base });
        }
        factors.join("*")
    }

    /// The ideal as `(g1, g2, …)` using [`Self::generator_text`].
    pub fn factored_text(&self) -> String {
        let gens: Vec<String> = self.generators.iter().map(|g| self.generator_text(g)).collect();
        format!("({})", gens.join(", "))
    }
}

fn u_text(f: &UniPoly<GaussianRational>, var: &str) -> String {
    use crate::ring::Pretty;
    f.pretty(&[var])
}

fn linear_text(var: &str, root: &GaussianRational) -> String {
    if root.is_zero() {
        return var.to_string();
    }
    let neg = -root.clone();
    let text = neg.to_string();
    let compound = text.chars().skip(1).any(|c| c == '+' || c == '-');
    if compound {
        format!("{var}+({text})")
    } else if let Some(stripped) = text.strip_prefix('-') {
        format!("{var}-{stripped}")
    } else {
        format!("{var}+{text}")
    }
}

impl fmt::Display for IdealPresentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let gens: Vec<String> = self.generators.iter().map(ToString::to_string).collect();
        write!(f, "({})", gens.join(", "))
    }
}

/// The quotient `Q(i)[y]/I` realized inside the matrix algebra: the ideal
/// together with the values of its standard monomials.
#[derive(Clone, Debug)]
pub struct QuotientAlgebra {
    pub ideal: IdealPresentation,
    /// Value of each standard monomial on the tuple, in the same order.
    pub values: Vec<ExactMatrix>,
    span: SpanBuilder<GaussianRational>,
}

impl QuotientAlgebra {
    /// Matrix of multiplication by `Σ w_j y_j` on the standard-monomial basis.
    pub fn multiplication_matrix(&self, ms: &[ExactMatrix], weights: &[GaussianRational]) -> ExactMatrix {
        let n = self.values.len();
        let size = ms[0].rows();
        let mut l = ExactMatrix::zeros(size, size);
        for (m, w) in ms.iter().zip(weights) {
            l = l + m.scale(w);
        }
        let columns: Vec<Vec<GaussianRational>> = self
            .values
            .iter()
            .map(|v| self.span.coordinates(&vectorize(&l.matmul(v))).expect("quotient closed under multiplication"))
            .collect();
        let mut out = ExactMatrix::zeros(n, n);
        for (j, col) in columns.iter().enumerate() {
            for (i, c) in col.iter().enumerate() {
                out[(i, j)] = c.clone();
            }
        }
        out
    }

    /// Characteristic polynomial of [`Self::multiplication_matrix`].
    pub fn multiplication_charpoly(
        &self,
        ms: &[ExactMatrix],
        weights: &[GaussianRational],
    ) -> UniPoly<GaussianRational> {
        characteristic_polynomial(&self.multiplication_matrix(ms, weights))
    }
}

/// `p(m₁, …, m_l)` for pairwise commuting matrices.
pub fn evaluate_at_tuple(p: &MultiPoly, ms: &[ExactMatrix]) -> Result<ExactMatrix> {
    let n = check_commuting(ms)?;
    p.evaluate(ms, &ExactMatrix::identity(n))
}

/// Vanishing ideal of a commuting tuple; `degree_cap` defaults to twice the
/// matrix size.
pub fn vanishing_ideal(variables: &[String], ms: &[ExactMatrix], degree_cap: Option<u32>) -> Result<IdealPresentation> {
    Ok(quotient_algebra(variables, ms, degree_cap)?.ideal)
}

/// As [`vanishing_ideal`], also returning the standard-monomial values.
pub fn quotient_algebra(variables: &[String], ms: &[ExactMatrix], degree_cap: Option<u32>) -> Result<QuotientAlgebra> {
    if variables.len() != ms.len() {
        return Err(Error::Shape(format!("{} variables for {} matrices", variables.len(), ms.len())));
    }
    let n = check_commuting(ms)?;
    let cap = degree_cap.unwrap_or(2 * n as u32);
    let l = ms.len();
    let mut span = SpanBuilder::new(n * n);
    let mut standard: Vec<Monomial> = Vec::new();
    let mut values: Vec<ExactMatrix> = Vec::new();
    let mut index: HashMap<Monomial, usize> = HashMap::new();
    let mut generators: Vec<MultiPoly> = Vec::new();
    let mut leads: Vec<Monomial> = Vec::new();
    for d in 0.. {
        let candidates: Vec<Monomial> =
            Monomial::of_degree(l, d).into_iter().filter(|m| !leads.iter().any(|g| g.divides(m))).collect();
        if candidates.is_empty() {
            break;
        }
        for m in candidates {
            let value = match m.0.iter().position(|&e| e > 0) {
                None => ExactMatrix::identity(n),
                Some(i) => {
                    let mut parent = m.clone();
                    parent.0[i] -= 1;
                    ms[i].matmul(&values[index[&parent]])
                }
            };
            match span.insert(&vectorize(&value)) {
                Insertion::Independent(_) => {
                    if d > cap {
                        return Err(Error::DegreeCapExceeded { degree: d as usize, cap: cap as usize });
                    }
                    index.insert(m.clone(), values.len());
                    standard.push(m);
                    values.push(value);
                }
                Insertion::Dependent(coeffs) => {
                    let mut g = MultiPoly::term(variables, m.clone(), GaussianRational::one());
                    for (s, c) in standard.iter().zip(&coeffs) {
                        g = g.sub(&MultiPoly::term(variables, s.clone(), c.clone()));
                    }
                    generators.push(g);
                    leads.push(m);
                }
            }
        }
    }
    Ok(QuotientAlgebra {
        ideal: IdealPresentation { variables: variables.to_vec(), generators, standard_monomials: standard },
        values,
        span,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{int_matrix, minimal_polynomial};

    fn texts(p: &IdealPresentation) -> Vec<String> {
        p.generators().iter().map(ToString::to_string).collect()
    }

    #[test]
    fn diagonal_idempotent() {
        let v = default_variables(1);
        let p = vanishing_ideal(&v, &[int_matrix(&[&[0, 0], &[0, 1]])], None).unwrap();
        assert_eq!(texts(&p), vec!["y^2 - y"]);
        assert_eq!(p.standard_monomials(), &[Monomial(vec![0]), Monomial(vec![1])]);
        assert_eq!(p.factored_text(), "(y^2 - y)");
    }

    #[test]
    fn jordan_block() {
        let v = default_variables(1);
        let p = vanishing_ideal(&v, &[int_matrix(&[&[3, 1], &[0, 3]])], None).unwrap();
        assert_eq!(texts(&p), vec!["y^2 - 6*y + 9"]);
        assert_eq!(p.factored_text(), "((y-3)^2)");
        let q = vanishing_ideal(&v, &[int_matrix(&[&[0, 1], &[0, 0]])], None).unwrap();
        assert_eq!(q.factored_text(), "(y^2)");
    }

    #[test]
    fn shift_and_zero_pair() {
        let v = default_variables(2);
        let ms = [int_matrix(&[&[0, 1], &[0, 0]]), ExactMatrix::zeros(2, 2)];
        let p = vanishing_ideal(&v, &ms, None).unwrap();
        assert_eq!(texts(&p), vec!["y2", "y1^2"]);
        assert_eq!(p.standard_monomials(), &[Monomial(vec![0, 0]), Monomial(vec![1, 0])]);
        for g in p.generators() {
            assert!(evaluate_at_tuple(g, &ms).unwrap().is_zero());
        }
        assert!(p.contains(&MultiPoly::var(&v, 0).mul(&MultiPoly::var(&v, 1))));
        assert!(!p.contains(&MultiPoly::var(&v, 0)));
    }

    #[test]
    fn evaluation_examples() {
        let v = default_variables(2);
        let y1y2 = MultiPoly::var(&v, 0).mul(&MultiPoly::var(&v, 1));
        let a = ExactMatrix::diagonal(vec![GaussianRational::from_int(1), GaussianRational::from_int(2)]);
        let b = ExactMatrix::diagonal(vec![GaussianRational::from_int(3), GaussianRational::from_int(4)]);
        let prod = evaluate_at_tuple(&y1y2, &[a, b]).unwrap();
        assert_eq!(prod, ExactMatrix::diagonal(vec![GaussianRational::from_int(3), GaussianRational::from_int(8)]));
        let e12 = ExactMatrix::unit(2, 0, 1);
        let e21 = ExactMatrix::unit(2, 1, 0);
        assert!(matches!(evaluate_at_tuple(&y1y2, &[e12, e21]), Err(Error::NotCommuting { i: 0, j: 1, .. })));
    }

    #[test]
    fn univariate_agrees_with_minimal_polynomial() {
        let m = int_matrix(&[&[2, 1, 0], &[0, 2, 0], &[0, 0, -1]]);
        let p = vanishing_ideal(&default_variables(1), std::slice::from_ref(&m), None).unwrap();
        let mp = minimal_polynomial(&m);
        assert_eq!(p.generators().len(), 1);
        let g = &p.generators()[0];
        for (k, c) in mp.coeffs().iter().enumerate() {
            assert_eq!(&g.coefficient(&Monomial(vec![k as u32])), c);
        }
    }

    #[test]
    fn degree_cap_is_enforced() {
        let m = int_matrix(&[&[0, 1, 0], &[0, 0, 1], &[0, 0, 0]]);
        let err = vanishing_ideal(&default_variables(1), &[m], Some(1)).unwrap_err();
        assert!(matches!(err, Error::DegreeCapExceeded { degree: 2, cap: 1 }));
    }

    #[test]
    fn json_round_trip() {
        let v = default_variables(2);
        let ms = [int_matrix(&[&[0, 1], &[0, 0]]), ExactMatrix::zeros(2, 2)];
        let p = vanishing_ideal(&v, &ms, None).unwrap();
        let text = serde_json::to_string(&p).unwrap();
        let back: IdealPresentation = serde_json::from_str(&text).unwrap();
        assert_eq!(back, p);
    }

    #[test]
    fn multiplication_operator_charpoly() {
        let v = default_variables(1);
        let m = ExactMatrix::diagonal(vec![
            GaussianRational::from_int(3),
            GaussianRational::from_int(3),
            GaussianRational::from_int(5),
        ]);
        let q = quotient_algebra(&v, std::slice::from_ref(&m), None).unwrap();
        let chi = q.multiplication_charpoly(&[m], &[GaussianRational::one()]);
        // (y - 3)(y - 5)
        assert_eq!(
            chi.coeffs(),
            &[GaussianRational::from_int(15), GaussianRational::from_int(-8), GaussianRational::one()]
        );
    }
}
