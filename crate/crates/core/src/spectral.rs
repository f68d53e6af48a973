//! Higgs pairs `φ(x)` on the affine line: classical spectral curves
//! `det(λ − φ(x))`, their Cayley–Hamilton containment, and quantum spectral
//! operators of the λ-connection `λ·d/dx + φ(x)`.

use std::fmt;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{characteristic_polynomial, Matrix};
use crate::morphism::probe_vectors;
use crate::poly::{
    parse_univariate_matrix, rational_krylov_relation, univariate_matrix_entries, Monomial, MultiPoly,
    OperatorRelation, PolyEntry, RatFunc, UniPoly,
};
use crate::ring::Pretty;
use crate::scalar::GaussianRational;

pub type Poly = UniPoly<GaussianRational>;
pub type PolyMatrix = Matrix<Poly>;
/// Rational functions in `λ`.
pub type LambdaField = RatFunc<GaussianRational>;
/// Rational functions in `x` over rational functions in `λ`.
pub type OperatorField = RatFunc<LambdaField>;

pub const CURVE_VARIABLES: [&str; 2] = ["lambda", "x"];

#[derive(Clone, Debug, PartialEq)]
pub struct SpectralPair {
    higgs: PolyMatrix,
}

impl SpectralPair {
    pub fn new(higgs: PolyMatrix) -> Result<Self> {
        if higgs.rows() == 0 {
            return Err(Error::ZeroRank);
        }
        if !higgs.is_square() {
            return Err(Error::Shape(format!("Higgs field is {}x{}, expected square", higgs.rows(), higgs.cols())));
        }
        Ok(Self { higgs })
    }

    pub fn rank(&self) -> usize {
        self.higgs.rows()
    }

    pub fn higgs(&self) -> &PolyMatrix {
        &self.higgs
    }
}

/// JSON form `{"rank": r, "higgs": [["x", 0], …]}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpectralPairSpec {
    pub rank: usize,
    pub higgs: Vec<Vec<PolyEntry>>,
}

impl SpectralPairSpec {
    pub fn build(&self) -> Result<SpectralPair> {
        let m = parse_univariate_matrix(&self.higgs, "x")?;
        if m.rows() != self.rank {
            return Err(Error::Shape(format!("rank {} but Higgs field has {} rows", self.rank, m.rows())));
        }
        SpectralPair::new(m)
    }
}

impl From<&SpectralPair> for SpectralPairSpec {
    fn from(p: &SpectralPair) -> Self {
        Self { rank: p.rank(), higgs: univariate_matrix_entries(&p.higgs, "x") }
    }
}

/// `det(λ − φ(x))`, monic of degree `r` in `λ`.
#[derive(Clone, Debug, PartialEq)]
pub struct PlaneCurve {
    by_lambda: UniPoly<Poly>,
}

impl PlaneCurve {
    /// Coefficients of `λ⁰, …, λʳ` as polynomials in `x`.
    pub fn coefficients(&self) -> &[Poly] {
        self.by_lambda.coeffs()
    }

    pub fn degree_in_lambda(&self) -> usize {
        self.by_lambda.degree().unwrap_or(0)
    }

    pub fn as_univariate(&self) -> &UniPoly<Poly> {
        &self.by_lambda
    }

    /// As a polynomial in `(lambda, x)`, graded-lex with `lambda > x`.
    pub fn polynomial(&self) -> MultiPoly {
        let vars: Vec<String> = CURVE_VARIABLES.iter().map(|s| s.to_string()).collect();
        let terms = self.by_lambda.coeffs().iter().enumerate().flat_map(|(k, c)| {
            c.coeffs().iter().enumerate().map(move |(j, a)| (Monomial(vec![k as u32, j as u32]), a.clone()))
        });
        MultiPoly::from_terms(&vars, terms)
    }
}

impl fmt::Display for PlaneCurve {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.polynomial())
    }
}

pub fn spectral_curve(p: &SpectralPair) -> PlaneCurve {
    PlaneCurve { by_lambda: characteristic_polynomial(&p.higgs) }
}

/// `χ(φ)` with `λ := φ(x)`; identically zero by Cayley–Hamilton.
#[derive(Clone, Debug, PartialEq)]
pub struct ContainmentCertificate {
    pub curve: PlaneCurve,
    pub residual: PolyMatrix,
}

impl ContainmentCertificate {
    pub fn holds(&self) -> bool {
        self.residual.is_zero()
    }
}

/// Substitutes the Higgs field into its spectral curve. A nonzero residual is
/// an engine fault and is returned as [`Error::Internal`].
pub fn verify_containment(p: &SpectralPair) -> Result<ContainmentCertificate> {
    let curve = spectral_curve(p);
    let r = p.rank();
    let mut residual = PolyMatrix::zeros(r, r);
    for c in curve.by_lambda.coeffs().iter().rev() {
        residual = residual.matmul(&p.higgs) + PolyMatrix::scalar(r, c.clone());
    }
    let cert = ContainmentCertificate { curve, residual };
    if !cert.holds() {
        return Err(Error::Internal(format!("Cayley-Hamilton residual is nonzero:\n{}", cert.residual.pretty(&["x"]))));
    }
    Ok(cert)
}

fn lift(p: &Poly) -> OperatorField {
    RatFunc::from_poly(p.map(|c| LambdaField::constant(c.clone())))
}

/// `v ↦ λ·dv/dx + φ(x)·v`.
pub fn lambda_connection(p: &SpectralPair) -> impl Fn(&[OperatorField]) -> Vec<OperatorField> + '_ {
    let phi: Matrix<OperatorField> = p.higgs.map(lift);
    let lambda = OperatorField::constant(LambdaField::var());
    move |v: &[OperatorField]| {
        let image = phi.apply(v);
        v.iter().zip(image).map(|(c, m)| lambda.clone() * c.derivative() + m).collect()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct QuantumOperator {
    pub seed: Vec<Poly>,
    pub relation: OperatorRelation<OperatorField>,
}

impl QuantumOperator {
    pub fn order(&self) -> usize {
        self.relation.order()
    }

    /// E.g. `D^2 - x`.
    pub fn text(&self) -> String {
        self.relation.render("D", &["x", "lambda"])
    }

    pub fn lifted_seed(&self) -> Vec<OperatorField> {
        self.seed.iter().map(lift).collect()
    }

    pub fn seed_text(&self) -> Vec<String> {
        self.seed.iter().map(|c| c.pretty(&["x"])).collect()
    }
}

/// Minimal monic annihilator of `seed` under the λ-connection.
pub fn quantum_spectral_operator(p: &SpectralPair, seed: &[Poly], max_order: usize) -> Result<QuantumOperator> {
    if seed.len() != p.rank() {
        return Err(Error::Shape(format!("seed has length {}, expected {}", seed.len(), p.rank())));
    }
    let v: Vec<OperatorField> = seed.iter().map(lift).collect();
    let relation = rational_krylov_relation(lambda_connection(p), &v, max_order)?;
    Ok(QuantumOperator { seed: seed.to_vec(), relation })
}

/// Tries standard basis vectors, the all-ones vector and seeded random
/// vectors; returns the first operator of order `r`, or else the one of
/// highest order.
pub fn quantum_operator_auto(p: &SpectralPair, seed: u64) -> Result<QuantumOperator> {
    let r = p.rank();
    let mut best: Option<QuantumOperator> = None;
    for v in probe_vectors(r, seed) {
        let v: Vec<Poly> = v.into_iter().map(Poly::constant).collect();
        let op = quantum_spectral_operator(p, &v, r)?;
        if op.order() == r {
            return Ok(op);
        }
        if best.as_ref().is_none_or(|b| op.order() > b.order()) {
            best = Some(op);
        }
    }
    Ok(best.expect("at least one probe vector"))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum LimitComparison {
    Equal,
    /// The limit is a proper divisor of the spectral polynomial.
    Divides,
    Neither,
    /// Some coefficient has a pole at `λ = 0`.
    Undefined,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ClassicalLimit {
    pub comparison: LimitComparison,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub limit: Option<String>,
    pub spectral_curve: String,
}

fn at_lambda_zero(c: &LambdaField) -> Option<GaussianRational> {
    let zero = GaussianRational::zero();
    let den = c.denom().eval(&zero);
    (!den.is_zero()).then(|| &c.numer().eval(&zero) / &den)
}

fn coefficient_at_lambda_zero(q: &OperatorField) -> Option<RatFunc<GaussianRational>> {
    let num = q.numer().coeffs().iter().map(at_lambda_zero).collect::<Option<Vec<_>>>()?;
    let den = q.denom().coeffs().iter().map(at_lambda_zero).collect::<Option<Vec<_>>>()?;
    let den = Poly::new(den);
    (!den.is_zero()).then(|| RatFunc::new(Poly::new(num), den))
}

/// Sets `λ = 0` in the operator, reads `D` as the curve variable `λ`, and
/// compares with the spectral curve.
pub fn classical_limit_check(p: &SpectralPair, op: &QuantumOperator) -> ClassicalLimit {
    let curve = spectral_curve(p);
    let spectral_text = curve.to_string();
    let Some(mut coeffs) = op.relation.coefficients.iter().map(coefficient_at_lambda_zero).collect::<Option<Vec<_>>>()
    else {
        return ClassicalLimit { comparison: LimitComparison::Undefined, limit: None, spectral_curve: spectral_text };
    };
    coeffs.push(RatFunc::one());
    let limit = UniPoly::new(coeffs);
    let chi: UniPoly<RatFunc<GaussianRational>> = curve.by_lambda.map(|c| RatFunc::from_poly(c.clone()));
    let comparison = if limit == chi {
        LimitComparison::Equal
    } else if chi.div_rem(&limit).1.is_zero() {
        LimitComparison::Divides
    } else {
        LimitComparison::Neither
    };
    let limit_text = match limit.coeffs().iter().map(|c| c.as_poly().cloned()).collect::<Option<Vec<_>>>() {
        Some(polys) => PlaneCurve { by_lambda: UniPoly::new(polys) }.to_string(),
        None => limit.pretty(&CURVE_VARIABLES),
    };
    ClassicalLimit { comparison, limit: Some(limit_text), spectral_curve: spectral_text }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::parse_univariate;

    fn pair(rows: &[&[&str]]) -> SpectralPair {
        let m = rows.iter().map(|r| r.iter().map(|e| parse_univariate(e, "x").unwrap()).collect()).collect();
        SpectralPair::new(PolyMatrix::from_rows(m).unwrap()).unwrap()
    }

    fn e(r: usize, i: usize) -> Vec<Poly> {
        (0..r).map(|j| if i == j { Poly::one() } else { Poly::zero() }).collect()
    }

    #[test]
    fn spectral_curves() {
        assert_eq!(spectral_curve(&pair(&[&["0", "x"], &["1", "0"]])).to_string(), "lambda^2 - x");
        assert_eq!(
            spectral_curve(&pair(&[&["x", "0"], &["0", "x^2"]])).to_string(),
            "-lambda*x^2 + x^3 + lambda^2 - lambda*x"
        );
        let zero = spectral_curve(&pair(&[&["0", "0", "0"], &["0", "0", "0"], &["0", "0", "0"]]));
        assert_eq!(zero.to_string(), "lambda^3");
        assert_eq!(zero.degree_in_lambda(), 3);
    }

    #[test]
    fn containment() {
        let cert = verify_containment(&pair(&[&["0", "x"], &["1", "0"]])).unwrap();
        assert!(cert.holds());
        assert!(verify_containment(&pair(&[&["x^3 - 2"]])).unwrap().holds());
    }

    #[test]
    fn airy() {
        let p = pair(&[&["0", "x"], &["1", "0"]]);
        let op = quantum_spectral_operator(&p, &e(2, 0), 2).unwrap();
        assert_eq!(op.text(), "D^2 - x");
        let limit = classical_limit_check(&p, &op);
        assert_eq!(limit.comparison, LimitComparison::Equal);
        assert_eq!(limit.limit.as_deref(), Some("lambda^2 - x"));
    }

    #[test]
    fn lambda_dependent_lower_terms() {
        let p = pair(&[&["0", "1"], &["x", "0"]]);
        let op = quantum_spectral_operator(&p, &e(2, 0), 2).unwrap();
        let lambda = OperatorField::constant(LambdaField::var());
        let x = OperatorField::var();
        assert_eq!(op.relation.coefficients, vec![-x.clone(), -(lambda / x)]);
        let zero = op.relation.apply_to(lambda_connection(&p), &op.lifted_seed());
        assert!(zero.iter().all(Zero::is_zero));
        assert_eq!(classical_limit_check(&p, &op).comparison, LimitComparison::Equal);
    }

    #[test]
    fn non_cyclic_seed() {
        let p = pair(&[&["x", "0"], &["0", "x"]]);
        let op = quantum_spectral_operator(&p, &e(2, 0), 2).unwrap();
        assert_eq!(op.text(), "D - x");
        let limit = classical_limit_check(&p, &op);
        assert_eq!(limit.comparison, LimitComparison::Divides);
        assert!(matches!(quantum_spectral_operator(&p, &[Poly::one(), Poly::var()], 1), Err(Error::NoRelation { .. })));
    }

    #[test]
    fn rank_one() {
        let p = pair(&[&["x^2 + 1"]]);
        let op = quantum_operator_auto(&p, 0).unwrap();
        assert_eq!(op.text(), "D - x^2 - 1");
        assert_eq!(classical_limit_check(&p, &op).comparison, LimitComparison::Equal);
    }

    #[test]
    fn json_round_trip() {
        let p = pair(&[&["0", "x^2 - 1/2"], &["1", "(2+i)*x"]]);
        let text = serde_json::to_string(&SpectralPairSpec::from(&p)).unwrap();
        let back: SpectralPairSpec = serde_json::from_str(&text).unwrap();
        assert_eq!(back.build().unwrap(), p);
        let spec: SpectralPairSpec = serde_json::from_str(r#"{"rank": 2, "higgs": [[0, "x"], [1, 0]]}"#).unwrap();
        assert_eq!(spec.build().unwrap(), pair(&[&["0", "x"], &["1", "0"]]));
    }
}
