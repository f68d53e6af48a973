//! Minimal monic relations `Dⁿ v + Σ aᵢ Dⁱ v = 0` for an operator `D` that is
//! linear over the coefficient field, found by growing the Krylov sequence
//! `v, Dv, D²v, …` until it becomes dependent.

use crate::error::{Error, Result};
use crate::linalg::{Insertion, SpanBuilder};
use crate::ring::{Field, Pretty};

use super::univariate::RatFunc;

/// Vector of rational functions, the carrier for Krylov computations with
/// function coefficients.
pub type RationalFunctionVector<F> = Vec<RatFunc<F>>;

/// `Dⁿ + a_{n−1} Dⁿ⁻¹ + … + a₀`, stored as `a₀, …, a_{n−1}`.
#[derive(Clone, Debug, PartialEq)]
pub struct OperatorRelation<F> {
    pub coefficients: Vec<F>,
}

impl<F: Field> OperatorRelation<F> {
    pub fn order(&self) -> usize {
        self.coefficients.len()
    }

    /// `Dⁿ v + Σ aᵢ Dⁱ v`, computed from scratch.
    pub fn apply_to(&self, apply: impl Fn(&[F]) -> Vec<F>, v: &[F]) -> Vec<F> {
        let mut power = v.to_vec();
        let mut acc = vec![F::zero(); v.len()];
        for a in &self.coefficients {
            for (s, p) in acc.iter_mut().zip(&power) {
                *s = s.clone() + a.clone() * p.clone();
            }
            power = apply(&power);
        }
        acc.into_iter().zip(power).map(|(s, p)| s + p).collect()
    }
}

impl<F: Field + Pretty> OperatorRelation<F> {
    /// Renders with operator symbol `op` and coefficient variables `vars`,
    /// e.g. `D^2 - x` or `D^2 + (-1/x)*D - x`.
    pub fn render(&self, op: &str, vars: &[&str]) -> String {
        let n = self.order();
        let mut terms = vec![(String::from("1"), monomial(op, n))];
        for (k, a) in self.coefficients.iter().enumerate().rev() {
            if !a.is_zero() {
                terms.push((a.pretty(vars), monomial(op, k)));
            }
        }
        crate::ring::join_terms(terms)
    }
}

fn monomial(op: &str, k: usize) -> String {
    match k {
        0 => String::new(),
        1 => op.to_string(),
        _ => format!("{op}^{k}"),
    }
}

/// Least-order monic relation annihilating `seed`; `NoRelation` if the
/// Krylov vectors stay independent through `max_order`.
pub fn rational_krylov_relation<F: Field>(
    apply: impl Fn(&[F]) -> Vec<F>,
    seed: &[F],
    max_order: usize,
) -> Result<OperatorRelation<F>> {
    if seed.iter().all(|c| c.is_zero()) {
        return Err(Error::Shape("Krylov seed must be nonzero".into()));
    }
    let mut span = SpanBuilder::new(seed.len());
    span.insert(seed);
    let mut current = seed.to_vec();
    for _ in 1..=max_order {
        current = apply(&current);
        if current.len() != seed.len() {
            return Err(Error::Shape(format!("operator returned length {} for length {}", current.len(), seed.len())));
        }
        if let Insertion::Dependent(c) = span.insert(&current) {
            return Ok(OperatorRelation { coefficients: c.into_iter().map(|x| -x).collect() });
        }
    }
    Err(Error::NoRelation { max_order })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::GaussianRational as G;
    use num_traits::{One, Zero};

    type Rx = RatFunc<G>;

    fn x() -> Rx {
        RatFunc::var()
    }

    #[test]
    fn multiplication_by_x() {
        let rel =
            rational_krylov_relation(|v: &[Rx]| v.iter().map(|c| c.clone() * x()).collect(), &[Rx::one()], 3).unwrap();
        assert_eq!(rel.coefficients, vec![-x()]);
        assert_eq!(rel.render("D", &["x"]), "D - x");
    }

    #[test]
    fn constant_involution() {
        let swap = |v: &[G]| vec![v[1].clone(), v[0].clone()];
        let rel = rational_krylov_relation(swap, &[G::one(), G::zero()], 4).unwrap();
        assert_eq!(rel.coefficients, vec![-G::one(), G::zero()]);
        assert!(rel.apply_to(swap, &[G::one(), G::zero()]).iter().all(Zero::is_zero));
    }

    #[test]
    fn independence_reports_no_relation() {
        let shift = |v: &[G]| vec![G::zero(), v[0].clone(), v[1].clone()];
        let err = rational_krylov_relation(shift, &[G::one(), G::zero(), G::zero()], 2).unwrap_err();
        assert!(matches!(err, Error::NoRelation { max_order: 2 }));
        let rel = rational_krylov_relation(shift, &[G::one(), G::zero(), G::zero()], 3).unwrap();
        assert!(rel.coefficients.iter().all(Zero::is_zero));
    }

    #[test]
    fn airy_at_zero_lambda() {
        // D = φ(x) = [[0, x], [1, 0]] with no derivative term.
        let phi = |v: &[Rx]| vec![x() * v[1].clone(), v[0].clone()];
        let rel = rational_krylov_relation(phi, &[Rx::one(), Rx::zero()], 2).unwrap();
        assert_eq!(rel.coefficients, vec![-x(), Rx::zero()]);
    }
}
