use num_traits::{One, Zero};

use super::exact::{vectorize, Insertion, SpanBuilder};
use super::matrix::{ExactMatrix, Matrix};
use crate::poly::UniPoly;
use crate::ring::Ring;
use crate::scalar::GaussianRational;

/// `det(y·I − m)` by Berkowitz's division-free recurrence, valid over any
/// commutative ring. Panics for non-square input.
pub fn characteristic_polynomial<R: Ring>(m: &Matrix<R>) -> UniPoly<R> {
    assert!(m.is_square(), "characteristic polynomial of a non-square matrix");
    let n = m.rows();
    // Highest degree first.
    let mut poly: Vec<R> = vec![R::one()];
    for k in 0..n {
        let mut toeplitz = vec![R::one(), -m[(k, k)].clone()];
        let mut v: Vec<R> = (0..k).map(|i| m[(i, k)].clone()).collect();
        for step in 0..k {
            let dot = (0..k).fold(R::zero(), |acc, j| acc + m[(k, j)].clone() * v[j].clone());
            toeplitz.push(-dot);
            if step + 1 < k {
                v = (0..k).map(|i| (0..k).fold(R::zero(), |acc, j| acc + m[(i, j)].clone() * v[j].clone())).collect();
            }
        }
        let next: Vec<R> = (0..k + 2)
            .map(|i| (0..=i.min(k)).fold(R::zero(), |acc, j| acc + toeplitz[i - j].clone() * poly[j].clone()))
            .collect();
        poly = next;
    }
    poly.reverse();
    UniPoly::new(poly)
}

/// Determinant over any commutative ring.
pub fn determinant<R: Ring>(m: &Matrix<R>) -> R {
    let c0 = characteristic_polynomial(m).coeff(0);
    if m.rows().is_multiple_of(2) {
        c0
    } else {
        -c0
    }
}

/// Lowest-degree monic `p` with `p(m) = 0`, from the first linear dependency in
/// the Krylov sequence `I, m, m², …`.
pub fn minimal_polynomial(m: &ExactMatrix) -> UniPoly<GaussianRational> {
    assert!(m.is_square(), "minimal polynomial of a non-square matrix");
    let n = m.rows();
    let mut span = SpanBuilder::new(n * n);
    let mut power = ExactMatrix::identity(n);
    loop {
        match span.insert(&vectorize(&power)) {
            Insertion::Independent(_) => power = power.matmul(m),
            Insertion::Dependent(coeffs) => {
                let mut c: Vec<GaussianRational> = coeffs.into_iter().map(|x| -x).collect();
                c.push(GaussianRational::one());
                return UniPoly::new(c);
            }
        }
    }
}

/// Evaluates a scalar polynomial at a matrix.
pub fn eval_at_matrix(p: &UniPoly<GaussianRational>, m: &ExactMatrix) -> ExactMatrix {
    if p.is_zero() {
        return ExactMatrix::zeros(m.rows(), m.cols());
    }
    m.eval_poly(p.coeffs())
}
