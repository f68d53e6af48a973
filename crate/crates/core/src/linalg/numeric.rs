//! Double-precision helpers for the parts of the joint spectrum that cannot be
//! kept exact: roots of square-free polynomials and numeric null spaces.

use nalgebra::DMatrix;
use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::matrix::ExactMatrix;
use crate::poly::UniPoly;
use crate::scalar::{ApproxComplex, GaussianRational};

pub fn to_dmatrix(m: &ExactMatrix) -> DMatrix<Complex64> {
    DMatrix::from_fn(m.rows(), m.cols(), |i, j| m[(i, j)].to_approx())
}

fn horner(coeffs: &[Complex64], z: Complex64) -> (Complex64, Complex64) {
    let mut p = Complex64::zero();
    let mut dp = Complex64::zero();
    for c in coeffs.iter().rev() {
        dp = dp * z + p;
        p = p * z + c;
    }
    (p, dp)
}

/// All complex roots of a nonzero polynomial, by Aberth–Ehrlich iteration with a
/// final Newton polish. Intended for square-free input, where every root is simple.
pub fn polynomial_roots(p: &UniPoly<GaussianRational>) -> Vec<ApproxComplex> {
    let Some(n) = p.degree() else {
        return Vec::new();
    };
    if n == 0 {
        return Vec::new();
    }
    let lead = p.leading().expect("nonzero").to_approx();
    let coeffs: Vec<Complex64> = p.coeffs().iter().map(|c| c.to_approx() / lead).collect();
    if n == 1 {
        return vec![-coeffs[0]];
    }
    let radius = 1.0 + coeffs[..n].iter().map(|c| c.norm()).fold(0.0, f64::max);
    let mut z: Vec<Complex64> = (0..n)
        .map(|k| {
            let angle = 0.4 + std::f64::consts::TAU * k as f64 / n as f64;
            Complex64::from_polar(radius * 0.5, angle)
        })
        .collect();
    for _ in 0..800 {
        let mut max_step = 0.0f64;
        for k in 0..n {
            let (pv, dpv) = horner(&coeffs, z[k]);
            if pv == Complex64::zero() {
                continue;
            }
            let ratio = pv / dpv;
            let repulsion: Complex64 = (0..n).filter(|&j| j != k).map(|j| Complex64::one() / (z[k] - z[j])).sum();
            let step = ratio / (Complex64::one() - ratio * repulsion);
            if step.is_finite() {
                z[k] -= step;
                max_step = max_step.max(step.norm() / (1.0 + z[k].norm()));
            }
        }
        if max_step < 1e-16 {
            break;
        }
    }
    for zk in &mut z {
        for _ in 0..3 {
            let (pv, dpv) = horner(&coeffs, *zk);
            if dpv.norm() > 0.0 {
                let step = pv / dpv;
                if step.is_finite() {
                    *zk -= step;
                }
            }
        }
    }
    z
}

/// Exact root of `p` in `Q(i)` near `approx`, if one exists.
///
/// Clearing denominators gives Gaussian-integer coefficients with a positive
/// integer leading coefficient `d`; every root in `Q(i)` then has `d·root` a
/// Gaussian integer, so rounding `d·approx` and verifying exactly is complete up
/// to floating-point accuracy.
pub fn recognize_root(p: &UniPoly<GaussianRational>, approx: ApproxComplex) -> Option<GaussianRational> {
    let monic = p.monic();
    let d = monic.coeffs().iter().fold(BigInt::one(), |acc, c| num_integer::lcm(acc, c.denominator_lcm()));
    let scale = GaussianRational::from(BigRational::from_integer(d.clone()));
    let scaled = approx * scale.to_approx().re;
    let mut candidates = Vec::new();
    if let Some(c) = GaussianRational::round_from_approx(approx) {
        candidates.push(c);
    }
    if let Some(c) = GaussianRational::round_from_approx(scaled) {
        candidates.push(&c / &scale);
    }
    candidates.into_iter().find(|c| monic.eval(c).is_zero())
}

/// Orthonormal basis (as columns) of the numerical null space of `m`; singular
/// values below `tol · max(1, σ_max)` count as zero.
pub fn null_space(m: &DMatrix<Complex64>, tol: f64) -> DMatrix<Complex64> {
    let n = m.ncols();
    if n == 0 {
        return DMatrix::zeros(0, 0);
    }
    // Pad to square so the SVD returns a full right-singular basis.
    let rows = m.nrows().max(n);
    let mut padded = DMatrix::zeros(rows, n);
    padded.view_mut((0, 0), (m.nrows(), n)).copy_from(m);
    let svd = padded.svd(false, true);
    let v_t = svd.v_t.expect("requested V^T");
    let sigma_max = svd.singular_values.iter().cloned().fold(0.0, f64::max);
    let threshold = tol * sigma_max.max(1.0);
    let cols: Vec<_> = (0..svd.singular_values.len())
        .filter(|&k| svd.singular_values[k] <= threshold)
        .map(|k| v_t.row(k).adjoint())
        .collect();
    if cols.is_empty() {
        return DMatrix::zeros(n, 0);
    }
    DMatrix::from_columns(&cols)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(cs: &[i64]) -> UniPoly<GaussianRational> {
        UniPoly::new(cs.iter().map(|&c| GaussianRational::from_int(c)).collect())
    }

    #[test]
    fn roots_of_quadratics() {
        let mut r = polynomial_roots(&p(&[-2, 0, 1]));
        r.sort_by(|a, b| a.re.total_cmp(&b.re));
        assert!((r[0].re + 2f64.sqrt()).abs() < 1e-14);
        assert!((r[1].re - 2f64.sqrt()).abs() < 1e-14);
        let r = polynomial_roots(&p(&[1, 0, 1]));
        assert!(r.iter().all(|z| (z.norm() - 1.0).abs() < 1e-14 && z.re.abs() < 1e-14));
    }

    #[test]
    fn exact_recognition() {
        // (2y - 3)(y + i)
        let f = UniPoly::new(vec![
            GaussianRational::from_integers(0, -3),
            GaussianRational::from_integers(-3, 2),
            GaussianRational::from_int(2),
        ]);
        let roots = polynomial_roots(&f);
        let mut exact: Vec<String> =
            roots.iter().filter_map(|z| recognize_root(&f, *z)).map(|c| c.to_string()).collect();
        exact.sort();
        assert_eq!(exact, vec!["-i", "3/2"]);
        let irr = p(&[-2, 0, 1]);
        assert!(polynomial_roots(&irr).iter().all(|z| recognize_root(&irr, *z).is_none()));
    }

    #[test]
    fn numeric_null_space() {
        let m = DMatrix::from_row_slice(
            2,
            2,
            &[Complex64::new(1.0, 0.0), Complex64::new(2.0, 0.0), Complex64::new(2.0, 0.0), Complex64::new(4.0, 0.0)],
        );
        let ns = null_space(&m, 1e-9);
        assert_eq!(ns.ncols(), 1);
        assert!((&m * &ns).norm() < 1e-12);
    }
}
