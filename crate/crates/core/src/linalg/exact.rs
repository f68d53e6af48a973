//! Exact elimination over `Q(i)`.
//!
//! Batch routines clear denominators row by row and then run fraction-free
//! (Bareiss) elimination over the Gaussian integers, where every division is
//! exact. Incremental span tracking over an arbitrary field lives in
//! [`SpanBuilder`].

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::matrix::{ExactMatrix, Matrix};
use crate::ring::Field;
use crate::scalar::GaussianRational;

/// Row echelon form with Gaussian-integer entries.
#[derive(Clone, Debug)]
pub struct Echelon {
    pub rows: ExactMatrix,
    /// Pivot column of each nonzero row, strictly increasing.
    pub pivots: Vec<usize>,
}

impl Echelon {
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }
}

fn clear_row_denominators(m: &mut ExactMatrix) {
    for i in 0..m.rows() {
        let lcm = m.row(i).iter().fold(BigInt::one(), |acc, e| num_integer::lcm(acc, e.denominator_lcm()));
        if !lcm.is_one() {
            let s = GaussianRational::from(BigRational::from_integer(lcm));
            for j in 0..m.cols() {
                m[(i, j)] = &m[(i, j)] * &s;
            }
        }
    }
}

/// Fraction-free row echelon form (Bareiss).
pub fn fraction_free_echelon(m: &ExactMatrix) -> Echelon {
    let mut a = m.clone();
    clear_row_denominators(&mut a);
    let (rows, cols) = (a.rows(), a.cols());
    let mut prev = GaussianRational::one();
    let mut pivots = Vec::new();
    let mut pr = 0;
    for c in 0..cols {
        if pr == rows {
            break;
        }
        let Some(p) = (pr..rows).find(|&i| !a[(i, c)].is_zero()) else {
            continue;
        };
        if p != pr {
            for j in 0..cols {
                let tmp = a[(p, j)].clone();
                a[(p, j)] = a[(pr, j)].clone();
                a[(pr, j)] = tmp;
            }
        }
        let piv = a[(pr, c)].clone();
        for i in pr + 1..rows {
            let lead = a[(i, c)].clone();
            for j in c + 1..cols {
                let v = &(&piv * &a[(i, j)]) - &(&lead * &a[(pr, j)]);
                a[(i, j)] = &v / &prev;
                debug_assert!(a[(i, j)].is_gaussian_integer(), "Bareiss division must be exact");
            }
            a[(i, c)] = GaussianRational::zero();
        }
        prev = piv;
        pivots.push(c);
        pr += 1;
    }
    Echelon { rows: a, pivots }
}

pub fn rank(m: &ExactMatrix) -> usize {
    fraction_free_echelon(m).rank()
}

/// Exact basis of the right null space, one vector per free column with that
/// free coordinate set to one. Empty iff `m` is injective.
pub fn kernel_basis(m: &ExactMatrix) -> Vec<Vec<GaussianRational>> {
    let ech = fraction_free_echelon(m);
    let n = m.cols();
    let free: Vec<usize> = (0..n).filter(|c| !ech.pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut x = vec![GaussianRational::zero(); n];
            x[f] = GaussianRational::one();
            for (k, &pc) in ech.pivots.iter().enumerate().rev() {
                let mut acc = GaussianRational::zero();
                for (j, xj) in x.iter().enumerate().skip(pc + 1) {
                    if !xj.is_zero() && !ech.rows[(k, j)].is_zero() {
                        acc += &(&ech.rows[(k, j)] * xj);
                    }
                }
                x[pc] = &(-acc) / &ech.rows[(k, pc)];
            }
            x
        })
        .collect()
}

/// Solves `a · x = b` for `a` with full column rank. `None` when the system is
/// inconsistent or `a` is column-rank deficient.
pub fn solve(a: &ExactMatrix, b: &ExactMatrix) -> Option<ExactMatrix> {
    assert_eq!(a.rows(), b.rows(), "solve: row count mismatch");
    let (n, k) = (a.cols(), b.cols());
    let mut aug = ExactMatrix::zeros(a.rows(), n + k);
    for i in 0..a.rows() {
        for j in 0..n {
            aug[(i, j)] = a[(i, j)].clone();
        }
        for j in 0..k {
            aug[(i, n + j)] = b[(i, j)].clone();
        }
    }
    let ech = fraction_free_echelon(&aug);
    if ech.pivots.len() < n || ech.pivots[..n].iter().enumerate().any(|(i, &p)| p != i) {
        return None;
    }
    if ech.pivots.len() > n {
        // A pivot in the right-hand block means an inconsistent row.
        return None;
    }
    let mut x = ExactMatrix::zeros(n, k);
    for col in 0..k {
        for row in (0..n).rev() {
            let mut acc = ech.rows[(row, n + col)].clone();
            for j in row + 1..n {
                if !ech.rows[(row, j)].is_zero() {
                    acc -= &(&ech.rows[(row, j)] * &x[(j, col)]);
                }
            }
            x[(row, col)] = &acc / &ech.rows[(row, row)];
        }
    }
    Some(x)
}

pub fn inverse(m: &ExactMatrix) -> Option<ExactMatrix> {
    if !m.is_square() {
        return None;
    }
    solve(m, &ExactMatrix::identity(m.rows()))
}

/// Matrix of `m` restricted to the invariant subspace spanned by the columns of
/// `basis`: the unique `c` with `m · basis = basis · c`. `None` if the span is not
/// invariant or `basis` is rank deficient.
pub fn restrict_to_subspace(m: &ExactMatrix, basis: &ExactMatrix) -> Option<ExactMatrix> {
    solve(basis, &m.matmul(basis))
}

/// Columns of `basis · coords` for each coordinate vector.
pub fn lift_coordinates(basis: &ExactMatrix, coords: &[Vec<GaussianRational>]) -> ExactMatrix {
    let cols: Vec<Vec<GaussianRational>> = coords.iter().map(|c| basis.apply(c)).collect();
    if cols.is_empty() {
        return ExactMatrix::zeros(basis.rows(), 0);
    }
    Matrix::from_columns(&cols)
}

/// Outcome of adding a vector to a [`SpanBuilder`].
#[derive(Clone, Debug, PartialEq)]
pub enum Insertion<F> {
    /// The vector was independent and became basis element `index`.
    Independent(usize),
    /// The vector equals `Σ coeffs[j] · basis_j` over the accepted vectors.
    Dependent(Vec<F>),
}

/// Incrementally maintained span of vectors over a field, recording for every
/// dependent vector its expansion in the previously accepted ones.
#[derive(Clone, Debug)]
pub struct SpanBuilder<F> {
    len: usize,
    /// Reduced rows: pivot index, row scaled to pivot one, and the row as a
    /// combination of accepted vectors.
    rows: Vec<(usize, Vec<F>, Vec<F>)>,
}

impl<F: Field> SpanBuilder<F> {
    pub fn new(len: usize) -> Self {
        Self { len, rows: Vec::new() }
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    /// Expansion of `v` in the accepted vectors, or `None` if outside the span.
    pub fn coordinates(&self, v: &[F]) -> Option<Vec<F>> {
        let (residual, coeffs) = self.reduce(v);
        residual.iter().all(|c| c.is_zero()).then_some(coeffs)
    }

    fn reduce(&self, v: &[F]) -> (Vec<F>, Vec<F>) {
        assert_eq!(v.len(), self.len, "span vector length mismatch");
        let mut w = v.to_vec();
        let mut coeffs = vec![F::zero(); self.rows.len()];
        for (pivot, row, combo) in &self.rows {
            let t = w[*pivot].clone();
            if t.is_zero() {
                continue;
            }
            for (wk, rk) in w.iter_mut().zip(row) {
                if !rk.is_zero() {
                    *wk = wk.clone() - t.clone() * rk.clone();
                }
            }
            for (ck, ek) in coeffs.iter_mut().zip(combo) {
                if !ek.is_zero() {
                    *ck = ck.clone() + t.clone() * ek.clone();
                }
            }
        }
        (w, coeffs)
    }

    pub fn insert(&mut self, v: &[F]) -> Insertion<F> {
        let (w, coeffs) = self.reduce(v);
        let Some(pivot) = w.iter().position(|c| !c.is_zero()) else {
            return Insertion::Dependent(coeffs);
        };
        let inv = F::one() / w[pivot].clone();
        let row: Vec<F> = w.into_iter().map(|c| c * inv.clone()).collect();
        // row = (v - Σ coeffs_j b_j) / w[pivot]
        let mut combo: Vec<F> = coeffs.into_iter().map(|c| -(c * inv.clone())).collect();
        combo.push(inv);
        for (_, _, e) in &mut self.rows {
            e.push(F::zero());
        }
        self.rows.push((pivot, row, combo));
        Insertion::Independent(self.rows.len() - 1)
    }
}

/// Flattens a matrix into a row-major vector.
pub fn vectorize(m: &ExactMatrix) -> Vec<GaussianRational> {
    m.entries().to_vec()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::matrix::int_matrix;

    fn g(n: i64) -> GaussianRational {
        GaussianRational::from_int(n)
    }

    #[test]
    fn kernel_examples() {
        let k = kernel_basis(&ExactMatrix::zeros(2, 2));
        assert_eq!(k, vec![vec![g(1), g(0)], vec![g(0), g(1)]]);
        assert!(kernel_basis(&ExactMatrix::identity(3)).is_empty());
        assert_eq!(kernel_basis(&int_matrix(&[&[1, 2], &[2, 4]])), vec![vec![g(-2), g(1)]]);
    }

    #[test]
    fn kernel_vectors_are_annihilated() {
        let m = int_matrix(&[&[1, 2, 3, 4], &[2, 4, 6, 8], &[0, 1, 1, 0]]);
        let ker = kernel_basis(&m);
        assert_eq!(ker.len(), 2);
        for v in ker {
            assert!(m.apply(&v).iter().all(Zero::is_zero));
        }
    }

    #[test]
    fn bareiss_handles_rationals_and_complex_entries() {
        let half = GaussianRational::from_ratio(1, 2);
        let m = ExactMatrix::from_rows(vec![
            vec![half.clone(), GaussianRational::i()],
            vec![GaussianRational::from_integers(1, 1), g(3)],
        ])
        .unwrap();
        assert_eq!(rank(&m), 2);
        let inv = inverse(&m).unwrap();
        assert_eq!(m.matmul(&inv), ExactMatrix::identity(2));
    }

    #[test]
    fn solve_rejects_inconsistent_and_singular() {
        let a = int_matrix(&[&[1, 0], &[0, 1], &[1, 1]]);
        let good = int_matrix(&[&[1], &[2], &[3]]);
        let bad = int_matrix(&[&[1], &[2], &[4]]);
        assert_eq!(solve(&a, &good).unwrap(), int_matrix(&[&[1], &[2]]));
        assert!(solve(&a, &bad).is_none());
        assert!(inverse(&int_matrix(&[&[1, 2], &[2, 4]])).is_none());
    }

    #[test]
    fn span_builder_tracks_dependencies() {
        let mut s = SpanBuilder::<GaussianRational>::new(3);
        assert_eq!(s.insert(&[g(1), g(0), g(1)]), Insertion::Independent(0));
        assert_eq!(s.insert(&[g(0), g(1), g(1)]), Insertion::Independent(1));
        assert_eq!(s.insert(&[g(2), g(-3), g(-1)]), Insertion::Dependent(vec![g(2), g(-3)]));
        assert_eq!(s.coordinates(&[g(0), g(0), g(1)]), None);
        assert_eq!(s.dim(), 2);
    }

    #[test]
    fn restriction_to_invariant_subspace() {
        let m = int_matrix(&[&[2, 1, 0], &[0, 2, 0], &[0, 0, 5]]);
        let basis = int_matrix(&[&[1, 0], &[0, 1], &[0, 0]]);
        assert_eq!(restrict_to_subspace(&m, &basis).unwrap(), int_matrix(&[&[2, 1], &[0, 2]]));
        let not_invariant = int_matrix(&[&[0], &[1], &[0]]);
        assert!(restrict_to_subspace(&m, &not_invariant).is_none());
    }
}
