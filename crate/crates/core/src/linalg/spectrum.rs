//! Simultaneous generalized eigenspace decomposition of commuting matrices.
//!
//! A fixed rational combination `L = Σ w_j m_j` separates the joint eigenvalues
//! (checked, with a different combination tried on failure). The square-free
//! decomposition of `χ_L` gives every cluster multiplicity exactly. Eigenvalues of
//! `L` lying in `Q(i)` are recognised and their generalized eigenspaces computed
//! exactly; the remaining ones are located numerically inside the exact invariant
//! subspace cut out by their square-free factor.

use std::cmp::Ordering;

use nalgebra::DMatrix;
use num_complex::Complex64;
use num_traits::One;
use serde::Serialize;

use super::charpoly::{characteristic_polynomial, eval_at_matrix};
use super::exact::{kernel_basis, restrict_to_subspace};
use super::matrix::{ExactMatrix, Matrix};
use super::numeric::{null_space, polynomial_roots, recognize_root, to_dmatrix};
use crate::error::{Error, Result};
use crate::poly::UniPoly;
use crate::scalar::{ApproxComplex, GaussianRational};

/// Default relative clustering tolerance.
pub const DEFAULT_TOLERANCE: f64 = 1e-8;

const SEPARATOR_ATTEMPTS: usize = 6;

#[derive(Clone, Debug)]
pub struct Cluster {
    /// Per-matrix eigenvalue on the joint generalized eigenspace.
    pub point: Vec<ApproxComplex>,
    /// The same point when every coordinate is known in `Q(i)`.
    pub exact_point: Option<Vec<GaussianRational>>,
    /// Dimension of the joint generalized eigenspace.
    pub multiplicity: usize,
    /// Approximate basis of the joint generalized eigenspace.
    pub basis: Vec<Vec<ApproxComplex>>,
    /// Exact basis (as columns) when the eigenspace was computed exactly.
    pub exact_basis: Option<ExactMatrix>,
    /// Values of the separating combination on this cluster.
    pub separator_values: Vec<ApproxComplex>,
}

#[derive(Clone, Debug)]
pub struct JointSpectrum {
    pub clusters: Vec<Cluster>,
    /// Weights of the separating combination that succeeded.
    pub separator: Vec<GaussianRational>,
    /// Set when tolerance-based merging joined clusters that were computed as
    /// distinct.
    pub degraded: bool,
}

impl JointSpectrum {
    pub fn total_multiplicity(&self) -> usize {
        self.clusters.iter().map(|c| c.multiplicity).sum()
    }
}

/// Serializable summary of a cluster.
#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct ClusterSummary {
    pub point: Vec<[f64; 2]>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub exact_point: Option<Vec<GaussianRational>>,
    pub multiplicity: usize,
}

impl From<&Cluster> for ClusterSummary {
    fn from(c: &Cluster) -> Self {
        Self {
            point: c.point.iter().map(|z| [z.re, z.im]).collect(),
            exact_point: c.exact_point.clone(),
            multiplicity: c.multiplicity,
        }
    }
}

/// Checks that all matrices are square of one size and pairwise commute.
pub fn check_commuting(ms: &[ExactMatrix]) -> Result<usize> {
    let first = ms.first().ok_or(Error::EmptyTuple)?;
    let n = first.rows();
    if let Some(bad) = ms.iter().position(|m| !m.is_square() || m.rows() != n) {
        return Err(Error::Shape(format!(
            "matrix {} is {}x{}, expected {n}x{n}",
            bad + 1,
            ms[bad].rows(),
            ms[bad].cols()
        )));
    }
    for i in 0..ms.len() {
        for j in i + 1..ms.len() {
            let c = ms[i].commutator(&ms[j]);
            if !c.is_zero() {
                return Err(Error::NotCommuting { i, j, commutator: c });
            }
        }
    }
    Ok(n)
}

/// Moment-curve weights `(1, t, t², …)` with a different `t` per attempt.
fn separator_weights(count: usize, attempt: usize) -> Vec<GaussianRational> {
    let t = GaussianRational::from_ratio(2 * attempt as i64 + 3, 4 * attempt as i64 + 7);
    (0..count).map(|j| t.pow(j as u32)).collect()
}

fn linear_factor(c: &GaussianRational) -> UniPoly<GaussianRational> {
    UniPoly::new(vec![-c.clone(), GaussianRational::one()])
}

fn approx_columns(basis: &ExactMatrix) -> Vec<Vec<ApproxComplex>> {
    (0..basis.cols()).map(|j| basis.column(j).iter().map(GaussianRational::to_approx).collect()).collect()
}

fn complex_pow(m: &DMatrix<Complex64>, k: usize) -> DMatrix<Complex64> {
    let mut acc = DMatrix::identity(m.nrows(), m.ncols());
    for _ in 0..k {
        acc = &acc * m;
    }
    acc
}

/// Generalized eigenspaces of `l` for an exact eigenvalue `c` of algebraic
/// multiplicity `k`; `None` when the combination failed to separate.
fn exact_cluster(ms: &[ExactMatrix], l: &ExactMatrix, c: &GaussianRational, k: usize) -> Option<Cluster> {
    let n = l.rows();
    let shifted = l.clone() - ExactMatrix::scalar(n, c.clone());
    let ker = kernel_basis(&shifted.pow(k as u32));
    debug_assert_eq!(ker.len(), k);
    let basis = Matrix::from_columns(&ker);
    let mut point = Vec::with_capacity(ms.len());
    for m in ms {
        let restricted = restrict_to_subspace(m, &basis)?;
        let mu = &restricted.trace() / &GaussianRational::from_int(k as i64);
        let nil = restricted - ExactMatrix::scalar(k, mu.clone());
        if !nil.pow(k as u32).is_zero() {
            return None;
        }
        point.push(mu);
    }
    Some(Cluster {
        point: point.iter().map(GaussianRational::to_approx).collect(),
        exact_point: Some(point),
        multiplicity: k,
        basis: approx_columns(&basis),
        exact_basis: Some(basis),
        separator_values: vec![c.to_approx()],
    })
}

/// Clusters for the non-`Q(i)` roots of `factor` (each of multiplicity `k`).
fn numeric_clusters(
    ms: &[ExactMatrix],
    l: &ExactMatrix,
    factor: &UniPoly<GaussianRational>,
    k: usize,
    tol: f64,
) -> Option<Vec<Cluster>> {
    let sub = kernel_basis(&eval_at_matrix(&factor.pow(k as u32), l));
    let basis = Matrix::from_columns(&sub);
    let l_sub = to_dmatrix(&restrict_to_subspace(l, &basis)?);
    let m_subs: Vec<DMatrix<Complex64>> =
        ms.iter().map(|m| restrict_to_subspace(m, &basis).map(|x| to_dmatrix(&x))).collect::<Option<_>>()?;
    let basis_c = to_dmatrix(&basis);
    let d = l_sub.nrows();
    let mut out = Vec::new();
    for nu in polynomial_roots(factor) {
        let shifted = &l_sub - DMatrix::<Complex64>::identity(d, d) * nu;
        let eig = null_space(&shifted, 1e-9);
        let g = eig.ncols();
        if g == 0 {
            return None;
        }
        let mut point = Vec::with_capacity(ms.len());
        for m in &m_subs {
            let c = eig.adjoint() * m * &eig;
            let mu = c.trace() / Complex64::new(g as f64, 0.0);
            let spread = (c - DMatrix::<Complex64>::identity(g, g) * mu).clone();
            let residual = complex_pow(&spread, g).norm().powf(1.0 / g as f64);
            if residual > tol.sqrt() * (1.0 + mu.norm()) {
                return None;
            }
            point.push(mu);
        }
        let gen = null_space(&complex_pow(&shifted, k), 1e-7);
        let lifted = &basis_c * gen;
        let basis_vecs = (0..lifted.ncols()).map(|j| lifted.column(j).iter().cloned().collect()).collect();
        out.push(Cluster {
            point,
            exact_point: None,
            multiplicity: k,
            basis: basis_vecs,
            exact_basis: None,
            separator_values: vec![nu],
        });
    }
    Some(out)
}

fn try_separator(ms: &[ExactMatrix], weights: &[GaussianRational], tol: f64) -> Option<Vec<Cluster>> {
    let n = ms[0].rows();
    let l = ms.iter().zip(weights).fold(ExactMatrix::zeros(n, n), |acc, (m, w)| acc + m.scale(w));
    let chi = characteristic_polynomial(&l);
    let mut clusters = Vec::new();
    for (factor, k) in chi.squarefree_decomposition() {
        let mut rest = factor.clone();
        for nu in polynomial_roots(&factor) {
            if let Some(c) = recognize_root(&rest, nu) {
                rest = rest.exact_div(&linear_factor(&c)).expect("verified root");
                clusters.push(exact_cluster(ms, &l, &c, k)?);
            }
        }
        if rest.degree().unwrap_or(0) > 0 {
            clusters.extend(numeric_clusters(ms, &l, &rest, k, tol)?);
        }
    }
    Some(clusters)
}

fn point_distance(a: &[ApproxComplex], b: &[ApproxComplex]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

fn point_scale(a: &[ApproxComplex]) -> f64 {
    a.iter().map(|z| z.norm()).fold(1.0, f64::max)
}

fn cmp_points(a: &[ApproxComplex], b: &[ApproxComplex]) -> Ordering {
    for (x, y) in a.iter().zip(b) {
        let o = x.re.total_cmp(&y.re).then(x.im.total_cmp(&y.im));
        if o != Ordering::Equal {
            return o;
        }
    }
    Ordering::Equal
}

/// Single-linkage merge under the sup-metric on points; representatives are
/// multiplicity-weighted means. Returns whether any merge happened.
fn merge_clusters(clusters: Vec<Cluster>, tol: f64) -> (Vec<Cluster>, bool) {
    let n = clusters.len();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while p[r] != r {
            r = p[r];
        }
        p[x] = r;
        r
    }
    for i in 0..n {
        for j in i + 1..n {
            let (a, b) = (&clusters[i].point, &clusters[j].point);
            if point_distance(a, b) <= tol * point_scale(a).max(point_scale(b)) {
                let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
                if ri != rj {
                    parent[rj] = ri;
                }
            }
        }
    }
    let mut groups: Vec<Vec<Cluster>> = (0..n).map(|_| Vec::new()).collect();
    for (k, c) in clusters.into_iter().enumerate() {
        let root = find(&mut parent, k);
        groups[root].push(c);
    }
    let mut merged_any = false;
    let out = groups
        .into_iter()
        .filter(|g| !g.is_empty())
        .map(|mut g| {
            if g.len() == 1 {
                return g.pop().expect("non-empty");
            }
            merged_any = true;
            let total: usize = g.iter().map(|c| c.multiplicity).sum();
            let dim = g[0].point.len();
            let point = (0..dim)
                .map(|j| g.iter().map(|c| c.point[j] * c.multiplicity as f64).sum::<Complex64>() / total as f64)
                .collect();
            let exact_basis = g.iter().map(|c| c.exact_basis.clone()).collect::<Option<Vec<_>>>().map(|bs| {
                let cols: Vec<Vec<GaussianRational>> =
                    bs.iter().flat_map(|b| (0..b.cols()).map(|j| b.column(j)).collect::<Vec<_>>()).collect();
                Matrix::from_columns(&cols)
            });
            Cluster {
                point,
                exact_point: None,
                multiplicity: total,
                basis: g.iter().flat_map(|c| c.basis.clone()).collect(),
                exact_basis,
                separator_values: g.iter().flat_map(|c| c.separator_values.clone()).collect(),
            }
        })
        .collect();
    (out, merged_any)
}

/// Joint generalized eigenspace decomposition of pairwise-commuting matrices.
pub fn joint_spectrum(ms: &[ExactMatrix], tolerance: f64) -> Result<JointSpectrum> {
    check_commuting(ms)?;
    for attempt in 0..SEPARATOR_ATTEMPTS {
        let weights = separator_weights(ms.len(), attempt);
        if let Some(clusters) = try_separator(ms, &weights, tolerance) {
            let (mut clusters, degraded) = merge_clusters(clusters, tolerance);
            clusters.sort_by(|a, b| cmp_points(&a.point, &b.point));
            return Ok(JointSpectrum { clusters, separator: weights, degraded });
        }
    }
    Err(Error::Numeric(format!("no separating combination found after {SEPARATOR_ATTEMPTS} attempts")))
}
