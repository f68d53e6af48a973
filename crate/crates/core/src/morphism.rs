//! Morphisms from an Azumaya point with fundamental module `Cʳ` into a target,
//! presented as one `r×r` matrix per target generator.

use std::collections::BTreeMap;

use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, ParseError, Result};
use crate::linalg::numeric::polynomial_roots;
use crate::linalg::{
    check_commuting, inverse, joint_spectrum, rank, restrict_to_subspace, Cluster, ExactMatrix, DEFAULT_TOLERANCE,
};
use crate::poly::{quotient_algebra, vanishing_ideal, IdealPresentation, QuotientAlgebra};
use crate::scalar::{ApproxComplex, GaussianRational};
use crate::targets::{TargetPresentation, TargetSpec};

/// Knobs shared by the analysis operations.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct AnalysisOptions {
    /// Relative tolerance for joint-spectrum clustering.
    pub tolerance: f64,
    /// Degree cap for vanishing-ideal computations; twice the rank if unset.
    pub degree_cap: Option<u32>,
    /// Seed for randomized cyclic-vector probes.
    pub seed: u64,
}

impl Default for AnalysisOptions {
    fn default() -> Self {
        Self { tolerance: DEFAULT_TOLERANCE, degree_cap: None, seed: 0 }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct AzumayaMorphism {
    rank: usize,
    target: TargetPresentation,
    matrices: Vec<ExactMatrix>,
}

/// Validates shapes, pairwise commutativity (for commutative targets) and
/// every target relation.
pub fn make_morphism(rank: usize, target: TargetPresentation, matrices: Vec<ExactMatrix>) -> Result<AzumayaMorphism> {
    if rank == 0 {
        return Err(Error::ZeroRank);
    }
    if matrices.len() != target.generators().len() {
        return Err(Error::Shape(format!(
            "{} matrices for {} generators of {}",
            matrices.len(),
            target.generators().len(),
            target.name()
        )));
    }
    for (name, m) in target.generators().iter().zip(&matrices) {
        if m.rows() != rank || m.cols() != rank {
            return Err(Error::Shape(format!(
                "matrix for `{name}` is {}x{}, expected {rank}x{rank}",
                m.rows(),
                m.cols()
            )));
        }
    }
    if target.is_commutative() {
        check_commuting(&matrices)?;
    }
    for rel in target.relations() {
        let residual = rel.evaluate_matrices(&matrices)?;
        if !residual.is_zero() {
            return Err(Error::RelationViolated { relation: rel.to_string(), residual });
        }
    }
    Ok(AzumayaMorphism { rank, target, matrices })
}

impl AzumayaMorphism {
    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn target(&self) -> &TargetPresentation {
        &self.target
    }

    pub fn matrices(&self) -> &[ExactMatrix] {
        &self.matrices
    }

    pub fn matrix(&self, generator: &str) -> Option<&ExactMatrix> {
        self.target.generators().iter().position(|g| g == generator).map(|k| &self.matrices[k])
    }

    /// Block-diagonal sum `φ₁ ⊕ φ₂` over the same target.
    pub fn direct_sum(&self, other: &Self) -> Result<Self> {
        if self.target != other.target {
            return Err(Error::Shape("direct sum of morphisms to different targets".into()));
        }
        let ms = self.matrices.iter().zip(&other.matrices).map(|(a, b)| a.direct_sum(b)).collect();
        make_morphism(self.rank + other.rank, self.target.clone(), ms)
    }

    fn require_commutative(&self) -> Result<()> {
        if self.target.is_commutative() {
            Ok(())
        } else {
            Err(Error::NonCommutativeTarget(self.target.name().to_string()))
        }
    }
}

/// JSON form of a morphism, validated separately by [`MorphismSpec::build`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MorphismSpec {
    pub rank: usize,
    pub target: TargetSpec,
    pub matrices: BTreeMap<String, ExactMatrix>,
}

impl MorphismSpec {
    pub fn build(&self) -> Result<AzumayaMorphism> {
        let target = self.target.resolve()?;
        let ms = matrices_for(&target, &self.matrices)?;
        make_morphism(self.rank, target, ms)
    }
}

/// Orders named matrices by the target's generators.
pub fn matrices_for<T: Clone>(target: &TargetPresentation, named: &BTreeMap<String, T>) -> Result<Vec<T>> {
    if let Some(extra) = named.keys().find(|k| !target.generators().contains(k)) {
        return Err(ParseError::Schema(format!("`{extra}` is not a generator of {}", target.name())).into());
    }
    target
        .generators()
        .iter()
        .map(|g| {
            named
                .get(g)
                .cloned()
                .ok_or_else(|| ParseError::Schema(format!("no matrix given for generator `{g}`")).into())
        })
        .collect()
}

impl From<&AzumayaMorphism> for MorphismSpec {
    fn from(m: &AzumayaMorphism) -> Self {
        Self {
            rank: m.rank,
            target: TargetSpec::describe(&m.target),
            matrices: m.target.generators().iter().cloned().zip(m.matrices.iter().cloned()).collect(),
        }
    }
}

/// Kernel of `Q(i)[y] → M_r`, i.e. the ideal of the image subscheme.
pub fn image_ideal(phi: &AzumayaMorphism, opts: &AnalysisOptions) -> Result<IdealPresentation> {
    phi.require_commutative()?;
    vanishing_ideal(phi.target.generators(), &phi.matrices, opts.degree_cap)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SupportPoint {
    pub coordinates: Vec<[f64; 2]>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub exact: Option<Vec<GaussianRational>>,
    /// Local dimension of the image scheme.
    pub image_length: usize,
    /// Dimension of the joint generalized eigenspace.
    pub module_length: usize,
}

impl SupportPoint {
    pub fn approx(&self) -> Vec<ApproxComplex> {
        self.coordinates.iter().map(|&[re, im]| ApproxComplex::new(re, im)).collect()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BraneDecomposition {
    pub points: Vec<SupportPoint>,
    pub image_ideal: IdealPresentation,
    pub total_module_length: usize,
    /// Set when numerically close clusters were merged.
    pub degraded: bool,
}

impl BraneDecomposition {
    pub fn total_image_length(&self) -> usize {
        self.points.iter().map(|p| p.image_length).sum()
    }

    /// Sorted `(module_length, image_length)` pairs, the shape of the
    /// decomposition independent of where the points sit.
    pub fn partition(&self) -> Vec<(usize, usize)> {
        let mut v: Vec<(usize, usize)> = self.points.iter().map(|p| (p.module_length, p.image_length)).collect();
        v.sort_unstable_by(|a, b| b.cmp(a));
        v
    }
}

/// Support points with their image and module lengths.
pub fn decompose(phi: &AzumayaMorphism, opts: &AnalysisOptions) -> Result<BraneDecomposition> {
    phi.require_commutative()?;
    let ms = &phi.matrices;
    let q = quotient_algebra(phi.target.generators(), ms, opts.degree_cap)?;
    let spectrum = joint_spectrum(ms, opts.tolerance)?;
    let mut numeric_factors = None;
    let mut points = Vec::with_capacity(spectrum.clusters.len());
    for cluster in &spectrum.clusters {
        let image_length = match &cluster.exact_basis {
            Some(basis) => local_length_exact(phi, basis, opts)?,
            None => {
                let factors = numeric_factors.get_or_insert_with(|| root_multiplicities(&q, ms, &spectrum.separator));
                local_length_numeric(cluster, factors)
            }
        };
        points.push(SupportPoint {
            coordinates: cluster.point.iter().map(|z| [z.re, z.im]).collect(),
            exact: cluster.exact_point.clone(),
            image_length,
            module_length: cluster.multiplicity,
        });
    }
    let total_module_length = points.iter().map(|p| p.module_length).sum();
    Ok(BraneDecomposition { points, image_ideal: q.ideal, total_module_length, degraded: spectrum.degraded })
}

fn local_length_exact(phi: &AzumayaMorphism, basis: &ExactMatrix, opts: &AnalysisOptions) -> Result<usize> {
    let restricted = phi
        .matrices
        .iter()
        .map(|m| restrict_to_subspace(m, basis))
        .collect::<Option<Vec<_>>>()
        .ok_or_else(|| Error::Internal("generalized eigenspace not invariant".into()))?;
    Ok(vanishing_ideal(phi.target.generators(), &restricted, opts.degree_cap)?.quotient_dimension())
}

/// Numeric roots of the multiplication operator's characteristic polynomial,
/// each tagged with its multiplicity.
fn root_multiplicities(
    q: &QuotientAlgebra,
    ms: &[ExactMatrix],
    weights: &[GaussianRational],
) -> Vec<(ApproxComplex, usize)> {
    let chi = q.multiplication_charpoly(ms, weights);
    chi.squarefree_decomposition()
        .into_iter()
        .flat_map(|(f, k)| polynomial_roots(&f).into_iter().map(move |z| (z, k)))
        .collect()
}

fn local_length_numeric(cluster: &Cluster, roots: &[(ApproxComplex, usize)]) -> usize {
    cluster
        .separator_values
        .iter()
        .map(|s| {
            roots.iter().min_by(|a, b| (a.0 - s).norm().total_cmp(&(b.0 - s).norm())).map(|&(_, k)| k).unwrap_or(0)
        })
        .sum()
}

/// The single support point when the pushforward is punctual.
pub fn is_punctual(phi: &AzumayaMorphism, opts: &AnalysisOptions) -> Result<Option<SupportPoint>> {
    let d = decompose(phi, opts)?;
    Ok(if d.points.len() == 1 { d.points.into_iter().next() } else { None })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum Cyclicity {
    /// `vector` generates `Cʳ` as a module over the target ring.
    Cyclic { vector: Vec<GaussianRational> },
    /// Proven: the image ring has dimension below `r`.
    NotCyclic { quotient_dimension: usize },
    /// No generator among the probed vectors.
    Inconclusive { probes: usize },
}

impl Cyclicity {
    pub fn is_cyclic(&self) -> bool {
        matches!(self, Cyclicity::Cyclic { .. })
    }
}

/// Number of random probes after the structured candidates.
pub const RANDOM_PROBES: usize = 20;

/// Probe vectors: standard basis, all ones, then seeded random vectors with
/// entries in `{−3..3} + {−3..3}i`.
pub fn probe_vectors(r: usize, seed: u64) -> Vec<Vec<GaussianRational>> {
    let mut out: Vec<Vec<GaussianRational>> = (0..r)
        .map(|i| (0..r).map(|j| if i == j { GaussianRational::one() } else { GaussianRational::zero() }).collect())
        .collect();
    out.push(vec![GaussianRational::one(); r]);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..RANDOM_PROBES {
        out.push(
            (0..r)
                .map(|_| GaussianRational::from_integers(rng.random_range(-3..=3), rng.random_range(-3..=3)))
                .collect(),
        );
    }
    out
}

/// Searches for a vector `v` with `{p(m)v}` equal to `Cʳ`.
pub fn is_cyclic(phi: &AzumayaMorphism, opts: &AnalysisOptions) -> Result<Cyclicity> {
    phi.require_commutative()?;
    let q = quotient_algebra(phi.target.generators(), &phi.matrices, opts.degree_cap)?;
    Ok(cyclicity_in(&q, phi.rank, opts.seed))
}

fn cyclicity_in(q: &QuotientAlgebra, r: usize, seed: u64) -> Cyclicity {
    let dim = q.ideal.quotient_dimension();
    if dim < r {
        return Cyclicity::NotCyclic { quotient_dimension: dim };
    }
    let probes = probe_vectors(r, seed);
    let count = probes.len();
    for v in probes {
        let images: Vec<Vec<GaussianRational>> = q.values.iter().map(|m| m.apply(&v)).collect();
        if rank(&ExactMatrix::from_columns(&images)) == r {
            return Cyclicity::Cyclic { vector: v };
        }
    }
    Cyclicity::Inconclusive { probes: count }
}

/// `g · mᵢ · g⁻¹` for every generator.
pub fn conjugate(phi: &AzumayaMorphism, g: &ExactMatrix) -> Result<AzumayaMorphism> {
    if g.rows() != phi.rank || g.cols() != phi.rank {
        return Err(Error::Shape(format!("conjugator is {}x{}, rank is {}", g.rows(), g.cols(), phi.rank)));
    }
    let g_inv = inverse(g).ok_or(Error::SingularConjugator)?;
    let ms = phi.matrices.iter().map(|m| g.matmul(m).matmul(&g_inv)).collect();
    make_morphism(phi.rank, phi.target.clone(), ms)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ClassicalPoint {
    pub coordinates: Vec<[f64; 2]>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub exact: Option<Vec<GaussianRational>>,
    pub module_length: usize,
}

/// Symmetric-product data beside ideal-level data.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ModuliDatum {
    pub classical: Vec<ClassicalPoint>,
    pub quantum_ideal: IdealPresentation,
    pub cyclicity: Cyclicity,
}

pub fn moduli_datum(phi: &AzumayaMorphism, opts: &AnalysisOptions) -> Result<ModuliDatum> {
    let d = decompose(phi, opts)?;
    let q = quotient_algebra(phi.target.generators(), &phi.matrices, opts.degree_cap)?;
    let classical = d
        .points
        .iter()
        .map(|p| ClassicalPoint {
            coordinates: p.coordinates.clone(),
            exact: p.exact.clone(),
            module_length: p.module_length,
        })
        .collect();
    Ok(ModuliDatum { classical, quantum_ideal: d.image_ideal, cyclicity: cyclicity_in(&q, phi.rank, opts.seed) })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::int_matrix;
    use crate::targets::builtin_target;

    fn line(m: ExactMatrix) -> AzumayaMorphism {
        make_morphism(m.rows(), builtin_target("affine_line").unwrap(), vec![m]).unwrap()
    }

    fn g(n: i64) -> GaussianRational {
        GaussianRational::from_int(n)
    }

    #[test]
    fn construction_checks() {
        let nodal = builtin_target("nodal_cubic").unwrap();
        assert!(make_morphism(1, nodal.clone(), vec![int_matrix(&[&[3]]), int_matrix(&[&[6]])]).is_ok());
        let err = make_morphism(1, nodal, vec![int_matrix(&[&[1]]), int_matrix(&[&[1]])]).unwrap_err();
        match err {
            Error::RelationViolated { residual, .. } => assert_eq!(residual, int_matrix(&[&[-1]])),
            other => panic!("unexpected {other:?}"),
        }
        let plane = builtin_target("affine_space(2)").unwrap();
        let err = make_morphism(2, plane, vec![ExactMatrix::unit(2, 0, 1), ExactMatrix::unit(2, 1, 0)]).unwrap_err();
        assert!(matches!(err, Error::NotCommuting { i: 0, j: 1, .. }));
        assert!(matches!(
            make_morphism(0, builtin_target("affine_line").unwrap(), vec![ExactMatrix::zeros(0, 0)]),
            Err(Error::ZeroRank)
        ));
    }

    #[test]
    fn decompositions() {
        let opts = AnalysisOptions::default();
        let d = decompose(&line(int_matrix(&[&[0, 0], &[0, 1]])), &opts).unwrap();
        assert_eq!(d.partition(), vec![(1, 1), (1, 1)]);
        let d = decompose(&line(int_matrix(&[&[3, 0], &[0, 3]])), &opts).unwrap();
        assert_eq!(d.points.len(), 1);
        assert_eq!((d.points[0].image_length, d.points[0].module_length), (1, 2));
        let d = decompose(&line(int_matrix(&[&[3, 1], &[0, 3]])), &opts).unwrap();
        assert_eq!((d.points[0].image_length, d.points[0].module_length), (2, 2));
        assert_eq!(d.points[0].exact, Some(vec![g(3)]));
    }

    #[test]
    fn irrational_support_uses_multiplication_operator() {
        // Eigenvalues ±√2, each with a 2x2 Jordan block.
        let c = int_matrix(&[&[0, 2], &[1, 0]]);
        let mut m = c.direct_sum(&c);
        m[(0, 2)] = g(1);
        m[(1, 3)] = g(1);
        let d = decompose(&line(m), &AnalysisOptions::default()).unwrap();
        assert_eq!(d.partition(), vec![(2, 2), (2, 2)]);
        assert!(d.points.iter().all(|p| p.exact.is_none()));
        // Same eigenvalues, semisimple.
        let d = decompose(&line(c.direct_sum(&c)), &AnalysisOptions::default()).unwrap();
        assert_eq!(d.partition(), vec![(2, 1), (2, 1)]);
    }

    #[test]
    fn punctual_nodal_brane() {
        let nodal = builtin_target("nodal_cubic").unwrap();
        let x = int_matrix(&[&[0, 2], &[0, 0]]);
        let phi = make_morphism(2, nodal, vec![x.clone(), x]).unwrap();
        let p = is_punctual(&phi, &AnalysisOptions::default()).unwrap().unwrap();
        assert_eq!(p.exact, Some(vec![g(0), g(0)]));
        assert_eq!(p.module_length, 2);
        assert!(is_punctual(&line(int_matrix(&[&[0, 0], &[0, 1]])), &AnalysisOptions::default()).unwrap().is_none());
    }

    #[test]
    fn cyclicity() {
        let opts = AnalysisOptions::default();
        match is_cyclic(&line(int_matrix(&[&[3, 1], &[0, 3]])), &opts).unwrap() {
            Cyclicity::Cyclic { vector } => assert_eq!(vector, vec![g(0), g(1)]),
            other => panic!("unexpected {other:?}"),
        }
        assert_eq!(
            is_cyclic(&line(int_matrix(&[&[3, 0], &[0, 3]])), &opts).unwrap(),
            Cyclicity::NotCyclic { quotient_dimension: 1 }
        );
        match is_cyclic(&line(int_matrix(&[&[0, 0], &[0, 1]])), &opts).unwrap() {
            Cyclicity::Cyclic { vector } => assert_eq!(vector, vec![g(1), g(1)]),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn conjugation() {
        let phi = line(int_matrix(&[&[0, 0], &[0, 1]]));
        let psi = conjugate(&phi, &int_matrix(&[&[1, 1], &[0, 1]])).unwrap();
        assert_eq!(psi.matrices()[0], int_matrix(&[&[0, 1], &[0, 1]]));
        let opts = AnalysisOptions::default();
        assert_eq!(image_ideal(&psi, &opts).unwrap(), image_ideal(&phi, &opts).unwrap());
        assert!(matches!(conjugate(&phi, &int_matrix(&[&[1, 1], &[1, 1]])), Err(Error::SingularConjugator)));
    }

    #[test]
    fn classical_versus_quantum() {
        let opts = AnalysisOptions::default();
        let a = moduli_datum(&line(int_matrix(&[&[3, 0], &[0, 3]])), &opts).unwrap();
        let b = moduli_datum(&line(int_matrix(&[&[3, 1], &[0, 3]])), &opts).unwrap();
        assert_eq!(a.classical, b.classical);
        assert_ne!(a.quantum_ideal, b.quantum_ideal);
        assert_eq!(a.quantum_ideal.factored_text(), "(y - 3)");
        assert_eq!(b.quantum_ideal.factored_text(), "((y-3)^2)");
    }

    #[test]
    fn json_round_trip() {
        let x = int_matrix(&[&[0, 2], &[0, 0]]);
        let phi = make_morphism(2, builtin_target("nodal_cubic").unwrap(), vec![x.clone(), x]).unwrap();
        let text = serde_json::to_string(&MorphismSpec::from(&phi)).unwrap();
        assert!(text.contains("\"target\":\"nodal_cubic\""));
        let back: MorphismSpec = serde_json::from_str(&text).unwrap();
        assert_eq!(back.build().unwrap(), phi);
    }
}
