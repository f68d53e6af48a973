//! One-parameter polynomial families of morphisms, support-change events along
//! them, and square-zero deformations.

use std::cmp::Ordering;
use std::collections::BTreeMap;

use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::numeric::{polynomial_roots, recognize_root};
use crate::linalg::{characteristic_polynomial, check_commuting, determinant, ExactMatrix, Matrix};
use crate::morphism::{
    decompose, make_morphism, matrices_for, AnalysisOptions, AzumayaMorphism, BraneDecomposition, SupportPoint,
};
use crate::poly::{
    parse_univariate_matrix, univariate_matrix_entries, vanishing_ideal, xi_generators, xi_products, Monomial,
    PolyEntry, RatFunc, UniPoly,
};
use crate::scalar::{ApproxComplex, GaussianRational};
use crate::targets::{free_z_space, Element, TargetPresentation, TargetSpec};

pub type Poly = UniPoly<GaussianRational>;
pub type PolyMatrix = Matrix<Poly>;

/// Default number of uniform samples for [`scan_events`].
pub const DEFAULT_SAMPLES: usize = 64;
/// Parameter accuracy of located events.
pub const EVENT_RESOLUTION: f64 = 1e-6;

fn specialize_matrix(m: &PolyMatrix, t: &GaussianRational) -> ExactMatrix {
    m.map(|p| p.eval(t))
}

/// A parameter value where `m` does not vanish, with the value there.
fn witness(m: &PolyMatrix) -> (GaussianRational, ExactMatrix) {
    (0..)
        .flat_map(|k: i64| [k, -k - 1])
        .map(GaussianRational::from_int)
        .map(|t| {
            let v = specialize_matrix(m, &t);
            (t, v)
        })
        .find(|(_, v)| !v.is_zero())
        .expect("nonzero polynomial matrix has a nonvanishing integer point")
}

#[derive(Clone, Debug, PartialEq)]
pub struct MorphismPath {
    rank: usize,
    target: TargetPresentation,
    window: (GaussianRational, GaussianRational),
    matrices: Vec<PolyMatrix>,
}

fn real_value(t: &GaussianRational) -> Option<&BigRational> {
    t.is_real().then(|| t.re())
}

/// Validates a family symbolically: commutators and relations must vanish as
/// polynomial identities in `t`.
pub fn make_path(
    rank: usize,
    target: TargetPresentation,
    window: (GaussianRational, GaussianRational),
    matrices: Vec<PolyMatrix>,
) -> Result<MorphismPath> {
    if rank == 0 {
        return Err(Error::ZeroRank);
    }
    match (real_value(&window.0), real_value(&window.1)) {
        (Some(lo), Some(hi)) if lo < hi => {}
        _ => return Err(Error::Shape(format!("window [{}, {}] must be a real interval", window.0, window.1))),
    }
    if matrices.len() != target.generators().len() {
        return Err(Error::Shape(format!("{} matrices for {} generators", matrices.len(), target.generators().len())));
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
        for i in 0..matrices.len() {
            for j in i + 1..matrices.len() {
                let c = matrices[i].commutator(&matrices[j]);
                if !c.is_zero() {
                    let (_, commutator) = witness(&c);
                    return Err(Error::NotCommuting { i, j, commutator });
                }
            }
        }
    }
    let one = PolyMatrix::identity(rank);
    for rel in target.relations() {
        let value = rel.evaluate_with(&matrices, &one)?;
        if !value.is_zero() {
            let (t, residual) = witness(&value);
            return Err(Error::RelationViolated { relation: format!("{rel} (at t = {t})"), residual });
        }
    }
    Ok(MorphismPath { rank, target, window, matrices })
}

impl MorphismPath {
    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn target(&self) -> &TargetPresentation {
        &self.target
    }

    pub fn window(&self) -> &(GaussianRational, GaussianRational) {
        &self.window
    }

    pub fn matrices(&self) -> &[PolyMatrix] {
        &self.matrices
    }

    /// The path `t ↦ self(−t)` on the mirrored window.
    pub fn reversed(&self) -> Self {
        let neg_t = Poly::new(vec![GaussianRational::zero(), -GaussianRational::one()]);
        Self {
            rank: self.rank,
            target: self.target.clone(),
            window: (-self.window.1.clone(), -self.window.0.clone()),
            matrices: self.matrices.iter().map(|m| m.map(|p| p.compose(&neg_t))).collect(),
        }
    }
}

/// The morphism at parameter `t`.
pub fn specialize(path: &MorphismPath, t: &GaussianRational) -> Result<AzumayaMorphism> {
    let inside = match (real_value(t), real_value(&path.window.0), real_value(&path.window.1)) {
        (Some(x), Some(lo), Some(hi)) => lo <= x && x <= hi,
        _ => false,
    };
    if !inside {
        return Err(Error::OutsideWindow {
            t: t.to_string(),
            lo: path.window.0.to_string(),
            hi: path.window.1.to_string(),
        });
    }
    let ms = path.matrices.iter().map(|m| specialize_matrix(m, t)).collect();
    make_morphism(path.rank, path.target.clone(), ms)
}

/// JSON form of a path: matrix entries are polynomials in `t`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PathSpec {
    pub rank: usize,
    pub target: TargetSpec,
    #[serde(default = "default_window")]
    pub window: [GaussianRational; 2],
    pub matrices: BTreeMap<String, Vec<Vec<PolyEntry>>>,
}

fn default_window() -> [GaussianRational; 2] {
    [GaussianRational::from_int(-1), GaussianRational::from_int(1)]
}

impl PathSpec {
    pub fn build(&self) -> Result<MorphismPath> {
        let target = self.target.resolve()?;
        let named = self
            .matrices
            .iter()
            .map(|(k, v)| Ok((k.clone(), parse_univariate_matrix(v, "t")?)))
            .collect::<Result<BTreeMap<_, _>>>()?;
        let ms = matrices_for(&target, &named)?;
        make_path(self.rank, target, (self.window[0].clone(), self.window[1].clone()), ms)
    }
}

impl From<&MorphismPath> for PathSpec {
    fn from(p: &MorphismPath) -> Self {
        let text = |m: &PolyMatrix| univariate_matrix_entries(m, "t");
        Self {
            rank: p.rank,
            target: TargetSpec::describe(&p.target),
            window: [p.window.0.clone(), p.window.1.clone()],
            matrices: p.target.generators().iter().cloned().zip(p.matrices.iter().map(text)).collect(),
        }
    }
}

#[derive(Clone, Copy, Debug)]
pub struct ScanOptions {
    pub samples: usize,
    pub analysis: AnalysisOptions,
}

impl Default for ScanOptions {
    fn default() -> Self {
        Self { samples: DEFAULT_SAMPLES, analysis: AnalysisOptions::default() }
    }
}

/// Sorted `(module_length, image_length)` pairs of a decomposition.
pub type Partition = Vec<(usize, usize)>;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PathSample {
    pub t: GaussianRational,
    pub t_approx: f64,
    pub points: Vec<SupportPoint>,
    pub degraded: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum EventKind {
    /// Support points come together (Higgsing).
    Merge,
    /// Support points separate (un-Higgsing).
    Split,
    /// Lengths redistribute at constant point count.
    Recombination,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PathEvent {
    pub t: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub t_exact: Option<GaussianRational>,
    pub kind: EventKind,
    pub before: Partition,
    /// Decomposition at an isolated special parameter.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub at: Option<Partition>,
    pub after: Partition,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ScanReport {
    pub samples: Vec<PathSample>,
    pub events: Vec<PathEvent>,
}

impl ScanReport {
    /// Header and rows `t, point, <g>_re, <g>_im …, module_length, image_length`.
    pub fn csv_rows(&self, generators: &[String]) -> (Vec<String>, Vec<Vec<String>>) {
        let mut header = vec!["t".to_string(), "point".to_string()];
        for g in generators {
            header.push(format!("{g}_re"));
            header.push(format!("{g}_im"));
        }
        header.push("module_length".into());
        header.push("image_length".into());
        let mut rows = Vec::new();
        for s in &self.samples {
            for (k, p) in s.points.iter().enumerate() {
                let mut row = vec![s.t.to_string(), k.to_string()];
                for [re, im] in &p.coordinates {
                    row.push(format!("{re}"));
                    row.push(format!("{im}"));
                }
                row.push(p.module_length.to_string());
                row.push(p.image_length.to_string());
                rows.push(row);
            }
        }
        (header, rows)
    }
}

fn partition_of(d: &BraneDecomposition) -> Partition {
    d.partition()
}

fn classify(before: &Partition, after: &Partition) -> EventKind {
    match after.len().cmp(&before.len()) {
        Ordering::Less => EventKind::Merge,
        Ordering::Greater => EventKind::Split,
        Ordering::Equal => EventKind::Recombination,
    }
}

fn cmp_real(a: &GaussianRational, b: &GaussianRational) -> Ordering {
    a.re().cmp(b.re())
}

/// Candidate polynomials in `t` whose real roots include every parameter
/// where the decomposition can change.
fn special_polynomials(path: &MorphismPath, opts: &AnalysisOptions) -> Result<Vec<Poly>> {
    let mut out = Vec::new();
    let weights: Vec<GaussianRational> =
        (0..path.matrices.len()).map(|j| GaussianRational::from_ratio(5, 11).pow(j as u32)).collect();
    let mut combos: Vec<PolyMatrix> = path.matrices.clone();
    if path.matrices.len() > 1 {
        let l = path
            .matrices
            .iter()
            .zip(&weights)
            .fold(PolyMatrix::zeros(path.rank, path.rank), |acc, (m, w)| acc + m.map(|p| p.scale(w)));
        combos.push(l);
    }
    for a in &combos {
        out.extend(collision_polynomials(a));
    }
    if let Some(p) = dimension_drop_polynomial(path, opts)? {
        out.push(p);
    }
    Ok(out)
}

/// Discriminant of the square-free part of `det(y − a(t))` and the
/// denominators introduced while taking it.
fn collision_polynomials(a: &PolyMatrix) -> Vec<Poly> {
    let chi = characteristic_polynomial(a);
    let over_field: UniPoly<RatFunc<GaussianRational>> = chi.map(|c| RatFunc::from_poly(c.clone()));
    let s = over_field.squarefree_part();
    if s.degree().is_none_or(|d| d < 2) {
        return Vec::new();
    }
    let mut denom = Poly::one();
    for c in s.coeffs() {
        let g = Poly::gcd(&denom, c.denom());
        denom = (denom.clone() * c.denom().clone()).exact_div(&g).expect("gcd divides");
    }
    let cleared: Vec<Poly> =
        s.coeffs().iter().map(|c| c.numer().clone() * denom.exact_div(c.denom()).expect("lcm is a multiple")).collect();
    let f = UniPoly::new(cleared);
    let df = f.derivative();
    let disc = determinant(&sylvester(&f, &df));
    let mut out = Vec::new();
    if !disc.is_zero() {
        out.push(disc);
    }
    if denom.degree().unwrap_or(0) > 0 {
        out.push(denom);
    }
    out
}

fn sylvester(f: &UniPoly<Poly>, g: &UniPoly<Poly>) -> PolyMatrix {
    let m = f.degree().unwrap_or(0);
    let n = g.degree().unwrap_or(0);
    let size = m + n;
    let mut s = PolyMatrix::zeros(size, size);
    for row in 0..n {
        for k in 0..=m {
            s[(row, row + k)] = f.coeff(m - k);
        }
    }
    for row in 0..m {
        for k in 0..=n {
            s[(n + row, row + k)] = g.coeff(n - k);
        }
    }
    s
}

/// `det(P·K(t))` where the columns of `K` are the generic standard-monomial
/// values; vanishes where the image scheme loses length.
fn dimension_drop_polynomial(path: &MorphismPath, opts: &AnalysisOptions) -> Result<Option<Poly>> {
    if !path.target.is_commutative() {
        return Ok(None);
    }
    let generic_points = [GaussianRational::from_ratio(7919, 104729), GaussianRational::from_ratio(-3571, 9973)];
    let mut best: Option<Vec<Monomial>> = None;
    for t in &generic_points {
        let ms: Vec<ExactMatrix> = path.matrices.iter().map(|m| specialize_matrix(m, t)).collect();
        let ideal = vanishing_ideal(path.target.generators(), &ms, opts.degree_cap)?;
        if best.as_ref().is_none_or(|b| ideal.quotient_dimension() > b.len()) {
            best = Some(ideal.standard_monomials().to_vec());
        }
    }
    let standard = best.expect("at least one generic point");
    let n = path.rank;
    let columns: Vec<Vec<Poly>> = standard
        .iter()
        .map(|mono| {
            let mut v = PolyMatrix::identity(n);
            for (i, &e) in mono.0.iter().enumerate() {
                for _ in 0..e {
                    v = v.matmul(&path.matrices[i]);
                }
            }
            v.entries().to_vec()
        })
        .collect();
    let k = PolyMatrix::from_columns(&columns);
    let dim = standard.len();
    for seed in 0..8u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let p = PolyMatrix::new(
            dim,
            n * n,
            (0..dim * n * n).map(|_| Poly::constant(GaussianRational::from_int(rng.random_range(-3..=3)))).collect(),
        );
        let det = determinant(&p.matmul(&k));
        if !det.is_zero() {
            return Ok((det.degree().unwrap_or(0) > 0).then_some(det));
        }
    }
    Ok(None)
}

struct Candidates {
    exact: Vec<GaussianRational>,
    approx: Vec<f64>,
}

fn candidate_parameters(path: &MorphismPath, opts: &AnalysisOptions) -> Result<Candidates> {
    let lo = path.window.0.to_approx().re;
    let hi = path.window.1.to_approx().re;
    let mut exact: Vec<GaussianRational> = Vec::new();
    let mut approx: Vec<f64> = Vec::new();
    for p in special_polynomials(path, opts)? {
        let p = p.squarefree_part();
        for z in polynomial_roots(&p) {
            if z.im.abs() > 1e-9 * (1.0 + z.re.abs()) || z.re < lo - 1e-9 || z.re > hi + 1e-9 {
                continue;
            }
            match recognize_root(&p, z) {
                Some(c) if c.is_real() => {
                    if specialize_inside(path, &c) && !exact.contains(&c) {
                        exact.push(c);
                    }
                }
                Some(_) => {}
                None => {
                    if !approx.iter().any(|a| (a - z.re).abs() <= EVENT_RESOLUTION) {
                        approx.push(z.re);
                    }
                }
            }
        }
    }
    approx.sort_by(f64::total_cmp);
    Ok(Candidates { exact, approx })
}

fn specialize_inside(path: &MorphismPath, t: &GaussianRational) -> bool {
    path.window.0.re() <= t.re() && t.re() <= path.window.1.re()
}

fn grid(path: &MorphismPath, samples: usize) -> Vec<GaussianRational> {
    let (lo, hi) = &path.window;
    let width = hi - lo;
    let steps = GaussianRational::from_int(samples as i64 - 1);
    (0..samples).map(|k| lo + &(&(&width * &GaussianRational::from_int(k as i64)) / &steps)).collect()
}

fn decompose_at(path: &MorphismPath, t: &GaussianRational, opts: &AnalysisOptions) -> Result<BraneDecomposition> {
    decompose(&specialize(path, t)?, opts)
}

/// Samples the path, locates parameters where the decomposition changes and
/// classifies each change.
pub fn scan_events(path: &MorphismPath, opts: &ScanOptions) -> Result<ScanReport> {
    if opts.samples < 2 {
        return Err(Error::Shape("at least two samples are required".into()));
    }
    if !path.target.is_commutative() {
        return Err(Error::NonCommutativeTarget(path.target.name().to_string()));
    }
    let aopts = opts.analysis;
    let candidates = candidate_parameters(path, &aopts)?;
    let mut ts = grid(path, opts.samples);
    for c in &candidates.exact {
        if !ts.contains(c) {
            ts.push(c.clone());
        }
    }
    ts.sort_by(cmp_real);
    let decomps: Vec<BraneDecomposition> =
        ts.par_iter().map(|t| decompose_at(path, t, &aopts)).collect::<Result<Vec<_>>>()?;
    let states: Vec<Partition> = decomps.iter().map(partition_of).collect();
    let mut events = Vec::new();
    let mut k = 1;
    while k < ts.len() {
        if states[k] == states[k - 1] {
            k += 1;
            continue;
        }
        let isolated = k + 1 < ts.len() && states[k + 1] == states[k - 1];
        if isolated {
            events.push(PathEvent {
                t: ts[k].to_approx().re,
                t_exact: Some(ts[k].clone()),
                kind: classify(&states[k - 1], &states[k]),
                before: states[k - 1].clone(),
                at: Some(states[k].clone()),
                after: states[k + 1].clone(),
            });
            k += 2;
        } else {
            let t = bisect(path, &ts[k - 1], &ts[k], &states[k - 1], &aopts)?;
            events.push(PathEvent {
                t: t.to_approx().re,
                t_exact: None,
                kind: classify(&states[k - 1], &states[k]),
                before: states[k - 1].clone(),
                at: None,
                after: states[k].clone(),
            });
            k += 1;
        }
    }
    for c in &candidates.approx {
        if let Some(e) = approximate_event(path, *c, &ts, &states, &aopts)? {
            events.push(e);
        }
    }
    events.sort_by(|a, b| a.t.total_cmp(&b.t));
    let samples = ts
        .into_iter()
        .zip(decomps)
        .map(|(t, d)| PathSample { t_approx: t.to_approx().re, t, points: d.points, degraded: d.degraded })
        .collect();
    Ok(ScanReport { samples, events })
}

/// Narrows a state change between `a` and `b` to [`EVENT_RESOLUTION`].
fn bisect(
    path: &MorphismPath,
    a: &GaussianRational,
    b: &GaussianRational,
    left_state: &Partition,
    opts: &AnalysisOptions,
) -> Result<GaussianRational> {
    let (mut a, mut b) = (a.clone(), b.clone());
    let half = GaussianRational::from_ratio(1, 2);
    while (&b - &a).to_approx().re > EVENT_RESOLUTION {
        let mid = &(&a + &b) * &half;
        if &partition_of(&decompose_at(path, &mid, opts)?) == left_state {
            a = mid;
        } else {
            b = mid;
        }
    }
    Ok(&(&a + &b) * &half)
}

/// An event at an irrational special parameter, evaluated at its nearest
/// binary rational with a widened clustering tolerance.
fn approximate_event(
    path: &MorphismPath,
    c: f64,
    ts: &[GaussianRational],
    states: &[Partition],
    opts: &AnalysisOptions,
) -> Result<Option<PathEvent>> {
    let right = ts.iter().position(|t| t.to_approx().re > c);
    let (Some(r), Some(q)) = (right.filter(|&r| r > 0), GaussianRational::from_f64(c)) else { return Ok(None) };
    let wide = AnalysisOptions { tolerance: opts.tolerance.max(1e-5), ..*opts };
    let at = partition_of(&decompose_at(path, &q, &wide)?);
    let before = &states[r - 1];
    if &at == before && &states[r] == before {
        return Ok(None);
    }
    Ok(Some(PathEvent {
        t: c,
        t_exact: None,
        kind: classify(before, &at),
        before: before.clone(),
        at: Some(at),
        after: states[r].clone(),
    }))
}

/// Report of a square-zero perturbation `mᵢ ↦ mᵢ + εᵢ`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SquareZeroReport {
    pub valid: bool,
    /// Each relation (and, for commutative targets, each commutator) with its
    /// value on the perturbed tuple.
    pub residuals: Vec<(String, ExactMatrix)>,
    #[serde(skip)]
    pub deformed: Option<AzumayaMorphism>,
}

/// Checks `εᵢ² = 0` and evaluates every relation on `mᵢ + εᵢ`.
pub fn apply_square_zero(base: &AzumayaMorphism, perturbations: &[ExactMatrix]) -> Result<SquareZeroReport> {
    let r = base.rank();
    if perturbations.len() != base.matrices().len() {
        return Err(Error::Shape(format!(
            "{} perturbations for {} generators",
            perturbations.len(),
            base.matrices().len()
        )));
    }
    for (index, e) in perturbations.iter().enumerate() {
        if e.rows() != r || e.cols() != r {
            return Err(Error::Shape(format!(
                "perturbation {} is {}x{}, expected {r}x{r}",
                index + 1,
                e.rows(),
                e.cols()
            )));
        }
        let square = e.matmul(e);
        if !square.is_zero() {
            return Err(Error::NotSquareZero { index, square });
        }
    }
    let ms: Vec<ExactMatrix> = base.matrices().iter().zip(perturbations).map(|(m, e)| m.clone() + e.clone()).collect();
    let target = base.target();
    let mut residuals = Vec::new();
    if target.is_commutative() {
        let g = target.generators();
        for i in 0..ms.len() {
            for j in i + 1..ms.len() {
                residuals.push((format!("[{}, {}]", g[i], g[j]), ms[i].commutator(&ms[j])));
            }
        }
    }
    for rel in target.relations() {
        residuals.push((rel.to_string(), rel.evaluate_matrices(&ms)?));
    }
    let valid = residuals.iter().all(|(_, v)| v.is_zero());
    let deformed = if valid { Some(make_morphism(r, target.clone(), ms)?) } else { None };
    Ok(SquareZeroReport { valid, residuals, deformed })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ProbePoint {
    pub coordinates: Vec<[f64; 2]>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub exact: Option<Vec<GaussianRational>>,
    pub module_length: usize,
    pub image_length: usize,
    /// `z1*z2 - z3*z4` at the point.
    pub conifold_value: [f64; 2],
    #[serde(skip_serializing_if = "Option::is_none")]
    pub conifold_value_exact: Option<GaussianRational>,
    pub on_conifold: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConifoldProbe {
    /// `z1 = ξ1ξ3, z2 = ξ2ξ4, z3 = ξ1ξ4, z4 = ξ2ξ3`.
    pub products: Vec<ExactMatrix>,
    pub points: Vec<ProbePoint>,
    pub image_ideal: crate::poly::IdealPresentation,
}

impl ConifoldProbe {
    pub fn off_conifold(&self) -> Vec<&ProbePoint> {
        self.points.iter().filter(|p| !p.on_conifold).collect()
    }
}

/// Pushes a representation of the conifold algebra down to `A⁴` and locates
/// its support relative to `z1*z2 = z3*z4`.
pub fn conifold_probe(phi: &AzumayaMorphism, opts: &AnalysisOptions) -> Result<ConifoldProbe> {
    let t = phi.target();
    if t.is_commutative() || t.generators() != xi_generators().as_slice() {
        return Err(Error::Shape(format!("conifold probe needs a representation of r_xi, got {}", t.name())));
    }
    let products = xi_products()
        .into_iter()
        .map(|p| Element::Free(p).evaluate_matrices(phi.matrices()))
        .collect::<Result<Vec<_>>>()?;
    check_commuting(&products).map_err(|e| Error::Internal(format!("conifold products do not commute: {e}")))?;
    let z = make_morphism(phi.rank(), free_z_space(), products.clone())?;
    let d = decompose(&z, opts)?;
    let points = d
        .points
        .iter()
        .map(|p| {
            let value_exact = p.exact.as_ref().map(|e| &(&e[0] * &e[1]) - &(&e[2] * &e[3]));
            let a = p.approx();
            let value: ApproxComplex = a[0] * a[1] - a[2] * a[3];
            let scale = a.iter().map(|x| x.norm()).fold(1.0, f64::max);
            let on = match &value_exact {
                Some(v) => v.is_zero(),
                None => value.norm() <= opts.tolerance.sqrt() * scale * scale,
            };
            ProbePoint {
                coordinates: p.coordinates.clone(),
                exact: p.exact.clone(),
                module_length: p.module_length,
                image_length: p.image_length,
                conifold_value: [value.re, value.im],
                conifold_value_exact: value_exact,
                on_conifold: on,
            }
        })
        .collect();
    Ok(ConifoldProbe { products, points, image_ideal: d.image_ideal })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct OffConifoldExample {
    pub rank: usize,
    /// Perturbations of the zero representation, as `(row, column)` of the
    /// single unit entry per generator (`None` for zero).
    pub units: Vec<Option<(usize, usize)>>,
    pub point: ProbePoint,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct OffConifoldSearch {
    pub seed: u64,
    pub trials_per_rank: usize,
    pub max_rank: usize,
    /// One line per rank searched.
    pub log: Vec<String>,
    pub found: Option<OffConifoldExample>,
}

/// Seeded search over square-zero deformations of the zero representation of
/// the conifold algebra, each `εᵢ` a single off-diagonal unit matrix or zero,
/// for an image point off the conifold.
pub fn search_off_conifold(
    seed: u64,
    max_rank: usize,
    trials_per_rank: usize,
    opts: &AnalysisOptions,
) -> Result<OffConifoldSearch> {
    let target = crate::targets::builtin_target("r_xi")?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut log = Vec::new();
    for r in 2..=max_rank {
        let base = make_morphism(r, target.clone(), vec![ExactMatrix::zeros(r, r); 4])?;
        let mut valid = 0;
        for trial in 0..trials_per_rank {
            let units: Vec<Option<(usize, usize)>> = (0..4)
                .map(|_| {
                    if rng.random_range(0..5) == 0 {
                        return None;
                    }
                    let a = rng.random_range(0..r);
                    let b = (a + rng.random_range(1..r)) % r;
                    Some((a, b))
                })
                .collect();
            let eps: Vec<ExactMatrix> = units
                .iter()
                .map(|u| match u {
                    Some((a, b)) => ExactMatrix::unit(r, *a, *b),
                    None => ExactMatrix::zeros(r, r),
                })
                .collect();
            let report = apply_square_zero(&base, &eps)?;
            let Some(phi) = report.deformed else { continue };
            valid += 1;
            let probe = conifold_probe(&phi, opts)?;
            if let Some(p) = probe.points.into_iter().find(|p| !p.on_conifold && p.exact.is_some()) {
                log.push(format!("rank {r}: off-conifold point after {} trials ({valid} valid)", trial + 1));
                return Ok(OffConifoldSearch {
                    seed,
                    trials_per_rank,
                    max_rank,
                    log,
                    found: Some(OffConifoldExample { rank: r, units, point: p }),
                });
            }
        }
        log.push(format!("rank {r}: {trials_per_rank} trials, {valid} valid, none off the conifold"));
    }
    Ok(OffConifoldSearch { seed, trials_per_rank, max_rank, log, found: None })
}
