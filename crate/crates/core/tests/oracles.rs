use dbrane_core::linalg::{
    characteristic_polynomial, eval_at_matrix, int_matrix, kernel_basis, minimal_polynomial, ExactMatrix,
};
use dbrane_core::morphism::{
    conjugate, decompose, image_ideal, is_punctual, make_morphism, moduli_datum, AnalysisOptions,
};
use dbrane_core::poly::{default_variables, parse_univariate, MultiPoly, UniPoly};
use dbrane_core::spectral::{verify_containment, PolyMatrix, SpectralPair};
use dbrane_core::targets::builtin_target;
use dbrane_core::GaussianRational;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type G = GaussianRational;

fn small(rng: &mut ChaCha8Rng) -> G {
    G::from_integers(rng.random_range(-3..=3), rng.random_range(-3..=3))
}

fn random_matrix(rng: &mut ChaCha8Rng, r: usize) -> ExactMatrix {
    ExactMatrix::new(r, r, (0..r * r).map(|_| small(rng)).collect())
}

/// Random matrices with repeated eigenvalues and nontrivial Jordan structure
/// mixed in, so the oracle sees more than the generic case.
fn structured_matrix(rng: &mut ChaCha8Rng, r: usize) -> ExactMatrix {
    match rng.random_range(0..3) {
        0 => random_matrix(rng, r),
        1 => {
            let d: Vec<G> = (0..r).map(|_| G::from_int(rng.random_range(-1..=1))).collect();
            let mut m = ExactMatrix::diagonal(d);
            for i in 0..r.saturating_sub(1) {
                if rng.random_bool(0.5) && m[(i, i)] == m[(i + 1, i + 1)] {
                    m[(i, i + 1)] = G::one();
                }
            }
            similar(rng, &m)
        }
        _ => {
            let a = random_matrix(rng, r);
            let b = a.matmul(&a) - a.scale(&G::from_int(2));
            similar(rng, &b)
        }
    }
}

fn unipotent(rng: &mut ChaCha8Rng, r: usize) -> ExactMatrix {
    let mut g = ExactMatrix::identity(r);
    for i in 0..r {
        for j in i + 1..r {
            g[(i, j)] = G::from_int(rng.random_range(-2..=2));
        }
    }
    g
}

fn similar(rng: &mut ChaCha8Rng, m: &ExactMatrix) -> ExactMatrix {
    let r = m.rows();
    let u = unipotent(rng, r);
    let l = unipotent(rng, r).transpose();
    let g = u.matmul(&l);
    let inv = dbrane_core::linalg::inverse(&g).expect("unipotent product is invertible");
    g.matmul(m).matmul(&inv)
}

fn as_multi(p: &UniPoly<G>) -> MultiPoly {
    let vars = default_variables(1);
    let y = MultiPoly::var(&vars, 0);
    p.coeffs().iter().enumerate().fold(MultiPoly::zero(&vars), |acc, (k, c)| acc.add(&y.pow(k as u32).scale(c)))
}

#[test]
fn minimal_polynomial_examples() {
    assert_eq!(
        minimal_polynomial(&int_matrix(&[&[0, 0], &[0, 1]])),
        UniPoly::new(vec![G::zero(), -G::one(), G::one()])
    );
    let jordan = minimal_polynomial(&int_matrix(&[&[3, 1], &[0, 3]]));
    assert_eq!(jordan, parse_univariate("(y-3)^2", "y").unwrap());
    assert_eq!(minimal_polynomial(&int_matrix(&[&[3, 0], &[0, 3]])), parse_univariate("y - 3", "y").unwrap());
}

#[test]
fn characteristic_polynomial_examples() {
    assert_eq!(characteristic_polynomial(&int_matrix(&[&[0, 1], &[1, 0]])), parse_univariate("y^2 - 1", "y").unwrap());
    assert_eq!(characteristic_polynomial(&ExactMatrix::identity(3)), parse_univariate("(y-1)^3", "y").unwrap());
    assert_eq!(characteristic_polynomial(&int_matrix(&[&[0, 5], &[1, 0]])), parse_univariate("y^2 - 5", "y").unwrap());
}

#[test]
fn kernel_examples() {
    assert_eq!(kernel_basis(&ExactMatrix::zeros(2, 2)).len(), 2);
    assert!(kernel_basis(&ExactMatrix::identity(3)).is_empty());
    let k = kernel_basis(&int_matrix(&[&[1, 2], &[2, 4]]));
    assert_eq!(k, vec![vec![G::from_int(-2), G::one()]]);
}

#[test]
fn image_ideal_matches_minimal_polynomial() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let line = builtin_target("affine_line").unwrap();
    let opts = AnalysisOptions::default();
    for _ in 0..60 {
        let r = rng.random_range(1..=5);
        let m = structured_matrix(&mut rng, r);
        let minpoly = minimal_polynomial(&m);
        assert!(eval_at_matrix(&minpoly, &m).is_zero());
        let ideal = image_ideal(&make_morphism(r, line.clone(), vec![m]).unwrap(), &opts).unwrap();
        assert_eq!(ideal.generators(), &[as_multi(&minpoly)]);
        assert!(minpoly.degree().unwrap() <= r);
        assert_eq!(ideal.quotient_dimension(), minpoly.degree().unwrap());
    }
}

#[test]
fn lengths_are_conserved_for_commuting_pairs() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let plane = builtin_target("affine_space(2)").unwrap();
    let opts = AnalysisOptions::default();
    for _ in 0..30 {
        let r = rng.random_range(1..=4);
        let a = structured_matrix(&mut rng, r);
        let coeffs: Vec<G> = (0..3).map(|_| G::from_int(rng.random_range(-2..=2))).collect();
        let b = a.eval_poly(&coeffs);
        let phi = make_morphism(r, plane.clone(), vec![a, b]).unwrap();
        let d = decompose(&phi, &opts).unwrap();
        assert_eq!(d.total_module_length, r);
        assert_eq!(d.total_image_length(), d.image_ideal.quotient_dimension());
    }
}

#[test]
fn conjugation_preserves_image() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    let line = builtin_target("affine_line").unwrap();
    let opts = AnalysisOptions::default();
    for _ in 0..20 {
        let r = rng.random_range(1..=4);
        let phi = make_morphism(r, line.clone(), vec![structured_matrix(&mut rng, r)]).unwrap();
        let g = unipotent(&mut rng, r).matmul(&unipotent(&mut rng, r).transpose());
        let psi = conjugate(&phi, &g).unwrap();
        assert_eq!(image_ideal(&phi, &opts).unwrap(), image_ideal(&psi, &opts).unwrap());
    }
}

#[test]
fn classical_and_quantum_data_differ_for_jordan_block() {
    let line = builtin_target("affine_line").unwrap();
    let opts = AnalysisOptions::default();
    let scalar =
        moduli_datum(&make_morphism(2, line.clone(), vec![int_matrix(&[&[3, 0], &[0, 3]])]).unwrap(), &opts).unwrap();
    let jordan = moduli_datum(&make_morphism(2, line, vec![int_matrix(&[&[3, 1], &[0, 3]])]).unwrap(), &opts).unwrap();
    assert_eq!(scalar.classical, jordan.classical);
    assert_ne!(scalar.quantum_ideal, jordan.quantum_ideal);
    assert_eq!(scalar.quantum_ideal.factored_text(), "(y - 3)");
    assert_eq!(jordan.quantum_ideal.factored_text(), "((y-3)^2)");
}

#[test]
fn nodal_cubic_punctual_brane() {
    let nodal = builtin_target("nodal_cubic").unwrap();
    let m = int_matrix(&[&[0, 2], &[0, 0]]);
    let phi = make_morphism(2, nodal, vec![m.clone(), m]).unwrap();
    let p = is_punctual(&phi, &AnalysisOptions::default()).unwrap().expect("punctual");
    assert_eq!(p.module_length, 2);
    assert_eq!(p.exact, Some(vec![G::zero(), G::zero()]));
}

#[test]
fn cayley_hamilton_for_random_spectral_pairs() {
    let mut rng = ChaCha8Rng::seed_from_u64(14);
    for _ in 0..25 {
        let r = rng.random_range(1..=4);
        let entries = (0..r * r)
            .map(|_| {
                let deg = rng.random_range(0..=3);
                UniPoly::new((0..=deg).map(|_| small(&mut rng)).collect())
            })
            .collect();
        let pair = SpectralPair::new(PolyMatrix::new(r, r, entries)).unwrap();
        let cert = verify_containment(&pair).unwrap();
        assert!(cert.residual.is_zero());
        assert_eq!(cert.curve.degree_in_lambda(), r);
    }
}
