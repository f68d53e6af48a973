use dbrane_core::linalg::{
    characteristic_polynomial, eval_at_matrix, kernel_basis, minimal_polynomial, rank, ExactMatrix,
};
use dbrane_core::morphism::{image_ideal, make_morphism, AnalysisOptions, MorphismSpec};
use dbrane_core::poly::{
    evaluate_at_tuple, parse_multi, vanishing_ideal, IdealPresentation, Monomial, MultiPoly, UniPoly,
};
use dbrane_core::spectral::{lambda_connection, quantum_spectral_operator, spectral_curve, PolyMatrix, SpectralPair};
use dbrane_core::targets::builtin_target;
use dbrane_core::GaussianRational;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use proptest::prelude::*;

type G = GaussianRational;

fn gaussian() -> impl Strategy<Value = G> {
    (-1000i64..1000, 1i64..200, -1000i64..1000, 1i64..200).prop_map(|(a, b, c, d)| {
        G::new(BigRational::new(BigInt::from(a), BigInt::from(b)), BigRational::new(BigInt::from(c), BigInt::from(d)))
    })
}

fn small() -> impl Strategy<Value = G> {
    (-3i64..=3, -3i64..=3).prop_map(|(a, b)| G::from_integers(a, b))
}

fn matrix(max_r: usize) -> impl Strategy<Value = ExactMatrix> {
    (1..=max_r).prop_flat_map(|r| prop::collection::vec(small(), r * r).prop_map(move |d| ExactMatrix::new(r, r, d)))
}

/// A matrix together with a polynomial in it, so the pair commutes.
fn commuting_pair() -> impl Strategy<Value = (ExactMatrix, ExactMatrix)> {
    (matrix(4), prop::collection::vec(-2i64..=2, 1..4)).prop_map(|(a, cs)| {
        let cs: Vec<G> = cs.into_iter().map(G::from_int).collect();
        let b = a.eval_poly(&cs);
        (a, b)
    })
}

fn poly_matrix(max_r: usize, max_deg: usize) -> impl Strategy<Value = PolyMatrix> {
    (1..=max_r).prop_flat_map(move |r| {
        prop::collection::vec(prop::collection::vec(small(), 0..=max_deg + 1), r * r)
            .prop_map(move |es| PolyMatrix::new(r, r, es.into_iter().map(UniPoly::new).collect()))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn addition_round_trips(x in gaussian(), y in gaussian()) {
        prop_assert_eq!(&(&x + &y) - &y, x);
    }

    #[test]
    fn nonzero_elements_invert(x in gaussian()) {
        prop_assume!(!x.is_zero());
        prop_assert_eq!(&x * &x.inv().unwrap(), G::one());
    }

    #[test]
    fn approximation_commutes_with_products(x in gaussian(), y in gaussian()) {
        let exact = (&x * &y).to_approx();
        let (a, b) = (x.to_approx(), y.to_approx());
        let approx = a * b;
        let scale_re = (a.re * b.re).abs().max((a.im * b.im).abs());
        let scale_im = (a.re * b.im).abs().max((a.im * b.re).abs());
        prop_assert!((exact.re - approx.re).abs() <= 4.0 * f64::EPSILON * scale_re.max(f64::MIN_POSITIVE));
        prop_assert!((exact.im - approx.im).abs() <= 4.0 * f64::EPSILON * scale_im.max(f64::MIN_POSITIVE));
    }

    #[test]
    fn scalar_text_round_trips(x in gaussian()) {
        prop_assert_eq!(x.to_string().parse::<G>().unwrap(), x);
    }

    #[test]
    fn polynomial_text_round_trips(terms in prop::collection::vec((0u32..4, 0u32..4, small()), 0..6)) {
        let vars = vec!["y1".to_string(), "y2".to_string()];
        let p = MultiPoly::from_terms(&vars, terms.into_iter().map(|(a, b, c)| (Monomial(vec![a, b]), c)));
        prop_assert_eq!(parse_multi(&p.to_string(), &vars).unwrap(), p);
    }

    #[test]
    fn cayley_hamilton_and_minimal_polynomial(m in matrix(5)) {
        let chi = characteristic_polynomial(&m);
        prop_assert_eq!(chi.degree(), Some(m.rows()));
        prop_assert!(eval_at_matrix(&chi, &m).is_zero());
        let mu = minimal_polynomial(&m);
        prop_assert!(mu.is_monic());
        prop_assert!(eval_at_matrix(&mu, &m).is_zero());
        prop_assert!(chi.div_rem(&mu).1.is_zero());
    }

    #[test]
    fn kernel_vectors_are_annihilated(m in matrix(5)) {
        let k = kernel_basis(&m);
        prop_assert_eq!(k.len(), m.cols() - rank(&m));
        for v in &k {
            prop_assert!(m.apply(v).iter().all(Zero::is_zero));
        }
    }

    #[test]
    fn vanishing_ideal_vanishes((a, b) in commuting_pair()) {
        let vars = vec!["y1".to_string(), "y2".to_string()];
        let ms = [a, b];
        let ideal = vanishing_ideal(&vars, &ms, None).unwrap();
        for g in ideal.generators() {
            prop_assert!(evaluate_at_tuple(g, &ms).unwrap().is_zero());
        }
        prop_assert!(ideal.quotient_dimension() <= ms[0].rows());
        let back: IdealPresentation = serde_json::from_str(&serde_json::to_string(&ideal).unwrap()).unwrap();
        prop_assert_eq!(back, ideal);
    }

    #[test]
    fn direct_sum_with_itself_keeps_the_image(m in matrix(3)) {
        let line = builtin_target("affine_line").unwrap();
        let opts = AnalysisOptions::default();
        let phi = make_morphism(m.rows(), line, vec![m]).unwrap();
        let doubled = phi.direct_sum(&phi).unwrap();
        prop_assert_eq!(image_ideal(&doubled, &opts).unwrap(), image_ideal(&phi, &opts).unwrap());
    }

    #[test]
    fn morphism_json_round_trips((a, b) in commuting_pair()) {
        let phi = make_morphism(a.rows(), builtin_target("affine_space(2)").unwrap(), vec![a, b]).unwrap();
        let text = serde_json::to_string(&MorphismSpec::from(&phi)).unwrap();
        let spec: MorphismSpec = serde_json::from_str(&text).unwrap();
        prop_assert_eq!(spec.build().unwrap(), phi);
    }

    #[test]
    fn spectral_curve_is_monic_with_trace_term(m in poly_matrix(4, 3)) {
        let pair = SpectralPair::new(m.clone()).unwrap();
        let curve = spectral_curve(&pair);
        let r = pair.rank();
        prop_assert_eq!(curve.degree_in_lambda(), r);
        prop_assert!(curve.coefficients()[r].is_one());
        prop_assert_eq!(curve.coefficients()[r - 1].clone(), -m.trace());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn quantum_operator_annihilates_its_seed(m in poly_matrix(2, 2), seed in prop::collection::vec(small(), 2)) {
        let pair = SpectralPair::new(m).unwrap();
        let seed: Vec<_> = seed.into_iter().take(pair.rank()).map(UniPoly::constant).collect();
        prop_assume!(seed.iter().any(|c| !c.is_zero()));
        let op = quantum_spectral_operator(&pair, &seed, pair.rank()).unwrap();
        let residual = op.relation.apply_to(lambda_connection(&pair), &op.lifted_seed());
        prop_assert!(residual.iter().all(Zero::is_zero));
    }
}
