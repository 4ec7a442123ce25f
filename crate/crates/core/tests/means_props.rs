use loewner_core::generate::{random_pd_in, rng_from_seed};
use loewner_core::hermitian::loewner_compare;
use loewner_core::means::{arithmetic_mean, f_mean, geometric_mean, harmonic_mean};
use loewner_core::{HermitianMatrix, MeanRepresentation, ScalarFunction, TolerancePolicy};
use proptest::prelude::*;

fn pd_pair(dim: usize, seed: u64) -> (HermitianMatrix, HermitianMatrix) {
    let mut rng = rng_from_seed(seed);
    let a = random_pd_in(dim, 0.05, 20.0, &mut rng).unwrap();
    let b = random_pd_in(dim, 0.05, 20.0, &mut rng).unwrap();
    (a, b)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn harmonic_below_geometric_below_arithmetic(dim in 2usize..=6, seed in any::<u64>()) {
        let (a, b) = pd_pair(dim, seed);
        let pol = TolerancePolicy::default();
        let (h, g, m) = (
            harmonic_mean(&a, &b).unwrap(),
            geometric_mean(&a, &b).unwrap(),
            arithmetic_mean(&a, &b).unwrap(),
        );
        prop_assert!(loewner_compare(&h, &g, &pol).unwrap().is_le());
        prop_assert!(loewner_compare(&g, &m, &pol).unwrap().is_le());
    }

    #[test]
    fn geometric_mean_is_symmetric(dim in 1usize..=5, seed in any::<u64>()) {
        let (a, b) = pd_pair(dim, seed);
        let ab = geometric_mean(&a, &b).unwrap();
        let ba = geometric_mean(&b, &a).unwrap();
        prop_assert!(ab.max_abs_diff(&ba) <= 1e-8 * ab.spectral_norm());
    }

    #[test]
    fn f_mean_coincidences(dim in 1usize..=5, seed in any::<u64>()) {
        let (a, b) = pd_pair(dim, seed);
        let scale = a.spectral_norm().max(b.spectral_norm());
        let cases = [
            (ScalarFunction::sqrt(), geometric_mean(&a, &b).unwrap()),
            (ScalarFunction::arithmetic(), arithmetic_mean(&a, &b).unwrap()),
            (ScalarFunction::harmonic(), harmonic_mean(&a, &b).unwrap()),
        ];
        for (f, expected) in cases {
            let got = f_mean(&f, &a, &b).unwrap();
            prop_assert!(got.max_abs_diff(&expected) <= 1e-9 * scale, "{}", f.label());
        }
    }

    #[test]
    fn means_are_idempotent(dim in 1usize..=5, seed in any::<u64>()) {
        let (a, _) = pd_pair(dim, seed);
        let mut rng = rng_from_seed(seed);
        for rep in [
            MeanRepresentation::Arithmetic,
            MeanRepresentation::Geometric,
            MeanRepresentation::Harmonic,
            MeanRepresentation::FInduced(ScalarFunction::logmean()),
            MeanRepresentation::random_discrete(&mut rng, 3),
        ] {
            let m = rep.apply(&a, &a).unwrap();
            prop_assert!(m.max_abs_diff(&a) <= 1e-9 * a.spectral_norm(), "{}", rep.name());
        }
    }

    #[test]
    fn discrete_mean_is_normalized_and_symmetric(dim in 1usize..=4, seed in any::<u64>()) {
        let rep = MeanRepresentation::random_discrete(&mut rng_from_seed(seed), 4);
        let id = HermitianMatrix::identity(dim);
        prop_assert!(rep.apply(&id, &id).unwrap().max_abs_diff(&id) <= 1e-10);
        let (a, b) = pd_pair(dim, seed ^ 7);
        let ab = rep.apply(&a, &b).unwrap();
        let ba = rep.apply(&b, &a).unwrap();
        prop_assert!(ab.max_abs_diff(&ba) <= 1e-10 * ab.spectral_norm());
    }

    #[test]
    fn representation_json_round_trip(seed in any::<u64>()) {
        let rep = MeanRepresentation::random_discrete(&mut rng_from_seed(seed), 4);
        let text = serde_json::to_string(&rep).unwrap();
        let back: MeanRepresentation = serde_json::from_str(&text).unwrap();
        prop_assert_eq!(serde_json::to_string(&back).unwrap(), text);
    }
}
