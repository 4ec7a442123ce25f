use loewner_core::generate::{random_pd_in, rng_from_seed};
use loewner_core::inequalities::{
    characterization_hypothesis_check, hiai_ando_check, obstruction_entry_threshold,
    projection_obstruction, reverse_cauchy_bound, reverse_cauchy_residual, scalar_min_bound,
};
use loewner_core::{HermitianMatrix, ScalarFunction, TolerancePolicy};
use proptest::prelude::*;

fn pd_pair(dim: usize, seed: u64) -> (HermitianMatrix, HermitianMatrix) {
    let mut rng = rng_from_seed(seed);
    let a = random_pd_in(dim, 0.1, 50.0, &mut rng).unwrap();
    let b = random_pd_in(dim, 0.1, 50.0, &mut rng).unwrap();
    (a, b)
}

fn monotone() -> Vec<ScalarFunction> {
    ScalarFunction::registry()
        .into_iter()
        .filter(|f| f.claims_operator_monotone())
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn reverse_cauchy_and_hiai_ando_hold_together(dim in 2usize..=6, seed in any::<u64>()) {
        let (a, b) = pd_pair(dim, seed);
        let pol = TolerancePolicy::with_rel(1e-8).unwrap();
        for f in monotone() {
            prop_assert!(reverse_cauchy_residual(&f, &a, &b, &pol).unwrap().holds, "{}", f.label());
            prop_assert!(hiai_ando_check(&f, &a, &b, &pol).unwrap().holds, "{}", f.label());
            prop_assert!(characterization_hypothesis_check(&f, &a, &b, &pol).unwrap().holds, "{}", f.label());
        }
    }

    #[test]
    fn bound_is_symmetric(dim in 1usize..=5, seed in any::<u64>()) {
        let (a, b) = pd_pair(dim, seed);
        let ab = reverse_cauchy_bound(&a, &b).unwrap();
        let ba = reverse_cauchy_bound(&b, &a).unwrap();
        prop_assert!(ab.max_abs_diff(&ba) <= 1e-9 * ab.spectral_norm());
    }

    #[test]
    fn verdicts_survive_scaling(dim in 2usize..=4, seed in any::<u64>(), log_c in -3.0f64..3.0) {
        let (a, b) = pd_pair(dim, seed);
        let c = 10f64.powf(log_c);
        let pol = TolerancePolicy::with_rel(1e-8).unwrap();
        for f in [ScalarFunction::sqrt(), ScalarFunction::square(), ScalarFunction::power(0.3).unwrap()] {
            let r = reverse_cauchy_residual(&f, &a, &b, &pol).unwrap();
            let s = reverse_cauchy_residual(&f, &a.scale(c), &b.scale(c), &pol).unwrap();
            // skip borderline cases where the witness sits on the tolerance
            if r.min_residual_eig.abs() > 10.0 * r.tol_used {
                prop_assert_eq!(r.holds, s.holds, "{}", f.label());
            }
        }
    }

    #[test]
    fn scalar_bound_for_monotone_generators(log_t in -8.0f64..8.0) {
        let t = 10f64.powf(log_t);
        for f in monotone() {
            prop_assert!(scalar_min_bound(&f, t), "{} at {t}", f.label());
        }
    }

    #[test]
    fn obstruction_fails_below_the_entry_threshold(alpha in 0.0f64..0.999, frac in 0.01f64..0.99) {
        let theta = obstruction_entry_threshold(alpha).unwrap() * frac;
        let r = projection_obstruction(alpha, theta).unwrap();
        prop_assert!(r.entry_fails);
        prop_assert!(!r.holds);
        prop_assert!((r.abs_diff_11 - theta.sin()).abs() < 1e-12);
    }

    #[test]
    fn obstruction_threshold_decreases(a1 in 0.0f64..0.99, gap in 0.001f64..0.5) {
        let a2 = (a1 + gap).min(1.0);
        prop_assert!(obstruction_entry_threshold(a2).unwrap() < obstruction_entry_threshold(a1).unwrap());
    }
}
