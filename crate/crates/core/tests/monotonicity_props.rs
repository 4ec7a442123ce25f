use loewner_core::generate::rng_from_seed;
use loewner_core::monotonicity::loewner_matrix;
use loewner_core::{ScalarFunction, TolerancePolicy};
use proptest::prelude::*;
use rand::Rng;

fn points(n: usize, seed: u64) -> Vec<f64> {
    let mut rng = rng_from_seed(seed);
    let mut p: Vec<f64> = (0..n).map(|_| 10f64.powf(rng.random_range(-2.0..=2.0))).collect();
    p.sort_by(f64::total_cmp);
    p.dedup_by(|a, b| (*a - *b).abs() <= 1e-6);
    p
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn loewner_matrix_psd_for_monotone_builtins(n in 2usize..=8, seed in any::<u64>()) {
        let pts = points(n, seed);
        let pol = TolerancePolicy::with_rel(1e-8).unwrap();
        for f in ScalarFunction::registry().into_iter().filter(|f| f.claims_operator_monotone()) {
            let l = loewner_matrix(&f, &pts).unwrap();
            prop_assert!(l.min_eigenvalue() >= -pol.effective(&[&l]), "{} on {:?}", f.label(), pts);
        }
    }

    #[test]
    fn finite_difference_diagonal_matches_derivative(log_t in -2.0f64..2.0) {
        let t = 10f64.powf(log_t);
        for f in ScalarFunction::registry() {
            let l = loewner_matrix(&f, &[t]).unwrap();
            let exact = f.derivative(t).unwrap();
            let fd = l.entry(0, 0).re;
            prop_assert!((fd - exact).abs() <= 1e-5 * exact.abs().max(1e-300) + 1e-12, "{} at {t}: {fd} vs {exact}", f.label());
        }
    }
}
