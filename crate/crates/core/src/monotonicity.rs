//! Numerical operator-monotonicity tests.
//!
//! A function is reported `consistent` when no violation turned up within
//! the search budget. That is evidence, not proof; a `violated` verdict
//! always carries a witness that can be replayed.

use std::f64::consts::{FRAC_PI_4, SQRT_2};

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::constructions::lemma2_decompose;
use crate::error::{Error, Result};
use crate::function::ScalarFunction;
use crate::generate::{
    derive_seed, dominated_pair_with, gen_projection_pair, random_pd_in, rng_from_seed,
    with_random_eigenbasis, SeededRng,
};
use crate::hermitian::{apply_spectral, loewner_compare, sandwich, pd_sqrt_pair, HermitianMatrix, TolerancePolicy};
use crate::inequalities::{anticommutator, characterization_hypothesis_check, hok_check};
use crate::means::MeanRepresentation;

/// Smallest admissible gap between Loewner-matrix points.
pub const MIN_POINT_GAP: f64 = 1e-8;

const PHASE_POINTS: u64 = 1;
const PHASE_PAIRS: u64 = 2;
const PHASE_HYPOTHESIS: u64 = 3;
const PHASE_HOK: u64 = 4;

/// Search budget and sampling range.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MonotoneConfig {
    #[serde(default = "default_t_min")]
    pub t_min: f64,
    #[serde(default = "default_t_max")]
    pub t_max: f64,
    #[serde(default = "default_n_max")]
    pub n_max: usize,
    #[serde(default = "default_dims")]
    pub dims: Vec<usize>,
    #[serde(default = "default_trials")]
    pub trials: usize,
    pub seed: u64,
    /// Relative tolerance for every Loewner comparison.
    #[serde(default = "default_rel_tol")]
    pub rel_tol: f64,
}

fn default_t_min() -> f64 {
    1e-2
}
fn default_t_max() -> f64 {
    1e2
}
fn default_n_max() -> usize {
    8
}
fn default_dims() -> Vec<usize> {
    vec![2, 3, 4]
}
fn default_trials() -> usize {
    10_000
}
fn default_rel_tol() -> f64 {
    1e-8
}

impl MonotoneConfig {
    pub fn new(seed: u64) -> Self {
        Self {
            t_min: default_t_min(),
            t_max: default_t_max(),
            n_max: default_n_max(),
            dims: default_dims(),
            trials: default_trials(),
            seed,
            rel_tol: default_rel_tol(),
        }
    }

    pub fn with_trials(mut self, trials: usize) -> Self {
        self.trials = trials;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.t_min > 0.0 && self.t_max > self.t_min && self.t_max.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "range [{}, {}] must satisfy 0 < t_min < t_max < inf",
                self.t_min, self.t_max
            )));
        }
        if self.n_max < 2 {
            return Err(Error::InvalidParameter(format!("n_max = {} must be >= 2", self.n_max)));
        }
        if self.dims.is_empty() || self.dims.contains(&0) {
            return Err(Error::InvalidParameter(format!(
                "dims {:?} must be a non-empty list of positive sizes",
                self.dims
            )));
        }
        if self.trials == 0 {
            return Err(Error::InvalidParameter("trials must be positive".into()));
        }
        if !(self.rel_tol > 0.0) {
            return Err(Error::InvalidParameter(format!("rel_tol = {} must be positive", self.rel_tol)));
        }
        Ok(())
    }

    fn policy(&self) -> Result<TolerancePolicy> {
        TolerancePolicy::with_rel(self.rel_tol)
    }

    fn trial_rng(&self, phase: u64, index: usize) -> SeededRng {
        rng_from_seed(derive_seed(derive_seed(self.seed, phase), index as u64))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Consistent,
    Violated,
}

/// Replayable evidence against operator monotonicity.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Counterexample {
    /// `A ≤ B` but `f(A) ≰ f(B)`; `min_eig` is the smallest eigenvalue of `f(B) − f(A)`.
    MatrixPair {
        a: HermitianMatrix,
        b: HermitianMatrix,
        min_eig: f64,
        /// Loewner points the pair was derived from, if any.
        #[serde(default, skip_serializing_if = "Option::is_none")]
        points: Option<Vec<f64>>,
    },
    /// Loewner matrix with a negative eigenvalue.
    PointSet { points: Vec<f64>, min_eig: f64 },
    /// `(X, Y)` violating `f(X∇Y) ≤ f(bound(X, Y))`.
    HypothesisPair {
        x: HermitianMatrix,
        y: HermitianMatrix,
        min_eig: f64,
    },
}

impl Counterexample {
    pub fn min_eig(&self) -> f64 {
        match self {
            Self::MatrixPair { min_eig, .. }
            | Self::PointSet { min_eig, .. }
            | Self::HypothesisPair { min_eig, .. } => *min_eig,
        }
    }

    /// Recomputes the witness eigenvalue from the stored data.
    pub fn replay(&self, f: &ScalarFunction) -> Result<f64> {
        match self {
            Self::MatrixPair { a, b, .. } => pair_residual(f, a, b),
            Self::PointSet { points, .. } => Ok(loewner_matrix(f, points)?.min_eigenvalue()),
            Self::HypothesisPair { x, y, .. } => {
                let pol = TolerancePolicy::default();
                Ok(characterization_hypothesis_check(f, x, y, &pol)?.min_residual_eig)
            }
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MonotonicityVerdict {
    pub verdict: Verdict,
    pub function: String,
    pub counterexample: Option<Counterexample>,
    pub trials_run: usize,
    pub config: MonotoneConfig,
}

impl MonotonicityVerdict {
    fn consistent(f: &ScalarFunction, trials_run: usize, cfg: &MonotoneConfig) -> Self {
        Self {
            verdict: Verdict::Consistent,
            function: f.label().to_string(),
            counterexample: None,
            trials_run,
            config: cfg.clone(),
        }
    }

    fn violated(f: &ScalarFunction, cx: Counterexample, trials_run: usize, cfg: &MonotoneConfig) -> Self {
        Self {
            verdict: Verdict::Violated,
            function: f.label().to_string(),
            counterexample: Some(cx),
            trials_run,
            config: cfg.clone(),
        }
    }

    pub fn is_violated(&self) -> bool {
        self.verdict == Verdict::Violated
    }
}

/// Divided-difference matrix `[(f(λᵢ) − f(λⱼ))/(λᵢ − λⱼ)]` with a central
/// finite-difference derivative on the diagonal.
pub fn loewner_matrix(f: &ScalarFunction, points: &[f64]) -> Result<HermitianMatrix> {
    if points.is_empty() {
        return Err(Error::EmptyMatrix);
    }
    for &p in points {
        if !(p > 0.0 && p.is_finite()) {
            return Err(Error::InvalidParameter(format!("point {p} must be positive and finite")));
        }
    }
    let n = points.len();
    for i in 0..n {
        for j in i + 1..n {
            if (points[i] - points[j]).abs() <= MIN_POINT_GAP {
                return Err(Error::InvalidParameter(format!(
                    "points {} and {} are closer than {MIN_POINT_GAP:e}",
                    points[i], points[j]
                )));
            }
        }
    }
    let values = points.iter().map(|&p| f.try_eval(p)).collect::<Result<Vec<_>>>()?;
    let mut rows = vec![0.0; n * n];
    for i in 0..n {
        let l = points[i];
        let h = (1e-6 * l).max(1e-6);
        rows[i * n + i] = (f.try_eval(l + h)? - f.try_eval(l - h)?) / (2.0 * h);
        for j in i + 1..n {
            let d = (values[i] - values[j]) / (points[i] - points[j]);
            rows[i * n + j] = d;
            rows[j * n + i] = d;
        }
    }
    HermitianMatrix::from_parts(n, &rows, None)
}

fn pair_residual(f: &ScalarFunction, a: &HermitianMatrix, b: &HermitianMatrix) -> Result<f64> {
    Ok(apply_spectral(f, b)?.try_sub(&apply_spectral(f, a)?)?.min_eigenvalue())
}

/// `A = diag(points)`, `B = A + εJ` with `J` the all-ones matrix: to first
/// order `f(B) − f(A) = ε·L`, so a non-PSD Loewner matrix `L` yields a pair.
/// Returns the most negative verified pair over a range of `ε`.
fn pair_from_points(
    f: &ScalarFunction,
    points: &[f64],
    pol: &TolerancePolicy,
) -> Result<Option<(HermitianMatrix, HermitianMatrix, f64)>> {
    let n = points.len();
    let a = HermitianMatrix::from_diagonal(points);
    let fa = apply_spectral(f, &a)?;
    let mut best: Option<(HermitianMatrix, HermitianMatrix, f64)> = None;
    for k in 0..=10 {
        let eps = points[n - 1] * 10f64.powi(-k);
        let b = a.try_add(&HermitianMatrix::from_parts(n, &vec![eps; n * n], None)?)?;
        let fb = match apply_spectral(f, &b) {
            Ok(m) => m,
            Err(_) => continue,
        };
        let v = loewner_compare(&fa, &fb, pol)?;
        if !v.is_le() && best.as_ref().is_none_or(|(_, _, m)| v.witness_min_eig_b_minus_a < *m) {
            best = Some((a.clone(), b, v.witness_min_eig_b_minus_a));
        }
    }
    Ok(best)
}

fn random_points(n: usize, cfg: &MonotoneConfig, rng: &mut impl Rng) -> Vec<f64> {
    let (lo, hi) = (cfg.t_min.ln(), cfg.t_max.ln());
    loop {
        let mut pts: Vec<f64> = (0..n).map(|_| rng.random_range(lo..=hi).exp()).collect();
        pts.sort_by(f64::total_cmp);
        if pts.windows(2).all(|w| w[1] - w[0] > MIN_POINT_GAP) {
            return pts;
        }
    }
}

/// Sign-changing functions are outside the theory; checked on a log grid over the range.
fn require_nonnegative(f: &ScalarFunction, cfg: &MonotoneConfig) -> Result<()> {
    const GRID: usize = 257;
    let span = (cfg.t_max / cfg.t_min).ln();
    for k in 0..GRID {
        let t = cfg.t_min * (span * k as f64 / (GRID - 1) as f64).exp();
        let value = f.try_eval(t)?;
        if value < 0.0 {
            return Err(Error::NegativeFunction {
                function: f.label().to_string(),
                at: t,
                value,
            });
        }
    }
    Ok(())
}

/// Loewner-matrix phase, then the matrix-pair phase; stops at the first violation.
pub fn numeric_operator_monotone(f: &ScalarFunction, cfg: &MonotoneConfig) -> Result<MonotonicityVerdict> {
    cfg.validate()?;
    require_nonnegative(f, cfg)?;
    let pol = cfg.policy()?;
    let mut run = 0;

    for i in 0..cfg.trials {
        let mut rng = cfg.trial_rng(PHASE_POINTS, i);
        let n = 2 + i % (cfg.n_max - 1);
        let points = random_points(n, cfg, &mut rng);
        let l = loewner_matrix(f, &points)?;
        let min_eig = l.min_eigenvalue();
        run += 1;
        if min_eig < -pol.effective(&[&l]) {
            let cx = match pair_from_points(f, &points, &pol)? {
                Some((a, b, min_eig)) => Counterexample::MatrixPair {
                    a,
                    b,
                    min_eig,
                    points: Some(points),
                },
                None => Counterexample::PointSet { points, min_eig },
            };
            return Ok(MonotonicityVerdict::violated(f, cx, run, cfg));
        }
    }

    let max_factor = 4f64.min(cfg.t_max / cfg.t_min);
    for i in 0..cfg.trials {
        let mut rng = cfg.trial_rng(PHASE_PAIRS, i);
        let dim = cfg.dims[i % cfg.dims.len()];
        let factor = rng.random_range(0.0..=max_factor.ln()).exp().max(1.0 + 1e-9);
        let (a, b) = dominated_pair_with(dim, &mut rng, cfg.t_min, cfg.t_max / factor, factor)?;
        let fa = apply_spectral(f, &a)?;
        let fb = apply_spectral(f, &b)?;
        let v = loewner_compare(&fa, &fb, &pol)?;
        run += 1;
        if !v.is_le() {
            return Ok(MonotonicityVerdict::violated(
                f,
                Counterexample::MatrixPair {
                    a,
                    b,
                    min_eig: v.witness_min_eig_b_minus_a,
                    points: None,
                },
                run,
                cfg,
            ));
        }
    }
    Ok(MonotonicityVerdict::consistent(f, run, cfg))
}

/// Spectral window `[c/10, 10c]` inside `[lo, hi]` with a log-uniform centre.
fn narrow_window(lo: f64, hi: f64, rng: &mut impl Rng) -> (f64, f64) {
    let c = rng.random_range(lo.ln()..=hi.ln()).exp();
    ((c / 10.0).max(lo), (c * 10.0).min(hi))
}

fn hypothesis_pair(
    trial: usize,
    dim: usize,
    cfg: &MonotoneConfig,
    rng: &mut impl Rng,
) -> Result<(HermitianMatrix, HermitianMatrix)> {
    if trial.is_multiple_of(2) {
        let (lo, hi) = narrow_window(cfg.t_min, cfg.t_max, rng);
        let x = random_pd_in(dim, lo, hi, rng)?;
        let y = random_pd_in(dim, lo, hi, rng)?;
        return Ok((x, y));
    }
    // pairs that realize a dominated A ≤ B ≤ √2·A through the decomposition
    let (lo, hi) = narrow_window(cfg.t_min, cfg.t_max / SQRT_2, rng);
    let a = random_pd_in(dim, lo, hi, rng)?;
    let c: Vec<f64> = (0..dim).map(|_| rng.random_range(1.01..=SQRT_2 - 0.01)).collect();
    let middle = with_random_eigenbasis(&c, rng);
    let (half, _) = pd_sqrt_pair(&a)?;
    let b = sandwich(&half, &middle)?;
    let d = lemma2_decompose(&a, &b)?;
    Ok((d.x, d.y))
}

fn hypothesis_search(f: &ScalarFunction, cfg: &MonotoneConfig) -> Result<MonotonicityVerdict> {
    cfg.validate()?;
    require_nonnegative(f, cfg)?;
    let pol = cfg.policy()?;
    for i in 0..cfg.trials {
        let mut rng = cfg.trial_rng(PHASE_HYPOTHESIS, i);
        let dim = cfg.dims[i % cfg.dims.len()];
        let (x, y) = hypothesis_pair(i, dim, cfg, &mut rng)?;
        let r = characterization_hypothesis_check(f, &x, &y, &pol)?;
        if !r.holds {
            return Ok(MonotonicityVerdict::violated(
                f,
                Counterexample::HypothesisPair {
                    x,
                    y,
                    min_eig: r.min_residual_eig,
                },
                i + 1,
                cfg,
            ));
        }
    }
    Ok(MonotonicityVerdict::consistent(f, cfg.trials, cfg))
}

/// Hypothesis-based verdict next to the direct numerical one.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CharacterizationReport {
    pub hypothesis: MonotonicityVerdict,
    pub numeric: MonotonicityVerdict,
    pub agree: bool,
}

/// Tests `f(X∇Y) ≤ f(X♯Y + ½X^{1/2}|I − X^{-1/2}YX^{-1/2}|X^{1/2})` on
/// random pairs and on pairs produced by the dominated-pair decomposition,
/// then compares with [`numeric_operator_monotone`].
pub fn characterize_via_hypothesis(f: &ScalarFunction, cfg: &MonotoneConfig) -> Result<CharacterizationReport> {
    let hypothesis = hypothesis_search(f, cfg)?;
    let numeric = numeric_operator_monotone(f, cfg)?;
    let agree = hypothesis.verdict == numeric.verdict;
    Ok(CharacterizationReport {
        hypothesis,
        numeric,
        agree,
    })
}

/// Best candidate found by [`counterexample_search_hok`].
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct HokWitness {
    pub a: HermitianMatrix,
    pub b: HermitianMatrix,
    /// Grid parameters for the regularized projection pairs.
    pub theta: Option<f64>,
    pub eps: Option<f64>,
    pub min_residual_eig: f64,
    pub tol_used: f64,
    /// Smallest eigenvalue of `AB + BA`.
    pub condition_min_eig: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct HokSearch {
    pub mean: String,
    pub found: bool,
    pub best: Option<HokWitness>,
    pub trials_run: usize,
}

/// Grid size of the projection sweep.
const HOK_THETA_STEPS: usize = 64;
const HOK_EPS_STEPS: usize = 9;

/// Searches for pairs violating `A∇B − AσB ≤ ½|A − B|`: regularized
/// projections `(P + εI, Q(θ) + εI)` on a grid, then random positive
/// definite pairs whose anticommutator is indefinite.
pub fn counterexample_search_hok(rep: &MeanRepresentation, cfg: &MonotoneConfig) -> Result<HokSearch> {
    rep.validate()?;
    cfg.validate()?;
    let pol = cfg.policy()?;
    let mut best: Option<HokWitness> = None;
    let mut run = 0;
    let mut consider = |w: HokWitness| {
        if best.as_ref().is_none_or(|b| w.min_residual_eig < b.min_residual_eig) {
            best = Some(w);
        }
    };

    for ti in 1..=HOK_THETA_STEPS {
        let theta = FRAC_PI_4 * ti as f64 / HOK_THETA_STEPS as f64;
        let (p, q) = gen_projection_pair(theta)?;
        for ei in 0..HOK_EPS_STEPS {
            let eps = 10f64.powf(-6.0 + 4.0 * ei as f64 / (HOK_EPS_STEPS - 1) as f64);
            let shift = HermitianMatrix::identity(2).scale(eps);
            let a = p.try_add(&shift)?;
            let b = q.try_add(&shift)?;
            let r = hok_check(rep, &a, &b, &pol)?;
            run += 1;
            consider(HokWitness {
                a,
                b,
                theta: Some(theta),
                eps: Some(eps),
                min_residual_eig: r.report.min_residual_eig,
                tol_used: r.report.tol_used,
                condition_min_eig: r.condition_min_eig,
            });
        }
    }

    for i in 0..cfg.trials {
        let mut rng = cfg.trial_rng(PHASE_HOK, i);
        let dim = cfg.dims[i % cfg.dims.len()];
        let a = random_pd_in(dim, 1e-3, 1.0, &mut rng)?;
        let b = random_pd_in(dim, 1e-3, 1.0, &mut rng)?;
        if anticommutator(&a, &b)?.min_eigenvalue() >= 0.0 {
            continue;
        }
        let r = hok_check(rep, &a, &b, &pol)?;
        run += 1;
        consider(HokWitness {
            a,
            b,
            theta: None,
            eps: None,
            min_residual_eig: r.report.min_residual_eig,
            tol_used: r.report.tol_used,
            condition_min_eig: r.condition_min_eig,
        });
    }

    let found = best.as_ref().is_some_and(|w| w.min_residual_eig < -w.tol_used);
    Ok(HokSearch {
        mean: rep.name(),
        found,
        best,
        trials_run: run,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn quick(seed: u64) -> MonotoneConfig {
        MonotoneConfig::new(seed).with_trials(300)
    }

    #[test]
    fn loewner_matrix_examples() {
        let l = loewner_matrix(&ScalarFunction::identity(), &[0.5, 2.0, 7.0]).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                assert!((l.entry(i, j).re - 1.0).abs() < 1e-9);
            }
        }
        let l = loewner_matrix(&ScalarFunction::sqrt(), &[1.0, 4.0]).unwrap();
        assert!((l.entry(0, 0).re - 0.5).abs() < 1e-9);
        assert!((l.entry(1, 1).re - 0.25).abs() < 1e-9);
        assert!((l.entry(0, 1).re - 1.0 / 3.0).abs() < 1e-15);
        assert!(l.min_eigenvalue() > 0.0);

        let l = loewner_matrix(&ScalarFunction::square(), &[1.0, 4.0]).unwrap();
        assert!((l.entry(0, 0).re - 2.0).abs() < 1e-8);
        assert!((l.entry(1, 1).re - 8.0).abs() < 1e-8);
        assert!((l.entry(0, 1).re - 5.0).abs() < 1e-15);
        assert!(l.min_eigenvalue() < 0.0);

        assert!(loewner_matrix(&ScalarFunction::sqrt(), &[1.0, 1.0 + 1e-9]).is_err());
        assert!(loewner_matrix(&ScalarFunction::sqrt(), &[-1.0, 1.0]).is_err());
    }

    #[test]
    fn fixed_square_witness_replays() {
        let a = HermitianMatrix::from_real_rows(&[&[1.0, 1.0], &[1.0, 1.0]]).unwrap();
        let b = HermitianMatrix::from_real_rows(&[&[2.0, 1.0], &[1.0, 1.0]]).unwrap();
        let cx = Counterexample::MatrixPair { a, b, min_eig: 0.0, points: None };
        // B² − A² = [[3, 1], [1, 0]]
        let oracle = 1.5 - (1.5f64 * 1.5 + 1.0).sqrt();
        assert!((cx.replay(&ScalarFunction::square()).unwrap() - oracle).abs() < 1e-12);
    }

    #[test]
    fn verdicts_for_classic_functions() {
        let cfg = quick(5);
        for f in [ScalarFunction::sqrt(), ScalarFunction::logmean(), ScalarFunction::constant(1.0)] {
            let v = numeric_operator_monotone(&f, &cfg).unwrap();
            assert_eq!(v.verdict, Verdict::Consistent, "{}", f.label());
            assert!(v.counterexample.is_none());
            assert_eq!(v.trials_run, 600);
        }
        for f in [ScalarFunction::square(), ScalarFunction::cube(), ScalarFunction::exp()] {
            let v = numeric_operator_monotone(&f, &cfg).unwrap();
            assert!(v.is_violated(), "{}", f.label());
            let cx = v.counterexample.unwrap();
            assert_eq!(cx.replay(&f).unwrap(), cx.min_eig());
            assert!(matches!(cx, Counterexample::MatrixPair { points: Some(_), .. }), "{}", f.label());
        }
    }

    #[test]
    fn sign_changing_functions_are_rejected() {
        let cfg = quick(2);
        let ln = ScalarFunction::from_fn("ln", f64::ln);
        assert!(matches!(
            numeric_operator_monotone(&ln, &cfg),
            Err(Error::NegativeFunction { .. })
        ));
        assert!(matches!(
            characterize_via_hypothesis(&ln, &cfg),
            Err(Error::NegativeFunction { .. })
        ));
        let shifted = MonotoneConfig { t_min: 1.0, ..cfg };
        assert!(numeric_operator_monotone(&ln, &shifted).is_ok());
    }

    #[test]
    fn same_function_same_verdict() {
        let cfg = quick(1);
        let a = numeric_operator_monotone(&ScalarFunction::sqrt(), &cfg).unwrap();
        let b = numeric_operator_monotone(&ScalarFunction::power(0.5).unwrap(), &cfg).unwrap();
        assert_eq!(a.verdict, b.verdict);
        assert_eq!(a.trials_run, b.trials_run);
    }

    #[test]
    fn hypothesis_agrees_with_numeric() {
        let cfg = quick(9);
        for f in [ScalarFunction::sqrt(), ScalarFunction::constant(1.0), ScalarFunction::square()] {
            let r = characterize_via_hypothesis(&f, &cfg).unwrap();
            assert!(r.agree, "{}", f.label());
            if let Some(cx) = &r.hypothesis.counterexample {
                assert!(cx.replay(&f).unwrap() < 0.0);
            }
        }
    }

    #[test]
    fn hok_search_outcomes() {
        let cfg = quick(3);
        let s = counterexample_search_hok(&MeanRepresentation::Arithmetic, &cfg).unwrap();
        assert!(!s.found);
        let s = counterexample_search_hok(&MeanRepresentation::discrete(1.0, vec![]).unwrap(), &cfg).unwrap();
        assert!(!s.found);
        let s = counterexample_search_hok(&MeanRepresentation::Geometric, &cfg).unwrap();
        assert!(s.found);
        let w = s.best.unwrap();
        assert!(w.theta.is_some());
        assert!(w.condition_min_eig < 0.0);
    }

    #[test]
    fn config_json_defaults() {
        let cfg: MonotoneConfig = serde_json::from_str(r#"{"seed": 4}"#).unwrap();
        assert_eq!(cfg, MonotoneConfig::new(4));
        let cfg: MonotoneConfig = serde_json::from_str(
            r#"{"t_min":1e-2,"t_max":1e2,"n_max":8,"dims":[2,3,4],"trials":10000,"seed":7}"#,
        )
        .unwrap();
        assert_eq!(cfg.trials, 10_000);
        assert!(serde_json::from_str::<MonotoneConfig>(r#"{"trials": 3}"#).is_err());
        let mut bad = MonotoneConfig::new(0);
        bad.t_min = 0.0;
        assert!(bad.validate().is_err());
    }
}
