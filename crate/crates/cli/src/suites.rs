use std::f64::consts::SQRT_2;

use anyhow::Result;
use loewner_core::constructions::{lemma1_decompose, lemma2_decompose, matrix_chain, scalar_decompose};
use loewner_core::generate::{
    derive_seed, dominated_pair_with, random_invertible, random_pd_in, rng_from_seed,
    with_random_eigenbasis, SeededRng,
};
use loewner_core::hermitian::{congruence, loewner_compare};
use loewner_core::inequalities::{hiai_ando_check, hok_check, reverse_cauchy_residual, InequalityReport};
use loewner_core::{HermitianMatrix, MeanRepresentation, ScalarFunction, TolerancePolicy};
use rand::Rng;
use serde_json::json;

use crate::report::{CheckRecord, SuiteReport};

pub struct SuiteParams {
    pub dims: Vec<usize>,
    pub trials: usize,
    pub seed: u64,
    pub tol: f64,
    pub function: ScalarFunction,
    pub mean: Option<MeanRepresentation>,
}

impl SuiteParams {
    fn policy(&self) -> Result<TolerancePolicy> {
        Ok(TolerancePolicy::with_rel(self.tol)?)
    }

    /// Every `(dim, trial)` combination with its own seed.
    fn cases(&self) -> impl Iterator<Item = (usize, usize, u64)> + '_ {
        self.dims.iter().flat_map(move |&dim| {
            (0..self.trials).map(move |t| {
                let index = dim * 1_000_000 + t;
                (index, dim, derive_seed(self.seed, index as u64))
            })
        })
    }
}

/// Two independent positive definite matrices with condition numbers up to `1e3`.
pub fn pd_pair(dim: usize, seed: u64) -> Result<(HermitianMatrix, HermitianMatrix)> {
    let mut rng = rng_from_seed(seed);
    let a = spread_pd(dim, &mut rng)?;
    let b = spread_pd(dim, &mut rng)?;
    Ok((a, b))
}

fn spread_pd(dim: usize, rng: &mut SeededRng) -> Result<HermitianMatrix> {
    let lo = 10f64.powf(rng.random_range(-1.0..=1.0));
    let cond = 10f64.powf(rng.random_range(0.0..=3.0));
    Ok(random_pd_in(dim, lo, lo * cond, rng)?)
}

fn inequality_record(check: &str, index: usize, seed: u64, r: &InequalityReport) -> CheckRecord {
    CheckRecord {
        check: check.to_string(),
        index,
        seed,
        dim: r.dim(),
        holds: r.holds,
        expected: true,
        min_residual_eig: r.min_residual_eig,
        tol: r.tol_used,
        detail: None,
    }
}

fn pair_witness(a: &HermitianMatrix, b: &HermitianMatrix, seed: u64) -> serde_json::Value {
    json!({ "seed": seed, "A": a, "B": b })
}

pub fn reverse_cauchy(p: &SuiteParams) -> Result<SuiteReport> {
    let pol = p.policy()?;
    let mut report = new_report("reverse-cauchy", p, true);
    for (index, dim, seed) in p.cases() {
        let (a, b) = pd_pair(dim, seed)?;
        let r = reverse_cauchy_residual(&p.function, &a, &b, &pol)?;
        report.push(inequality_record("reverse_cauchy", index, seed, &r), || {
            pair_witness(&a, &b, seed)
        });
    }
    Ok(report)
}

pub fn hiai_ando(p: &SuiteParams) -> Result<SuiteReport> {
    let pol = p.policy()?;
    let mut report = new_report("hiai-ando", p, true);
    for (index, dim, seed) in p.cases() {
        let (a, b) = pd_pair(dim, seed)?;
        let r = hiai_ando_check(&p.function, &a, &b, &pol)?;
        report.push(inequality_record("hiai_ando", index, seed, &r), || {
            pair_witness(&a, &b, seed)
        });
    }
    Ok(report)
}

/// Pairs close to commuting, where `AB + BA ≥ 0` usually holds, alternating
/// with unrelated pairs. Only pairs meeting the condition are expected to pass.
pub fn hok(p: &SuiteParams) -> Result<SuiteReport> {
    let pol = p.policy()?;
    let rep = p
        .mean
        .clone()
        .unwrap_or_else(|| MeanRepresentation::FInduced(p.function.clone()));
    let mut report = new_report("hok", p, matches!(rep, MeanRepresentation::FInduced(_)));
    report.function = Some(rep.name());
    for (index, dim, seed) in p.cases() {
        let mut rng = rng_from_seed(seed);
        let (a, b) = if index % 2 == 0 {
            let values: Vec<f64> = (0..dim).map(|_| rng.random_range(1.0..=10.0)).collect();
            let shared = with_random_eigenbasis(&values, &mut rng);
            let other: Vec<f64> = (0..dim).map(|_| rng.random_range(1.0..=10.0)).collect();
            let spec = loewner_core::hermitian::spectral_decompose(&shared)?;
            let b0 = spec.reassemble(&other);
            let noise: Vec<f64> = (0..dim).map(|_| rng.random_range(-0.05..=0.05)).collect();
            (shared, b0.try_add(&with_random_eigenbasis(&noise, &mut rng))?)
        } else {
            pd_pair(dim, seed)?
        };
        let r = hok_check(&rep, &a, &b, &pol)?;
        let mut rec = inequality_record("hok", index, seed, &r.report);
        rec.expected = r.condition_holds;
        rec.detail = Some(json!({
            "condition_holds": r.condition_holds,
            "condition_min_eig": r.condition_min_eig,
        }));
        report.push(rec, || pair_witness(&a, &b, seed));
    }
    Ok(report)
}

fn means_under_test(p: &SuiteParams, rng: &mut SeededRng) -> Vec<MeanRepresentation> {
    let mut v = vec![
        MeanRepresentation::Arithmetic,
        MeanRepresentation::Geometric,
        MeanRepresentation::Harmonic,
        MeanRepresentation::FInduced(p.function.clone()),
        MeanRepresentation::random_discrete(rng, 3),
    ];
    if let Some(m) = &p.mean {
        v.push(m.clone());
    }
    v
}

/// Axiom (i) monotonicity, axiom (ii) transformer inequality, and `IσI = I`.
pub fn means_axioms(p: &SuiteParams) -> Result<SuiteReport> {
    let pol = p.policy()?;
    let mut report = new_report("means-axioms", p, true);
    for (index, dim, seed) in p.cases() {
        let mut rng = rng_from_seed(seed);
        let (a, c) = dominated_pair_with(dim, &mut rng, 1.0, 100.0, 2.0)?;
        let (b, d) = dominated_pair_with(dim, &mut rng, 1.0, 100.0, 2.0)?;
        let t = random_invertible(dim, 3.0, &mut rng);
        for rep in means_under_test(p, &mut rng) {
            let name = rep.name();
            let lo = rep.apply(&a, &b)?;
            let hi = rep.apply(&c, &d)?;
            let v = loewner_compare(&lo, &hi, &pol)?;
            report.push(
                CheckRecord {
                    check: format!("monotonicity:{name}"),
                    index,
                    seed,
                    dim,
                    holds: v.is_le(),
                    expected: true,
                    min_residual_eig: v.witness_min_eig_b_minus_a,
                    tol: v.tol_used,
                    detail: None,
                },
                || json!({ "seed": seed, "mean": rep, "A": a, "B": b, "C": c, "D": d }),
            );

            let lhs = congruence(&t, &rep.apply(&a, &b)?)?;
            let rhs = rep.apply(&congruence(&t, &a)?, &congruence(&t, &b)?)?;
            let v = loewner_compare(&lhs, &rhs, &pol)?;
            report.push(
                CheckRecord {
                    check: format!("transformer:{name}"),
                    index,
                    seed,
                    dim,
                    holds: v.is_le(),
                    expected: true,
                    min_residual_eig: v.witness_min_eig_b_minus_a,
                    tol: v.tol_used,
                    detail: Some(json!({ "max_abs_diff": lhs.max_abs_diff(&rhs) })),
                },
                || json!({ "seed": seed, "mean": rep, "A": a, "B": b }),
            );

            if let MeanRepresentation::Discrete { .. } = rep {
                let id = HermitianMatrix::identity(dim);
                let err = rep.apply(&id, &id)?.max_abs_diff(&id);
                report.push(
                    CheckRecord {
                        check: "normalization:discrete".into(),
                        index,
                        seed,
                        dim,
                        holds: err <= 1e-10,
                        expected: true,
                        min_residual_eig: -err,
                        tol: 1e-10,
                        detail: None,
                    },
                    || json!({ "seed": seed, "mean": rep }),
                );
            }
        }
    }
    Ok(report)
}

/// Round trips of the scalar split, both matrix decompositions and the chain.
pub fn constructions(p: &SuiteParams) -> Result<SuiteReport> {
    let pol = p.policy()?;
    let mut report = new_report("constructions", p, true);
    for (index, dim, seed) in p.cases() {
        let mut rng = rng_from_seed(seed);

        let a = 10f64.powf(rng.random_range(-2.0..=2.0));
        let b = a * rng.random_range(1.0..=SQRT_2);
        let (x, y) = scalar_decompose(a, b)?;
        let err = ((x * y).sqrt() + 0.5 * (y - x) - b).abs().max((0.5 * (x + y) - a).abs());
        let tol = 1e-12 * b;
        report.push(
            CheckRecord {
                check: "scalar".into(),
                index,
                seed,
                dim: 1,
                holds: err <= tol,
                expected: true,
                min_residual_eig: -err,
                tol,
                detail: Some(json!({ "a": a, "b": b, "x": x, "y": y })),
            },
            || json!({ "seed": seed, "a": a, "b": b }),
        );

        let values: Vec<f64> = (0..dim).map(|_| rng.random_range(1.0..=SQRT_2)).collect();
        let m = with_random_eigenbasis(&values, &mut rng);
        let d = lemma1_decompose(&m)?;
        push_decomposition(&mut report, "lemma1", index, seed, dim, &d, || json!({ "seed": seed, "A": m }));

        let (a, b) = dominated_pair_with(dim, &mut rng, 1.0, 100.0, SQRT_2)?;
        let d = lemma2_decompose(&a, &b)?;
        push_decomposition(&mut report, "lemma2", index, seed, dim, &d, || pair_witness(&a, &b, seed));

        let factor = rng.random_range(1.5..=8.0);
        let (a, b) = dominated_pair_with(dim, &mut rng, 1.0, 100.0, factor)?;
        let chain = matrix_chain(&a, &b)?;
        let ok = chain.invariants_hold && chain.verify(&pol)?;
        report.push(
            CheckRecord {
                check: "chain".into(),
                index,
                seed,
                dim,
                holds: ok,
                expected: true,
                min_residual_eig: 0.0,
                tol: p.tol,
                detail: Some(json!({ "k": chain.k, "lambda_max": chain.lambda_max })),
            },
            || pair_witness(&a, &b, seed),
        );
    }
    Ok(report)
}

/// Relative bounds for the decomposition round trips.
pub const MEAN_REL_BOUND: f64 = 1e-10;
pub const RECONSTRUCTION_REL_BOUND: f64 = 1e-7;

fn push_decomposition(
    report: &mut SuiteReport,
    check: &str,
    index: usize,
    seed: u64,
    dim: usize,
    d: &loewner_core::constructions::DecompositionResult,
    witness: impl FnOnce() -> serde_json::Value,
) {
    let holds = d.mean_residual_rel <= MEAN_REL_BOUND
        && d.reconstruction_residual_rel <= RECONSTRUCTION_REL_BOUND;
    report.push(
        CheckRecord {
            check: check.into(),
            index,
            seed,
            dim,
            holds,
            expected: true,
            min_residual_eig: -d.reconstruction_residual_rel,
            tol: RECONSTRUCTION_REL_BOUND,
            detail: Some(json!({
                "mean_residual_rel": d.mean_residual_rel,
                "reconstruction_residual_rel": d.reconstruction_residual_rel,
            })),
        },
        witness,
    );
}

fn new_report(suite: &str, p: &SuiteParams, with_function: bool) -> SuiteReport {
    let function = with_function.then(|| p.function.label().to_string());
    SuiteReport::new(suite, p.seed, function, &p.dims, p.trials, p.tol)
}
