//! Checkers for the reverse Cauchy inequality and its relatives.
//!
//! Every checker returns an [`InequalityReport`] whose residual is
//! `RHS − LHS`; the inequality holds when the smallest residual eigenvalue
//! is at least `−tol`, with `tol` scaled by the operands' spectral norms.

use std::f64::consts::FRAC_PI_2;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::function::ScalarFunction;
use crate::generate::gen_projection_pair;
use crate::hermitian::{
    apply_to_spectrum, loewner_compare, matrix_abs, pd_sqrt_pair, sandwich, spectral_decompose,
    symmetrize, HermitianMatrix, SpectralData, TolerancePolicy,
};
use crate::means::{arithmetic_mean, f_mean, geometric_mean, MeanRepresentation};

/// Outcome of one inequality evaluation.
#[derive(Debug, Clone)]
pub struct InequalityReport {
    pub holds: bool,
    /// `RHS − LHS`.
    pub residual: HermitianMatrix,
    pub min_residual_eig: f64,
    pub tol_used: f64,
    pub seed: Option<u64>,
    pub function: Option<String>,
}

impl InequalityReport {
    fn new(
        residual: HermitianMatrix,
        operands: &[&HermitianMatrix],
        pol: &TolerancePolicy,
        function: Option<String>,
    ) -> Self {
        let tol = pol.effective(operands);
        let min = residual.min_eigenvalue();
        Self {
            holds: min >= -tol,
            residual,
            min_residual_eig: min,
            tol_used: tol,
            seed: None,
            function,
        }
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = Some(seed);
        self
    }

    pub fn dim(&self) -> usize {
        self.residual.dim()
    }

    pub fn to_json(&self) -> InequalityReportJson {
        InequalityReportJson {
            holds: self.holds,
            min_residual_eig: self.min_residual_eig,
            tol: self.tol_used,
            seed: self.seed,
            dim: self.dim(),
            function: self.function.clone(),
        }
    }
}

/// Wire format of an [`InequalityReport`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InequalityReportJson {
    pub holds: bool,
    pub min_residual_eig: f64,
    pub tol: f64,
    pub seed: Option<u64>,
    pub dim: usize,
    pub function: Option<String>,
}

impl Serialize for InequalityReport {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_json().serialize(s)
    }
}

/// `½ A^{1/2} |I − A^{-1/2} B A^{-1/2}| A^{1/2}` for positive definite `A`.
pub fn half_abs_deviation(a: &HermitianMatrix, b: &HermitianMatrix) -> Result<HermitianMatrix> {
    let (half, inv_half) = pd_sqrt_pair(a)?;
    let inner = sandwich(&inv_half, b)?;
    let dev = HermitianMatrix::identity(a.dim()).try_sub(&inner)?;
    Ok(sandwich(&half, &matrix_abs(&dev)?)?.scale(0.5))
}

/// `X♯Y + ½ X^{1/2} |I − X^{-1/2} Y X^{-1/2}| X^{1/2}`, the upper side of
/// the reverse Cauchy inequality.
pub fn reverse_cauchy_bound(x: &HermitianMatrix, y: &HermitianMatrix) -> Result<HermitianMatrix> {
    geometric_mean(x, y)?.try_add(&half_abs_deviation(x, y)?)
}

/// `A∇B − Aσ_fB ≤ ½ A^{1/2}|I − A^{-1/2}BA^{-1/2}|A^{1/2}`.
pub fn reverse_cauchy_residual(
    f: &ScalarFunction,
    a: &HermitianMatrix,
    b: &HermitianMatrix,
    pol: &TolerancePolicy,
) -> Result<InequalityReport> {
    let mean = f_mean(f, a, b)?;
    let lhs = arithmetic_mean(a, b)?.try_sub(&mean)?;
    let rhs = half_abs_deviation(a, b)?;
    let residual = rhs.try_sub(&lhs)?;
    Ok(InequalityReport::new(
        residual,
        &[a, b, &mean, &rhs],
        pol,
        Some(f.label().to_string()),
    ))
}

fn nonnegative_on(f: &ScalarFunction, spec: &SpectralData) -> Result<()> {
    for &l in &spec.eigenvalues {
        let v = f.try_eval(l.max(0.0))?;
        if v < 0.0 {
            return Err(Error::NegativeFunction {
                function: f.label().to_string(),
                at: l,
                value: v,
            });
        }
    }
    Ok(())
}

/// `f(X∇Y) ≤ f(X♯Y + ½X^{1/2}|I − X^{-1/2}YX^{-1/2}|X^{1/2})`.
pub fn characterization_hypothesis_check(
    f: &ScalarFunction,
    x: &HermitianMatrix,
    y: &HermitianMatrix,
    pol: &TolerancePolicy,
) -> Result<InequalityReport> {
    let lower = arithmetic_mean(x, y)?;
    let upper = reverse_cauchy_bound(x, y)?;
    let lower_spec = spectral_decompose(&lower)?;
    let upper_spec = spectral_decompose(&upper)?;
    nonnegative_on(f, &lower_spec)?;
    nonnegative_on(f, &upper_spec)?;
    let f_lower = apply_to_spectrum(f, &lower_spec)?;
    let f_upper = apply_to_spectrum(f, &upper_spec)?;
    let residual = f_upper.try_sub(&f_lower)?;
    Ok(InequalityReport::new(
        residual,
        &[&f_lower, &f_upper],
        pol,
        Some(f.label().to_string()),
    ))
}

/// `f(A∇B) ≥ f(A♯B)`.
pub fn hiai_ando_check(
    f: &ScalarFunction,
    a: &HermitianMatrix,
    b: &HermitianMatrix,
    pol: &TolerancePolicy,
) -> Result<InequalityReport> {
    let arith = arithmetic_mean(a, b)?;
    let geo = geometric_mean(a, b)?;
    let f_arith = apply_to_spectrum(f, &spectral_decompose(&arith)?)?;
    let f_geo = apply_to_spectrum(f, &spectral_decompose(&geo)?)?;
    let residual = f_arith.try_sub(&f_geo)?;
    Ok(InequalityReport::new(
        residual,
        &[&f_arith, &f_geo],
        pol,
        Some(f.label().to_string()),
    ))
}

/// Result of [`hok_check`]: the inequality report plus the `AB + BA ≥ 0` test.
#[derive(Debug, Clone)]
pub struct HokReport {
    pub condition_holds: bool,
    /// Smallest eigenvalue of `AB + BA`.
    pub condition_min_eig: f64,
    pub condition_tol: f64,
    pub report: InequalityReport,
}

/// `AB + BA`, symmetrized.
pub fn anticommutator(a: &HermitianMatrix, b: &HermitianMatrix) -> Result<HermitianMatrix> {
    Ok(symmetrize(&a.matmul(b))?.scale(2.0))
}

/// `A∇B − AσB ≤ ½|A − B|`, together with the condition `AB + BA ≥ 0`.
pub fn hok_check(
    rep: &MeanRepresentation,
    a: &HermitianMatrix,
    b: &HermitianMatrix,
    pol: &TolerancePolicy,
) -> Result<HokReport> {
    let anti = anticommutator(a, b)?;
    let condition_min_eig = anti.min_eigenvalue();
    let condition_tol = pol.from_scale(2.0 * a.spectral_norm() * b.spectral_norm());

    let mean = rep.apply(a, b)?;
    let lhs = arithmetic_mean(a, b)?.try_sub(&mean)?;
    let rhs = matrix_abs(&a.try_sub(b)?)?.scale(0.5);
    let residual = rhs.try_sub(&lhs)?;
    let label = match rep {
        MeanRepresentation::FInduced(f) => f.label().to_string(),
        other => other.name(),
    };
    Ok(HokReport {
        condition_holds: condition_min_eig >= -condition_tol,
        condition_min_eig,
        condition_tol,
        report: InequalityReport::new(residual, &[a, b, &mean], pol, Some(label)),
    })
}

/// Both sides of `(1 − α)(P + Q) ≤ |P − Q|` for the projection family.
#[derive(Debug, Clone, Serialize)]
pub struct ObstructionRecord {
    pub alpha: f64,
    pub theta: f64,
    /// Full Loewner comparison.
    pub holds: bool,
    pub min_residual_eig: f64,
    pub tol_used: f64,
    /// `(1 − α)(1 + cos²θ)`.
    pub lhs_11: f64,
    /// `(1,1)` entry of the computed `|P − Q|` (equals `sin θ`).
    pub abs_diff_11: f64,
    /// `sin²θ`, kept next to the computed entry for comparison.
    pub printed_sin_sq: f64,
    /// `lhs_11 > abs_diff_11`: the entry comparison alone already fails.
    pub entry_fails: bool,
    /// `θ ∈ {0, π/2}`: the projections are not in general position.
    pub degenerate: bool,
}

/// Evaluates `(1 − α)(P + Q(θ)) ≤ |P − Q(θ)|`.
pub fn projection_obstruction(alpha: f64, theta: f64) -> Result<ObstructionRecord> {
    if !(0.0..=1.0).contains(&alpha) {
        return Err(Error::InvalidParameter(format!("alpha = {alpha} must lie in [0, 1]")));
    }
    let (p, q) = gen_projection_pair(theta)?;
    let lhs = p.try_add(&q)?.scale(1.0 - alpha);
    let rhs = matrix_abs(&p.try_sub(&q)?)?;
    let pol = TolerancePolicy::default();
    let verdict = loewner_compare(&lhs, &rhs, &pol)?;
    let lhs_11 = lhs.entry(0, 0).re;
    let abs_diff_11 = rhs.entry(0, 0).re;
    Ok(ObstructionRecord {
        alpha,
        theta,
        holds: verdict.is_le(),
        min_residual_eig: verdict.witness_min_eig_b_minus_a,
        tol_used: verdict.tol_used,
        lhs_11,
        abs_diff_11,
        printed_sin_sq: theta.sin().powi(2),
        entry_fails: lhs_11 > abs_diff_11 + verdict.tol_used,
        degenerate: theta == 0.0 || theta == FRAC_PI_2,
    })
}

/// Root `θ*` of `(1 − α)(1 + cos²θ) = sin θ` on `(0, π/2)`; the `(1,1)`
/// entry comparison fails exactly for `θ < θ*`. Returns `0` for `α = 1`.
pub fn obstruction_entry_threshold(alpha: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&alpha) {
        return Err(Error::InvalidParameter(format!("alpha = {alpha} must lie in [0, 1]")));
    }
    if alpha == 1.0 {
        return Ok(0.0);
    }
    // g is increasing with g(0) < 0 < g(π/2) = α when α > 0
    let g = |t: f64| t.sin() - (1.0 - alpha) * (1.0 + t.cos().powi(2));
    let (mut lo, mut hi) = (0.0, FRAC_PI_2);
    if g(hi) <= 0.0 {
        return Ok(FRAC_PI_2);
    }
    while hi - lo > 1e-15 {
        let mid = 0.5 * (lo + hi);
        if g(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Largest angle on a uniform grid over `(0, π/2)` at which the full
/// inequality fails; `None` when it holds everywhere on the grid.
pub fn empirical_obstruction_threshold(alpha: f64, grid_points: usize) -> Result<Option<f64>> {
    let mut last_fail = None;
    for k in 1..=grid_points {
        let theta = FRAC_PI_2 * k as f64 / (grid_points + 1) as f64;
        if !projection_obstruction(alpha, theta)?.holds {
            last_fail = Some(theta);
        }
    }
    Ok(last_fail)
}

/// `min{1, t} ≤ f(t)` up to `1e-12 · max(1, t)`.
pub fn scalar_min_bound(f: &ScalarFunction, t: f64) -> bool {
    if !(t >= 0.0) {
        return false;
    }
    let tol = 1e-12 * t.max(1.0);
    t.min(1.0) <= f.eval(t) + tol
}
