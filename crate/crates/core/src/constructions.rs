//! Constructive decompositions: the scalar splitting of a pair `a ≤ b ≤ √2a`
//! into an arithmetic/reverse-Cauchy pair, the function `h` and its
//! inverse, the matrix decompositions built from them, and `√2`-dominated
//! chains.

use std::f64::consts::SQRT_2;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::hermitian::{
    loewner_compare, pd_sqrt_pair, sandwich, spectral_decompose, HermitianMatrix, TolerancePolicy,
};
use crate::inequalities::reverse_cauchy_bound;
use crate::means::arithmetic_mean;

/// Right end of the increasing branch of `h`: `(2 − √2)/2`.
pub const H_DOMAIN_MAX: f64 = 1.0 - SQRT_2 / 2.0;

/// Low word of `√2` in double-double form.
const SQRT_2_LO: f64 = -9.667_293_313_452_913e-17;

/// Inputs this close to an interval boundary are clamped onto it.
const BOUNDARY_CLAMP: f64 = 1e-10;

/// Eigenvalue floor for `X` in the matrix decompositions.
pub const PD_FLOOR: f64 = 1e-10;

/// `h(t) = √(2t − t²) + 1 − t` on `[0, (2 − √2)/2]`.
pub fn h_eval(t: f64) -> Result<f64> {
    if !(-BOUNDARY_CLAMP..=H_DOMAIN_MAX + BOUNDARY_CLAMP).contains(&t) {
        return Err(Error::InvalidParameter(format!(
            "h is evaluated on [0, {H_DOMAIN_MAX}], got {t}"
        )));
    }
    let t = t.clamp(0.0, H_DOMAIN_MAX);
    // double-double evaluation; near the fold h⁻¹ amplifies every ulp of h
    let (m, m_lo) = two_sum(2.0, -t);
    let (p, p_lo) = two_prod(t, m);
    let (w, w_lo) = fast_two_sum(p, p_lo + t * m_lo);
    let r = w.sqrt();
    let r_lo = if r > 0.0 { ((-r).mul_add(r, w) + w_lo) / (2.0 * r) } else { 0.0 };
    let (u, u_lo) = two_sum(1.0, -t);
    let (s, s_lo) = two_sum(r, u);
    Ok(s + (s_lo + r_lo + u_lo))
}

fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    (s, (a - (s - bb)) + (b - bb))
}

fn fast_two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    (s, b - (s - a))
}

fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    (p, a.mul_add(b, -p))
}

/// `2 − s²`, computed without cancellation near `s = √2`.
fn two_minus_square(s: f64) -> f64 {
    ((SQRT_2 - s) + SQRT_2_LO) * (SQRT_2 + s)
}

/// Inverse of `h` on `[1, √2]`.
///
/// Solves `2(x − v)² = (2 − s²)/2` with `v = (2 − s)/2` by Newton steps
/// safeguarded by bisection on the bracket `[0, v]`; the smaller root is
/// the preimage on the increasing branch.
pub fn h_inverse(s: f64) -> Result<f64> {
    if !(1.0 - BOUNDARY_CLAMP..=SQRT_2 + BOUNDARY_CLAMP).contains(&s) {
        return Err(Error::InvalidParameter(format!(
            "h^-1 is defined on [1, sqrt 2], got {s}"
        )));
    }
    let s = s.clamp(1.0, SQRT_2);
    let v = 0.5 * (2.0 - s);
    let half_d = 0.5 * two_minus_square(s).max(0.0);
    let c0 = (s - 1.0) * (s - 1.0);
    // q decreases on [0, v]: q(0) = (s − 1)² ≥ 0, q(v) = −d/2 ≤ 0.
    // Expanded form is accurate for small roots, the vertex form near the fold.
    let expanded = s <= 1.3;
    let q = |x: f64| {
        if expanded {
            2.0 * x * x - 4.0 * v * x + c0
        } else {
            2.0 * (x - v) * (x - v) - half_d
        }
    };
    let dq = |x: f64| 4.0 * (x - v);

    let (mut lo, mut hi) = (0.0_f64, v);
    if q(lo) <= 0.0 {
        return Ok(0.0);
    }
    if q(hi) >= 0.0 {
        return Ok(hi);
    }
    let mut x = 0.5 * (lo + hi);
    for _ in 0..200 {
        let fx = q(x);
        if fx == 0.0 {
            break;
        }
        if fx > 0.0 {
            lo = x;
        } else {
            hi = x;
        }
        let newton = x - fx / dq(x);
        let next = if newton > lo && newton < hi {
            newton
        } else {
            0.5 * (lo + hi)
        };
        let step = (next - x).abs();
        x = next;
        if step <= 1e-14 * f64::EPSILON + 2.0 * f64::EPSILON * x || hi - lo <= 1e-14 * f64::EPSILON {
            break;
        }
    }
    Ok(x)
}

/// Splits `a ≤ b ≤ √2a` into `(x, y)` with `(x + y)/2 = a` and
/// `√(xy) + |x − y|/2 = b`, choosing the smaller root `x ≤ a`.
pub fn scalar_decompose(a: f64, b: f64) -> Result<(f64, f64)> {
    if !(a > 0.0 && a.is_finite() && b.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "scalar decomposition needs 0 < a, got a = {a}, b = {b}"
        )));
    }
    let slack = BOUNDARY_CLAMP * a;
    if b < a - slack || b > SQRT_2 * a + slack {
        return Err(Error::Precondition(format!(
            "b = {b} outside [a, sqrt(2) a] = [{a}, {}]",
            SQRT_2 * a
        )));
    }
    let b = b.clamp(a, SQRT_2 * a);
    // discriminant/4 of 2x² + 2(b − 2a)x + (b − a)², Kahan's difference of products
    let bb = b * b;
    let err = (-b).mul_add(b, bb);
    let disc = ((2.0 * a).mul_add(a, -bb) + err).max(0.0);
    let larger = (2.0 * a - b) + disc.sqrt();
    let x = if larger > 0.0 {
        (b - a) * (b - a) / larger
    } else {
        0.0
    };
    Ok((x, 2.0 * a - x))
}

/// Number of `√2` steps needed to climb a ratio `r ≥ 1`: `⌈ln r / ln √2⌉`.
pub fn chain_length(ratio: f64) -> usize {
    let steps = 2.0 * ratio.max(1.0).log2();
    (steps - 1e-12).ceil().max(0.0) as usize
}

/// Geometric ladder from `a` to `b` with consecutive ratios at most `√2`.
pub fn scalar_chain(a: f64, b: f64) -> Result<Vec<f64>> {
    if !(a > 0.0 && b > 0.0 && a.is_finite() && b.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "chain endpoints must be positive, got ({a}, {b})"
        )));
    }
    if b < a {
        return Err(Error::Precondition(format!("chain needs a <= b, got ({a}, {b})")));
    }
    if a == b {
        return Ok(vec![a]);
    }
    let r = b / a;
    let m = chain_length(r).max(1);
    let mut out: Vec<f64> = (0..m).map(|i| a * r.powf(i as f64 / m as f64)).collect();
    out.push(b);
    Ok(out)
}

/// Output of the matrix decompositions.
#[derive(Debug, Clone, Serialize)]
pub struct DecompositionResult {
    pub x: HermitianMatrix,
    pub y: HermitianMatrix,
    /// `‖X∇Y − target‖` (spectral norm).
    pub mean_residual: f64,
    /// `‖X♯Y + ½X^{1/2}|I − X^{-1/2}YX^{-1/2}|X^{1/2} − target‖`.
    pub reconstruction_residual: f64,
    pub mean_residual_rel: f64,
    pub reconstruction_residual_rel: f64,
    /// Eigenvalues of the inner `X₀` lifted to the positive floor.
    pub floored_eigenvalues: usize,
    /// Largest amount added by the floor.
    pub floor_perturbation: f64,
}

fn check_window(spectrum: &[f64], tol: f64) -> Result<()> {
    let (lo, hi) = (spectrum[0], spectrum[spectrum.len() - 1]);
    if lo < 1.0 - tol {
        return Err(Error::Precondition(format!(
            "eigenvalue {lo} below the lower bound 1 (tol {tol:e})"
        )));
    }
    if hi > SQRT_2 + tol {
        return Err(Error::Precondition(format!(
            "eigenvalue {hi} above the upper bound sqrt(2) = {SQRT_2} (tol {tol:e})"
        )));
    }
    Ok(())
}

struct InnerSplit {
    x: HermitianMatrix,
    y: HermitianMatrix,
    floored: usize,
    perturbation: f64,
}

fn split_window(c: &HermitianMatrix) -> Result<InnerSplit> {
    let spec = spectral_decompose(c)?;
    let tol = TolerancePolicy::default().from_scale(spec.spectral_norm());
    check_window(&spec.eigenvalues, tol)?;
    let mut floored = 0;
    let mut perturbation: f64 = 0.0;
    let mut xs = Vec::with_capacity(spec.eigenvalues.len());
    for &l in &spec.eigenvalues {
        let x = h_inverse(l.clamp(1.0, SQRT_2))?;
        if x < PD_FLOOR {
            floored += 1;
            perturbation = perturbation.max(PD_FLOOR - x);
            xs.push(PD_FLOOR);
        } else {
            xs.push(x);
        }
    }
    let ys: Vec<f64> = xs.iter().map(|x| 2.0 - x).collect();
    Ok(InnerSplit {
        x: spec.reassemble(&xs),
        y: spec.reassemble(&ys),
        floored,
        perturbation,
    })
}

fn finish(
    x: HermitianMatrix,
    y: HermitianMatrix,
    mean_target: &HermitianMatrix,
    bound_target: &HermitianMatrix,
    split: &InnerSplit,
) -> Result<DecompositionResult> {
    let mean_residual = arithmetic_mean(&x, &y)?.try_sub(mean_target)?.spectral_norm();
    // the bound is symmetric in (X, Y); Y ≥ A is the well-conditioned base
    let reconstruction_residual = reverse_cauchy_bound(&y, &x)?
        .try_sub(bound_target)?
        .spectral_norm();
    Ok(DecompositionResult {
        mean_residual_rel: mean_residual / mean_target.spectral_norm(),
        reconstruction_residual_rel: reconstruction_residual / bound_target.spectral_norm(),
        x,
        y,
        mean_residual,
        reconstruction_residual,
        floored_eigenvalues: split.floored,
        floor_perturbation: split.perturbation,
    })
}

/// For `I ≤ A ≤ √2·I`: `X = h⁻¹(A)`, `Y = 2I − X`, so that `X∇Y = I` and
/// the reverse Cauchy bound of `(X, Y)` is `A`.
pub fn lemma1_decompose(a: &HermitianMatrix) -> Result<DecompositionResult> {
    let split = split_window(a)?;
    let identity = HermitianMatrix::identity(a.dim());
    finish(split.x.clone(), split.y.clone(), &identity, a, &split)
}

/// For `A ≤ B ≤ √2·A`: decompose `A^{-1/2}BA^{-1/2}` and lift back by
/// congruence with `A^{1/2}`, so that `X∇Y = A` and the bound of `(X, Y)` is `B`.
pub fn lemma2_decompose(a: &HermitianMatrix, b: &HermitianMatrix) -> Result<DecompositionResult> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch {
            expected: a.dim(),
            actual: b.dim(),
        });
    }
    let (half, inv_half) = pd_sqrt_pair(a)?;
    let c = sandwich(&inv_half, b)?;
    let split = split_window(&c)?;
    let x = sandwich(&half, &split.x)?;
    let y = sandwich(&half, &split.y)?;
    finish(x, y, a, b, &split)
}

/// Chain `A = A₀ ≤ A₁ ≤ … ≤ A_k = B` with `A_{i+1} ≤ √2·A_i`.
#[derive(Debug, Clone, Serialize)]
pub struct ChainResult {
    pub links: Vec<HermitianMatrix>,
    pub factor: f64,
    pub k: usize,
    /// Largest eigenvalue of `A^{-1/2}BA^{-1/2}`.
    pub lambda_max: f64,
    pub invariants_hold: bool,
}

impl ChainResult {
    /// Re-checks `A_i ≤ A_{i+1} ≤ factor·A_i` for every link.
    pub fn verify(&self, pol: &TolerancePolicy) -> Result<bool> {
        for w in self.links.windows(2) {
            if !loewner_compare(&w[0], &w[1], pol)?.is_le() {
                return Ok(false);
            }
            if !loewner_compare(&w[1], &w[0].scale(self.factor), pol)?.is_le() {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// Builds the chain from the commuting powers `Z_i = C^{i/k}` of
/// `C = A^{-1/2}BA^{-1/2}`, lifted as `A_i = A^{1/2} Z_i A^{1/2}`.
pub fn matrix_chain(a: &HermitianMatrix, b: &HermitianMatrix) -> Result<ChainResult> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch {
            expected: a.dim(),
            actual: b.dim(),
        });
    }
    let (half, inv_half) = pd_sqrt_pair(a)?;
    let c = sandwich(&inv_half, b)?;
    let spec = spectral_decompose(&c)?;
    let tol = TolerancePolicy::default().from_scale(spec.spectral_norm());
    if spec.min() < 1.0 - tol {
        return Err(Error::Precondition(format!(
            "A is not below B: eigenvalue {} of A^-1/2 B A^-1/2 is below 1 (tol {tol:e})",
            spec.min()
        )));
    }
    let lambda_max = spec.max().max(1.0);
    let k = chain_length(lambda_max);
    let mut links = vec![a.clone()];
    for i in 1..k {
        let p = i as f64 / k as f64;
        let z = spec.map(|l| l.max(1.0).powf(p));
        links.push(sandwich(&half, &z)?);
    }
    if k > 0 {
        links.push(b.clone());
    }
    let mut chain = ChainResult {
        links,
        factor: SQRT_2,
        k,
        lambda_max,
        invariants_hold: false,
    };
    chain.invariants_hold = chain.verify(&TolerancePolicy::default())?;
    Ok(chain)
}
