//! Scalar functions on `[0, ∞)`: the built-in registry, tabulated samples,
//! and user callbacks.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

type Callback = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

#[derive(Clone)]
enum Kind {
    Power(f64),
    Sqrt,
    Identity,
    /// `(1 + t)/2`
    Arithmetic,
    /// `2t/(1 + t)`
    Harmonic,
    /// `(t − 1)/ln t`, continued by 1 at `t = 1`
    LogMean,
    Constant(f64),
    Square,
    Cube,
    Exp,
    Tabulated(Table),
    Callback {
        f: Callback,
        domain: (Option<f64>, Option<f64>),
        claims: bool,
    },
}

/// Piecewise-linear interpolant through sorted samples.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Table {
    pub label: String,
    pub points: Vec<[f64; 2]>,
    #[serde(default)]
    pub claims_operator_monotone: bool,
}

impl Table {
    fn validate(&self) -> Result<()> {
        if self.points.len() < 2 {
            return Err(Error::Malformed("a table needs at least two samples".into()));
        }
        if self.points.iter().flatten().any(|v| !v.is_finite()) {
            return Err(Error::Malformed("non-finite table sample".into()));
        }
        if self.points.windows(2).any(|w| w[1][0] <= w[0][0]) {
            return Err(Error::Malformed(
                "table abscissae must be strictly increasing".into(),
            ));
        }
        Ok(())
    }

    fn eval(&self, t: f64) -> f64 {
        let pts = &self.points;
        let k = pts.partition_point(|p| p[0] < t);
        if k == 0 {
            return pts[0][1];
        }
        if k >= pts.len() {
            return pts[pts.len() - 1][1];
        }
        let [x0, y0] = pts[k - 1];
        let [x1, y1] = pts[k];
        y0 + (y1 - y0) * (t - x0) / (x1 - x0)
    }
}

/// A real function evaluated on (a subset of) `[0, ∞)`.
#[derive(Clone)]
pub struct ScalarFunction {
    kind: Kind,
    label: String,
}

impl fmt::Debug for ScalarFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ScalarFunction({})", self.label)
    }
}

impl fmt::Display for ScalarFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label)
    }
}

impl ScalarFunction {
    fn builtin(kind: Kind, label: impl Into<String>) -> Self {
        Self {
            kind,
            label: label.into(),
        }
    }

    /// `t^p`, `p ≥ 0`.
    pub fn power(p: f64) -> Result<Self> {
        if !(p.is_finite() && p >= 0.0) {
            return Err(Error::InvalidParameter(format!("power exponent {p} must be >= 0")));
        }
        Ok(Self::builtin(Kind::Power(p), format!("power:{p}")))
    }

    pub fn sqrt() -> Self {
        Self::builtin(Kind::Sqrt, "sqrt")
    }

    pub fn identity() -> Self {
        Self::builtin(Kind::Identity, "identity")
    }

    pub fn arithmetic() -> Self {
        Self::builtin(Kind::Arithmetic, "arithmetic")
    }

    pub fn harmonic() -> Self {
        Self::builtin(Kind::Harmonic, "harmonic")
    }

    pub fn logmean() -> Self {
        Self::builtin(Kind::LogMean, "logmean")
    }

    pub fn constant(c: f64) -> Self {
        let label = if c == 1.0 {
            "constant".to_string()
        } else {
            format!("constant:{c}")
        };
        Self::builtin(Kind::Constant(c), label)
    }

    pub fn square() -> Self {
        Self::builtin(Kind::Square, "square")
    }

    pub fn cube() -> Self {
        Self::builtin(Kind::Cube, "cube")
    }

    pub fn exp() -> Self {
        Self::builtin(Kind::Exp, "exp")
    }

    pub fn tabulated(table: Table) -> Result<Self> {
        table.validate()?;
        let label = table.label.clone();
        Ok(Self {
            kind: Kind::Tabulated(table),
            label,
        })
    }

    /// Wraps a closure; its domain defaults to `[0, ∞)`.
    pub fn from_fn(label: impl Into<String>, f: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        Self {
            kind: Kind::Callback {
                f: Arc::new(f),
                domain: (Some(0.0), None),
                claims: false,
            },
            label: label.into(),
        }
    }

    /// Overrides the domain of a callback function.
    pub fn with_domain(mut self, lo: Option<f64>, hi: Option<f64>) -> Self {
        if let Kind::Callback { domain, .. } = &mut self.kind {
            *domain = (lo, hi);
        }
        self
    }

    /// Sets the advisory operator-monotone flag of a callback function.
    pub fn claiming_operator_monotone(mut self, yes: bool) -> Self {
        if let Kind::Callback { claims, .. } = &mut self.kind {
            *claims = yes;
        }
        self
    }

    /// The nine registry functions: six operator monotone, three probes.
    pub fn registry() -> Vec<Self> {
        vec![
            Self::power(0.3).expect("valid exponent"),
            Self::sqrt(),
            Self::arithmetic(),
            Self::harmonic(),
            Self::logmean(),
            Self::constant(1.0),
            Self::square(),
            Self::cube(),
            Self::exp(),
        ]
    }

    /// Resolves a registry name such as `sqrt`, `power:0.3` or `logmean`.
    pub fn from_name(name: &str) -> Result<Self> {
        let name = name.trim();
        if let Some(p) = name.strip_prefix("power:") {
            let p: f64 = p
                .parse()
                .map_err(|_| Error::UnknownFunction(name.to_string()))?;
            return Self::power(p);
        }
        if let Some(c) = name.strip_prefix("constant:") {
            let c: f64 = c
                .parse()
                .map_err(|_| Error::UnknownFunction(name.to_string()))?;
            return Ok(Self::constant(c));
        }
        Ok(match name {
            "sqrt" => Self::sqrt(),
            "identity" | "id" => Self::identity(),
            "arithmetic" | "affine" => Self::arithmetic(),
            "harmonic" => Self::harmonic(),
            "logmean" => Self::logmean(),
            "constant" | "one" => Self::constant(1.0),
            "square" => Self::square(),
            "cube" => Self::cube(),
            "exp" => Self::exp(),
            _ => return Err(Error::UnknownFunction(name.to_string())),
        })
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    /// Closed interval on which the function is defined; `None` means unbounded.
    pub fn domain(&self) -> (Option<f64>, Option<f64>) {
        match &self.kind {
            Kind::Power(_) | Kind::Sqrt | Kind::Harmonic | Kind::LogMean => (Some(0.0), None),
            Kind::Identity
            | Kind::Arithmetic
            | Kind::Constant(_)
            | Kind::Square
            | Kind::Cube
            | Kind::Exp => (None, None),
            Kind::Tabulated(t) => (Some(t.points[0][0]), Some(t.points[t.points.len() - 1][0])),
            Kind::Callback { domain, .. } => *domain,
        }
    }

    /// Advisory flag; the numerical tests decide.
    pub fn claims_operator_monotone(&self) -> bool {
        match &self.kind {
            Kind::Power(p) => *p <= 1.0,
            Kind::Sqrt
            | Kind::Identity
            | Kind::Arithmetic
            | Kind::Harmonic
            | Kind::LogMean
            | Kind::Constant(_) => true,
            Kind::Square | Kind::Cube | Kind::Exp => false,
            Kind::Tabulated(t) => t.claims_operator_monotone,
            Kind::Callback { claims, .. } => *claims,
        }
    }

    pub fn eval(&self, t: f64) -> f64 {
        match &self.kind {
            Kind::Power(p) => {
                if *p == 0.0 {
                    1.0
                } else {
                    t.powf(*p)
                }
            }
            Kind::Sqrt => t.sqrt(),
            Kind::Identity => t,
            Kind::Arithmetic => 0.5 * (1.0 + t),
            Kind::Harmonic => 2.0 * t / (1.0 + t),
            Kind::LogMean => {
                let u = t - 1.0;
                if u == 0.0 {
                    1.0
                } else if t == 0.0 {
                    0.0
                } else {
                    u / u.ln_1p()
                }
            }
            Kind::Constant(c) => *c,
            Kind::Square => t * t,
            Kind::Cube => t * t * t,
            Kind::Exp => t.exp(),
            Kind::Tabulated(tab) => tab.eval(t),
            Kind::Callback { f, .. } => f(t),
        }
    }

    /// Evaluates and rejects non-finite results.
    pub fn try_eval(&self, t: f64) -> Result<f64> {
        let v = self.eval(t);
        if v.is_finite() {
            Ok(v)
        } else {
            Err(Error::Evaluation {
                function: self.label.clone(),
                at: t,
                value: v,
            })
        }
    }

    /// Analytic derivative for built-ins; `None` for tables and callbacks.
    pub fn derivative(&self, t: f64) -> Option<f64> {
        Some(match &self.kind {
            Kind::Power(p) => {
                if *p == 0.0 {
                    0.0
                } else {
                    p * t.powf(p - 1.0)
                }
            }
            Kind::Sqrt => 0.5 / t.sqrt(),
            Kind::Identity => 1.0,
            Kind::Arithmetic => 0.5,
            Kind::Harmonic => 2.0 / ((1.0 + t) * (1.0 + t)),
            Kind::LogMean => {
                let u = t - 1.0;
                if u.abs() < 1e-3 {
                    0.5 - u / 6.0 + u * u / 8.0
                } else {
                    let l = t.ln();
                    (l - u / t) / (l * l)
                }
            }
            Kind::Constant(_) => 0.0,
            Kind::Square => 2.0 * t,
            Kind::Cube => 3.0 * t * t,
            Kind::Exp => t.exp(),
            Kind::Tabulated(_) | Kind::Callback { .. } => return None,
        })
    }

    /// `f(1) = 1` within `1e-12`.
    pub fn is_normalized(&self) -> bool {
        (self.eval(1.0) - 1.0).abs() <= 1e-12
    }

    pub fn require_normalized(&self) -> Result<()> {
        if self.is_normalized() {
            Ok(())
        } else {
            Err(Error::Unnormalized {
                function: self.label.clone(),
                value: self.eval(1.0),
            })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn registry_has_six_monotone_and_three_probes() {
        let reg = ScalarFunction::registry();
        assert_eq!(reg.len(), 9);
        assert_eq!(reg.iter().filter(|f| f.claims_operator_monotone()).count(), 6);
        for f in &reg {
            let again = ScalarFunction::from_name(f.label()).unwrap();
            assert_eq!(again.label(), f.label());
        }
    }

    #[test]
    fn names_resolve() {
        let f = ScalarFunction::from_name("power:0.5").unwrap();
        assert_eq!(f.eval(9.0), ScalarFunction::sqrt().eval(9.0));
        assert!(ScalarFunction::from_name("power:-1").is_err());
        assert!(matches!(
            ScalarFunction::from_name("tanh"),
            Err(Error::UnknownFunction(_))
        ));
        assert_eq!(ScalarFunction::from_name("constant:2").unwrap().eval(5.0), 2.0);
    }

    #[test]
    fn logmean_values() {
        let f = ScalarFunction::logmean();
        assert_eq!(f.eval(1.0), 1.0);
        assert_eq!(f.eval(0.0), 0.0);
        let e2 = std::f64::consts::E.powi(2);
        assert!((f.eval(e2) - (e2 - 1.0) / 2.0).abs() < 1e-14);
        // continuity across t = 1
        assert!((f.eval(1.0 + 1e-9) - 1.0 - 0.5e-9).abs() < 1e-15);
    }

    #[test]
    fn normalization() {
        for name in ["sqrt", "power:0.3", "arithmetic", "harmonic", "logmean", "constant", "square", "cube"] {
            assert!(ScalarFunction::from_name(name).unwrap().is_normalized(), "{name}");
        }
        assert!(!ScalarFunction::exp().is_normalized());
        assert!(matches!(
            ScalarFunction::exp().require_normalized(),
            Err(Error::Unnormalized { .. })
        ));
    }

    #[test]
    fn tabulated_interpolates() {
        let t = Table {
            label: "tab".into(),
            points: vec![[0.0, 0.0], [1.0, 1.0], [4.0, 2.0]],
            claims_operator_monotone: false,
        };
        let f = ScalarFunction::tabulated(t).unwrap();
        assert_eq!(f.eval(0.5), 0.5);
        assert_eq!(f.eval(2.5), 1.5);
        assert_eq!(f.domain(), (Some(0.0), Some(4.0)));

        let bad = Table {
            label: "bad".into(),
            points: vec![[1.0, 0.0], [1.0, 1.0]],
            claims_operator_monotone: false,
        };
        assert!(ScalarFunction::tabulated(bad).is_err());
    }

    #[test]
    fn analytic_derivatives_match_central_differences() {
        for f in ScalarFunction::registry() {
            for &t in &[0.05, 0.7, 1.0, 1.0005, 3.0, 20.0] {
                let h = 1e-5 * t;
                let fd = (f.eval(t + h) - f.eval(t - h)) / (2.0 * h);
                let d = f.derivative(t).unwrap();
                assert!(
                    (fd - d).abs() <= 1e-6 * d.abs().max(1e-3),
                    "{} at {t}: {fd} vs {d}",
                    f.label()
                );
            }
        }
    }
}
