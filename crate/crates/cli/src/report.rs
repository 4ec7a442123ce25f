use serde::Serialize;
use serde_json::Value;

/// One evaluated property inside a suite.
#[derive(Debug, Clone, Serialize)]
pub struct CheckRecord {
    pub check: String,
    pub index: usize,
    pub seed: u64,
    pub dim: usize,
    pub holds: bool,
    /// False for informational records (e.g. HOK pairs outside the condition).
    pub expected: bool,
    pub min_residual_eig: f64,
    pub tol: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<Value>,
}

#[derive(Debug, Clone, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub seed: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub function: Option<String>,
    pub dims: Vec<usize>,
    pub trials: usize,
    pub tol: f64,
    pub expect_violation: bool,
    pub checks: usize,
    pub passed: usize,
    /// Expected-to-hold records that failed.
    pub failed: usize,
    pub violations: usize,
    /// Inputs of the first violating record.
    pub witness: Option<Value>,
    pub records: Vec<CheckRecord>,
    /// Seconds; the only field that differs between identical runs.
    pub wall_time_s: f64,
}

impl SuiteReport {
    pub fn new(suite: &str, seed: u64, function: Option<String>, dims: &[usize], trials: usize, tol: f64) -> Self {
        Self {
            suite: suite.to_string(),
            seed,
            function,
            dims: dims.to_vec(),
            trials,
            tol,
            expect_violation: false,
            checks: 0,
            passed: 0,
            failed: 0,
            violations: 0,
            witness: None,
            records: Vec::new(),
            wall_time_s: 0.0,
        }
    }

    pub fn push(&mut self, record: CheckRecord, witness: impl FnOnce() -> Value) {
        self.checks += 1;
        if record.holds {
            self.passed += 1;
        } else if record.expected {
            self.failed += 1;
            self.violations += 1;
            if self.witness.is_none() {
                self.witness = Some(witness());
            }
        }
        self.records.push(record);
    }

    /// Exit-code contract: 0 when expectations are met, 1 otherwise.
    pub fn succeeded(&self) -> bool {
        if self.expect_violation {
            self.violations > 0
        } else {
            self.failed == 0
        }
    }
}
