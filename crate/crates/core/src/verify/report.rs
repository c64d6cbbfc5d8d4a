use super::gen::TrialConfig;
use serde::{Deserialize, Serialize};

pub const REPORT_SCHEMA: &str = "rbhier/verify-report/v1";

/// Keep at most this many reproductions per check.
pub const MAX_FAILURES_KEPT: usize = 5;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Failure {
    pub trial: usize,
    pub instance: String,
    pub function: String,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckResult {
    pub suite: String,
    pub name: String,
    pub trials: usize,
    pub pass: usize,
    pub fail: usize,
    pub failures: Vec<Failure>,
}

impl CheckResult {
    pub fn new(suite: &str, name: impl Into<String>) -> Self {
        Self { suite: suite.into(), name: name.into(), trials: 0, pass: 0, fail: 0, failures: Vec::new() }
    }

    pub fn ok(&self) -> bool {
        self.fail == 0
    }

    pub fn record(&mut self, outcome: Result<(), Failure>) {
        self.trials += 1;
        match outcome {
            Ok(()) => self.pass += 1,
            Err(f) => {
                self.fail += 1;
                if self.failures.len() < MAX_FAILURES_KEPT {
                    self.failures.push(f);
                }
            }
        }
    }

    /// Merges per-trial outcomes given in trial order.
    pub fn from_outcomes(suite: &str, name: impl Into<String>, outcomes: Vec<Result<(), Failure>>) -> Self {
        let mut r = Self::new(suite, name);
        for o in outcomes {
            r.record(o);
        }
        r
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub pass: usize,
    pub fail: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub agree_rate: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub schema: String,
    pub config: TrialConfig,
    pub results: Vec<CheckResult>,
    pub summary: Summary,
}

impl Report {
    pub fn new(config: TrialConfig, results: Vec<CheckResult>) -> Self {
        let pass = results.iter().map(|r| r.pass).sum();
        let fail = results.iter().map(|r| r.fail).sum();
        Self {
            schema: REPORT_SCHEMA.into(),
            config,
            results,
            summary: Summary { pass, fail, agree_rate: None },
        }
    }

    pub fn ok(&self) -> bool {
        self.summary.fail == 0
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}
