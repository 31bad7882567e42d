//! Machine-readable run reports.

use serde::{Deserialize, Serialize};

use crate::catalog::CheckLine;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Pass,
    Fail,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckRecord {
    pub name: String,
    pub status: Status,
    pub witness: Option<String>,
    pub tolerance: Option<f64>,
}

impl CheckRecord {
    pub fn new(name: impl Into<String>, passed: bool, witness: Option<String>, tolerance: Option<f64>) -> Self {
        let status = if passed { Status::Pass } else { Status::Fail };
        CheckRecord { name: name.into(), status, witness, tolerance }
    }

    /// `value <= tol`, with the value as witness.
    pub fn at_most(name: impl Into<String>, value: f64, tol: f64) -> Self {
        CheckRecord::new(name, value <= tol, Some(format!("{value:.3e}")), Some(tol))
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }
}

impl From<CheckLine> for CheckRecord {
    fn from(c: CheckLine) -> Self {
        CheckRecord::new(c.name, c.passed, c.witness, None)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub command: String,
    pub config_hash: String,
    pub checks: Vec<CheckRecord>,
    /// Files written next to the report.
    pub artifacts: Vec<String>,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(CheckRecord::passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckRecord> {
        self.checks.iter().filter(|c| !c.passed())
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// `{"error": "CheckFailed", "command": .., "check": {..}}` for the first failure.
    pub fn first_failure_json(&self) -> Option<String> {
        self.failures().next().map(|c| {
            serde_json::json!({ "error": "CheckFailed", "command": self.command, "check": c }).to_string()
        })
    }
}
