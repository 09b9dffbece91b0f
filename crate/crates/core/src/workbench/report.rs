//! Suite reports. Everything here serializes deterministically: no
//! timings, no hash-ordered maps.

use serde::Serialize;
use serde_json::Value;

use super::RunParams;

/// Outcome of one check.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Skipped,
}

#[derive(Clone, Debug, Serialize)]
pub struct CheckRecord {
    /// Corpus entry the check ran on.
    pub entry: String,
    pub name: String,
    pub status: Status,
    /// Why a check was skipped, or what went wrong.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
    /// Values the verdict rests on.
    pub evidence: Value,
}

impl CheckRecord {
    pub fn new(entry: &str, name: impl Into<String>, ok: bool, evidence: Value) -> Self {
        CheckRecord {
            entry: entry.to_string(),
            name: name.into(),
            status: if ok { Status::Pass } else { Status::Fail },
            reason: None,
            evidence,
        }
    }

    pub fn skipped(entry: &str, name: impl Into<String>, reason: impl Into<String>) -> Self {
        CheckRecord { entry: entry.to_string(), name: name.into(), status: Status::Skipped, reason: Some(reason.into()), evidence: Value::Null }
    }

    /// A check that could not run because the computation failed.
    pub fn error(entry: &str, name: impl Into<String>, err: &crate::Error) -> Self {
        CheckRecord { entry: entry.to_string(), name: name.into(), status: Status::Fail, reason: Some(err.to_string()), evidence: Value::Null }
    }

    pub fn with_reason(mut self, reason: impl Into<String>) -> Self {
        self.reason = Some(reason.into());
        self
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }
}

/// Result of one verification suite.
#[derive(Clone, Debug, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    /// The statement the suite exercises, in words.
    pub statement: String,
    pub params: RunParams,
    pub seeds: Vec<u64>,
    pub passed: usize,
    pub failed: usize,
    pub skipped: usize,
    pub checks: Vec<CheckRecord>,
    /// What the suite cannot certify at this scale.
    pub limitations: Vec<String>,
}

impl SuiteReport {
    pub fn new(suite: &str, statement: &str, params: &RunParams, checks: Vec<CheckRecord>) -> Self {
        let count = |s: Status| checks.iter().filter(|c| c.status == s).count();
        SuiteReport {
            suite: suite.to_string(),
            statement: statement.to_string(),
            params: params.clone(),
            seeds: vec![params.seed],
            passed: count(Status::Pass),
            failed: count(Status::Fail),
            skipped: count(Status::Skipped),
            checks,
            limitations: Vec::new(),
        }
    }

    pub fn with_seeds(mut self, seeds: Vec<u64>) -> Self {
        self.seeds = seeds;
        self
    }

    pub fn with_limitation(mut self, note: impl Into<String>) -> Self {
        self.limitations.push(note.into());
        self
    }

    pub fn ok(&self) -> bool {
        self.failed == 0
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckRecord> {
        self.checks.iter().filter(|c| c.status == Status::Fail)
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }
}
