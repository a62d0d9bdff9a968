//! Uniform pass/fail reports for the identity verifiers.
//!
//! Every `verify_*` entry point returns a `CheckReport`; the CLI serializes
//! them as JSON, and the test suites assert on `pass`.

use serde::Serialize;
use serde_json::Value;

/// Outcome of one identity check.
#[derive(Clone, Debug, Serialize)]
pub struct CheckReport {
    /// Which identity was checked (stable machine-readable name).
    pub identity: String,
    /// Check-specific parameters (partitions, orders, surface names, …).
    pub params: Value,
    pub pass: bool,
    /// Human-readable description of the first mismatch, when `pass` is false.
    #[serde(rename = "firstDiscrepancy")]
    pub first_discrepancy: Option<String>,
}

impl CheckReport {
    pub fn pass(identity: &str, params: Value) -> Self {
        CheckReport { identity: identity.to_string(), params, pass: true, first_discrepancy: None }
    }

    pub fn fail(identity: &str, params: Value, discrepancy: String) -> Self {
        CheckReport {
            identity: identity.to_string(),
            params,
            pass: false,
            first_discrepancy: Some(discrepancy),
        }
    }

    /// Combine sub-reports: pass iff all pass, keeping the first failure.
    pub fn combine(identity: &str, params: Value, parts: &[CheckReport]) -> Self {
        match parts.iter().find(|r| !r.pass) {
            None => Self::pass(identity, params),
            Some(bad) => Self::fail(
                identity,
                params,
                format!(
                    "{} failed: {}",
                    bad.identity,
                    bad.first_discrepancy.as_deref().unwrap_or("(no detail)")
                ),
            ),
        }
    }
}
