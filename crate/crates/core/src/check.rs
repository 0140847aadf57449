//! Named pass/fail assertions with optional machine-readable witnesses.

use serde::{Deserialize, Serialize};
use serde_json::Value;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<Value>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

impl Check {
    pub fn pass(name: impl Into<String>) -> Self {
        Check {
            name: name.into(),
            passed: true,
            witness: None,
            detail: None,
        }
    }

    pub fn fail(name: impl Into<String>, witness: Value) -> Self {
        Check {
            name: name.into(),
            passed: false,
            witness: Some(witness),
            detail: None,
        }
    }

    /// Pass iff `witness` is `None`.
    pub fn from_witness(name: impl Into<String>, witness: Option<Value>) -> Self {
        match witness {
            None => Check::pass(name),
            Some(w) => Check::fail(name, w),
        }
    }

    pub fn with_detail(mut self, detail: impl Into<String>) -> Self {
        self.detail = Some(detail.into());
        self
    }
}

pub fn all_pass(checks: &[Check]) -> bool {
    checks.iter().all(|c| c.passed)
}
