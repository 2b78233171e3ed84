//! Structured verification and comparison reports.

use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

/// Outcome of one identity instance. `status` is `Pass` exactly when
/// `witness` is absent.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub name: String,
    pub params: String,
    pub status: Status,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
    #[serde(default)]
    pub millis: u64,
}

impl VerificationReport {
    pub fn new(name: &str, params: String, witness: Option<String>, millis: u64) -> Self {
        VerificationReport {
            name: name.to_string(),
            params,
            status: if witness.is_none() {
                Status::Pass
            } else {
                Status::Fail
            },
            witness,
            millis,
        }
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }
}

/// One degree of a conjecture comparison table.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConjectureRow {
    pub degree: usize,
    pub lhs: usize,
    pub rhs: usize,
    pub agree: bool,
}

/// Degree-by-degree comparison of two computed dimension series. Agreement
/// is reported, never asserted.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConjectureReport {
    pub which: String,
    pub system: String,
    pub lhs_label: String,
    pub rhs_label: String,
    pub rows: Vec<ConjectureRow>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

impl ConjectureReport {
    pub fn all_agree(&self) -> bool {
        self.rows.iter().all(|r| r.agree)
    }
}

/// Machine-readable output of one CLI run.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunReport {
    pub command: String,
    pub params: BTreeMap<String, String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub degrees: Vec<usize>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub dims: Vec<usize>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub identities: Vec<VerificationReport>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub table: Option<ConjectureReport>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

impl RunReport {
    pub fn new(command: &str) -> Self {
        RunReport {
            command: command.to_string(),
            params: BTreeMap::new(),
            degrees: Vec::new(),
            dims: Vec::new(),
            identities: Vec::new(),
            table: None,
            notes: Vec::new(),
        }
    }

    pub fn with_param(mut self, key: &str, value: impl ToString) -> Self {
        self.params.insert(key.to_string(), value.to_string());
        self
    }
}
