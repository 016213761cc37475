//! Per-entry verdicts and the structured report shared by every check kind.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::congruence::{CaseReport, IntegralityReport};
use crate::series::SeriesDiagnostics;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Verdict {
    Pass {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        digits: Option<u32>,
    },
    Fail {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        digits: Option<u32>,
    },
    Inconclusive {
        reason: String,
    },
    Skip {
        reason: String,
    },
}

impl Verdict {
    pub fn label(&self) -> &'static str {
        match self {
            Verdict::Pass { .. } => "PASS",
            Verdict::Fail { .. } => "FAIL",
            Verdict::Inconclusive { .. } => "INCONCLUSIVE",
            Verdict::Skip { .. } => "SKIP",
        }
    }

    pub fn is_pass(&self) -> bool {
        matches!(self, Verdict::Pass { .. })
    }

    pub fn is_fail(&self) -> bool {
        matches!(self, Verdict::Fail { .. })
    }

    pub fn is_inconclusive(&self) -> bool {
        matches!(self, Verdict::Inconclusive { .. })
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::Pass { digits: Some(d) } => write!(f, "PASS({d})"),
            Verdict::Fail { digits: Some(d) } => write!(f, "FAIL({d})"),
            Verdict::Pass { digits: None } => write!(f, "PASS"),
            Verdict::Fail { digits: None } => write!(f, "FAIL"),
            Verdict::Inconclusive { .. } => write!(f, "INCONCLUSIVE"),
            Verdict::Skip { reason } => write!(f, "SKIP({reason})"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub id: String,
    pub verdict: Verdict,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lhs: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rhs: Option<String>,
    /// Upper bound on |lhs - rhs|.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub diff_bound: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub diagnostics: Option<SeriesDiagnostics>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub primes: Vec<CaseReport>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub indices: Vec<IntegralityReport>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub anomalies: Vec<String>,
    /// Wall-clock time; excluded from serialized output so reports are reproducible.
    #[serde(skip)]
    pub elapsed_ms: u128,
    #[serde(skip)]
    pub cached: bool,
}

impl VerificationReport {
    pub fn new(id: impl Into<String>, verdict: Verdict) -> Self {
        VerificationReport {
            id: id.into(),
            verdict,
            lhs: None,
            rhs: None,
            diff_bound: None,
            diagnostics: None,
            detail: None,
            primes: Vec::new(),
            indices: Vec::new(),
            anomalies: Vec::new(),
            elapsed_ms: 0,
            cached: false,
        }
    }
}
