use std::fmt;

use serde::Serialize;

/// Outcome of one machine-checked property on one instance.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Verdict {
    pub check: String,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
}

impl Verdict {
    pub fn pass(check: impl Into<String>) -> Self {
        Verdict {
            check: check.into(),
            passed: true,
            witness: None,
        }
    }

    pub fn fail(check: impl Into<String>, witness: impl Into<String>) -> Self {
        Verdict {
            check: check.into(),
            passed: false,
            witness: Some(witness.into()),
        }
    }

    /// `pass` when `witness` is `None`.
    pub fn from_witness(check: impl Into<String>, witness: Option<String>) -> Self {
        match witness {
            None => Verdict::pass(check),
            Some(w) => Verdict::fail(check, w),
        }
    }

    pub fn check(check: impl Into<String>, ok: bool, witness: impl FnOnce() -> String) -> Self {
        if ok {
            Verdict::pass(check)
        } else {
            Verdict::fail(check, witness())
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mark = if self.passed { "PASS" } else { "FAIL" };
        match &self.witness {
            Some(w) => write!(f, "{mark} {} ({w})", self.check),
            None => write!(f, "{mark} {}", self.check),
        }
    }
}

pub fn all_passed(verdicts: &[Verdict]) -> bool {
    verdicts.iter().all(|v| v.passed)
}

pub fn first_failure(verdicts: &[Verdict]) -> Option<&Verdict> {
    verdicts.iter().find(|v| !v.passed)
}
