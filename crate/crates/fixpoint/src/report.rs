//! JSON check reports produced by `fixpoint classify`.

use fixpoint_core::classes::{CheckReport, Verdict, Violation};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum VerdictOut {
    Pass,
    Fail,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ViolationOut {
    pub n: u64,
    pub witness: Vec<Vec<f64>>,
    pub lhs: f64,
    pub rhs: f64,
}

impl From<&Violation> for ViolationOut {
    fn from(v: &Violation) -> Self {
        ViolationOut {
            n: v.n,
            witness: v.witness.iter().map(|p| p.coords().to_vec()).collect(),
            lhs: v.lhs,
            rhs: v.rhs,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckSection {
    pub check: String,
    pub verdict: VerdictOut,
    /// Configured horizon `n_max` (1 for single-power checks).
    pub horizon: u64,
    /// Powers actually evaluated before the verdict.
    pub n_tested: u64,
    pub samples_tested: usize,
    pub seed: u64,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub estimate: Option<f64>,
    pub first_violation: Option<ViolationOut>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub note: Option<String>,
    /// Set when the check could not be evaluated (e.g. `x*` is not fixed).
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub error: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub residual: Option<f64>,
}

impl CheckSection {
    pub fn from_report(check: &str, horizon: u64, seed: u64, r: &CheckReport) -> Self {
        CheckSection {
            check: check.to_string(),
            verdict: match r.verdict {
                Verdict::Pass => VerdictOut::Pass,
                Verdict::Fail => VerdictOut::Fail,
            },
            horizon,
            n_tested: r.n_tested,
            samples_tested: r.samples_tested,
            seed,
            estimate: None,
            first_violation: r.first_violation.as_ref().map(ViolationOut::from),
            note: r.note.map(String::from),
            error: None,
            residual: None,
        }
    }

    pub fn errored(
        check: &str,
        horizon: u64,
        seed: u64,
        error: String,
        residual: Option<f64>,
    ) -> Self {
        CheckSection {
            check: check.to_string(),
            verdict: VerdictOut::Fail,
            horizon,
            n_tested: 0,
            samples_tested: 0,
            seed,
            estimate: None,
            first_violation: None,
            note: None,
            error: Some(error),
            residual,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassifyReport {
    pub schema_version: u32,
    pub seed: u64,
    pub seed_source: String,
    pub norm_p: f64,
    pub operator: String,
    pub all_passed: bool,
    pub checks: Vec<CheckSection>,
}
