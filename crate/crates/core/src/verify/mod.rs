//! Exhaustive verification suites: correctness over every database, exact
//! `t`-privacy by multiset comparison, and communication audits.

mod audit;
mod correctness;
mod privacy;

pub use audit::{comm_audit, CommAudit};
pub use correctness::{
    basis_correctness, exhaustive_correctness, CorrectnessConfig, CorrectnessFailure,
    CorrectnessMode, CorrectnessReport, Fault, DEFAULT_CORRECTNESS_BUDGET,
};
pub use privacy::{exhaustive_privacy, PrivacyCounterexample, PrivacyReport, SubsetVerdict};

use thiserror::Error;

use crate::foasc::FoascError;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum VerifyError {
    #[error("invalid parameter: {0}")]
    Param(String),
    #[error("{what} needs {size} steps, budget is {budget}")]
    BudgetExceeded {
        what: &'static str,
        size: u128,
        budget: u128,
    },
    #[error("{direction} payload of server {server}: expected {expected} bytes, measured {got}")]
    Mismatch {
        direction: &'static str,
        server: usize,
        expected: usize,
        got: usize,
    },
    #[error(transparent)]
    Foasc(#[from] FoascError),
}

/// Appends `key = value` to `out`.
pub(crate) fn kv_line(out: &mut String, key: &str, value: impl std::fmt::Display) {
    use std::fmt::Write;
    let _ = writeln!(out, "{key} = {value}");
}
