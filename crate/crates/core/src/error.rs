use thiserror::Error;

use crate::violation::Violation;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,

    #[error("unknown label `{0}`")]
    UnknownLabel(String),

    #[error("power iteration did not converge after {0} steps")]
    NonConvergent(usize),

    #[error("label set is not closed under fusion and duals: {0}")]
    NotASubcategory(String),

    #[error("could not separate character eigenvalues after {retries} retries (seed {seed})")]
    DegenerateEigenproblem { retries: usize, seed: u64 },

    #[error("datum is not slightly degenerate (classification: {0})")]
    NotSlightlyDegenerate(String),

    #[error("cross-check mismatch: {0}")]
    CrossCheckMismatch(String),

    #[error("group of order {order} exceeds the cap of {cap}")]
    GroupsTooLarge { order: usize, cap: usize },

    #[error("unknown catalog key `{key}`; valid keys: {}", valid.join(", "))]
    UnknownCatalogKey { key: String, valid: Vec<String> },

    #[error("parse error: {0}")]
    Parse(String),

    #[error("validation failed with {} violation(s): {}", .0.len(), summarize(.0))]
    Validation(Vec<Violation>),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

fn summarize(violations: &[Violation]) -> String {
    let mut parts: Vec<String> = violations.iter().take(5).map(|v| v.to_string()).collect();
    if violations.len() > 5 {
        parts.push(format!("... and {} more", violations.len() - 5));
    }
    parts.join("; ")
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse(e.to_string())
    }
}
