use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("contract violation: {0}")]
    Contract(String),

    /// Two routes that must agree did not. Seeing this means a theorem
    /// the crate relies on was falsified on the given instance.
    #[error("internal consistency failure: {0}")]
    Consistency(String),

    #[error("sign pattern is not realizable by an affine hyperplane")]
    NotRealizable,

    #[error("inconsistent bound table: {0}")]
    InconsistentTable(String),

    #[error("search space of {needed} candidates exceeds the cap of {cap}")]
    SearchCap { needed: u128, cap: u128 },

    #[error("certificate schema error: {0}")]
    Schema(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn input(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }
}
