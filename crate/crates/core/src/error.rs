use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error(
        "numerical non-convergence in {what}: relative change {relative_change:.3e} exceeds {tolerance:.1e}"
    )]
    NonConvergence {
        what: String,
        relative_change: f64,
        tolerance: f64,
    },

    #[error("grid too small: {0}")]
    GridTooSmall(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}
