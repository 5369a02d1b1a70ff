use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// Invalid model parameters, unknown ids, malformed scenarios.
    #[error("config error: {0}")]
    Config(String),

    #[error("not applicable: {0}")]
    NotApplicable(String),

    #[error("operator is not Hermitian (deviation {0:.3e})")]
    NonHermitian(f64),

    #[error("representations are inequivalent (smallest singular value {0:.3e})")]
    Inequivalent(f64),

    #[error("spinor field vanishes identically")]
    ZeroSpinor,

    #[error("numerical failure: {0}")]
    Numerical(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    pub fn config(msg: impl Into<String>) -> Self {
        Error::Config(msg.into())
    }

    pub fn not_applicable(msg: impl Into<String>) -> Self {
        Error::NotApplicable(msg.into())
    }
}
