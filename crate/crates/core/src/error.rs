use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("matrix is singular")]
    SingularMatrix,
    #[error("lattice is not invariant under the action")]
    LatticeNotInvariant,
    #[error("action is not invertible on the quotient")]
    NonInvertibleAction,
    #[error("ball size exceeded cap of {cap} elements")]
    CapExceeded { cap: usize },
    #[error("element lies beyond the ball radius {radius}")]
    BeyondRadius { radius: usize },
    #[error("domain error: {0}")]
    DomainError(String),
    #[error("hypothesis violated: {0}")]
    HypothesisViolated(String),
    #[error("search exhausted before a decision was reached")]
    SearchExhausted,
    #[error("table is empty")]
    EmptyTable,
    #[error("invalid group configuration: {0}")]
    InvalidConfig(String),
    #[error("parse error at position {position}: {message}")]
    Parse { position: usize, message: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
