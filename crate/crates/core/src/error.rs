use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("syntax error at position {position}: {message}")]
    Syntax { position: usize, message: String },

    #[error("invalid distribution: {0}")]
    InvalidDistribution(String),

    #[error("moment E[Y^{order}] unavailable: custom sequence supplies orders 0..{available}")]
    MomentUnavailable { order: usize, available: usize },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("series did not converge within {cap} terms (last term magnitude {last_term:e})")]
    NonConvergence { cap: usize, last_term: f64 },

    #[error("unknown identity id `{0}`")]
    UnknownIdentity(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
