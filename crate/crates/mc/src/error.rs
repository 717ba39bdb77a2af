use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum McError {
    #[error("word uses {what} {index}, but the ensemble declares {available}")]
    DimensionMismatch {
        what: &'static str,
        index: u16,
        available: usize,
    },

    #[error("Metropolis acceptance rate {rate:.3} is outside [0.1, 0.9] after step-size tuning")]
    AcceptanceRateOutOfRange { rate: f64 },

    #[error("invalid ensemble configuration: {0}")]
    Config(String),

    #[error(transparent)]
    Core(#[from] loopeq_core::Error),
}

pub type Result<T> = std::result::Result<T, McError>;
