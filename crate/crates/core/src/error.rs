use thiserror::Error;

/// Errors raised by the symbolic core.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("cannot parse token `{0}` (expected a<i>, u<i> or u<i>*)")]
    Parse(String),

    #[error("cannot parse rational `{0}`")]
    Rational(String),

    #[error("letter index {index} is outside the declared family count {families}")]
    IndexOutOfRange { index: u16, families: u16 },

    #[error("moment tau(a{index}^{needed}) is needed but the table for a{index} holds {available} moments")]
    MomentDepthExceeded {
        index: u16,
        needed: usize,
        available: usize,
    },

    #[error("word `{0}` contains unitary letters; tau only evaluates deterministic words")]
    NotDetWord(String),

    #[error("joint moment table has no entry for the class of `{0}`")]
    MissingJointMoment(String),

    #[error("order {requested} exceeds the configured cap {cap}")]
    OrderCapExceeded { requested: usize, cap: usize },

    #[error("word of length {length} exceeds the configured degree cap {cap}")]
    DegreeCapExceeded { length: usize, cap: usize },

    #[error("operation needs a numeric tau; the state is formal")]
    FormalModeUnsupported,

    #[error("partition {0} is crossing")]
    CrossingPartition(String),

    #[error(
        "potential is not self-adjoint: {0}; Tr V must be real, so every term needs a term \
         cyclically equivalent to its adjoint under the same label"
    )]
    NotSelfAdjoint(String),

    #[error("multi-index has {got} components, expected {expected}")]
    ArityMismatch { expected: usize, got: usize },

    #[error("invalid configuration: {0}")]
    Config(String),
}

pub type Result<T> = std::result::Result<T, Error>;
