use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("F_{index} does not fit in 64 bits")]
    Overflow { index: u32 },

    #[error("illegal move {token}: {reason}")]
    IllegalMove { token: String, reason: String },

    #[error("game is over")]
    GameOver,

    #[error("no move available: state is terminal")]
    NoMove,

    #[error("state limit of {cap} exceeded")]
    Capacity { cap: usize },

    #[error("internal invariant violated: {0}")]
    Invariant(String),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }
}
