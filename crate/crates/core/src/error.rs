use thiserror::Error;

/// Errors produced by game construction, estimation and experiments.
#[derive(Debug, Error)]
pub enum Error {
    #[error("player index {index} out of range for {players} players")]
    PlayerOutOfRange { index: usize, players: usize },

    #[error("coalition capacity {coalition} does not match game with {players} players")]
    CapacityMismatch { coalition: usize, players: usize },

    #[error("game must have at least {min} player(s), got {got}")]
    TooFewPlayers { min: usize, got: usize },

    #[error("{what} supports at most {max} players, got {got}")]
    PlayerCapExceeded {
        what: &'static str,
        max: usize,
        got: usize,
    },

    #[error("utility returned non-finite value {value} at {context}")]
    NonFiniteUtility { value: f64, context: String },

    #[error("sample budget must be {requirement}, got {got}")]
    InvalidBudget { requirement: &'static str, got: u64 },

    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("singular linear system: {0}")]
    Singular(String),

    #[error("empty training set")]
    EmptyTrainingSet,

    #[error("empty holdout set")]
    EmptyHoldout,

    #[error("insufficient rows: need {needed}, have {available}")]
    InsufficientRows { needed: usize, available: usize },

    #[error("csv ingestion failed: {0}")]
    Csv(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn param(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
