use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("encoding violation: {0}")]
    Encoding(String),
    #[error("invalid selection: {0}")]
    Selection(String),
    #[error("training failed: {0}")]
    Training(String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("session state: {0}")]
    State(String),
    #[error("not the designer's turn: the current round belongs to the intent agent")]
    WrongTurn,
    #[error("not found: {0}")]
    NotFound(String),
    #[error("invalid level: {0}")]
    InvalidLevel(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}
