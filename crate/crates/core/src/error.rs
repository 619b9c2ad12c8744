use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),
    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
    #[error("invalid geometry: {0}")]
    Geometry(String),
    #[error("invalid input: {0}")]
    Input(String),
    #[error("planning failed: {0}")]
    Planning(String),
}

pub type Result<T> = std::result::Result<T, Error>;
