use std::io;

#[derive(Debug, thiserror::Error)]
pub enum LabError {
    #[error(transparent)]
    Core(#[from] isobound_core::Error),
    #[error("{path}: {source}")]
    Io { path: String, source: io::Error },
    #[error("OFF line {line}: {msg}")]
    Off { line: usize, msg: String },
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error("{0}")]
    Usage(String),
}

impl LabError {
    pub fn io(path: impl Into<String>, source: io::Error) -> Self {
        LabError::Io { path: path.into(), source }
    }
}

pub type Result<T> = std::result::Result<T, LabError>;
