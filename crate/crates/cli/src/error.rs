use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("config line {line}: {message}")]
    Config { line: usize, message: String },
    #[error("{0}")]
    Invalid(String),
    #[error(transparent)]
    Solver(#[from] hyd2d_core::Error),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("writing output: {0}")]
    Csv(#[from] csv::Error),
    #[error("writing output: {0}")]
    Json(#[from] serde_json::Error),
    #[error("writing output: {0}")]
    Write(#[from] std::io::Error),
    #[error("thread pool: {0}")]
    Pool(#[from] rayon::ThreadPoolBuildError),
}

impl CliError {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        CliError::Io {
            path: path.into(),
            source,
        }
    }
}
