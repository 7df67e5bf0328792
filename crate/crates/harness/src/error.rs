use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("line {line}: expected `key = value`, got `{text}`")]
    Syntax { line: usize, text: String },
    #[error("line {line}: unknown key `{key}`")]
    UnknownKey { line: usize, key: String },
    #[error("line {line}: key `{key}` given twice")]
    DuplicateKey { line: usize, key: String },
    #[error("invalid value `{value}` for `{key}`: {reason}")]
    InvalidValue { key: String, value: String, reason: String },
    #[error("invalid `{field}`: {reason}")]
    InvalidConfig { field: &'static str, reason: String },
    #[error("{path}: malformed csv at line {line}: {reason}")]
    Csv { path: PathBuf, line: usize, reason: String },
    #[error("every run of `{algorithm}` diverged")]
    AllRunsDiverged { algorithm: String },
    #[error(transparent)]
    Core(#[from] jointrank_core::Error),
}

pub type Result<T> = std::result::Result<T, HarnessError>;
