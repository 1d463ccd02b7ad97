use std::io;

use thiserror::Error;

use crate::corpus::{ParseError, Sentiment};

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Parse(#[from] ParseError),

    #[error("I/O error: {0}")]
    Io(#[from] io::Error),

    #[error("corpus is empty")]
    EmptyCorpus,

    #[error("no {0} examples in the training data")]
    MissingClass(Sentiment),

    #[error("binary problem needs both classes, found only {0}")]
    SingleClass(&'static str),

    #[error("tweet {0} has no sentiment label")]
    Unlabeled(String),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    Dimension { expected: usize, found: usize },

    #[error("training diverged: objective is not finite")]
    NonFinite,

    #[error("invalid dictionary line {line}: {reason}")]
    Dictionary { line: usize, reason: String },

    #[error("unsupported model format version {found} (this build reads version {supported})")]
    Version { found: u64, supported: u64 },

    #[error("model file checksum mismatch: file is corrupted")]
    Checksum,

    #[error("malformed model file: {0}")]
    ModelFormat(String),

    #[error("degenerate split: class {0} is missing from the {1} side")]
    DegenerateSplit(Sentiment, &'static str),
}
