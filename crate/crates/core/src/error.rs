use std::io;
use std::path::PathBuf;

use thiserror::Error;

use crate::words::IndexWord;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid index word: {0}")]
    InvalidWord(String),

    #[error("{0} is not admissible (leading index must be at least 2)")]
    NotAdmissible(IndexWord),

    #[error("words {0} and {1} have different weights")]
    WeightMismatch(IndexWord, IndexWord),

    #[error("binary word {0} has no index decomposition (must end with Y)")]
    BinaryDecode(String),

    #[error("cannot extend {word} with n = {n}: {reason}")]
    Extension {
        word: IndexWord,
        n: i64,
        reason: &'static str,
    },

    #[error("cannot collapse {word}: {reason}")]
    Collapse {
        word: IndexWord,
        reason: &'static str,
    },

    #[error("unknown relation kind `{0}` (expected stuffle, shuffle, hoffman or duality)")]
    UnknownRelationKind(String),

    #[error("configuration error: {0}")]
    Config(String),

    #[error("family {family} is under-determined: cannot express {word}")]
    UnderDetermined { family: String, word: IndexWord },

    #[error("inconsistent relation system ({context}): 0 = {residue}")]
    Inconsistent { context: String, residue: String },

    #[error("internal error: {0} selected twice as pivot")]
    DuplicatePivot(IndexWord),

    #[error("no table entry or generator for {0}")]
    Unresolved(IndexWord),

    #[error("missing table for weight {0}")]
    MissingTable(u32),

    #[error("content hash mismatch for {path}: manifest says {expected}, file hashes to {actual}")]
    HashMismatch {
        path: PathBuf,
        expected: String,
        actual: String,
    },

    #[error("checkpoint {path} does not match this run: {reason}")]
    CheckpointMismatch { path: PathBuf, reason: String },

    #[error("parse error in {source_name} line {line}: {message}")]
    Parse {
        source_name: String,
        line: usize,
        message: String,
    },

    #[error("run halted after checkpoint")]
    Halted,

    #[error("I/O error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: io::Error,
    },
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub(crate) fn parse(source_name: impl Into<String>, line: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            source_name: source_name.into(),
            line,
            message: message.into(),
        }
    }
}
