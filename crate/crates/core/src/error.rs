use std::path::PathBuf;

use thiserror::Error;

/// Errors raised by graph construction, embedding, entropy and file handling.
#[derive(Debug, Error)]
pub enum SampEnError {
    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("signal has {found} values but the graph has {expected} nodes")]
    SignalLength { expected: usize, found: usize },

    #[error("signal value at node {node} is not finite")]
    NonFiniteSignal { node: usize },

    #[error("non-finite walk weight in hop {hop} at row {row}")]
    NonFinitePower { hop: usize, row: usize },

    #[error("node {node} has zero {hop}-hop degree")]
    ZeroHopDegree { node: usize, hop: usize },

    #[error("no valid patterns: every node lacks a walk of some length 1..={m}")]
    NoValidPatterns { m: usize },

    #[error("insufficient patterns: {n_valid} valid node(s), at least 2 are required")]
    InsufficientPatterns { n_valid: usize },

    #[error("series of length {len} is too short for m = {m} (need at least {needed})")]
    SeriesTooShort { len: usize, m: usize, needed: usize },

    #[error("vector length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },

    #[error("{path}: line {line}: {message}")]
    Parse {
        path: PathBuf,
        line: usize,
        message: String,
    },

    #[error("{path}: {message}")]
    Format { path: PathBuf, message: String },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("csv output failed: {0}")]
    Csv(#[from] csv::Error),
}

impl SampEnError {
    /// True for errors caused by degenerate inputs rather than malformed ones:
    /// the graph/signal pair is valid but yields too few patterns to match.
    pub fn is_insufficient_patterns(&self) -> bool {
        matches!(
            self,
            SampEnError::NoValidPatterns { .. } | SampEnError::InsufficientPatterns { .. }
        )
    }
}

pub type Result<T> = std::result::Result<T, SampEnError>;
