use thiserror::Error;

use crate::intervals::IntervalSet;

/// Text-format parse failure, with the byte offset where parsing stopped.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("parse error at position {position}: {message}")]
pub struct ParseError {
    pub position: usize,
    pub message: String,
}

impl ParseError {
    pub(crate) fn new(position: usize, message: impl Into<String>) -> Self {
        Self {
            position,
            message: message.into(),
        }
    }
}

#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error(transparent)]
    Parse(#[from] ParseError),

    #[error("affine map with zero scale")]
    ZeroScale,

    #[error("set {0} is not contained in [0,1)")]
    OutsideUnitInterval(IntervalSet),

    #[error("wavelet set is empty")]
    EmptyWaveletSet,

    #[error("{0} is not a Parseval wavelet set")]
    NotParseval(IntervalSet),

    #[error("scaling set iteration did not close after {iterations} iterations")]
    NonClosingScalingSet { iterations: usize },

    #[error("scaling set {0} is not translation simple (not an MRA wavelet set)")]
    NotMra(IntervalSet),

    #[error("{0} is not translation congruent to [0,1)")]
    NotTranslationCongruent(IntervalSet),

    #[error("invalid completion set: {reason} (offending set {offending})")]
    InvalidCompletion {
        reason: &'static str,
        offending: IntervalSet,
    },

    #[error("filter {0} does not satisfy the QMF condition")]
    NotQmf(IntervalSet),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("run of {length} equal digits starting at index {start} (limit {limit})")]
    RunTooLong {
        start: usize,
        length: usize,
        limit: usize,
    },

    #[error("partition piece {piece} is not subordinated to the filter; counterexample {counterexample}")]
    NotSubordinated {
        piece: IntervalSet,
        counterexample: IntervalSet,
    },

    #[error("invalid partition: {0}")]
    InvalidPartition(String),

    #[error("no subordinated partition found within {splits} splits")]
    Unpartitionable { splits: usize },

    #[error("inconsistent partition graph: {0}")]
    InconsistentGraph(String),

    #[error("word {0} does not end in a constant tail")]
    NotConstantTail(String),

    #[error("word {word} does not end in a rotation of cycle {cycle}")]
    NotCycleTail { word: String, cycle: String },

    #[error("cycle {0} is constant; use the integer encoding instead")]
    ConstantCycle(String),

    #[error("path {0} ends in none of the listed cycles")]
    UnresolvedPath(String),

    #[error("internal error: {0}")]
    Internal(String),
}

impl Error {
    /// Stable name of the variant, for machine-readable error output.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Parse(_) => "Parse",
            Error::ZeroScale => "ZeroScale",
            Error::OutsideUnitInterval(_) => "OutsideUnitInterval",
            Error::EmptyWaveletSet => "EmptyWaveletSet",
            Error::NotParseval(_) => "NotParseval",
            Error::NonClosingScalingSet { .. } => "NonClosingScalingSet",
            Error::NotMra(_) => "NotMra",
            Error::NotTranslationCongruent(_) => "NotTranslationCongruent",
            Error::InvalidCompletion { .. } => "InvalidCompletion",
            Error::NotQmf(_) => "NotQmf",
            Error::Precondition(_) => "Precondition",
            Error::RunTooLong { .. } => "RunTooLong",
            Error::NotSubordinated { .. } => "NotSubordinated",
            Error::InvalidPartition(_) => "InvalidPartition",
            Error::Unpartitionable { .. } => "Unpartitionable",
            Error::InconsistentGraph(_) => "InconsistentGraph",
            Error::NotConstantTail(_) => "NotConstantTail",
            Error::NotCycleTail { .. } => "NotCycleTail",
            Error::ConstantCycle(_) => "ConstantCycle",
            Error::UnresolvedPath(_) => "UnresolvedPath",
            Error::Internal(_) => "Internal",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
