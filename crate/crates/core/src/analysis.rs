use thiserror::Error;

use crate::corpus::CorpusError;

#[derive(Debug, Error)]
pub enum AnalysisError {
    #[error("word length must be at least 3, got {0}")]
    LengthTooSmall(usize),
    #[error("word {0:?} is too short to scramble")]
    Ineligible(String),
    #[error("word of length {0} has too many interior orderings to enumerate")]
    TooLongToEnumerate(usize),
    #[error("need at least one trial")]
    NoTrials,
    #[error("corpus contains no words")]
    EmptyCorpus,
    #[error("corpora diverge at record {index}: {reason}")]
    Misaligned { index: u64, reason: String },
    #[error("malformed merge table at line {line}: {reason}")]
    MalformedTable { line: usize, reason: String },
    #[error(transparent)]
    Corpus(#[from] CorpusError),
}
