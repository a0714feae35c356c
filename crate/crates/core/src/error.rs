use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid rim: {0}")]
    InvalidRim(String),
    #[error("rims live in different ambient spaces: ({0},{1}) vs ({2},{3})")]
    MismatchedAmbient(u32, u32, u32, u32),
    #[error("rim {0} is not almost consecutive")]
    NotAlmostConsecutive(String),
    #[error("computation is not stable at truncation level {0}")]
    TruncationUnstable(u32),
    #[error("input module is projective")]
    ProjectiveInput,
    #[error("module is not of rank one (rank {0})")]
    NotRankOne(usize),
    #[error("embedding failed: {0}")]
    EmbeddingFailure(String),
    #[error("argument out of range: {0}")]
    OutOfRange(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
