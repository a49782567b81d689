use alloc::string::String;

/// Errors produced by the exact evaluation pipeline.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),

    #[error("Beta function needs positive integer arguments, got B({m}, {n})")]
    BetaDomain { m: i64, n: i64 },

    #[error("invalid index split: {0}")]
    InvalidSplit(String),

    #[error("index tuple outside the domain of {family}: {detail}")]
    InvalidIndex {
        family: &'static str,
        detail: String,
    },

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("normalizer D vanishes for this polynomial configuration")]
    DegenerateNormalizer,

    #[error("no admissible c found on the scan interval")]
    NoAdmissiblePoint,

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = core::result::Result<T, Error>;
