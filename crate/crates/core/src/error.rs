use thiserror::Error;

/// Errors raised by the series, combinatorics and trace layers.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("series has zero leading coefficient (not a unit)")]
    NotAUnit,
    #[error("s = t^(1/2) must be nonzero")]
    ZeroS,
    #[error("invalid t-point s = {0}: t = s^2 must differ from 0 and 1")]
    InvalidTPoint(String),
    #[error("subset product of t equals 1 for points {0:?}")]
    SubsetProductOne(Vec<usize>),
    #[error("length mismatch: expected {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("lambda must be weakly decreasing: {0:?}")]
    NotDecreasing(Vec<i64>),
    #[error("level must be positive")]
    ZeroLevel,
    #[error("truncation order must be positive, got order8 = {0}")]
    BadOrder(i64),
    #[error(
        "cutoff too small: entries of {entries:?} exceed the resolvable range [-{bound}, {bound}]"
    )]
    CutoffTooSmall { entries: Vec<i64>, bound: i64 },
    #[error("support entry {entry} lies outside table bounds [{lo}, {hi}]")]
    OutOfTableBounds { entry: i64, lo: i64, hi: i64 },
    #[error("integer overflow in {0}")]
    Overflow(&'static str),
    #[error("unknown identity id `{0}`")]
    UnknownIdentity(String),
    #[error("invalid parameter `{field}`: {reason}")]
    InvalidParameter { field: &'static str, reason: String },
    #[error("inconsistent result: {0}")]
    Inconsistent(String),
}

pub type Result<T> = std::result::Result<T, Error>;
