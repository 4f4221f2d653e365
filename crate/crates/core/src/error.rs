use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("degenerate triangle (zero area)")]
    Degenerate,
    #[error("segments are not parallel")]
    NotParallel,
    #[error("points are not in trapezoid order")]
    NotTrapezoidOrder,
    #[error("coordinate {0} exceeds the supported range")]
    CoordinateRange(i64),
    #[error("segment [{lo}, {hi}] is shorter than 7")]
    SegmentTooShort { lo: String, hi: String },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("no witness for q = {q}, eps = {eps}")]
    NoWitness { q: String, eps: String },
    #[error("search cap of {cap} exceeded: {what}")]
    CapExceeded { cap: u64, what: String },
    #[error("enumeration budget exhausted; S <= {partial_bound} is all that is known")]
    Budget { partial_bound: u64 },
    #[error("certificate check failed: {0}")]
    CheckFailed(String),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
