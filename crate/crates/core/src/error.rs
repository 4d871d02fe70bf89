use thiserror::Error;

/// Errors produced across the protocol stack.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid encoding: {0}")]
    Encoding(&'static str),
    #[error("point is not on the curve")]
    NotOnCurve,
    #[error("identity point where a non-degenerate point is required")]
    IdentityPoint,
    #[error("zero scalar has no inverse")]
    ZeroInverse,
    #[error("length mismatch: expected {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("duplicate or zero interpolation point")]
    BadInterpolationPoints,
    #[error("invalid threshold {threshold} for {shares} shares")]
    InvalidThreshold { threshold: usize, shares: usize },
    #[error("not enough shares: need {needed}, got {got}")]
    NotEnoughShares { needed: usize, got: usize },
    #[error("authentication tag mismatch")]
    Integrity,
    #[error("signature verification failed")]
    BadSignature,
    #[error("timestamp {timestamp} outside freshness window at {now}")]
    StaleTimestamp { timestamp: u64, now: u64 },
    #[error("request replayed")]
    Replay,
    #[error("empty batch")]
    EmptyBatch,
    #[error("batch mixes accident identifiers")]
    MixedAccident,
    #[error("access denied: policy attribute {0} not held")]
    AccessDenied(usize),
    #[error("decryption check failed: wrong warrant or corrupted record")]
    VerificationFailed,
    #[error("malformed padding")]
    Padding,
    #[error("leaked bytes do not decode to a credential pair")]
    MalformedLeak,
    #[error("unknown pseudonym")]
    UnknownPseudonym,
    #[error("inconsistent issuance: partial warrants disagree")]
    InconsistentIssuance,
    #[error("missing contribution from warrant issuer {0}")]
    MissingContribution(usize),
    #[error("index {index} out of range 1..={max}")]
    IndexOutOfRange { index: usize, max: usize },
    #[error("unknown entity: {0}")]
    UnknownEntity(String),
    #[error("record not found")]
    RecordNotFound,
    #[error("investigator holds no warrant")]
    NoWarrant,
    #[error("message dropped in transit")]
    Dropped,
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("i/o: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
