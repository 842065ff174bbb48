use thiserror::Error;

/// Errors shared across the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("theta must be a finite non-negative real, got {0}")]
    InvalidTheta(f64),

    #[error("photon-number truncation must be at least 1, got {0}")]
    InvalidTruncation(usize),

    #[error("nonzero detuning ({0}) is not supported; all closed forms assume exact resonance")]
    NonzeroDetuning(f64),

    #[error("weight for photon number {index} must be a finite non-negative real, got {value}")]
    InvalidWeight { index: usize, value: f64 },

    #[error("cannot normalize weights with zero total")]
    ZeroTotalWeight,

    #[error("expected {expected} weights for photon numbers 0..={n_max}, got {actual}")]
    WeightCountMismatch {
        expected: usize,
        actual: usize,
        n_max: usize,
    },

    #[error("prior cap {cap} exceeds the photon-number truncation {n_max}")]
    CapExceedsTruncation { cap: usize, n_max: usize },

    #[error(
        "no photon-number history is consistent with sequence \"{sequence}\" under prior {prior}"
    )]
    EmptySupport { sequence: String, prior: String },

    #[error("completeness enumeration over 2^{length} sequences exceeds the bound of 2^{max}")]
    EnumerationTooLarge { length: usize, max: usize },

    #[error("invalid detection sequence \"{input}\": expected only 'e' or 'g' (position {position})")]
    ParseSequence { input: String, position: usize },

    #[error("invalid theta \"{0}\": expected a non-negative real or the literal \"pi\"")]
    ParseTheta(String),

    #[error("invalid prior \"{spec}\": {reason}")]
    ParsePrior { spec: String, reason: String },

    #[error("unknown figure id \"{0}\" (expected one of 1a, 1b, 2a, 2b, 2c, 3, 4a, 4b)")]
    UnknownFigure(String),

    #[error("verification failed: {check}")]
    VerificationFailed { check: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Process exit code for this error: 1 usage, 2 impossible event,
    /// 3 verification failure.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::EmptySupport { .. } | Error::ZeroTotalWeight => 2,
            Error::VerificationFailed { .. } => 3,
            _ => 1,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
