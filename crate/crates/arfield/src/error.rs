//! Error type shared across the library.

use thiserror::Error;

/// Everything that can go wrong in field construction, path generation,
/// estimation, or experiment orchestration.
#[derive(Debug, Error)]
pub enum Error {
    /// A field with all-zero coefficients cannot be sup-normalized.
    #[error("degenerate field: all coefficients are zero")]
    DegenerateField,

    /// A numeric argument violated its documented range.
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// An experiment configuration failed validation; names the offending field.
    #[error("invalid config: field `{field}`: {reason}")]
    InvalidConfig { field: String, reason: String },

    /// The path iteration guard tripped before the path crossed 1.
    #[error("runaway path: no crossing of 1 after {0} steps (misconfigured renewal?)")]
    RunawayPath(usize),

    /// A path statistic was requested on a path with no in-range samples.
    #[error("empty path: no samples in (0, 1]")]
    EmptyPath,

    /// Estimation was attempted with zero samples.
    #[error("no samples: estimation requires at least one reading")]
    NoSamples,

    /// Two coefficient sets with different bandwidths were combined.
    #[error("bandwidth mismatch: expected b={expected}, got b={got}")]
    BandwidthMismatch { expected: u32, got: u32 },

    #[error("I/O error: {0}")]
    Io(#[from] std::io::Error),

    #[error("JSON error: {0}")]
    Json(#[from] serde_json::Error),

    #[error("CSV error: {0}")]
    Csv(#[from] csv::Error),
}

/// Shorthand used by every fallible operation in the crate.
pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Process exit code the CLI maps this error to: 2 for validation
    /// problems the caller can fix in the invocation, 3 for runtime failures.
    pub fn exit_code(&self) -> u8 {
        match self {
            Error::InvalidParameter(_)
            | Error::InvalidConfig { .. }
            | Error::BandwidthMismatch { .. }
            | Error::DegenerateField => 2,
            _ => 3,
        }
    }
}
