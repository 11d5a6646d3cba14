use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid search geometry: {0}")]
    InvalidConfig(String),

    #[error("marked index {index} out of range for N={n}")]
    IndexOutOfRange { index: u64, n: u64 },

    #[error("amplitude vector has length {got}, expected N={expected}")]
    LengthMismatch { got: usize, expected: usize },

    #[error("state norm {norm:.17} deviates from 1 by more than {tolerance:e}")]
    NormViolation { norm: f64, tolerance: f64 },

    #[error("summary statistics are inconsistent with a normalized state: {0}")]
    InconsistentSummary(String),

    #[error("phase form needs a real ratio of initial averages; use the numeric planner")]
    ComplexRatio,

    #[error("the expansion of the optimal time is undefined when the unmarked average vanishes")]
    VanishingUnmarkedAverage,

    #[error(
        "operation requires per-state deviations; solution was built from summary statistics only"
    )]
    ScalarOnly,

    #[error("invalid distribution: {0}")]
    InvalidDistribution(String),

    #[error("sampling produced a zero vector after {attempts} attempts")]
    DegenerateSample { attempts: u32 },

    #[error("malformed state document: {0}")]
    Malformed(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
