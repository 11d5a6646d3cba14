//! Numerical tolerances shared by both engines and their tests.

/// Budget for a single operation (one step, one closed-form evaluation).
pub const SINGLE_OP: f64 = 1e-12;

/// Budget accumulated over up to a thousand iterated steps.
pub const ACCUMULATED: f64 = 1e-10;

/// Normalization tolerance for freshly constructed states.
pub const STATE_NORM: f64 = 1e-10;

/// Normalization tolerance applied when ingesting states from files.
pub const INGEST_NORM: f64 = 1e-8;

/// Relative size of `Im(k̄·conj(l̄))` below which the ratio of initial
/// averages is treated as real.
pub const REAL_RATIO: f64 = 1e-9;

/// Slack on the success probability before it is reported out of `[0, 1]`.
pub const PROBABILITY_SLACK: f64 = 1e-10;
