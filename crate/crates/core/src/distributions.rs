//! Initial amplitude distributions.
//!
//! Random kinds draw from ChaCha8 seeded with the 64-bit seed, so a given
//! spec always produces the same bytes. The generator and its version are
//! recorded in [`RNG_ALGORITHM`] and stamped into generated documents.

use std::fmt;
use std::io::Read;
use std::path::Path;
use std::sync::Arc;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use crate::config::SearchConfig;
use crate::error::{Error, Result};
use crate::io::{GeneratorInfo, IngestOptions, StateDocument};
use crate::state::AmplitudeState;

pub const RNG_ALGORITHM: &str = "chacha8/rand_chacha-0.9/v1";

/// Extra attempts, with the seed incremented each time, before giving up on
/// a sample that normalizes to nothing.
const MAX_RESAMPLES: u32 = 3;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum DistributionKind {
    Uniform,
    Delta {
        target: usize,
    },
    /// Each amplitude uniform on `[-1, 1)` before normalization.
    RandomReal,
    /// Real and imaginary parts independently uniform on `[-1, 1)`.
    RandomComplex,
    GaussianReal {
        mean: f64,
        spread: f64,
    },
}

impl DistributionKind {
    pub fn name(&self) -> &'static str {
        match self {
            Self::Uniform => "uniform",
            Self::Delta { .. } => "delta",
            Self::RandomReal => "random-real",
            Self::RandomComplex => "random-complex",
            Self::GaussianReal { .. } => "gaussian-real",
        }
    }

    /// Whether the seed affects the output.
    pub fn is_random(&self) -> bool {
        matches!(
            self,
            Self::RandomReal | Self::RandomComplex | Self::GaussianReal { .. }
        )
    }
}

impl fmt::Display for DistributionKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Debug)]
pub struct DistributionSpec {
    pub kind: DistributionKind,
    pub config: Arc<SearchConfig>,
    pub seed: u64,
}

impl DistributionSpec {
    pub fn new(kind: DistributionKind, config: impl Into<Arc<SearchConfig>>, seed: u64) -> Self {
        Self {
            kind,
            config: config.into(),
            seed,
        }
    }

    fn validate(&self) -> Result<()> {
        match self.kind {
            DistributionKind::Delta { target } if target >= self.config.n_states() => {
                Err(Error::InvalidDistribution(format!(
                    "delta target {target} out of range for N={}",
                    self.config.n_states()
                )))
            }
            DistributionKind::GaussianReal { mean, spread } if !(spread > 0.0 && spread.is_finite() && mean.is_finite()) => {
                Err(Error::InvalidDistribution(format!(
                    "gaussian needs finite mean and positive spread, got mean={mean} spread={spread}"
                )))
            }
            _ => Ok(()),
        }
    }

    pub fn generator_info(&self) -> GeneratorInfo {
        GeneratorInfo {
            rng: RNG_ALGORITHM.to_string(),
            distribution: self.kind.name().to_string(),
            seed: self.seed,
        }
    }
}

/// Builds a normalized state at step 0.
pub fn generate(spec: &DistributionSpec) -> Result<AmplitudeState> {
    spec.validate()?;
    let n = spec.config.n_states();
    match spec.kind {
        DistributionKind::Uniform => {
            let a = Complex64::new((n as f64).sqrt().recip(), 0.0);
            AmplitudeState::new(spec.config.clone(), vec![a; n], 0)
        }
        DistributionKind::Delta { target } => {
            let mut amps = vec![Complex64::new(0.0, 0.0); n];
            amps[target] = Complex64::new(1.0, 0.0);
            AmplitudeState::new(spec.config.clone(), amps, 0)
        }
        DistributionKind::RandomReal => sample_normalized(spec, |rng, n| {
            (0..n)
                .map(|_| Complex64::new(rng.random_range(-1.0..1.0), 0.0))
                .collect()
        }),
        DistributionKind::RandomComplex => sample_normalized(spec, |rng, n| {
            (0..n)
                .map(|_| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
                .collect()
        }),
        DistributionKind::GaussianReal { mean, spread } => {
            let normal =
                Normal::new(mean, spread).map_err(|e| Error::InvalidDistribution(e.to_string()))?;
            sample_normalized(spec, |rng, n| {
                (0..n)
                    .map(|_| Complex64::new(normal.sample(rng), 0.0))
                    .collect()
            })
        }
    }
}

fn sample_normalized<F>(spec: &DistributionSpec, mut draw: F) -> Result<AmplitudeState>
where
    F: FnMut(&mut ChaCha8Rng, usize) -> Vec<Complex64>,
{
    let n = spec.config.n_states();
    for attempt in 0..=MAX_RESAMPLES {
        let mut rng = ChaCha8Rng::seed_from_u64(spec.seed.wrapping_add(u64::from(attempt)));
        let mut amps = draw(&mut rng, n);
        let norm_sqr: f64 = amps.iter().map(|a| a.norm_sqr()).sum();
        if norm_sqr > 0.0 && norm_sqr.is_finite() {
            let scale = norm_sqr.sqrt().recip();
            for a in &mut amps {
                *a *= scale;
            }
            return AmplitudeState::new(spec.config.clone(), amps, 0);
        }
    }
    Err(Error::DegenerateSample {
        attempts: MAX_RESAMPLES + 1,
    })
}

/// Reads and validates a state document.
pub fn ingest<R: Read>(reader: R, options: IngestOptions) -> Result<AmplitudeState> {
    let doc: StateDocument = serde_json::from_reader(reader)?;
    doc.into_state(options)
}

pub fn ingest_path(path: impl AsRef<Path>, options: IngestOptions) -> Result<AmplitudeState> {
    let file = std::fs::File::open(path)?;
    ingest(std::io::BufReader::new(file), options)
}
