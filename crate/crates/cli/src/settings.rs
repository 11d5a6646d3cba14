//! Effective configuration: flags over config file over defaults.

use std::path::{Path, PathBuf};
use std::sync::Arc;

use gsearch_core::io::IngestOptions;
use gsearch_core::{
    generate, ingest_path, AmplitudeState, DistributionKind, DistributionSpec, SearchConfig,
};
use serde::{Deserialize, Serialize};

use crate::args::{DistName, Format, OutputArgs, StateArgs};
use crate::error::{CliError, CliResult};

pub const DEFAULT_STEPS: u64 = 100;
pub const DEFAULT_TOL: f64 = 1e-10;
pub const DEFAULT_SPREAD: f64 = 1.0;

/// Contents of a `--config` TOML file. Keys are the long flag names.
#[derive(Debug, Default, Deserialize)]
#[serde(default, rename_all = "kebab-case", deny_unknown_fields)]
pub struct FileConfig {
    pub n: Option<u64>,
    pub r: Option<u64>,
    pub marked: Option<Vec<u64>>,
    pub dist: Option<DistName>,
    pub seed: Option<u64>,
    pub delta_index: Option<u64>,
    pub mean: Option<f64>,
    pub spread: Option<f64>,
    pub state: Option<PathBuf>,
    pub renormalize: Option<bool>,
    pub allow_large_r: Option<bool>,
    pub out: Option<PathBuf>,
    pub format: Option<Format>,
    pub steps: Option<u64>,
    pub tol: Option<f64>,
    pub j: Option<Vec<u64>>,
    pub sample: Option<bool>,
    pub kbar0: Option<String>,
    pub lbar0: Option<String>,
    pub sigma_l_sq: Option<f64>,
    pub sweep: SweepFile,
}

/// `[sweep]` table; grid axes use the same syntax as the flags.
#[derive(Debug, Default, Deserialize)]
#[serde(default, rename_all = "kebab-case", deny_unknown_fields)]
pub struct SweepFile {
    pub n: Option<Vec<String>>,
    pub r: Option<Vec<String>>,
    pub dist: Option<Vec<DistName>>,
    pub seeds: Option<u64>,
}

impl FileConfig {
    pub fn load(path: Option<&Path>) -> CliResult<Self> {
        let Some(path) = path else {
            return Ok(Self::default());
        };
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Usage(format!("cannot read config {}: {e}", path.display())))?;
        toml::from_str(&text)
            .map_err(|e| CliError::Usage(format!("invalid config {}: {e}", path.display())))
    }
}

/// Resolved initial-state settings, echoed into every output.
#[derive(Clone, Debug, Serialize)]
pub struct StateSettings {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub state: Option<PathBuf>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub r: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub marked: Option<Vec<u64>>,
    pub dist: DistName,
    pub seed: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub delta_index: Option<u64>,
    pub mean: f64,
    pub spread: f64,
    pub renormalize: bool,
    pub allow_large_r: bool,
}

impl StateSettings {
    pub fn resolve(args: &StateArgs, file: &FileConfig) -> Self {
        Self {
            state: args.state.clone().or_else(|| file.state.clone()),
            n: args.n.or(file.n),
            r: args.r.or(file.r),
            marked: args.marked.clone().or_else(|| file.marked.clone()),
            dist: args.dist.or(file.dist).unwrap_or(DistName::Uniform),
            seed: args.seed.or(file.seed).unwrap_or(0),
            delta_index: args.delta_index.or(file.delta_index),
            mean: args.mean.or(file.mean).unwrap_or(0.0),
            spread: args.spread.or(file.spread).unwrap_or(DEFAULT_SPREAD),
            renormalize: args.renormalize || file.renormalize.unwrap_or(false),
            allow_large_r: args.allow_large_r || file.allow_large_r.unwrap_or(false),
        }
    }

    pub fn ingest_options(&self) -> IngestOptions {
        IngestOptions {
            renormalize: self.renormalize,
            allow_large_r: self.allow_large_r,
        }
    }

    /// Builds the marked set from `--marked`, or `0..r` from `--r`.
    pub fn search_config(&self) -> CliResult<SearchConfig> {
        let n = self
            .n
            .ok_or_else(|| CliError::Usage("--n is required unless --state is given".into()))?;
        let n = to_usize(n)?;
        let config = match (&self.marked, self.r) {
            (Some(marked), r) => {
                if let Some(r) = r {
                    if r != marked.len() as u64 {
                        return Err(CliError::Usage(format!(
                            "--r {r} disagrees with {} indices in --marked",
                            marked.len()
                        )));
                    }
                }
                let marked = marked
                    .iter()
                    .map(|&i| to_usize(i))
                    .collect::<CliResult<Vec<_>>>()?;
                SearchConfig::with_options(n, marked, self.allow_large_r)?
            }
            (None, Some(r)) => SearchConfig::first_marked(n, to_usize(r)?, self.allow_large_r)?,
            (None, None) => {
                return Err(CliError::Usage("one of --r or --marked is required".into()))
            }
        };
        Ok(config)
    }

    pub fn distribution(&self, config: &SearchConfig) -> CliResult<DistributionKind> {
        distribution_kind(self.dist, config, self.delta_index, self.mean, self.spread)
    }

    /// The initial state: ingested from `--state` or generated.
    pub fn load_state(&self) -> CliResult<AmplitudeState> {
        if let Some(path) = &self.state {
            let state = ingest_path(path, self.ingest_options())?;
            return Ok(state);
        }
        let config = self.search_config()?;
        let kind = self.distribution(&config)?;
        Ok(generate(&DistributionSpec::new(
            kind,
            Arc::new(config),
            self.seed,
        ))?)
    }
}

/// Distribution parameters; a delta without an explicit target sits on the
/// first unmarked index.
pub fn distribution_kind(
    dist: DistName,
    config: &SearchConfig,
    delta_index: Option<u64>,
    mean: f64,
    spread: f64,
) -> CliResult<DistributionKind> {
    Ok(match dist {
        DistName::Uniform => DistributionKind::Uniform,
        DistName::Delta => {
            let target = match delta_index {
                Some(i) => to_usize(i)?,
                None => config
                    .unmarked()
                    .next()
                    .ok_or_else(|| CliError::Usage("no unmarked index for delta".into()))?,
            };
            DistributionKind::Delta { target }
        }
        DistName::RandomReal => DistributionKind::RandomReal,
        DistName::RandomComplex => DistributionKind::RandomComplex,
        DistName::GaussianReal => DistributionKind::GaussianReal { mean, spread },
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct OutputSettings {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub out: Option<PathBuf>,
    pub format: Format,
}

impl OutputSettings {
    pub fn resolve(args: &OutputArgs, file: &FileConfig, default_format: Format) -> Self {
        Self {
            out: args.out.clone().or_else(|| file.out.clone()),
            format: args.format.or(file.format).unwrap_or(default_format),
        }
    }
}

fn to_usize(x: u64) -> CliResult<usize> {
    usize::try_from(x).map_err(|_| CliError::Usage(format!("{x} does not fit in memory")))
}

/// Parses `re` or `re,im`.
pub fn parse_complex(text: &str) -> CliResult<gsearch_core::Complex64> {
    let bad = || {
        CliError::Usage(format!(
            "cannot parse complex number {text:?}; use re or re,im"
        ))
    };
    let mut parts = text.split(',').map(str::trim);
    let re: f64 = parts.next().ok_or_else(bad)?.parse().map_err(|_| bad())?;
    let im: f64 = match parts.next() {
        Some(p) => p.parse().map_err(|_| bad())?,
        None => 0.0,
    };
    if parts.next().is_some() {
        return Err(bad());
    }
    Ok(gsearch_core::Complex64::new(re, im))
}
