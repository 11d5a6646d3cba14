//! JSON documents exchanged with files and the command-line harness.
//!
//! Floating-point values are written in scientific notation with 17
//! significant digits, enough for every `f64` to round-trip bit for bit.

use std::io::{self, Write};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use serde_json::ser::{CompactFormatter, Formatter, PrettyFormatter};

use crate::analytic::ClosedFormSolution;
use crate::config::SearchConfig;
use crate::error::{Error, Result};
use crate::state::AmplitudeState;
use crate::tolerance;

/// Serialized statevector: `{"n", "marked", "amplitudes": [[re, im], ...],
/// "step"}` plus optional generator metadata.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StateDocument {
    pub n: u64,
    pub marked: Vec<u64>,
    pub amplitudes: Vec<[f64; 2]>,
    #[serde(default)]
    pub step: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub generator: Option<GeneratorInfo>,
}

/// Provenance of a generated state.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeneratorInfo {
    pub rng: String,
    pub distribution: String,
    pub seed: u64,
}

#[derive(Clone, Copy, Debug, Default)]
pub struct IngestOptions {
    /// Rescale a state whose norm is off instead of rejecting it.
    pub renormalize: bool,
    pub allow_large_r: bool,
}

impl StateDocument {
    pub fn from_state(state: &AmplitudeState) -> Self {
        Self {
            n: state.config().n_states() as u64,
            marked: state.config().marked().iter().map(|&i| i as u64).collect(),
            amplitudes: state.amplitudes().iter().map(|a| [a.re, a.im]).collect(),
            step: state.step(),
            generator: None,
        }
    }

    pub fn with_generator(mut self, generator: GeneratorInfo) -> Self {
        self.generator = Some(generator);
        self
    }

    /// Validates the document and builds a state. The norm must be within
    /// 1e-8 of one unless `renormalize` is set.
    pub fn into_state(self, options: IngestOptions) -> Result<AmplitudeState> {
        let n = usize::try_from(self.n)
            .map_err(|_| Error::InvalidConfig(format!("N={} does not fit in memory", self.n)))?;
        let mut marked = Vec::with_capacity(self.marked.len());
        for &i in &self.marked {
            if i >= self.n {
                return Err(Error::IndexOutOfRange {
                    index: i,
                    n: self.n,
                });
            }
            marked.push(i as usize);
        }
        let config = SearchConfig::with_options(n, marked, options.allow_large_r)?;
        let mut amplitudes: Vec<Complex64> = self
            .amplitudes
            .iter()
            .map(|&[re, im]| Complex64::new(re, im))
            .collect();
        if amplitudes.len() != n {
            return Err(Error::LengthMismatch {
                got: amplitudes.len(),
                expected: n,
            });
        }
        if options.renormalize {
            let norm = amplitudes.iter().map(|a| a.norm_sqr()).sum::<f64>();
            if !(norm > 0.0 && norm.is_finite()) {
                return Err(Error::NormViolation {
                    norm,
                    tolerance: tolerance::INGEST_NORM,
                });
            }
            let scale = norm.sqrt().recip();
            for a in &mut amplitudes {
                *a *= scale;
            }
        }
        AmplitudeState::with_norm_tolerance(config, amplitudes, self.step, tolerance::INGEST_NORM)
    }
}

/// Scalars of a closed-form solution, for reports.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SolutionSummary {
    pub n: u64,
    pub r: u64,
    pub omega: f64,
    pub k_bar0: [f64; 2],
    pub l_bar0: [f64; 2],
    pub sigma_l_sq: f64,
    pub p_max: f64,
    pub real_ratio: bool,
    /// `null` when the ratio of initial averages is complex.
    pub phi: Option<f64>,
    pub alpha: Option<[f64; 2]>,
    pub beta: Option<[f64; 2]>,
}

impl From<&ClosedFormSolution> for SolutionSummary {
    fn from(sol: &ClosedFormSolution) -> Self {
        let pair = |z: Complex64| [z.re, z.im];
        let phase = sol.phase();
        Self {
            n: sol.geometry().n,
            r: sol.geometry().r,
            omega: sol.omega(),
            k_bar0: pair(sol.k_bar0()),
            l_bar0: pair(sol.l_bar0()),
            sigma_l_sq: sol.sigma_l_sq(),
            p_max: sol.p_max(),
            real_ratio: sol.has_real_ratio(),
            phi: phase.map(|p| p.phi),
            alpha: phase.map(|p| pair(p.alpha)),
            beta: phase.map(|p| pair(p.beta)),
        }
    }
}

/// Formats a float with 17 significant digits.
pub fn format_f64(x: f64) -> String {
    format!("{x:.16e}")
}

/// JSON formatter that writes every `f64` with 17 significant digits and
/// defers everything else to the wrapped formatter.
pub struct Sig17<F>(pub F);

macro_rules! delegate {
    ($($name:ident($($arg:ident: $ty:ty),*)),* $(,)?) => {
        $(
            fn $name<W: ?Sized + Write>(&mut self, writer: &mut W $(, $arg: $ty)*) -> io::Result<()> {
                self.0.$name(writer $(, $arg)*)
            }
        )*
    };
}

impl<F: Formatter> Formatter for Sig17<F> {
    fn write_f64<W: ?Sized + Write>(&mut self, writer: &mut W, value: f64) -> io::Result<()> {
        writer.write_all(format_f64(value).as_bytes())
    }

    fn write_f32<W: ?Sized + Write>(&mut self, writer: &mut W, value: f32) -> io::Result<()> {
        self.write_f64(writer, f64::from(value))
    }

    delegate!(
        begin_array(),
        end_array(),
        begin_array_value(first: bool),
        end_array_value(),
        begin_object(),
        end_object(),
        begin_object_key(first: bool),
        end_object_key(),
        begin_object_value(),
        end_object_value(),
    );
}

/// Serializes `value` with full-precision floats; pretty-printed when
/// `pretty` is set. No trailing newline.
pub fn to_json_string<T: Serialize + ?Sized>(value: &T, pretty: bool) -> Result<String> {
    let mut buf = Vec::new();
    if pretty {
        let mut ser =
            serde_json::Serializer::with_formatter(&mut buf, Sig17(PrettyFormatter::new()));
        value.serialize(&mut ser)?;
    } else {
        let mut ser = serde_json::Serializer::with_formatter(&mut buf, Sig17(CompactFormatter));
        value.serialize(&mut ser)?;
    }
    Ok(String::from_utf8(buf).expect("serde_json writes UTF-8"))
}

pub fn state_to_json(state: &AmplitudeState) -> Result<String> {
    to_json_string(&StateDocument::from_state(state), false)
}
