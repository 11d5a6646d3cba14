use gsearch_core::io::SolutionSummary;
use gsearch_core::{ClosedFormSolution, MeasurementPlan};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::{cross_run, Agreement};
use crate::args::{Format, SimulateArgs};
use crate::error::{CliError, CliResult};
use crate::output::{num, write_json, CsvTable};
use crate::settings::{FileConfig, OutputSettings, StateSettings, DEFAULT_STEPS, DEFAULT_TOL};

pub const SIMULATE_SCHEMA: &str = "gsearch.simulate/1";
pub const SIMULATE_CSV_HEADER: [&str; 7] = [
    "t",
    "k_bar_re",
    "k_bar_im",
    "l_bar_re",
    "l_bar_im",
    "p_success",
    "norm",
];

#[derive(Clone, Debug, Serialize)]
pub struct SimulateSettings {
    #[serde(flatten)]
    pub state: StateSettings,
    pub steps: u64,
    pub tol: f64,
    pub j: u64,
    pub sample: bool,
    #[serde(flatten)]
    pub output: OutputSettings,
}

impl SimulateSettings {
    pub fn resolve(args: &SimulateArgs, file: &FileConfig) -> Self {
        Self {
            state: StateSettings::resolve(&args.state, file),
            steps: args.steps.or(file.steps).unwrap_or(DEFAULT_STEPS),
            tol: args.tol.or(file.tol).unwrap_or(DEFAULT_TOL),
            j: args
                .j
                .or_else(|| file.j.as_ref().and_then(|j| j.first().copied()))
                .unwrap_or(0),
            sample: args.sample || file.sample.unwrap_or(false),
            output: OutputSettings::resolve(&args.output, file, Format::Csv),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SeriesPoint {
    pub t: u64,
    pub k_bar: [f64; 2],
    pub l_bar: [f64; 2],
    pub p_success: f64,
    /// `Σ|a_i|²`.
    pub norm: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct SampleOutcome {
    pub seed: u64,
    pub index: usize,
    pub marked: bool,
}

/// Everything one simulation produces.
#[derive(Clone, Debug, Serialize)]
pub struct RunRecord {
    pub schema: &'static str,
    pub config: SimulateSettings,
    pub n: u64,
    pub r: u64,
    pub seed: u64,
    pub series: Vec<SeriesPoint>,
    pub solution: SolutionSummary,
    pub plan: MeasurementPlan,
    pub agreement: Agreement,
    pub max_norm_drift: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sample: Option<SampleOutcome>,
}

pub fn simulate(settings: &SimulateSettings) -> CliResult<RunRecord> {
    let initial = settings.state.load_state()?;
    let sol = ClosedFormSolution::solve(&initial)?;
    let norm0 = initial.norm_sqr();
    let g = initial.geometry();

    let mut series = Vec::with_capacity(settings.steps as usize + 1);
    let mut max_norm_drift = 0.0f64;
    let (last, agreement) = cross_run(initial, &sol, settings.steps, |st| {
        let stats = st.stats();
        let norm = st.norm_sqr();
        max_norm_drift = max_norm_drift.max((norm - norm0).abs());
        series.push(SeriesPoint {
            t: st.step(),
            k_bar: [stats.k_bar.re, stats.k_bar.im],
            l_bar: [stats.l_bar.re, stats.l_bar.im],
            p_success: st.success_probability(),
            norm,
        });
    });

    let sample = settings.sample.then(|| {
        let mut rng = ChaCha8Rng::seed_from_u64(settings.state.seed);
        rng.set_stream(1);
        let index = last.sample_index(rng.random::<f64>());
        SampleOutcome {
            seed: settings.state.seed,
            index,
            marked: last.config().is_marked(index),
        }
    });

    Ok(RunRecord {
        schema: SIMULATE_SCHEMA,
        config: settings.clone(),
        n: g.n,
        r: g.r,
        seed: settings.state.seed,
        series,
        solution: SolutionSummary::from(&sol),
        plan: sol.plan(settings.j),
        agreement,
        max_norm_drift,
        sample,
    })
}

pub fn run_simulate(args: &SimulateArgs, file: &FileConfig) -> CliResult<()> {
    let settings = SimulateSettings::resolve(args, file);
    let record = simulate(&settings)?;
    let out = settings.output.out.as_deref();
    match settings.output.format {
        Format::Json => write_json(out, &record)?,
        Format::Csv => CsvTable {
            schema: SIMULATE_SCHEMA,
            config: &settings,
            header: &SIMULATE_CSV_HEADER,
            rows: record
                .series
                .iter()
                .map(|p| {
                    vec![
                        p.t.to_string(),
                        num(p.k_bar[0]),
                        num(p.k_bar[1]),
                        num(p.l_bar[0]),
                        num(p.l_bar[1]),
                        num(p.p_success),
                        num(p.norm),
                    ]
                })
                .collect(),
        }
        .write(out)?,
    }
    if record.max_norm_drift > settings.tol {
        return Err(CliError::Check(format!(
            "norm drifted by {:e}, above tolerance {:e}",
            record.max_norm_drift, settings.tol
        )));
    }
    Ok(())
}
