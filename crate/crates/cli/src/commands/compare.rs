use gsearch_core::ClosedFormSolution;
use serde::Serialize;

use super::{cross_run, Agreement};
use crate::args::{CompareArgs, Format};
use crate::error::{CliError, CliResult};
use crate::output::{num, write_json, CsvTable};
use crate::settings::{FileConfig, OutputSettings, StateSettings, DEFAULT_STEPS, DEFAULT_TOL};

pub const COMPARE_SCHEMA: &str = "gsearch.compare/1";
const CSV_HEADER: [&str; 8] = [
    "n",
    "r",
    "steps",
    "max_amplitude_deviation",
    "max_probability_deviation",
    "worst_step",
    "tol",
    "agree",
];

#[derive(Clone, Debug, Serialize)]
pub struct CompareSettings {
    #[serde(flatten)]
    pub state: StateSettings,
    pub steps: u64,
    pub tol: f64,
    #[serde(flatten)]
    pub output: OutputSettings,
}

#[derive(Clone, Debug, Serialize)]
pub struct CompareReport {
    pub schema: &'static str,
    pub config: CompareSettings,
    pub n: u64,
    pub r: u64,
    pub steps: u64,
    #[serde(flatten)]
    pub agreement: Agreement,
    pub tol: f64,
    pub agree: bool,
}

pub fn compare(settings: &CompareSettings) -> CliResult<CompareReport> {
    let initial = settings.state.load_state()?;
    let g = initial.geometry();
    let sol = ClosedFormSolution::solve(&initial)?;
    let (_, agreement) = cross_run(initial, &sol, settings.steps, |_| {});
    Ok(CompareReport {
        schema: COMPARE_SCHEMA,
        config: settings.clone(),
        n: g.n,
        r: g.r,
        steps: settings.steps,
        agreement,
        tol: settings.tol,
        agree: agreement.max_amplitude_deviation <= settings.tol
            && agreement.max_probability_deviation <= settings.tol,
    })
}

pub fn run_compare(args: &CompareArgs, file: &FileConfig) -> CliResult<()> {
    let settings = CompareSettings {
        state: StateSettings::resolve(&args.state, file),
        steps: args.steps.or(file.steps).unwrap_or(DEFAULT_STEPS),
        tol: args.tol.or(file.tol).unwrap_or(DEFAULT_TOL),
        output: OutputSettings::resolve(&args.output, file, Format::Json),
    };
    let report = compare(&settings)?;
    let out = settings.output.out.as_deref();
    match settings.output.format {
        Format::Json => write_json(out, &report)?,
        Format::Csv => CsvTable {
            schema: COMPARE_SCHEMA,
            config: &settings,
            header: &CSV_HEADER,
            rows: vec![vec![
                report.n.to_string(),
                report.r.to_string(),
                report.steps.to_string(),
                num(report.agreement.max_amplitude_deviation),
                num(report.agreement.max_probability_deviation),
                report.agreement.worst_step.to_string(),
                num(report.tol),
                report.agree.to_string(),
            ]],
        }
        .write(out)?,
    }
    if !report.agree {
        return Err(CliError::Check(format!(
            "engines disagree: amplitude deviation {:e}, probability deviation {:e}, tolerance {:e}",
            report.agreement.max_amplitude_deviation,
            report.agreement.max_probability_deviation,
            report.tol
        )));
    }
    Ok(())
}
