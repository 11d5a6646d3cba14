use gsearch_core::io::SolutionSummary;
use gsearch_core::{ClosedFormSolution, Complex64, Geometry, MeasurementPlan, PlanMethod};
use serde::Serialize;

use crate::args::{Format, PredictArgs};
use crate::error::{CliError, CliResult};
use crate::output::{num, opt_num, write_json, CsvTable};
use crate::settings::{parse_complex, FileConfig, OutputSettings, StateSettings};

pub const PREDICT_SCHEMA: &str = "gsearch.predict/1";
const CSV_HEADER: [&str; 10] = [
    "j",
    "t_real",
    "t_step",
    "predicted_success",
    "method",
    "omega",
    "phi",
    "p_max",
    "t_approx",
    "scan_horizon",
];

/// Initial averages given directly on the command line.
#[derive(Clone, Debug, Serialize)]
pub struct ScalarInputs {
    pub kbar0: [f64; 2],
    pub lbar0: [f64; 2],
    pub sigma_l_sq: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct PredictSettings {
    #[serde(flatten)]
    pub state: StateSettings,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub scalars: Option<ScalarInputs>,
    pub j: Vec<u64>,
    #[serde(flatten)]
    pub output: OutputSettings,
}

impl PredictSettings {
    pub fn resolve(args: &PredictArgs, file: &FileConfig) -> CliResult<Self> {
        let kbar0 = args.kbar0.as_ref().or(file.kbar0.as_ref());
        let lbar0 = args.lbar0.as_ref().or(file.lbar0.as_ref());
        let scalars = match (kbar0, lbar0) {
            (None, None) => None,
            (Some(k), Some(l)) => {
                let (k, l) = (parse_complex(k)?, parse_complex(l)?);
                Some(ScalarInputs {
                    kbar0: [k.re, k.im],
                    lbar0: [l.re, l.im],
                    sigma_l_sq: args.sigma_l_sq.or(file.sigma_l_sq).unwrap_or(0.0),
                })
            }
            _ => {
                return Err(CliError::Usage(
                    "scalar mode needs both --kbar0 and --lbar0".into(),
                ))
            }
        };
        let mut j = args
            .j
            .clone()
            .or_else(|| file.j.clone())
            .unwrap_or_else(|| vec![0]);
        if j.is_empty() {
            j.push(0);
        }
        Ok(Self {
            state: StateSettings::resolve(&args.state, file),
            scalars,
            j,
            output: OutputSettings::resolve(&args.output, file, Format::Json),
        })
    }

    fn solution(&self) -> CliResult<ClosedFormSolution> {
        let Some(sc) = &self.scalars else {
            return Ok(ClosedFormSolution::solve(&self.state.load_state()?)?);
        };
        let n = self
            .state
            .n
            .ok_or_else(|| CliError::Usage("scalar mode needs --n".into()))?;
        let r = match (&self.state.marked, self.state.r) {
            (Some(m), _) => m.len() as u64,
            (None, Some(r)) => r,
            (None, None) => return Err(CliError::Usage("scalar mode needs --r".into())),
        };
        let geometry = Geometry::new(n, r, self.state.allow_large_r)?;
        let k = Complex64::new(sc.kbar0[0], sc.kbar0[1]);
        let l = Complex64::new(sc.lbar0[0], sc.lbar0[1]);
        Ok(ClosedFormSolution::from_scalars(
            geometry,
            k,
            l,
            sc.sigma_l_sq,
        )?)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct PredictReport {
    pub schema: &'static str,
    pub config: PredictSettings,
    pub scalar_only: bool,
    pub solution: SolutionSummary,
    pub method: PlanMethod,
    pub plans: Vec<MeasurementPlan>,
    /// Three-term expansion of the first optimum, when defined.
    pub t_approx: Option<f64>,
    pub scan_horizon: u64,
}

pub fn predict(settings: &PredictSettings) -> CliResult<PredictReport> {
    let sol = settings.solution()?;
    let plans: Vec<MeasurementPlan> = if sol.has_real_ratio() {
        settings
            .j
            .iter()
            .map(|&j| sol.optimal_time(j))
            .collect::<Result<_, _>>()?
    } else {
        vec![sol.optimal_time_numeric()]
    };
    Ok(PredictReport {
        schema: PREDICT_SCHEMA,
        config: settings.clone(),
        scalar_only: sol.is_scalar_only(),
        solution: SolutionSummary::from(&sol),
        method: plans[0].method,
        plans,
        t_approx: sol.optimal_time_approx().ok(),
        scan_horizon: sol.scan_horizon(),
    })
}

pub fn run_predict(args: &PredictArgs, file: &FileConfig) -> CliResult<()> {
    let settings = PredictSettings::resolve(args, file)?;
    let report = predict(&settings)?;
    let out = settings.output.out.as_deref();
    match settings.output.format {
        Format::Json => write_json(out, &report)?,
        Format::Csv => CsvTable {
            schema: PREDICT_SCHEMA,
            config: &settings,
            header: &CSV_HEADER,
            rows: report
                .plans
                .iter()
                .map(|p| {
                    vec![
                        p.j.to_string(),
                        num(p.t_real),
                        p.t_step.to_string(),
                        num(p.predicted_success),
                        method_name(p.method).to_string(),
                        num(report.solution.omega),
                        opt_num(report.solution.phi),
                        num(report.solution.p_max),
                        opt_num(report.t_approx),
                        report.scan_horizon.to_string(),
                    ]
                })
                .collect(),
        }
        .write(out)?,
    }
    Ok(())
}

pub(crate) fn method_name(m: PlanMethod) -> &'static str {
    match m {
        PlanMethod::ClosedForm => "closed-form",
        PlanMethod::NumericScan => "numeric-scan",
    }
}
