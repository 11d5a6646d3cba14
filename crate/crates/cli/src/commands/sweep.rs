use std::sync::Arc;

use gsearch_core::{generate, ClosedFormSolution, DistributionSpec, PlanMethod, SearchConfig};
use rayon::prelude::*;
use serde::Serialize;

use super::predict::method_name;
use crate::args::{DistName, Format, SweepArgs};
use crate::error::{CliError, CliResult};
use crate::output::{opt_num, write_json, CsvTable};
use crate::settings::{distribution_kind, FileConfig, OutputSettings, DEFAULT_SPREAD, DEFAULT_TOL};

pub const SWEEP_SCHEMA: &str = "gsearch.sweep/1";
pub const SWEEP_CSV_HEADER: [&str; 14] = [
    "n",
    "r",
    "dist",
    "seed",
    "method",
    "t_exact",
    "t_approx",
    "t_step",
    "t_scan",
    "p_predicted",
    "p_achieved",
    "p_max",
    "status",
    "message",
];

#[derive(Clone, Debug, Serialize)]
pub struct SweepSettings {
    pub n: Vec<u64>,
    pub r: Vec<String>,
    pub dist: Vec<DistName>,
    pub seed: u64,
    pub seeds: u64,
    pub mean: f64,
    pub spread: f64,
    pub allow_large_r: bool,
    pub tol: f64,
    #[serde(flatten)]
    pub output: OutputSettings,
}

impl SweepSettings {
    pub fn resolve(args: &SweepArgs, file: &FileConfig) -> CliResult<Self> {
        let n_tokens = args
            .n
            .clone()
            .or_else(|| file.sweep.n.clone())
            .or_else(|| file.n.map(|n| vec![n.to_string()]))
            .ok_or_else(|| CliError::Usage("sweep needs --n".into()))?;
        let n = parse_n_axis(&n_tokens)?;
        let r = args
            .r
            .clone()
            .or_else(|| file.sweep.r.clone())
            .or_else(|| file.r.map(|r| vec![r.to_string()]))
            .unwrap_or_else(|| vec!["1".into()]);
        for token in &r {
            parse_r_token(token, 1024)?;
        }
        Ok(Self {
            n,
            r,
            dist: args
                .dist
                .clone()
                .or_else(|| file.sweep.dist.clone())
                .or_else(|| file.dist.map(|d| vec![d]))
                .unwrap_or_else(|| vec![DistName::Uniform]),
            seed: args.seed.or(file.seed).unwrap_or(0),
            seeds: args.seeds.or(file.sweep.seeds).unwrap_or(1).max(1),
            mean: args.mean.or(file.mean).unwrap_or(0.0),
            spread: args.spread.or(file.spread).unwrap_or(DEFAULT_SPREAD),
            allow_large_r: args.allow_large_r || file.allow_large_r.unwrap_or(false),
            tol: args.tol.or(file.tol).unwrap_or(DEFAULT_TOL),
            output: OutputSettings::resolve(&args.output, file, Format::Csv),
        })
    }
}

/// Expands size tokens: `1000`, `2^10`, or `2^8..2^16` (every power of two
/// in between). Duplicates are dropped, first occurrence kept.
pub fn parse_n_axis(tokens: &[String]) -> CliResult<Vec<u64>> {
    let mut out = Vec::new();
    for token in tokens {
        let token = token.trim();
        let values = if let Some((lo, hi)) = token.split_once("..") {
            let (lo, hi) = (parse_power(lo, token)?, parse_power(hi, token)?);
            if lo > hi {
                return Err(CliError::Usage(format!("empty size range {token:?}")));
            }
            (lo..=hi).map(|k| 1u64 << k).collect()
        } else if token.starts_with("2^") {
            vec![1u64 << parse_power(token, token)?]
        } else {
            vec![token
                .parse::<u64>()
                .map_err(|_| CliError::Usage(format!("invalid size {token:?}")))?]
        };
        for v in values {
            if !out.contains(&v) {
                out.push(v);
            }
        }
    }
    Ok(out)
}

fn parse_power(text: &str, token: &str) -> CliResult<u32> {
    text.trim()
        .strip_prefix("2^")
        .and_then(|k| k.parse::<u32>().ok())
        .filter(|&k| k < 64)
        .ok_or_else(|| CliError::Usage(format!("invalid power of two in {token:?}")))
}

/// `3` or `n/8` (integer division by the row's N).
pub fn parse_r_token(token: &str, n: u64) -> CliResult<u64> {
    let token = token.trim();
    let bad = || CliError::Usage(format!("invalid marked count {token:?}"));
    if let Some(div) = token
        .strip_prefix("n/")
        .or_else(|| token.strip_prefix("N/"))
    {
        let d: u64 = div.parse().map_err(|_| bad())?;
        if d == 0 {
            return Err(bad());
        }
        Ok(n / d)
    } else {
        token.parse().map_err(|_| bad())
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SweepRow {
    pub n: u64,
    pub r: u64,
    pub dist: DistName,
    pub seed: u64,
    pub method: Option<PlanMethod>,
    /// Real-valued optimum of the first branch; absent for complex ratios.
    pub t_exact: Option<f64>,
    pub t_approx: Option<f64>,
    /// Step chosen by the planner (closed form, or scan as fallback).
    pub t_step: Option<u64>,
    /// Argmax of the analytic success probability over one period.
    pub t_scan: Option<u64>,
    pub p_predicted: Option<f64>,
    /// Success probability after iterating the statevector `t_scan` steps.
    pub p_achieved: Option<f64>,
    pub p_max: Option<f64>,
    pub ok: bool,
    pub message: String,
}

impl SweepRow {
    fn empty(n: u64, r: u64, dist: DistName, seed: u64) -> Self {
        Self {
            n,
            r,
            dist,
            seed,
            method: None,
            t_exact: None,
            t_approx: None,
            t_step: None,
            t_scan: None,
            p_predicted: None,
            p_achieved: None,
            p_max: None,
            ok: false,
            message: String::new(),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SweepReport {
    pub schema: &'static str,
    pub config: SweepSettings,
    pub rows: Vec<SweepRow>,
    pub failed: usize,
}

struct Cell {
    n: u64,
    r_token: String,
    dist: DistName,
    seed: u64,
}

pub fn sweep(settings: &SweepSettings) -> CliResult<SweepReport> {
    let mut cells = Vec::new();
    for &n in &settings.n {
        for r_token in &settings.r {
            for &dist in &settings.dist {
                let count = if is_random(dist) { settings.seeds } else { 1 };
                for k in 0..count {
                    cells.push(Cell {
                        n,
                        r_token: r_token.clone(),
                        dist,
                        seed: settings.seed.wrapping_add(k),
                    });
                }
            }
        }
    }
    let rows: Vec<SweepRow> = cells.par_iter().map(|c| evaluate(settings, c)).collect();
    let failed = rows.iter().filter(|r| !r.ok).count();
    Ok(SweepReport {
        schema: SWEEP_SCHEMA,
        config: settings.clone(),
        rows,
        failed,
    })
}

fn is_random(dist: DistName) -> bool {
    matches!(
        dist,
        DistName::RandomReal | DistName::RandomComplex | DistName::GaussianReal
    )
}

fn evaluate(settings: &SweepSettings, cell: &Cell) -> SweepRow {
    let r = parse_r_token(&cell.r_token, cell.n).unwrap_or(0);
    let mut row = SweepRow::empty(cell.n, r, cell.dist, cell.seed);
    match fill_row(settings, cell, &mut row) {
        Ok(()) => row.ok = true,
        Err(e) => row.message = e.to_string(),
    }
    row
}

fn fill_row(settings: &SweepSettings, cell: &Cell, row: &mut SweepRow) -> CliResult<()> {
    let n = usize::try_from(cell.n).map_err(|_| CliError::Usage("N too large".into()))?;
    let config = SearchConfig::first_marked(n, row.r as usize, settings.allow_large_r)?;
    let kind = distribution_kind(cell.dist, &config, None, settings.mean, settings.spread)?;
    let initial = generate(&DistributionSpec::new(kind, Arc::new(config), cell.seed))?;
    let sol = ClosedFormSolution::solve(&initial)?;

    let plan = sol.plan(0);
    let scan = sol.optimal_time_numeric();
    row.method = Some(plan.method);
    row.t_exact = (plan.method == PlanMethod::ClosedForm).then_some(plan.t_real);
    row.t_approx = sol.optimal_time_approx().ok();
    row.t_step = Some(plan.t_step);
    row.t_scan = Some(scan.t_step);
    row.p_predicted = Some(scan.predicted_success);
    row.p_max = Some(sol.p_max());

    let achieved = initial.run(scan.t_step).success_probability();
    row.p_achieved = Some(achieved);
    let gap = (achieved - scan.predicted_success).abs();
    if gap > settings.tol {
        return Err(CliError::Check(format!(
            "iterated probability differs from prediction by {gap:e}"
        )));
    }
    Ok(())
}

pub fn run_sweep(args: &SweepArgs, file: &FileConfig) -> CliResult<()> {
    let settings = SweepSettings::resolve(args, file)?;
    let report = sweep(&settings)?;
    let out = settings.output.out.as_deref();
    match settings.output.format {
        Format::Json => write_json(out, &report)?,
        Format::Csv => CsvTable {
            schema: SWEEP_SCHEMA,
            config: &settings,
            header: &SWEEP_CSV_HEADER,
            rows: report.rows.iter().map(csv_row).collect(),
        }
        .write(out)?,
    }
    if report.failed > 0 {
        return Err(CliError::Check(format!(
            "{} of {} sweep rows failed",
            report.failed,
            report.rows.len()
        )));
    }
    Ok(())
}

fn csv_row(row: &SweepRow) -> Vec<String> {
    let opt_int = |x: Option<u64>| x.map(|v| v.to_string()).unwrap_or_default();
    vec![
        row.n.to_string(),
        row.r.to_string(),
        dist_name(row.dist).to_string(),
        row.seed.to_string(),
        row.method.map(method_name).unwrap_or_default().to_string(),
        opt_num(row.t_exact),
        opt_num(row.t_approx),
        opt_int(row.t_step),
        opt_int(row.t_scan),
        opt_num(row.p_predicted),
        opt_num(row.p_achieved),
        opt_num(row.p_max),
        if row.ok { "ok" } else { "failed" }.to_string(),
        row.message.clone(),
    ]
}

fn dist_name(d: DistName) -> &'static str {
    match d {
        DistName::Uniform => "uniform",
        DistName::Delta => "delta",
        DistName::RandomReal => "random-real",
        DistName::RandomComplex => "random-complex",
        DistName::GaussianReal => "gaussian-real",
    }
}
