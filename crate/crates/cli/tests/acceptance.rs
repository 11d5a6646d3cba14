//! Acceptance gate. Runs every criterion, prints one `[PASS]`/`[FAIL]` line
//! each, and exits non-zero if any failed.
//!
//! Run with `cargo test -p gsearch-cli --test acceptance`.

use std::f64::consts::PI;
use std::panic::{self, AssertUnwindSafe};
use std::path::Path;
use std::process::{Command, ExitCode};
use std::time::Instant;

use gsearch_cli::args::{DistName, Format};
use gsearch_cli::commands::{sweep, SweepSettings};
use gsearch_cli::settings::OutputSettings;
use gsearch_core::{
    generate, verify_diagonalization, AmplitudeState, ClosedFormSolution, Complex64,
    DistributionKind, DistributionSpec, Geometry, PlanMethod, SearchConfig,
};
use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        ("exact-solution equivalence", exact_solution_equivalence),
        ("uniform-start sinusoids", uniform_sinusoids),
        ("dense-matrix step", dense_matrix_step),
        ("constants of motion", constants_of_motion),
        ("bound and tightness", bound_and_tightness),
        ("optimal-time planning", optimal_time_planning),
        ("expansion quality", expansion_quality),
        ("sqrt(N/r) scaling", scaling_exponent),
        ("diagonalization", diagonalization),
        ("determinism", determinism),
    ];

    panic::set_hook(Box::new(|_| {}));
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = panic::catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|p| {
            let msg = p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panicked".into());
            Err(format!("panic: {msg}"))
        });
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("[PASS] {:>2} {name}: {detail} ({secs:.1}s)", i + 1),
            Err(detail) => {
                failed += 1;
                println!("[FAIL] {:>2} {name}: {detail} ({secs:.1}s)", i + 1);
            }
        }
    }
    println!(
        "{} of {} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

/// `r` marked indices drawn without replacement from the seed.
fn random_config(n: usize, r: usize, seed: u64) -> SearchConfig {
    let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_mul(0x9e37_79b9_7f4a_7c15));
    SearchConfig::new(n, sample(&mut rng, n, r)).unwrap()
}

fn state(kind: DistributionKind, n: usize, r: usize, seed: u64) -> AmplitudeState {
    generate(&DistributionSpec::new(
        kind,
        random_config(n, r, seed),
        seed,
    ))
    .unwrap()
}

fn uniform(n: usize, r: usize) -> AmplitudeState {
    let cfg = SearchConfig::first_marked(n, r, false).unwrap();
    generate(&DistributionSpec::new(DistributionKind::Uniform, cfg, 0)).unwrap()
}

fn max_abs_diff(a: &[Complex64], b: &[Complex64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

fn exact_solution_equivalence() -> Outcome {
    let start = Instant::now();
    let mut worst = 0.0f64;
    let mut cases = 0;
    for n in [8usize, 64, 1024, 4096] {
        let mut rs = vec![1, 2, n / 8, n / 2];
        rs.dedup();
        rs.sort_unstable();
        rs.dedup();
        for r in rs {
            for seed in 0..100u64 {
                let s = state(DistributionKind::RandomComplex, n, r, seed);
                let sol = ClosedFormSolution::solve(&s).map_err(|e| e.to_string())?;
                let horizon = 3 * sol.period().ceil() as u64;
                let mut local = 0.0f64;
                s.run_observed(horizon, |st| {
                    let cf = sol.reconstruct(st.step()).unwrap();
                    local = local.max(max_abs_diff(st.amplitudes(), cf.amplitudes()));
                });
                ensure(local <= 1e-10, || {
                    format!("N={n} r={r} seed={seed}: {local:e}")
                })?;
                worst = worst.max(local);
                cases += 1;
            }
        }
    }
    let secs = start.elapsed().as_secs_f64();
    ensure(secs < 120.0, || format!("took {secs:.1}s single-threaded"))?;
    Ok(format!(
        "{cases} states, 3 periods each, max deviation {worst:.2e} <= 1e-10"
    ))
}

fn uniform_sinusoids() -> Outcome {
    let mut worst = 0.0f64;
    let mut cases = 0;
    for n in [2usize, 4, 8, 16, 64, 100, 256, 1000, 1024, 4096] {
        let mut rs = vec![1, 2, 3, n / 4, n / 2];
        rs.retain(|&r| r >= 1 && r <= n / 2);
        rs.sort_unstable();
        rs.dedup();
        for r in rs {
            let s = uniform(n, r);
            let sol = ClosedFormSolution::solve(&s).map_err(|e| e.to_string())?;
            // cos ω = (N-2r)/N, sin ω = 2√(r(N-r))/N
            let omega = (2.0 * ((r * (n - r)) as f64).sqrt()).atan2((n - 2 * r) as f64);
            let (sr, su) = ((r as f64).sqrt(), ((n - r) as f64).sqrt());
            let mut local = 0.0f64;
            s.run_observed(1000, |st| {
                let t = st.step();
                let x = omega * (t as f64 + 0.5);
                let (k, l) = (x.sin() / sr, x.cos() / su);
                let (kc, lc) = sol.average_amplitudes(t);
                local = local.max((kc - k).norm()).max((lc - l).norm());
                for (i, a) in st.amplitudes().iter().enumerate() {
                    let want = if st.config().is_marked(i) { k } else { l };
                    local = local.max((a - want).norm());
                }
            });
            ensure(local <= 1e-12, || format!("N={n} r={r}: {local:e}"))?;
            worst = worst.max(local);
            cases += 1;
        }
    }
    Ok(format!(
        "{cases} (N, r) pairs, t <= 1000, both engines, max error {worst:.2e} <= 1e-12"
    ))
}

/// `D_ij = 2/N - δ_ij` times the diagonal `±1` oracle, as explicit products.
fn dense_matrix_step() -> Outcome {
    let mut worst = 0.0f64;
    for seed in 0..50u64 {
        let n = [2usize, 3, 5, 8, 16, 17, 33, 64][seed as usize % 8];
        let r = 1 + (seed as usize / 8) % (n / 2).max(1);
        let s = state(DistributionKind::RandomComplex, n, r, seed);
        let flipped: Vec<Complex64> = s
            .amplitudes()
            .iter()
            .enumerate()
            .map(|(i, &a)| if s.config().is_marked(i) { -a } else { a })
            .collect();
        let off = 2.0 / n as f64;
        let dense: Vec<Complex64> = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| flipped[j] * if i == j { off - 1.0 } else { off })
                    .sum()
            })
            .collect();
        let err = max_abs_diff(s.grover_step().amplitudes(), &dense);
        ensure(err <= 1e-12, || format!("seed {seed} N={n}: {err:e}"))?;
        worst = worst.max(err);
    }
    Ok(format!(
        "50 states, N <= 64, max error {worst:.2e} <= 1e-12"
    ))
}

fn constants_of_motion() -> Outcome {
    let mut worst = 0.0f64;
    let mut cases = 0;
    for (n, r) in [
        (8usize, 1usize),
        (8, 4),
        (64, 5),
        (64, 32),
        (1024, 1),
        (1024, 77),
        (4096, 2),
        (4096, 2048),
    ] {
        for seed in 0..3u64 {
            let s0 = state(DistributionKind::RandomComplex, n, r, 7 * seed + n as u64);
            let st0 = s0.stats();
            let dk0: Vec<Complex64> = s0.marked_amplitudes().map(|k| k - st0.k_bar).collect();
            let dl0: Vec<Complex64> = s0.unmarked_amplitudes().map(|l| l - st0.l_bar).collect();
            let mut local = 0.0f64;
            s0.run_observed(1000, |s| {
                let st = s.stats();
                let sign = if s.step() % 2 == 0 { 1.0 } else { -1.0 };
                for (k, d) in s.marked_amplitudes().zip(&dk0) {
                    local = local.max((k - st.k_bar - d).norm());
                }
                for (l, d) in s.unmarked_amplitudes().zip(&dl0) {
                    local = local.max(((l - st.l_bar) * sign - d).norm());
                }
                local = local
                    .max((st.sigma_k_sq - st0.sigma_k_sq).abs())
                    .max((st.sigma_l_sq - st0.sigma_l_sq).abs());
            });
            ensure(local <= 1e-10, || {
                format!("N={n} r={r} seed={seed}: {local:e}")
            })?;
            worst = worst.max(local);
            cases += 1;
        }
    }
    Ok(format!(
        "{cases} states over 1000 steps, max drift {worst:.2e} <= 1e-10"
    ))
}

fn bound_and_tightness() -> Outcome {
    let mut worst_excess = f64::NEG_INFINITY;
    let mut worst_tight = 0.0f64;
    for seed in 0..50u64 {
        let n = [16usize, 64, 200, 1024][seed as usize % 4];
        let r = 1 + seed as usize % 7;
        let s = state(DistributionKind::RandomReal, n, r, seed);
        let sol = ClosedFormSolution::solve(&s).map_err(|e| e.to_string())?;
        ensure(sol.has_real_ratio(), || {
            format!("real state seed {seed} has complex ratio")
        })?;
        let horizon = 3 * sol.period().ceil() as u64;
        s.run_observed(horizon, |st| {
            let p = st
                .success_probability()
                .max(sol.success_probability(st.step()));
            worst_excess = worst_excess.max(p - sol.p_max());
        });
        let t = sol.optimal_time(0).map_err(|e| e.to_string())?.t_real;
        worst_tight = worst_tight.max((sol.success_probability_at(t) - sol.p_max()).abs());
    }
    ensure(worst_excess <= 1e-12, || {
        format!("real: P exceeds P_max by {worst_excess:e}")
    })?;
    ensure(worst_tight <= 1e-12, || {
        format!("P(T) misses P_max by {worst_tight:e}")
    })?;

    let mut complex_excess = f64::NEG_INFINITY;
    for seed in 0..50u64 {
        let n = [16usize, 64, 200, 1024][seed as usize % 4];
        let r = 1 + seed as usize % 7;
        let s = state(DistributionKind::RandomComplex, n, r, 1000 + seed);
        let sol = ClosedFormSolution::solve(&s).map_err(|e| e.to_string())?;
        ensure(!sol.has_real_ratio(), || {
            format!("complex seed {seed} has a real ratio")
        })?;
        let horizon = 3 * sol.period().ceil() as u64;
        s.run_observed(horizon, |st| {
            let p = st
                .success_probability()
                .max(sol.success_probability(st.step()));
            complex_excess = complex_excess.max(p - sol.p_max());
        });
        let scan = sol.plan(0);
        ensure(scan.method == PlanMethod::NumericScan, || {
            "complex ratio not scanned".into()
        })?;
        ensure(scan.predicted_success <= sol.p_max(), || {
            format!(
                "scan optimum {} above P_max {}",
                scan.predicted_success,
                sol.p_max()
            )
        })?;
    }
    ensure(complex_excess <= 1e-12, || {
        format!("complex: P exceeds P_max by {complex_excess:e}")
    })?;
    Ok(format!(
        "real: max excess {worst_excess:.1e}, |P(T)-P_max| {worst_tight:.1e}; complex: max excess {complex_excess:.1e}"
    ))
}

fn optimal_time_planning() -> Outcome {
    let s = uniform(1024, 1);
    let sol = ClosedFormSolution::solve(&s).map_err(|e| e.to_string())?;
    let plan = sol.plan(0);
    let mut best = (0u64, f64::NEG_INFINITY);
    let mut at_plan = f64::NAN;
    s.run_observed(sol.scan_horizon(), |st| {
        let p = st.success_probability();
        if p > best.1 {
            best = (st.step(), p);
        }
        if st.step() == plan.t_step {
            at_plan = p;
        }
    });
    ensure(plan.method == PlanMethod::ClosedForm, || {
        "N=1024 not planned in closed form".into()
    })?;
    ensure(plan.t_step == 25, || {
        format!("N=1024 t_step = {}", plan.t_step)
    })?;
    ensure(at_plan >= 0.999, || {
        format!("N=1024 achieved P = {at_plan}")
    })?;
    ensure(best.0 == plan.t_step, || {
        format!("brute-force argmax {} != {}", best.0, plan.t_step)
    })?;

    let s4 = uniform(4, 1);
    let sol4 = ClosedFormSolution::solve(&s4).map_err(|e| e.to_string())?;
    let plan4 = sol4.plan(0);
    let p4 = s4.run(plan4.t_step).success_probability();
    ensure(plan4.t_step == 1, || {
        format!("N=4 t_step = {}", plan4.t_step)
    })?;
    ensure((p4 - 1.0).abs() <= 1e-12, || format!("N=4 P = {p4}"))?;
    Ok(format!(
        "N=1024: t_step=25, P={at_plan:.6}, brute-force argmax {}; N=4: t_step=1, |P-1|={:.1e}",
        best.0,
        (p4 - 1.0).abs()
    ))
}

fn expansion_quality() -> Outcome {
    let mut errs = Vec::new();
    let mut ratio = f64::NAN;
    for log2n in [10u32, 14, 18] {
        let n = 1usize << log2n;
        let sol = ClosedFormSolution::solve(&uniform(n, 1)).map_err(|e| e.to_string())?;
        let exact = sol.optimal_time(0).map_err(|e| e.to_string())?.t_real;
        let approx = sol.optimal_time_approx().map_err(|e| e.to_string())?;
        errs.push((exact - approx).abs());
        ratio = exact / (n as f64).sqrt();
    }
    ensure(errs.windows(2).all(|w| w[1] < w[0]), || {
        format!("errors not decreasing: {errs:?}")
    })?;
    ensure(errs[0] <= 1.0, || format!("error at 2^10 is {}", errs[0]))?;
    let rel = (ratio / (PI / 4.0) - 1.0).abs();
    ensure(rel <= 0.01, || {
        format!(
            "T/sqrt(N) at 2^18 is {ratio}, {:.3}% from pi/4",
            rel * 100.0
        )
    })?;
    Ok(format!(
        "|T-T_approx| = {:.2e}, {:.2e}, {:.2e}; T/sqrt(N) at 2^18 within {:.3}% of pi/4",
        errs[0],
        errs[1],
        errs[2],
        rel * 100.0
    ))
}

/// Least-squares slope of log(mean scan-optimal step) against log N.
fn scaling_exponent() -> Outcome {
    let settings = SweepSettings {
        n: (8..=16).map(|k| 1u64 << k).collect(),
        r: vec!["1".into()],
        dist: vec![DistName::RandomReal],
        seed: 0,
        seeds: 1024,
        mean: 0.0,
        spread: 1.0,
        allow_large_r: false,
        tol: 1e-10,
        output: OutputSettings {
            out: None,
            format: Format::Csv,
        },
    };
    let report = sweep(&settings).map_err(|e| e.to_string())?;
    ensure(report.failed == 0, || {
        format!("{} sweep rows failed", report.failed)
    })?;
    let points: Vec<(f64, f64)> = settings
        .n
        .iter()
        .map(|&n| {
            let steps: Vec<f64> = report
                .rows
                .iter()
                .filter(|row| row.n == n)
                .map(|row| row.t_scan.unwrap() as f64)
                .collect();
            let mean = steps.iter().sum::<f64>() / steps.len() as f64;
            ((n as f64).ln(), mean.ln())
        })
        .collect();
    let m = points.len() as f64;
    let (mx, my) = (
        points.iter().map(|p| p.0).sum::<f64>() / m,
        points.iter().map(|p| p.1).sum::<f64>() / m,
    );
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = points.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let slope = sxy / sxx;
    ensure((slope - 0.5).abs() <= 0.02, || format!("slope {slope:.4}"))?;
    Ok(format!(
        "slope {slope:.4} over N=2^8..2^16, 1024 random-real seeds per N"
    ))
}

fn diagonalization() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let (mut worst_gamma, mut worst_cos, mut worst_evo) = (0.0f64, 0.0f64, 0.0f64);
    for i in 0..1000 {
        let n: u64 = 2u64.max((2.0f64).powf(rng.random_range(1.0..40.0)) as u64);
        let r = if n < 4 {
            1
        } else if i % 2 == 0 {
            rng.random_range(1..=n / 2)
        } else {
            ((2.0f64).powf(rng.random_range(0.0..(n as f64 / 2.0).log2())) as u64).clamp(1, n / 2)
        };
        let g = Geometry::new(n, r, false).map_err(|e| e.to_string())?;
        let mut z = || Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
        let (k, l) = (z(), z());
        let norm = (r as f64 * k.norm_sqr() + (n - r) as f64 * l.norm_sqr()).sqrt();
        let rep = verify_diagonalization(g, k / norm, l / norm, 100);
        ensure(rep.passed(), || {
            format!("N={n} r={r}: {:?}", rep.violations)
        })?;
        let cos_err = (rep.omega.cos() - (1.0 - 2.0 * r as f64 / n as f64)).abs();
        ensure(cos_err <= 1e-12, || {
            format!("N={n} r={r}: cos error {cos_err:e}")
        })?;
        worst_gamma = worst_gamma.max((rep.gamma - 1.0).abs());
        worst_cos = worst_cos.max(cos_err);
        worst_evo = worst_evo.max(rep.evolution_error);
    }
    ensure(worst_gamma <= 1e-12, || {
        format!("|gamma-1| = {worst_gamma:e}")
    })?;
    ensure(worst_evo <= 1e-10, || {
        format!("matrix-power error {worst_evo:e}")
    })?;
    Ok(format!(
        "1000 geometries: |gamma-1| {worst_gamma:.1e}, cos error {worst_cos:.1e}, A^t error {worst_evo:.1e}"
    ))
}

fn run_cli(args: &[&str]) -> Result<Vec<u8>, String> {
    let out = Command::new(env!("CARGO_BIN_EXE_gsearch"))
        .args(args)
        .output()
        .map_err(|e| e.to_string())?;
    ensure(out.status.success(), || {
        format!(
            "{args:?} exited {}: {}",
            out.status,
            String::from_utf8_lossy(&out.stderr)
        )
    })?;
    Ok(out.stdout)
}

fn determinism() -> Outcome {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let invocations: [&[&str]; 7] = [
        &[
            "simulate",
            "--n",
            "256",
            "--r",
            "3",
            "--dist",
            "random-complex",
            "--seed",
            "17",
            "--steps",
            "60",
        ],
        &[
            "simulate",
            "--n",
            "128",
            "--r",
            "2",
            "--dist",
            "gaussian-real",
            "--seed",
            "5",
            "--steps",
            "40",
            "--format",
            "json",
            "--sample",
        ],
        &[
            "predict",
            "--n",
            "1024",
            "--r",
            "4",
            "--dist",
            "random-real",
            "--seed",
            "3",
            "--j",
            "0,1,2",
        ],
        &[
            "predict",
            "--n",
            "512",
            "--r",
            "1",
            "--dist",
            "random-complex",
            "--seed",
            "8",
            "--format",
            "csv",
        ],
        &[
            "compare",
            "--n",
            "300",
            "--r",
            "7",
            "--dist",
            "random-complex",
            "--seed",
            "11",
            "--steps",
            "200",
        ],
        &[
            "sweep",
            "--n",
            "2^6..2^10",
            "--r",
            "1,n/16",
            "--dist",
            "uniform,random-real,random-complex",
            "--seeds",
            "4",
            "--seed",
            "21",
        ],
        &[
            "sweep",
            "--n",
            "100,2^9",
            "--dist",
            "gaussian-real",
            "--seeds",
            "3",
            "--format",
            "json",
        ],
    ];
    let mut bytes = 0;
    for (i, args) in invocations.iter().enumerate() {
        let a = run_cli(args)?;
        let b = run_cli(args)?;
        ensure(!a.is_empty() && a == b, || {
            format!("stdout differs for {args:?}")
        })?;

        // The config echo records the output path, so both runs share it.
        let path = dir.path().join(format!("out{i}"));
        let mut with_out: Vec<&str> = args.to_vec();
        with_out.extend(["--out", path.to_str().unwrap()]);
        run_cli(&with_out)?;
        let fa = read(&path)?;
        run_cli(&with_out)?;
        let fb = read(&path)?;
        ensure(!fa.is_empty() && fa == fb, || {
            format!("file output differs for {args:?}")
        })?;
        bytes += a.len();
    }
    let other = run_cli(&[
        "simulate",
        "--n",
        "256",
        "--r",
        "3",
        "--dist",
        "random-complex",
        "--seed",
        "18",
        "--steps",
        "60",
    ])?;
    let base = run_cli(invocations[0])?;
    ensure(other != base, || {
        "different seeds gave identical output".into()
    })?;
    Ok(format!(
        "{} invocations byte-identical across runs ({bytes} bytes)",
        invocations.len()
    ))
}

fn read(path: &Path) -> Result<Vec<u8>, String> {
    std::fs::read(path).map_err(|e| format!("{}: {e}", path.display()))
}
