//! Executes configured suites: builds seeded instances, solves them, and
//! aggregates metrics. One failed run never aborts a suite.

use std::time::Instant;

use anyhow::{bail, Context, Result};
use rayon::prelude::*;

use proxsplit::cs::CsProblem;
use proxsplit::generate::{
    apply_idct, build_case_instance, make_reconstruction_instance, random_mask, scaled_case,
    synthetic_signal, table_case, CaseSpec, CsInstance, InstanceKind, ReconstructionSpec,
    SignalKind,
};
use proxsplit::rng::derive_seed;
use proxsplit::{
    bdr_solve, relative_change, BenchReport, ConvergenceTrace, DenseVector, Error, IterateState,
    RunOutcome, SolverParams, SplittingProblem,
};

use crate::config::{ExperimentConfig, GammaMode, Suite};
use crate::report;

/// Signal-to-noise ratio `20 log10(||u|| / ||u - u_hat||)` in dB;
/// `+inf` for an exact reconstruction.
pub fn snr_db(u: &DenseVector, u_hat: &DenseVector) -> proxsplit::Result<f64> {
    if u.len() != u_hat.len() {
        return Err(Error::DimensionMismatch {
            expected: u.len(),
            got: u_hat.len(),
        });
    }
    let signal = u.norm();
    if signal == 0.0 {
        return Err(Error::InvalidParam {
            name: "u",
            reason: "SNR is undefined for the zero signal".to_string(),
        });
    }
    let noise = u.dist(u_hat);
    if noise == 0.0 {
        return Ok(f64::INFINITY);
    }
    Ok(20.0 * (signal / noise).log10())
}

/// Per-case aggregates (means are over non-diverged runs).
#[derive(Debug, Clone)]
pub struct CaseSummary {
    pub case_id: String,
    pub m: usize,
    pub d: usize,
    pub s: usize,
    pub runs: usize,
    pub mean_iterations: f64,
    pub mean_error: f64,
    pub mean_snr_db: f64,
    pub mean_wall_time_s: f64,
    pub tolerance_count: usize,
    pub max_iter_count: usize,
    pub diverged_count: usize,
}

pub struct SuiteOutcome {
    pub summaries: Vec<CaseSummary>,
    pub reports: Vec<BenchReport>,
}

struct RunOutput {
    report: BenchReport,
    trace: ConvergenceTrace,
}

fn solver_params(cfg: &ExperimentConfig, ell: f64) -> proxsplit::Result<SolverParams> {
    let mut params = match cfg.gamma_mode {
        GammaMode::Theory => SolverParams::fixed_step(cfg.nu, 0.0, ell)?,
        GammaMode::Heuristic => {
            let mut p = SolverParams::adaptive(cfg.gamma0, cfg.k_factor, 0.0, ell)?;
            p.nu = cfg.nu;
            p
        }
    };
    params.tau = cfg.tau;
    params.tol = cfg.tol;
    params.max_iter = cfg.max_iter;
    params.monitor_lyapunov = cfg.monitor;
    params.validate()?;
    Ok(params)
}

/// Solves one instance and scores it against `truth` (coefficient space)
/// or, when `signal` is given, against the time series via the synthesis
/// transform.
fn run_instance(
    cfg: &ExperimentConfig,
    case_id: &str,
    dims: (usize, usize, usize),
    seed: u64,
    inst: &CsInstance,
    signal: Option<&DenseVector>,
) -> Result<RunOutput> {
    let (m, d, s) = dims;
    let started = Instant::now();
    let problem = CsProblem::new(inst.a.clone(), inst.b.clone(), inst.lambda)?;
    let params = solver_params(cfg, problem.lipschitz_ell())?;

    let (outcome, iterations, trace, z) =
        match bdr_solve(&problem, &params, IterateState::origin(problem.dim())) {
            Ok(result) => (
                RunOutcome::from(result.terminated_by),
                result.state.n,
                result.trace,
                Some(result.state.z),
            ),
            Err(Error::Diverged { iter, .. }) => {
                (RunOutcome::Diverged, iter, ConvergenceTrace::new(), None)
            }
            Err(other) => return Err(other).context("solver failed"),
        };
    let wall_time_s = started.elapsed().as_secs_f64();

    let (error, snr) = match &z {
        Some(z) => match signal {
            Some(u) => {
                let u_hat = apply_idct(z);
                (u.dist(&u_hat) / u.norm(), snr_db(u, &u_hat)?)
            }
            None => match &inst.ground_truth {
                Some(truth) => (relative_change(z, truth)?, snr_db(truth, z)?),
                None => (f64::NAN, f64::NAN),
            },
        },
        None => (f64::NAN, f64::NAN),
    };

    Ok(RunOutput {
        report: BenchReport {
            case_id: case_id.to_string(),
            m,
            d,
            s,
            seed,
            iterations,
            error_vs_ground_truth: error,
            snr_db: snr,
            wall_time_s,
            terminated_by: outcome,
        },
        trace,
    })
}

fn summarize(case_id: &str, dims: (usize, usize, usize), reports: &[BenchReport]) -> CaseSummary {
    let mut iter_sum = 0.0;
    let mut err_sum = 0.0;
    let mut snr_sum = 0.0;
    let mut time_sum = 0.0;
    let mut ok = 0usize;
    let (mut tol_count, mut max_count, mut div_count) = (0, 0, 0);
    for r in reports {
        match r.terminated_by {
            RunOutcome::Tolerance => tol_count += 1,
            RunOutcome::MaxIter => max_count += 1,
            RunOutcome::Diverged => div_count += 1,
        }
        if r.terminated_by != RunOutcome::Diverged {
            ok += 1;
            iter_sum += r.iterations as f64;
            err_sum += r.error_vs_ground_truth;
            snr_sum += r.snr_db;
            time_sum += r.wall_time_s;
        }
    }
    let denom = ok.max(1) as f64;
    CaseSummary {
        case_id: case_id.to_string(),
        m: dims.0,
        d: dims.1,
        s: dims.2,
        runs: reports.len(),
        mean_iterations: iter_sum / denom,
        mean_error: err_sum / denom,
        mean_snr_db: snr_sum / denom,
        mean_wall_time_s: time_sum / denom,
        tolerance_count: tol_count,
        max_iter_count: max_count,
        diverged_count: div_count,
    }
}

fn run_synthetic_case(cfg: &ExperimentConfig, case: CaseSpec) -> Result<Vec<RunOutput>> {
    let scaled = scaled_case(case, cfg.scale);
    let label = format!("case{}", case.id);
    (0..cfg.runs)
        .into_par_iter()
        .map(|run| {
            let seed = derive_seed(cfg.seed_base, &[case.id as u64, run as u64]);
            let inst = build_case_instance(&scaled, cfg.lambda, cfg.sigma, seed)?;
            run_instance(
                cfg,
                &label,
                (scaled.m, scaled.d, scaled.s),
                seed,
                &inst,
                None,
            )
        })
        .collect()
}

fn run_reconstruction_case(
    cfg: &ExperimentConfig,
    length: usize,
    rate: f64,
) -> Result<Vec<RunOutput>> {
    let label = reconstruction_label(cfg.signal, length, rate);
    let rate_key = (rate * 1000.0).round() as u64;
    let m = ((rate * length as f64).round() as usize).max(1);
    (0..cfg.runs)
        .into_par_iter()
        .map(|run| {
            let seed = derive_seed(cfg.seed_base, &[length as u64, rate_key, run as u64]);
            let signal = synthetic_signal(cfg.signal, length, derive_seed(seed, &[10]))?;
            let mask = random_mask(length, rate, derive_seed(seed, &[11]))?;
            let spec = ReconstructionSpec {
                signal: signal.clone(),
                mask,
                noise_sigma: cfg.sigma,
                seed: derive_seed(seed, &[12]),
            };
            let inst = make_reconstruction_instance(&spec, cfg.lambda)?;
            run_instance(cfg, &label, (m, length, 0), seed, &inst, Some(&signal))
        })
        .collect()
}

pub fn reconstruction_label(kind: SignalKind, length: usize, rate: f64) -> String {
    format!(
        "recon_{}_d{}_r{}",
        kind.as_str(),
        length,
        (rate * 100.0).round() as usize
    )
}

/// Runs every case of the configured suite, writes `summary.csv`,
/// `runs.csv`, and per-run `trace_<case>_<run>.csv` files into
/// `cfg.output_dir`, and returns the aggregates.
pub fn run_suite(cfg: &ExperimentConfig) -> Result<SuiteOutcome> {
    cfg.validate()?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.threads)
        .build()
        .context("cannot build thread pool")?;

    // (label, dims, runs)
    let mut cases: Vec<(String, (usize, usize, usize), Vec<RunOutput>)> = Vec::new();
    match cfg.suite {
        Suite::GaussianCases | Suite::PdctCases => {
            for &id in &cfg.case_ids {
                let case = table_case(id).map_err(anyhow::Error::from)?;
                let scaled = scaled_case(case, cfg.scale);
                let outputs = pool.install(|| run_synthetic_case(cfg, case))?;
                cases.push((
                    format!("case{id}"),
                    (scaled.m, scaled.d, scaled.s),
                    outputs,
                ));
            }
        }
        Suite::Reconstruction => {
            for &length in &cfg.lengths {
                for &rate in &cfg.rates {
                    let outputs = pool.install(|| run_reconstruction_case(cfg, length, rate))?;
                    let m = ((rate * length as f64).round() as usize).max(1);
                    cases.push((
                        reconstruction_label(cfg.signal, length, rate),
                        (m, length, 0),
                        outputs,
                    ));
                }
            }
        }
        Suite::Single => {
            let case = CaseSpec {
                id: 0,
                m: cfg.m,
                d: cfg.d,
                s: cfg.s,
                kind: cfg.matrix,
            };
            if case.kind == InstanceKind::Pdct && case.m > case.d {
                bail!("pdct needs m <= d");
            }
            let outputs = pool.install(|| run_synthetic_case(cfg, case))?;
            cases.push((
                format!("single_m{}_d{}_s{}", cfg.m, cfg.d, cfg.s),
                (cfg.m, cfg.d, cfg.s),
                outputs,
            ));
        }
    }

    std::fs::create_dir_all(&cfg.output_dir)
        .with_context(|| format!("cannot create {}", cfg.output_dir.display()))?;

    let mut summaries = Vec::new();
    let mut all_reports = Vec::new();
    for (label, dims, outputs) in cases {
        let reports: Vec<BenchReport> = outputs.iter().map(|o| o.report.clone()).collect();
        summaries.push(summarize(&label, dims, &reports));
        if cfg.write_traces {
            for (run, output) in outputs.iter().enumerate() {
                report::write_trace(&cfg.output_dir, &label, run, &output.trace)?;
            }
        }
        all_reports.extend(reports);
    }
    report::write_summary(&cfg.output_dir, &summaries, cfg.threads)?;
    report::write_runs(&cfg.output_dir, &all_reports)?;

    Ok(SuiteOutcome {
        summaries,
        reports: all_reports,
    })
}
