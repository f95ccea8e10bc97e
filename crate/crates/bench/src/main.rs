//! `bench` — seeded sparse-recovery experiments for the proxsplit solver.

use std::path::PathBuf;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};

use proxsplit::cs::CsProblem;
use proxsplit::fileio::{load_signal_csv, read_instance, save_signal_csv};
use proxsplit::generate::{
    apply_idct, make_reconstruction_instance, random_mask, synthetic_signal, ReconstructionSpec,
    SignalKind,
};
use proxsplit::rng::derive_seed;
use proxsplit::{
    bdr_solve, objective_value, relative_change, IterateState, SplittingProblem,
};

use proxsplit_bench::config::{ExperimentConfig, GammaMode, Suite};
use proxsplit_bench::{report, runner};

#[derive(Parser)]
#[command(
    name = "bench",
    about = "Sparse-recovery benchmark harness (splitting solver, seeded suites, CSV reports)"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a benchmark suite and write summary.csv / runs.csv / traces.
    Run(RunArgs),
    /// Reconstruct a signal from a random subset of its noisy samples.
    Reconstruct(ReconstructArgs),
    /// Solve a single instance file.
    Solve(SolveArgs),
}

#[derive(Args)]
struct CommonSolverFlags {
    /// Stopping tolerance on the relative change of z.
    #[arg(long)]
    tol: Option<f64>,
    /// Iteration cap.
    #[arg(long)]
    max_iter: Option<usize>,
    /// Relaxation factor in (0, 2).
    #[arg(long)]
    nu: Option<f64>,
    /// Dual prox weight.
    #[arg(long)]
    tau: Option<f64>,
    /// Step-size policy: theory | heuristic.
    #[arg(long)]
    gamma_mode: Option<String>,
    /// Base step of the heuristic policy.
    #[arg(long)]
    gamma0: Option<f64>,
    /// Initial step multiplier of the heuristic policy.
    #[arg(long)]
    k_factor: Option<f64>,
    /// Record the merit function in traces.
    #[arg(long)]
    monitor: bool,
}

impl CommonSolverFlags {
    fn push_overrides(&self, overrides: &mut Vec<(String, String)>) {
        let mut push = |k: &str, v: String| overrides.push((k.to_string(), v));
        if let Some(v) = self.tol {
            push("tol", v.to_string());
        }
        if let Some(v) = self.max_iter {
            push("max_iter", v.to_string());
        }
        if let Some(v) = self.nu {
            push("nu", v.to_string());
        }
        if let Some(v) = self.tau {
            push("tau", v.to_string());
        }
        if let Some(v) = &self.gamma_mode {
            push("gamma_mode", v.clone());
        }
        if let Some(v) = self.gamma0 {
            push("gamma0", v.to_string());
        }
        if let Some(v) = self.k_factor {
            push("k_factor", v.to_string());
        }
        if self.monitor {
            push("monitor", "true".to_string());
        }
    }
}

#[derive(Args)]
struct RunArgs {
    /// Flat key=value config file (flags override it).
    #[arg(long)]
    config: Option<PathBuf>,
    /// Suite: gaussian | pdct | reconstruction | single.
    #[arg(long)]
    suite: Option<String>,
    /// Comma-separated case ids (gaussian 1-10, pdct 11-20).
    #[arg(long)]
    cases: Option<String>,
    /// Repetitions per case.
    #[arg(long)]
    runs: Option<usize>,
    /// Uniform down-scaling of (m, d, s), in (0, 1].
    #[arg(long)]
    scale: Option<f64>,
    /// Regularization weight.
    #[arg(long)]
    lambda: Option<f64>,
    /// Measurement-noise standard deviation.
    #[arg(long)]
    sigma: Option<f64>,
    /// Base seed for the run-seed derivation.
    #[arg(long)]
    seed: Option<u64>,
    /// Worker threads for parallel runs.
    #[arg(long)]
    threads: Option<usize>,
    /// Output directory.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Skip per-run trace files.
    #[arg(long)]
    no_traces: bool,
    /// Synthetic signal family for the reconstruction suite.
    #[arg(long)]
    signal: Option<String>,
    /// Signal lengths for the reconstruction suite (comma-separated).
    #[arg(long)]
    lengths: Option<String>,
    /// Sampling rates for the reconstruction suite (comma-separated).
    #[arg(long)]
    rates: Option<String>,
    #[command(flatten)]
    solver: CommonSolverFlags,
}

#[derive(Args)]
struct ReconstructArgs {
    /// Ground-truth signal file (one value per line, optional header).
    #[arg(long, conflicts_with = "synthetic")]
    signal: Option<PathBuf>,
    /// Generate the ground truth instead: smooth_sinusoid | piecewise_load.
    #[arg(long)]
    synthetic: Option<String>,
    /// Length of the synthetic signal.
    #[arg(long, default_value_t = 2000)]
    length: usize,
    /// Fraction of samples observed, in (0, 1].
    #[arg(long, default_value_t = 0.4)]
    rate: f64,
    /// Regularization weight.
    #[arg(long, default_value_t = 0.1)]
    lambda: f64,
    /// Observation-noise standard deviation.
    #[arg(long, default_value_t = 1e-3)]
    sigma: f64,
    /// Seed for mask, noise, and synthetic signal.
    #[arg(long, default_value_t = 12345)]
    seed: u64,
    /// Output directory.
    #[arg(long, default_value = "recon-out")]
    out: PathBuf,
    #[command(flatten)]
    solver: CommonSolverFlags,
}

#[derive(Args)]
struct SolveArgs {
    /// Instance file (see the instance container format in the README).
    #[arg(long)]
    instance: PathBuf,
    /// Write the convergence trace to this CSV file.
    #[arg(long)]
    trace_out: Option<PathBuf>,
    #[command(flatten)]
    solver: CommonSolverFlags,
}

fn cmd_run(args: RunArgs) -> Result<()> {
    let mut overrides: Vec<(String, String)> = Vec::new();
    let mut push = |k: &str, v: String| overrides.push((k.to_string(), v));
    if let Some(v) = &args.suite {
        push("suite", v.clone());
    }
    if let Some(v) = &args.cases {
        push("cases", v.clone());
    }
    if let Some(v) = args.runs {
        push("runs", v.to_string());
    }
    if let Some(v) = args.scale {
        push("scale", v.to_string());
    }
    if let Some(v) = args.lambda {
        push("lambda", v.to_string());
    }
    if let Some(v) = args.sigma {
        push("sigma", v.to_string());
    }
    if let Some(v) = args.seed {
        push("seed_base", v.to_string());
    }
    if let Some(v) = args.threads {
        push("threads", v.to_string());
    }
    if let Some(v) = &args.out {
        push("output_dir", v.display().to_string());
    }
    if args.no_traces {
        push("write_traces", "false".to_string());
    }
    if let Some(v) = &args.signal {
        push("signal", v.clone());
    }
    if let Some(v) = &args.lengths {
        push("lengths", v.clone());
    }
    if let Some(v) = &args.rates {
        push("rates", v.clone());
    }
    args.solver.push_overrides(&mut overrides);

    let mut cfg = proxsplit_bench::parse_config(args.config.as_deref(), &overrides)?;
    // the reconstruction protocol defaults to the adaptive step policy
    if cfg.suite == Suite::Reconstruction
        && args.solver.gamma_mode.is_none()
        && args.config.is_none()
    {
        cfg.gamma_mode = GammaMode::Heuristic;
    }

    let outcome = runner::run_suite(&cfg)?;
    for s in &outcome.summaries {
        println!(
            "{}: runs={} mean_iters={:.1} mean_error={:.4e} mean_snr={:.2} dB ({} tolerance, {} max_iter, {} diverged)",
            s.case_id,
            s.runs,
            s.mean_iterations,
            s.mean_error,
            s.mean_snr_db,
            s.tolerance_count,
            s.max_iter_count,
            s.diverged_count,
        );
    }
    println!("reports written to {}", cfg.output_dir.display());
    Ok(())
}

fn solver_config(flags: &CommonSolverFlags, default_mode: GammaMode) -> Result<ExperimentConfig> {
    let mut cfg = ExperimentConfig::default();
    cfg.gamma_mode = default_mode;
    let mut overrides = Vec::new();
    flags.push_overrides(&mut overrides);
    for (k, v) in &overrides {
        cfg.apply_kv(k, v)?;
    }
    Ok(cfg)
}

fn cmd_reconstruct(args: ReconstructArgs) -> Result<()> {
    let signal = match (&args.signal, &args.synthetic) {
        (Some(path), None) => load_signal_csv(path)?,
        (None, Some(kind)) => {
            let kind = SignalKind::parse(kind)
                .with_context(|| format!("unknown synthetic kind `{kind}`"))?;
            synthetic_signal(kind, args.length, derive_seed(args.seed, &[10]))?
        }
        (None, None) => bail!("provide --signal FILE or --synthetic KIND"),
        (Some(_), Some(_)) => unreachable!("clap conflicts_with"),
    };
    let d = signal.len();
    let mask = random_mask(d, args.rate, derive_seed(args.seed, &[11]))?;
    let spec = ReconstructionSpec {
        signal: signal.clone(),
        mask,
        noise_sigma: args.sigma,
        seed: derive_seed(args.seed, &[12]),
    };
    let inst = make_reconstruction_instance(&spec, args.lambda)?;

    let cfg = solver_config(&args.solver, GammaMode::Heuristic)?;
    let problem = CsProblem::new(inst.a.clone(), inst.b.clone(), inst.lambda)?;
    let params = {
        let mut p = match cfg.gamma_mode {
            GammaMode::Theory => proxsplit::SolverParams::fixed_step(cfg.nu, 0.0, problem.lipschitz_ell())?,
            GammaMode::Heuristic => {
                proxsplit::SolverParams::adaptive(cfg.gamma0, cfg.k_factor, 0.0, problem.lipschitz_ell())?
            }
        };
        p.nu = cfg.nu;
        p.tau = cfg.tau;
        p.tol = cfg.tol;
        p.max_iter = cfg.max_iter;
        p.monitor_lyapunov = cfg.monitor;
        p
    };
    let result = bdr_solve(&problem, &params, IterateState::origin(d))?;
    let reconstructed = apply_idct(&result.state.z);
    let error = signal.dist(&reconstructed) / signal.norm();
    let snr = runner::snr_db(&signal, &reconstructed)?;

    std::fs::create_dir_all(&args.out)
        .with_context(|| format!("cannot create {}", args.out.display()))?;
    save_signal_csv(&args.out.join("reconstructed.csv"), &reconstructed)?;
    report::write_trace(&args.out, "reconstruct", 0, &result.trace)?;
    println!(
        "reconstruction: d={d} observed={} iterations={} stop={} error={:.4e} snr={:.3} dB",
        spec.mask.len(),
        result.state.n,
        result.terminated_by.as_str(),
        error,
        snr,
    );
    println!("outputs written to {}", args.out.display());
    Ok(())
}

fn cmd_solve(args: SolveArgs) -> Result<()> {
    let inst = read_instance(&args.instance)?;
    let cfg = solver_config(&args.solver, GammaMode::Theory)?;
    let problem = CsProblem::new(inst.a.clone(), inst.b.clone(), inst.lambda)?;
    let mut params = match cfg.gamma_mode {
        GammaMode::Theory => proxsplit::SolverParams::fixed_step(cfg.nu, 0.0, problem.lipschitz_ell())?,
        GammaMode::Heuristic => {
            proxsplit::SolverParams::adaptive(cfg.gamma0, cfg.k_factor, 0.0, problem.lipschitz_ell())?
        }
    };
    params.nu = cfg.nu;
    params.tau = cfg.tau;
    params.tol = cfg.tol;
    params.max_iter = cfg.max_iter;
    params.monitor_lyapunov = cfg.monitor;

    let result = bdr_solve(&problem, &params, IterateState::origin(problem.dim()))?;
    println!(
        "solve: m={} d={} ell={:.6e} gamma={:.6e} iterations={} stop={} objective={:.6e} gap={:.3e}",
        inst.a.rows(),
        inst.a.cols(),
        problem.lipschitz_ell(),
        result.final_gamma,
        result.state.n,
        result.terminated_by.as_str(),
        objective_value(&problem, &result.state.z),
        result.stationarity_gap,
    );
    if let Some(truth) = &inst.ground_truth {
        println!(
            "error vs ground truth: {:.6e}",
            relative_change(&result.state.z, truth)?
        );
    }
    if let Some(path) = &args.trace_out {
        let dir = path.parent().unwrap_or_else(|| std::path::Path::new("."));
        let stem = path
            .file_stem()
            .and_then(|s| s.to_str())
            .unwrap_or("trace");
        std::fs::create_dir_all(dir).ok();
        // write through the shared trace writer, then move to the exact name
        let tmp = report::write_trace(dir, stem, 0, &result.trace)?;
        std::fs::rename(&tmp, path)
            .with_context(|| format!("cannot write {}", path.display()))?;
        println!("trace written to {}", path.display());
    }
    Ok(())
}

fn main() -> Result<()> {
    match Cli::parse().command {
        Command::Run(args) => cmd_run(args),
        Command::Reconstruct(args) => cmd_reconstruct(args),
        Command::Solve(args) => cmd_solve(args),
    }
}
