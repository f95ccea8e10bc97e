//! Experiment configuration: defaults, flat key-value config files, and
//! validation. Precedence is defaults < config file < command-line flags.

use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use proxsplit::generate::{InstanceKind, SignalKind};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    GaussianCases,
    PdctCases,
    Reconstruction,
    Single,
}

impl Suite {
    pub fn as_str(&self) -> &'static str {
        match self {
            Suite::GaussianCases => "gaussian",
            Suite::PdctCases => "pdct",
            Suite::Reconstruction => "reconstruction",
            Suite::Single => "single",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "gaussian" | "gaussian_cases" => Ok(Suite::GaussianCases),
            "pdct" | "pdct_cases" => Ok(Suite::PdctCases),
            "reconstruction" => Ok(Suite::Reconstruction),
            "single" => Ok(Suite::Single),
            other => bail!("unknown suite `{other}` (gaussian|pdct|reconstruction|single)"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GammaMode {
    /// Fixed step just below the admissible bound.
    Theory,
    /// Start at `k_factor * gamma0` and back off adaptively.
    Heuristic,
}

impl GammaMode {
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "theory" => Ok(GammaMode::Theory),
            "heuristic" => Ok(GammaMode::Heuristic),
            other => bail!("unknown gamma mode `{other}` (theory|heuristic)"),
        }
    }
}

/// Full description of a benchmark run.
#[derive(Debug, Clone)]
pub struct ExperimentConfig {
    pub suite: Suite,
    pub case_ids: Vec<usize>,
    pub runs: usize,
    pub lambda: f64,
    pub scale: f64,
    pub sigma: f64,
    pub seed_base: u64,
    pub output_dir: PathBuf,
    pub tol: f64,
    pub max_iter: usize,
    pub nu: f64,
    pub tau: f64,
    pub gamma_mode: GammaMode,
    pub gamma0: f64,
    pub k_factor: f64,
    pub threads: usize,
    pub write_traces: bool,
    pub monitor: bool,
    // reconstruction suite
    pub signal: SignalKind,
    pub lengths: Vec<usize>,
    pub rates: Vec<f64>,
    // single suite
    pub m: usize,
    pub d: usize,
    pub s: usize,
    pub matrix: InstanceKind,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            suite: Suite::GaussianCases,
            case_ids: vec![1],
            runs: 30,
            lambda: 0.1,
            scale: 1.0,
            sigma: 1e-3,
            seed_base: 12345,
            output_dir: PathBuf::from("bench-out"),
            tol: 1e-6,
            max_iter: 3000,
            nu: 1.4,
            tau: 20.0,
            gamma_mode: GammaMode::Theory,
            gamma0: 0.447,
            k_factor: 10.0,
            threads: 1,
            write_traces: true,
            monitor: false,
            signal: SignalKind::SmoothSinusoid,
            lengths: vec![2000],
            rates: vec![0.4],
            m: 36,
            d: 128,
            s: 4,
            matrix: InstanceKind::Gaussian,
        }
    }
}

fn parse_list<T: std::str::FromStr>(value: &str, key: &str) -> Result<Vec<T>> {
    value
        .split(',')
        .map(|t| t.trim())
        .filter(|t| !t.is_empty())
        .map(|t| {
            t.parse::<T>()
                .map_err(|_| anyhow::anyhow!("bad element `{t}` in `{key}`"))
        })
        .collect()
}

impl ExperimentConfig {
    /// Applies one `key = value` pair. Unknown keys are rejected by name.
    pub fn apply_kv(&mut self, key: &str, value: &str) -> Result<()> {
        match key {
            "suite" => self.suite = Suite::parse(value)?,
            "cases" => self.case_ids = parse_list(value, key)?,
            "runs" => self.runs = value.parse().context("bad `runs`")?,
            "lambda" => self.lambda = value.parse().context("bad `lambda`")?,
            "scale" => self.scale = value.parse().context("bad `scale`")?,
            "sigma" => self.sigma = value.parse().context("bad `sigma`")?,
            "seed_base" => self.seed_base = value.parse().context("bad `seed_base`")?,
            "output_dir" => self.output_dir = PathBuf::from(value),
            "tol" => self.tol = value.parse().context("bad `tol`")?,
            "max_iter" => self.max_iter = value.parse().context("bad `max_iter`")?,
            "nu" => self.nu = value.parse().context("bad `nu`")?,
            "tau" => self.tau = value.parse().context("bad `tau`")?,
            "gamma_mode" => self.gamma_mode = GammaMode::parse(value)?,
            "gamma0" => self.gamma0 = value.parse().context("bad `gamma0`")?,
            "k_factor" => self.k_factor = value.parse().context("bad `k_factor`")?,
            "threads" => self.threads = value.parse().context("bad `threads`")?,
            "write_traces" => self.write_traces = value.parse().context("bad `write_traces`")?,
            "monitor" => self.monitor = value.parse().context("bad `monitor`")?,
            "signal" => {
                self.signal = SignalKind::parse(value)
                    .with_context(|| format!("unknown signal kind `{value}`"))?
            }
            "lengths" => self.lengths = parse_list(value, key)?,
            "rates" => self.rates = parse_list(value, key)?,
            "m" => self.m = value.parse().context("bad `m`")?,
            "d" => self.d = value.parse().context("bad `d`")?,
            "s" => self.s = value.parse().context("bad `s`")?,
            "matrix" => {
                self.matrix = InstanceKind::parse(value)
                    .filter(|k| *k != InstanceKind::Reconstruction)
                    .with_context(|| format!("unknown matrix kind `{value}` (gaussian|pdct)"))?
            }
            other => bail!("unknown config key `{other}`"),
        }
        Ok(())
    }

    /// Reads a flat `key = value` file (`#` starts a comment).
    pub fn apply_file(&mut self, path: &Path) -> Result<()> {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("cannot read config {}", path.display()))?;
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .with_context(|| format!("{}:{}: expected `key = value`", path.display(), idx + 1))?;
            self.apply_kv(key.trim(), value.trim())
                .with_context(|| format!("{}:{}", path.display(), idx + 1))?;
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<()> {
        if self.runs == 0 {
            bail!("runs must be at least 1");
        }
        if !(self.scale > 0.0 && self.scale <= 1.0) {
            bail!("scale must lie in (0, 1]");
        }
        if self.lambda <= 0.0 {
            bail!("lambda must be positive");
        }
        if self.sigma < 0.0 {
            bail!("sigma must be nonnegative");
        }
        if self.tol <= 0.0 {
            bail!("tol must be positive");
        }
        if self.max_iter == 0 {
            bail!("max_iter must be at least 1");
        }
        if !(self.nu > 0.0 && self.nu < 2.0) {
            bail!("nu must lie in (0, 2)");
        }
        if self.tau <= 0.0 {
            bail!("tau must be positive");
        }
        if self.gamma0 <= 0.0 || self.k_factor <= 0.0 {
            bail!("gamma0 and k_factor must be positive");
        }
        if self.threads == 0 {
            bail!("threads must be at least 1");
        }
        match self.suite {
            Suite::GaussianCases => {
                if self.case_ids.is_empty() {
                    bail!("no cases selected");
                }
                for &id in &self.case_ids {
                    if !(1..=10).contains(&id) {
                        bail!("gaussian suite covers cases 1..=10, got {id}");
                    }
                }
            }
            Suite::PdctCases => {
                if self.case_ids.is_empty() {
                    bail!("no cases selected");
                }
                for &id in &self.case_ids {
                    if !(11..=20).contains(&id) {
                        bail!("pdct suite covers cases 11..=20, got {id}");
                    }
                }
            }
            Suite::Reconstruction => {
                if self.lengths.is_empty() || self.rates.is_empty() {
                    bail!("reconstruction suite needs lengths and rates");
                }
                for &len in &self.lengths {
                    if len < 8 {
                        bail!("signal lengths must be at least 8, got {len}");
                    }
                }
                for &rate in &self.rates {
                    if !(rate > 0.0 && rate <= 1.0) {
                        bail!("sampling rates must lie in (0, 1], got {rate}");
                    }
                }
            }
            Suite::Single => {
                if self.m == 0 || self.d == 0 || self.s == 0 || self.s > self.d {
                    bail!("single suite needs m, d >= 1 and 1 <= s <= d");
                }
            }
        }
        Ok(())
    }
}

/// Builds a config from an optional file plus `key=value` overrides
/// (flags win over the file, which wins over defaults).
pub fn parse_config(path: Option<&Path>, overrides: &[(String, String)]) -> Result<ExperimentConfig> {
    let mut cfg = ExperimentConfig::default();
    if let Some(p) = path {
        cfg.apply_file(p)?;
    }
    for (key, value) in overrides {
        cfg.apply_kv(key, value)?;
    }
    cfg.validate()?;
    Ok(cfg)
}
