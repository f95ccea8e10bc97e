//! CSV outputs. Columns are a fixed, documented contract:
//!
//! * `summary.csv`: `case,m,d,s,runs,threads,mean_iterations,mean_error_vs_ground_truth,mean_snr_db,mean_wall_time_s,tolerance_count,max_iter_count,diverged_count`
//! * `runs.csv`: `case,run,seed,m,d,s,iterations,error_vs_ground_truth,snr_db,terminated_by,wall_time_s`
//! * `trace_<case>_<run>.csv`: `n,lyapunov,objective,dx,dz,dw,rel_change,gamma`
//!
//! Reals carry 17 significant digits; `inf`/`nan` name the sentinels
//! (`lyapunov` is `nan` whenever the merit monitor was off).

use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use proxsplit::fileio::fmt_full;
use proxsplit::{BenchReport, ConvergenceTrace};

use crate::runner::CaseSummary;

pub const SUMMARY_HEADER: &str = "case,m,d,s,runs,threads,mean_iterations,mean_error_vs_ground_truth,mean_snr_db,mean_wall_time_s,tolerance_count,max_iter_count,diverged_count";
pub const RUNS_HEADER: &str =
    "case,run,seed,m,d,s,iterations,error_vs_ground_truth,snr_db,terminated_by,wall_time_s";
pub const TRACE_HEADER: &str = "n,lyapunov,objective,dx,dz,dw,rel_change,gamma";

fn write_file(path: &Path, contents: String) -> Result<PathBuf> {
    let mut f = std::fs::File::create(path)
        .with_context(|| format!("cannot create {}", path.display()))?;
    f.write_all(contents.as_bytes())
        .with_context(|| format!("cannot write {}", path.display()))?;
    Ok(path.to_path_buf())
}

pub fn write_summary(dir: &Path, summaries: &[CaseSummary], threads: usize) -> Result<PathBuf> {
    let mut out = String::from(SUMMARY_HEADER);
    out.push('\n');
    for s in summaries {
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{},{},{},{},{},{}\n",
            s.case_id,
            s.m,
            s.d,
            s.s,
            s.runs,
            threads,
            fmt_full(s.mean_iterations),
            fmt_full(s.mean_error),
            fmt_full(s.mean_snr_db),
            fmt_full(s.mean_wall_time_s),
            s.tolerance_count,
            s.max_iter_count,
            s.diverged_count,
        ));
    }
    write_file(&dir.join("summary.csv"), out)
}

pub fn write_runs(dir: &Path, reports: &[BenchReport]) -> Result<PathBuf> {
    let mut out = String::from(RUNS_HEADER);
    out.push('\n');
    let mut run_index = std::collections::HashMap::new();
    for r in reports {
        let run = run_index.entry(r.case_id.clone()).or_insert(0usize);
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{},{},{},{}\n",
            r.case_id,
            run,
            r.seed,
            r.m,
            r.d,
            r.s,
            r.iterations,
            fmt_full(r.error_vs_ground_truth),
            fmt_full(r.snr_db),
            r.terminated_by.as_str(),
            fmt_full(r.wall_time_s),
        ));
        *run += 1;
    }
    write_file(&dir.join("runs.csv"), out)
}

pub fn write_trace(dir: &Path, case: &str, run: usize, trace: &ConvergenceTrace) -> Result<PathBuf> {
    let mut out = String::from(TRACE_HEADER);
    out.push('\n');
    for row in &trace.rows {
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{}\n",
            row.n,
            fmt_full(row.lyapunov),
            fmt_full(row.objective_at_z),
            fmt_full(row.dx),
            fmt_full(row.dz),
            fmt_full(row.dw),
            fmt_full(row.rel_change),
            fmt_full(row.gamma_used),
        ));
    }
    write_file(&dir.join(format!("trace_{case}_{run}.csv")), out)
}
