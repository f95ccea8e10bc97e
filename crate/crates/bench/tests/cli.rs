//! End-to-end tests of the `bench` binary: flag precedence, validation
//! failures, exit codes, and the solve/reconstruct round trips.

use std::path::PathBuf;
use std::process::Command;

fn bench() -> Command {
    Command::new(env!("CARGO_BIN_EXE_bench"))
}

fn temp_dir(name: &str) -> PathBuf {
    let mut p = std::env::temp_dir();
    p.push(format!("proxsplit-cli-{}-{name}", std::process::id()));
    std::fs::create_dir_all(&p).unwrap();
    p
}

#[test]
fn run_subcommand_writes_reports() {
    let out = temp_dir("run");
    let status = bench()
        .args([
            "run", "--suite", "gaussian", "--cases", "1", "--runs", "2", "--scale", "0.1",
            "--seed", "7", "--out",
        ])
        .arg(&out)
        .status()
        .unwrap();
    assert!(status.success());
    assert!(out.join("summary.csv").exists());
    assert!(out.join("runs.csv").exists());
    assert!(out.join("trace_case1_1.csv").exists());
    std::fs::remove_dir_all(&out).ok();
}

#[test]
fn zero_runs_is_a_validation_error() {
    let output = bench()
        .args(["run", "--suite", "gaussian", "--cases", "1", "--runs", "0"])
        .output()
        .unwrap();
    assert!(!output.status.success());
    let stderr = String::from_utf8_lossy(&output.stderr);
    assert!(stderr.contains("runs"), "{stderr}");
}

#[test]
fn unknown_config_key_is_rejected_by_name() {
    let out = temp_dir("badcfg");
    let cfg_path = out.join("bad.cfg");
    std::fs::write(&cfg_path, "runz = 3\n").unwrap();
    let output = bench()
        .args(["run", "--config"])
        .arg(&cfg_path)
        .output()
        .unwrap();
    assert!(!output.status.success());
    let stderr = String::from_utf8_lossy(&output.stderr);
    assert!(stderr.contains("runz"), "{stderr}");
    std::fs::remove_dir_all(&out).ok();
}

#[test]
fn flags_override_config_file_values() {
    let out = temp_dir("precedence");
    let cfg_path = out.join("exp.cfg");
    std::fs::write(
        &cfg_path,
        "suite = gaussian\ncases = 1\nruns = 3\nscale = 0.1\nseed_base = 7\nwrite_traces = false\n",
    )
    .unwrap();
    let status = bench()
        .args(["run", "--config"])
        .arg(&cfg_path)
        .args(["--runs", "1", "--out"])
        .arg(&out)
        .status()
        .unwrap();
    assert!(status.success());
    let runs = std::fs::read_to_string(out.join("runs.csv")).unwrap();
    // flag value 1 wins over the file's 3: header plus a single row
    assert_eq!(runs.lines().count(), 2, "{runs}");
    assert!(!out.join("trace_case1_0.csv").exists(), "file keys apply too");
    std::fs::remove_dir_all(&out).ok();
}

#[test]
fn solve_round_trips_an_instance_file() {
    let out = temp_dir("solve");
    let case = proxsplit::generate::scaled_case(proxsplit::generate::table_case(1).unwrap(), 0.1);
    let inst = proxsplit::generate::build_case_instance(&case, 0.1, 1e-3, 99).unwrap();
    let inst_path = out.join("case.instance");
    proxsplit::fileio::write_instance(&inst_path, &inst).unwrap();

    let trace_path = out.join("solve_trace.csv");
    let output = bench()
        .args(["solve", "--instance"])
        .arg(&inst_path)
        .args(["--gamma-mode", "theory", "--trace-out"])
        .arg(&trace_path)
        .output()
        .unwrap();
    assert!(output.status.success());
    let stdout = String::from_utf8_lossy(&output.stdout);
    assert!(stdout.contains("stop=tolerance"), "{stdout}");
    assert!(stdout.contains("error vs ground truth"), "{stdout}");
    assert!(trace_path.exists());
    std::fs::remove_dir_all(&out).ok();
}

#[test]
fn solve_rejects_a_malformed_instance() {
    let out = temp_dir("badinstance");
    let path = out.join("broken.instance");
    std::fs::write(&path, "not an instance\n").unwrap();
    let output = bench().args(["solve", "--instance"]).arg(&path).output().unwrap();
    assert!(!output.status.success());
    std::fs::remove_dir_all(&out).ok();
}

#[test]
fn reconstruct_runs_on_a_signal_file() {
    let out = temp_dir("reconstruct");
    let signal = proxsplit::generate::synthetic_signal(
        proxsplit::generate::SignalKind::SmoothSinusoid,
        256,
        5,
    )
    .unwrap();
    let signal_path = out.join("signal.csv");
    proxsplit::fileio::save_signal_csv(&signal_path, &signal).unwrap();

    let output = bench()
        .args(["reconstruct", "--signal"])
        .arg(&signal_path)
        .args(["--rate", "0.4", "--lambda", "0.1", "--seed", "3", "--out"])
        .arg(&out)
        .output()
        .unwrap();
    assert!(output.status.success());
    let stdout = String::from_utf8_lossy(&output.stdout);
    assert!(stdout.contains("snr="), "{stdout}");
    let reconstructed =
        proxsplit::fileio::load_signal_csv(&out.join("reconstructed.csv")).unwrap();
    assert_eq!(reconstructed.len(), 256);
    std::fs::remove_dir_all(&out).ok();
}

#[test]
fn reconstruct_requires_a_signal_source() {
    let output = bench().args(["reconstruct", "--rate", "0.4"]).output().unwrap();
    assert!(!output.status.success());
    let stderr = String::from_utf8_lossy(&output.stderr);
    assert!(stderr.contains("--signal") || stderr.contains("--synthetic"), "{stderr}");
}
