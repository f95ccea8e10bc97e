//! Signal CSV ingestion and a plain-text instance container.
//!
//! Signal files: one real per line, UTF-8, LF or CRLF, with an optional
//! single non-numeric header line. NaN/Inf entries are rejected.
//!
//! Instance files: a `proxsplit-instance v1` header followed by labelled
//! sections; values use 17 significant decimal digits so a write/read round
//! trip reproduces every f64 exactly.

use std::fmt::Write as _;
use std::path::Path;

use crate::error::{Error, Result};
use crate::generate::{CsInstance, InstanceKind};
use crate::linalg::{DenseMatrix, DenseVector};

fn path_str(path: &Path) -> String {
    path.display().to_string()
}

/// Formats an f64 with 17 significant digits (lossless round trip).
pub fn fmt_full(v: f64) -> String {
    if v.is_nan() {
        "nan".to_string()
    } else if v.is_infinite() {
        if v > 0.0 { "inf" } else { "-inf" }.to_string()
    } else {
        format!("{v:.16e}")
    }
}

/// Reads a one-column signal file.
pub fn load_signal_csv(path: &Path) -> Result<DenseVector> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path_str(path), e))?;
    let mut values = Vec::new();
    let mut first_content_line = true;
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        match line.parse::<f64>() {
            Ok(v) if v.is_finite() => values.push(v),
            Ok(_) => {
                return Err(Error::Parse {
                    path: path_str(path),
                    line: idx + 1,
                    msg: format!("non-finite value `{line}`"),
                })
            }
            Err(_) if first_content_line => {
                // a single header line is allowed
            }
            Err(_) => {
                return Err(Error::Parse {
                    path: path_str(path),
                    line: idx + 1,
                    msg: format!("expected a real number, found `{line}`"),
                })
            }
        }
        first_content_line = false;
    }
    if values.is_empty() {
        return Err(Error::EmptySignal {
            path: path_str(path),
        });
    }
    DenseVector::new(values)
}

/// Writes a signal as one value per line (full precision, `value` header).
pub fn save_signal_csv(path: &Path, signal: &DenseVector) -> Result<()> {
    let mut out = String::with_capacity(signal.len() * 24 + 8);
    out.push_str("value\n");
    for v in signal.iter() {
        out.push_str(&fmt_full(*v));
        out.push('\n');
    }
    std::fs::write(path, out).map_err(|e| Error::io(path_str(path), e))
}

/// Writes an instance to the documented text container.
pub fn write_instance(path: &Path, inst: &CsInstance) -> Result<()> {
    let (m, d) = (inst.a.rows(), inst.a.cols());
    let mut out = String::new();
    let _ = writeln!(out, "proxsplit-instance v1");
    let _ = writeln!(out, "kind {}", inst.kind.as_str());
    let _ = writeln!(out, "seed {}", inst.seed);
    let _ = writeln!(out, "lambda {}", fmt_full(inst.lambda));
    let _ = writeln!(out, "matrix {m} {d}");
    for i in 0..m {
        let row: Vec<String> = inst.a.row(i).iter().map(|v| fmt_full(*v)).collect();
        let _ = writeln!(out, "{}", row.join(" "));
    }
    let _ = writeln!(out, "rhs {m}");
    for v in inst.b.iter() {
        let _ = writeln!(out, "{}", fmt_full(*v));
    }
    match &inst.ground_truth {
        Some(x) => {
            let _ = writeln!(out, "ground_truth {d}");
            for v in x.iter() {
                let _ = writeln!(out, "{}", fmt_full(*v));
            }
        }
        None => {
            let _ = writeln!(out, "ground_truth none");
        }
    }
    let _ = writeln!(out, "end");
    std::fs::write(path, out).map_err(|e| Error::io(path_str(path), e))
}

struct LineReader<'a> {
    path: String,
    lines: std::iter::Enumerate<std::str::Lines<'a>>,
}

impl<'a> LineReader<'a> {
    fn next_line(&mut self) -> Result<(usize, &'a str)> {
        for (idx, raw) in self.lines.by_ref() {
            let line = raw.trim();
            if !line.is_empty() {
                return Ok((idx + 1, line));
            }
        }
        Err(Error::Parse {
            path: self.path.clone(),
            line: 0,
            msg: "unexpected end of file".to_string(),
        })
    }

    fn err(&self, line: usize, msg: impl Into<String>) -> Error {
        Error::Parse {
            path: self.path.clone(),
            line,
            msg: msg.into(),
        }
    }

    fn parse_f64(&mut self) -> Result<f64> {
        let (ln, line) = self.next_line()?;
        line.parse::<f64>()
            .map_err(|_| self.err(ln, format!("expected a real number, found `{line}`")))
    }
}

/// Reads an instance previously written by [`write_instance`].
pub fn read_instance(path: &Path) -> Result<CsInstance> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path_str(path), e))?;
    let mut r = LineReader {
        path: path_str(path),
        lines: text.lines().enumerate(),
    };

    let (ln, magic) = r.next_line()?;
    if magic != "proxsplit-instance v1" {
        return Err(r.err(ln, "not a proxsplit-instance v1 file"));
    }

    let (ln, kind_line) = r.next_line()?;
    let kind = kind_line
        .strip_prefix("kind ")
        .and_then(InstanceKind::parse)
        .ok_or_else(|| r.err(ln, "expected `kind gaussian|pdct|reconstruction`"))?;

    let (ln, seed_line) = r.next_line()?;
    let seed: u64 = seed_line
        .strip_prefix("seed ")
        .and_then(|s| s.parse().ok())
        .ok_or_else(|| r.err(ln, "expected `seed <u64>`"))?;

    let (ln, lambda_line) = r.next_line()?;
    let lambda: f64 = lambda_line
        .strip_prefix("lambda ")
        .and_then(|s| s.parse().ok())
        .ok_or_else(|| r.err(ln, "expected `lambda <real>`"))?;

    let (ln, dims_line) = r.next_line()?;
    let dims: Vec<usize> = dims_line
        .strip_prefix("matrix ")
        .map(|s| s.split_whitespace().filter_map(|t| t.parse().ok()).collect())
        .unwrap_or_default();
    if dims.len() != 2 {
        return Err(r.err(ln, "expected `matrix <m> <d>`"));
    }
    let (m, d) = (dims[0], dims[1]);

    let mut data = Vec::with_capacity(m * d);
    for _ in 0..m {
        let (ln, row) = r.next_line()?;
        let before = data.len();
        for tok in row.split_whitespace() {
            let v: f64 = tok
                .parse()
                .map_err(|_| r.err(ln, format!("bad matrix entry `{tok}`")))?;
            data.push(v);
        }
        if data.len() - before != d {
            return Err(r.err(ln, format!("expected {d} entries per matrix row")));
        }
    }
    let a = DenseMatrix::new(m, d, data)?;

    let (ln, rhs_line) = r.next_line()?;
    if rhs_line != format!("rhs {m}") {
        return Err(r.err(ln, format!("expected `rhs {m}`")));
    }
    let mut b = Vec::with_capacity(m);
    for _ in 0..m {
        b.push(r.parse_f64()?);
    }
    let b = DenseVector::new(b)?;

    let (ln, gt_line) = r.next_line()?;
    let ground_truth = if gt_line == "ground_truth none" {
        None
    } else if gt_line == format!("ground_truth {d}") {
        let mut x = Vec::with_capacity(d);
        for _ in 0..d {
            x.push(r.parse_f64()?);
        }
        Some(DenseVector::new(x)?)
    } else {
        return Err(r.err(ln, "expected `ground_truth <d>` or `ground_truth none`"));
    };

    let (ln, end) = r.next_line()?;
    if end != "end" {
        return Err(r.err(ln, "expected `end`"));
    }

    Ok(CsInstance {
        a,
        b,
        lambda,
        ground_truth,
        seed,
        kind,
    })
}
