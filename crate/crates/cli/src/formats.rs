//! CSV and JSON artifacts.
//!
//! Floats in CSV are written as `{:.16e}`: 17 significant digits, enough for
//! every `f64` to read back to the same bits.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path as FsPath;

use serde::Serialize;
use stochseir_core::bayes::Sample;
use stochseir_core::diagnostics::ConsistencyRow;
use stochseir_core::reconstruct::IncidenceSeries;
use stochseir_core::{Path, StateVec};

use crate::error::CliError;

pub const PATH_HEADER: [&str; 6] = ["t", "S", "E", "Ia", "Is", "R"];

fn create(path: &FsPath) -> Result<BufWriter<File>, CliError> {
    File::create(path)
        .map(BufWriter::new)
        .map_err(|e| CliError::io(path, e))
}

fn csv_err(path: &FsPath, e: csv::Error) -> CliError {
    let line = e.position().map_or(0, |p| p.line());
    match e.into_kind() {
        csv::ErrorKind::Io(source) => CliError::io(path, source),
        kind => CliError::Parse {
            path: path.into(),
            line,
            message: format!("{kind:?}"),
        },
    }
}

fn parse_err(path: &FsPath, line: u64, message: impl Into<String>) -> CliError {
    CliError::Parse {
        path: path.into(),
        line,
        message: message.into(),
    }
}

fn fmt(x: f64) -> String {
    format!("{x:.16e}")
}

/// Writes rows of pre-formatted fields under `header`.
fn write_table<I>(path: &FsPath, header: &[&str], rows: I) -> Result<(), CliError>
where
    I: IntoIterator<Item = Vec<String>>,
{
    let mut w = csv::Writer::from_writer(create(path)?);
    w.write_record(header).map_err(|e| csv_err(path, e))?;
    for row in rows {
        w.write_record(&row).map_err(|e| csv_err(path, e))?;
    }
    w.flush().map_err(|e| CliError::io(path, e))
}

/// `t,S,E,Ia,Is,R[,dW]`; row `k > 0` carries the increment that produced it,
/// row 0 leaves `dW` empty.
pub fn write_path(path: &FsPath, p: &Path) -> Result<(), CliError> {
    let mut header = PATH_HEADER.to_vec();
    if p.wiener().is_some() {
        header.push("dW");
    }
    let rows = p.states().iter().enumerate().map(|(k, x)| {
        let mut row = vec![fmt(p.time(k))];
        row.extend(x.as_array().iter().map(|v| fmt(*v)));
        if let Some(w) = p.wiener() {
            row.push(if k == 0 { String::new() } else { fmt(w[k - 1]) });
        }
        row
    });
    write_table(path, &header, rows)
}

/// Reads a Path CSV. The step is `t₁ − t₀`; the grid must be uniform.
pub fn read_path(path: &FsPath) -> Result<Path, CliError> {
    let file = File::open(path).map_err(|e| CliError::io(path, e))?;
    let mut r = csv::Reader::from_reader(file);
    let header = r.headers().map_err(|e| csv_err(path, e))?.clone();
    let has_dw = match header.len() {
        6 => false,
        7 if &header[6] == "dW" => true,
        _ => return Err(parse_err(path, 1, "expected header t,S,E,Ia,Is,R[,dW]")),
    };
    if header.iter().zip(PATH_HEADER).any(|(a, b)| a != b) {
        return Err(parse_err(path, 1, "expected header t,S,E,Ia,Is,R[,dW]"));
    }
    let mut times = Vec::new();
    let mut states = Vec::new();
    let mut wiener = Vec::new();
    for rec in r.records() {
        let rec = rec.map_err(|e| csv_err(path, e))?;
        let line = rec.position().map_or(0, |p| p.line());
        let num = |i: usize| -> Result<f64, CliError> {
            rec[i].trim().parse::<f64>().map_err(|_| {
                parse_err(
                    path,
                    line,
                    format!(
                        "column {}: not a number: {:?}",
                        header[i].to_owned(),
                        &rec[i]
                    ),
                )
            })
        };
        times.push(num(0)?);
        let x = [num(1)?, num(2)?, num(3)?, num(4)?, num(5)?];
        states.push(StateVec::from_array(x).map_err(|e| parse_err(path, line, e.to_string()))?);
        if has_dw && states.len() > 1 {
            wiener.push(num(6)?);
        }
    }
    if states.is_empty() {
        return Err(parse_err(path, 1, "no records"));
    }
    let t0 = times[0];
    let dt = if times.len() > 1 { times[1] - t0 } else { 1.0 };
    for (k, t) in times.iter().enumerate() {
        let expect = t0 + k as f64 * dt;
        if (t - expect).abs() > 1e-9 * expect.abs().max(dt) {
            return Err(parse_err(path, k as u64 + 2, "time grid is not uniform"));
        }
    }
    let wiener = has_dw.then_some(wiener);
    Path::new(t0, dt, states, wiener).map_err(|e| parse_err(path, 1, e.to_string()))
}

/// `date,count` with the population size supplied separately.
pub fn load_incidence(path: &FsPath, population_n: u64) -> Result<IncidenceSeries, CliError> {
    let file = File::open(path).map_err(|e| CliError::io(path, e))?;
    let mut r = csv::Reader::from_reader(file);
    let header = r.headers().map_err(|e| csv_err(path, e))?.clone();
    if header.len() != 2 || &header[0] != "date" || &header[1] != "count" {
        return Err(parse_err(path, 1, "expected header date,count"));
    }
    let mut dates = Vec::new();
    let mut counts = Vec::new();
    for rec in r.records() {
        let rec = rec.map_err(|e| csv_err(path, e))?;
        let line = rec.position().map_or(0, |p| p.line());
        let raw = rec[1].trim();
        let value: i64 = raw
            .parse()
            .map_err(|_| parse_err(path, line, format!("count is not an integer: {raw:?}")))?;
        if value < 0 {
            return Err(CliError::NegativeCount {
                path: path.into(),
                line,
                value,
            });
        }
        dates.push(rec[0].trim().to_owned());
        counts.push(value as u64);
    }
    if counts.is_empty() {
        return Err(parse_err(path, 1, "no records"));
    }
    Ok(IncidenceSeries::new(dates, counts, population_n)?)
}

pub fn write_incidence(path: &FsPath, series: &IncidenceSeries) -> Result<(), CliError> {
    let rows = series
        .dates()
        .iter()
        .zip(series.counts())
        .map(|(d, c)| vec![d.clone(), c.to_string()]);
    write_table(path, &["date", "count"], rows)
}

pub fn write_residuals(path: &FsPath, raw: &[f64], standardized: &[f64]) -> Result<(), CliError> {
    let rows = raw
        .iter()
        .zip(standardized)
        .enumerate()
        .map(|(k, (r, z))| vec![(k + 1).to_string(), fmt(*r), fmt(*z)]);
    write_table(path, &["k", "dW_hat", "standardized"], rows)
}

pub fn write_qq(path: &FsPath, points: &[(f64, f64)]) -> Result<(), CliError> {
    let rows = points.iter().map(|(a, b)| vec![fmt(*a), fmt(*b)]);
    write_table(path, &["theoretical", "empirical"], rows)
}

pub fn write_consistency(path: &FsPath, rows: &[ConsistencyRow]) -> Result<(), CliError> {
    let rows = rows.iter().map(|r| {
        vec![
            fmt(r.horizon),
            fmt(r.abs_err_beta_s),
            fmt(r.abs_err_beta_a),
            fmt(r.abs_err_p),
            fmt(r.window_violation_rate),
        ]
    });
    write_table(
        path,
        &[
            "T",
            "abs_err_beta_s",
            "abs_err_beta_a",
            "abs_err_p",
            "window_violation_rate",
        ],
        rows,
    )
}

pub fn write_samples(path: &FsPath, samples: &[Sample]) -> Result<(), CliError> {
    let rows = samples
        .iter()
        .map(|s| vec![s.iter.to_string(), fmt(s.p), fmt(s.kappa), fmt(s.loglik)]);
    write_table(path, &["iter", "p", "kappa", "loglik"], rows)
}

/// Pretty JSON with a trailing newline.
pub fn write_json<T: Serialize>(path: &FsPath, value: &T) -> Result<(), CliError> {
    let mut w = create(path)?;
    serde_json::to_writer_pretty(&mut w, value).map_err(|e| CliError::io(path, e.into()))?;
    w.write_all(b"\n")
        .and_then(|_| w.flush())
        .map_err(|e| CliError::io(path, e))
}
