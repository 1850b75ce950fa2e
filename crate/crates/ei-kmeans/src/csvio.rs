//! CSV ingestion and emission for sample matrices and benchmark results.
//!
//! Samples are plain comma-separated numeric rows (dot decimal, LF or CRLF);
//! a single non-numeric first line is treated as a header.

use std::fmt::Write as _;
use std::fs;
use std::io::{BufRead, BufReader, Read};
use std::path::Path;

use ei_kmeans_core::SampleMatrix;
use thiserror::Error;

use crate::bench::TrialResult;

#[derive(Debug, Error)]
pub enum CsvError {
    #[error("{path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("empty input: no data rows")]
    Empty,
    #[error("line {line}: expected {expected} fields, found {found}")]
    RaggedRow {
        line: usize,
        expected: usize,
        found: usize,
    },
    #[error("line {line}: cannot parse '{value}' as a number")]
    BadNumber { line: usize, value: String },
    #[error("line {line}: non-finite value {value}")]
    NonFinite { line: usize, value: f64 },
    #[error("refusing to write an empty table")]
    EmptyWrite,
    #[error("matrix: {0}")]
    Matrix(#[from] ei_kmeans_core::Error),
}

pub type Result<T> = std::result::Result<T, CsvError>;

fn io_err(path: &Path, source: std::io::Error) -> CsvError {
    CsvError::Io {
        path: path.display().to_string(),
        source,
    }
}

/// Parses numeric CSV from a reader. A non-numeric first line is skipped as
/// a header; every data row must have the same width.
pub fn parse_csv_reader<R: Read>(reader: R) -> Result<SampleMatrix> {
    let mut rows: Vec<Vec<f64>> = Vec::new();
    let mut width: Option<usize> = None;
    for (idx, line) in BufReader::new(reader).lines().enumerate() {
        let line = line.map_err(|e| CsvError::Io {
            path: "<stream>".into(),
            source: e,
        })?;
        let line_no = idx + 1;
        let trimmed = line.trim_end_matches('\r');
        if trimmed.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = trimmed.split(',').collect();
        let mut row = Vec::with_capacity(fields.len());
        let mut parse_failed = None;
        for f in &fields {
            match f.trim().parse::<f64>() {
                Ok(v) if v.is_finite() => row.push(v),
                Ok(v) => return Err(CsvError::NonFinite { line: line_no, value: v }),
                Err(_) => {
                    parse_failed = Some(f.trim().to_string());
                    break;
                }
            }
        }
        if let Some(value) = parse_failed {
            // A non-numeric first line is a header; later ones are errors.
            if rows.is_empty() && width.is_none() {
                width = Some(fields.len());
                continue;
            }
            return Err(CsvError::BadNumber { line: line_no, value });
        }
        if let Some(w) = width {
            if row.len() != w {
                return Err(CsvError::RaggedRow {
                    line: line_no,
                    expected: w,
                    found: row.len(),
                });
            }
        } else {
            width = Some(row.len());
        }
        rows.push(row);
    }
    if rows.is_empty() {
        return Err(CsvError::Empty);
    }
    Ok(SampleMatrix::from_rows(&rows)?)
}

/// Parses a numeric CSV file.
pub fn parse_csv(path: &Path) -> Result<SampleMatrix> {
    let file = fs::File::open(path).map_err(|e| io_err(path, e))?;
    parse_csv_reader(file)
}

/// Serializes a matrix to CSV text with a generated header (`x1,...,xd`).
/// Values use the shortest representation that round-trips exactly.
pub fn matrix_to_csv(matrix: &SampleMatrix) -> String {
    let mut out = String::new();
    let header: Vec<String> = (1..=matrix.d()).map(|c| format!("x{c}")).collect();
    out.push_str(&header.join(","));
    out.push('\n');
    for i in 0..matrix.n() {
        let row: Vec<String> = matrix.row(i).iter().map(|v| format!("{v}")).collect();
        out.push_str(&row.join(","));
        out.push('\n');
    }
    out
}

/// Writes a matrix as CSV.
pub fn write_csv(matrix: &SampleMatrix, path: &Path) -> Result<()> {
    fs::write(path, matrix_to_csv(matrix)).map_err(|e| io_err(path, e))
}

/// Benchmark result table: one row per repetition plus a summary row, with
/// percentages fixed at two decimals.
pub fn trial_result_to_csv(dataset: &str, result: &TrialResult) -> String {
    let mut out = String::from("dataset,repetition,type1_percent,type2_percent\n");
    for (i, rep) in result.per_repetition.iter().enumerate() {
        let _ = writeln!(out, "{dataset},{i},{:.2},{:.2}", rep.type1, rep.type2);
    }
    let _ = writeln!(
        out,
        "{dataset},summary,{:.2},{:.2}",
        result.type1_mean, result.type2_mean
    );
    out
}

/// Writes a benchmark result table.
pub fn write_trial_result(dataset: &str, result: &TrialResult, path: &Path) -> Result<()> {
    if result.per_repetition.is_empty() {
        return Err(CsvError::EmptyWrite);
    }
    fs::write(path, trial_result_to_csv(dataset, result)).map_err(|e| io_err(path, e))
}
