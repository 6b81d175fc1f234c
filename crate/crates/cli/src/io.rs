//! Reading instance files and writing reports.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use num_complex::Complex64;
use polyspec::campaign::{CampaignReport, TrialRecord};
use polyspec::linalg::ComplexMatrix;
use polyspec::matpoly::MatrixPolynomial;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::Failure;

pub fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T, Failure> {
    let text = fs::read_to_string(path).map_err(|e| Failure::usage(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Failure::usage(format!("cannot parse {}: {e}", path.display())))
}

/// A matrix or polynomial file, told apart by its fields.
#[derive(Debug, Deserialize)]
#[serde(untagged)]
pub enum Operand {
    Polynomial(MatrixPolynomial),
    Matrix(ComplexMatrix),
}

pub fn read_operand(path: &Path) -> Result<Operand, Failure> {
    let value: serde_json::Value = read_json(path)?;
    let parsed = if value.get("coeffs").is_some() {
        serde_json::from_value(value).map(Operand::Polynomial)
    } else {
        serde_json::from_value(value).map(Operand::Matrix)
    };
    parsed.map_err(|e| Failure::usage(format!("cannot parse {}: {e}", path.display())))
}

pub fn read_matrix(path: &Path) -> Result<ComplexMatrix, Failure> {
    match read_operand(path)? {
        Operand::Matrix(m) => Ok(m),
        Operand::Polynomial(_) => Err(Failure::usage(format!("{} holds a polynomial, expected a matrix", path.display()))),
    }
}

pub fn read_polynomial(path: &Path) -> Result<MatrixPolynomial, Failure> {
    match read_operand(path)? {
        Operand::Polynomial(p) => Ok(p),
        Operand::Matrix(_) => Err(Failure::usage(format!("{} holds a matrix, expected a polynomial", path.display()))),
    }
}

/// `{"x": [[re, im], ...], "y": [[re, im], ...]}`.
#[derive(Debug, Serialize, Deserialize)]
pub struct VectorPair {
    pub x: Vec<Complex64>,
    pub y: Vec<Complex64>,
}

pub fn write_text(path: &Path, text: &str) -> Result<(), Failure> {
    fs::write(path, text).map_err(|e| Failure::io(format!("cannot write {}: {e}", path.display())))
}

pub fn to_json<T: Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("report types serialize")
}

fn sidecar_path(path: &Path) -> PathBuf {
    let mut s = path.as_os_str().to_owned();
    s.push(".trials.jsonl");
    PathBuf::from(s)
}

/// Write a campaign report. Above the size cap the per-trial records go to
/// `<path>.trials.jsonl`, one record per line, and are dropped from the
/// main report. Returns the sidecar path when one was written.
pub fn write_campaign_json(path: &Path, mut report: CampaignReport, cap: u64) -> Result<Option<PathBuf>, Failure> {
    let mut sidecar = None;
    if report.trials.len() as u64 > cap {
        let side = sidecar_path(path);
        let file = fs::File::create(&side).map_err(|e| Failure::io(format!("cannot write {}: {e}", side.display())))?;
        let mut out = std::io::BufWriter::new(file);
        for rec in &report.trials {
            serde_json::to_writer(&mut out, rec).map_err(|e| Failure::io(e.to_string()))?;
            out.write_all(b"\n").map_err(|e| Failure::io(e.to_string()))?;
        }
        out.flush().map_err(|e| Failure::io(e.to_string()))?;
        report.trials.clear();
        report.trials_elided = true;
        sidecar = Some(side);
    }
    write_text(path, &to_json(&report))?;
    Ok(sidecar)
}

#[derive(Serialize)]
struct CsvRow<'a> {
    trial_index: u64,
    seed: u64,
    bound_id: &'a str,
    lhs: Option<f64>,
    rhs: Option<f64>,
    slack_ratio: Option<f64>,
    holds: Option<bool>,
    hypotheses_met: Option<bool>,
    error: Option<&'a str>,
}

pub fn write_campaign_csv(path: &Path, report: &CampaignReport) -> Result<(), Failure> {
    let mut w = csv::Writer::from_path(path).map_err(|e| Failure::io(format!("cannot write {}: {e}", path.display())))?;
    let bound = report.config.bound_id.as_str();
    for rec in &report.trials {
        w.serialize(csv_row(bound, rec)).map_err(|e| Failure::io(e.to_string()))?;
    }
    w.flush().map_err(|e| Failure::io(e.to_string()))
}

fn csv_row<'a>(bound: &'a str, rec: &'a TrialRecord) -> CsvRow<'a> {
    let r = rec.report.as_ref();
    CsvRow {
        trial_index: rec.trial_index,
        seed: rec.seed,
        bound_id: bound,
        lhs: r.map(|r| r.lhs),
        rhs: r.map(|r| r.rhs),
        slack_ratio: r.and_then(|r| r.slack_ratio),
        holds: r.map(|r| r.holds),
        hypotheses_met: r.map(|r| r.hypotheses_met),
        error: rec.error.as_deref(),
    }
}
