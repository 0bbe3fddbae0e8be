//! File formats.
//!
//! All CSV files have a header row and fixed column order. Floats are
//! written in scientific notation with 17 significant digits, enough to read
//! every value back bit for bit.
//!
//! | file | columns |
//! |------|---------|
//! | threshold curves | `wealth, eta, lambda_T` |
//! | wealth snapshot, one per `(gamma, t)` | `run_id, eta, wealth` |
//! | decision log | `t, wealth_before, lambda, choice` |
//!
//! Snapshot rows are grouped by `eta` in configuration order, then by run.
//! Every command that writes CSVs also writes a TOML manifest holding the
//! configuration, the seed and the resolved gamble parameters.

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::agent::Choice;
use crate::convergence::ConvergenceCurve;
use crate::error::{Error, Result};
use crate::simulation::{DecisionRecord, DynamicsResult, ExperimentConfig, ResolvedCalibration};

/// Schema tag written into every manifest.
pub const MANIFEST_SCHEMA: &str = "riskpref.manifest/v1";

/// Environment variable naming the default output directory.
pub const OUT_DIR_ENV: &str = "RISKPREF_OUT_DIR";

pub const CURVES_HEADER: [&str; 3] = ["wealth", "eta", "lambda_T"];
pub const CDF_HEADER: [&str; 3] = ["run_id", "eta", "wealth"];
pub const DECISION_LOG_HEADER: [&str; 4] = ["t", "wealth_before", "lambda", "choice"];

/// Round-trip float formatting used in every CSV.
pub fn format_float(v: f64) -> String {
    format!("{v:.16e}")
}

/// Output directory: the explicit choice, else [`OUT_DIR_ENV`], else `out`.
pub fn default_out_dir(explicit: Option<&Path>) -> PathBuf {
    match explicit {
        Some(p) => p.to_path_buf(),
        None => std::env::var_os(OUT_DIR_ENV)
            .map(PathBuf::from)
            .unwrap_or_else(|| PathBuf::from("out")),
    }
}

fn csv_writer(path: &Path) -> Result<csv::Writer<fs::File>> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    }
    let file = fs::File::create(path).map_err(|e| Error::io(path, e))?;
    Ok(csv::Writer::from_writer(file))
}

fn csv_error(path: &Path, e: csv::Error) -> Error {
    match e.into_kind() {
        csv::ErrorKind::Io(source) => Error::io(path, source),
        other => Error::Parse {
            path: path.to_path_buf(),
            message: format!("{other:?}"),
        },
    }
}

fn finish(path: &Path, mut w: csv::Writer<fs::File>) -> Result<()> {
    w.flush().map_err(|e| Error::io(path, e))
}

pub fn write_curves_csv(path: &Path, curves: &[ConvergenceCurve]) -> Result<()> {
    let mut w = csv_writer(path)?;
    w.write_record(CURVES_HEADER).map_err(|e| csv_error(path, e))?;
    for curve in curves {
        let eta = format_float(curve.eta.value());
        for (&x, &l) in curve.wealth_grid.iter().zip(&curve.lambda_t) {
            w.write_record([format_float(x), eta.clone(), format_float(l)])
                .map_err(|e| csv_error(path, e))?;
        }
    }
    finish(path, w)
}

/// File name of the wealth snapshot of dynamics `gamma` at step `t`.
pub fn cdf_file_name(gamma: f64, t: usize) -> String {
    format!("cdf_gamma{gamma:.4}_t{t}.csv")
}

/// Writes the snapshot of every agent at step `t`.
pub fn write_cdf_csv(path: &Path, dynamics: &DynamicsResult, t: usize) -> Result<()> {
    let cells: Vec<_> = dynamics.cells.iter().filter(|c| c.t == t).collect();
    if cells.is_empty() {
        return Err(Error::Config(format!("no snapshot at t = {t}")));
    }
    let mut w = csv_writer(path)?;
    w.write_record(CDF_HEADER).map_err(|e| csv_error(path, e))?;
    for cell in cells {
        let eta = format_float(cell.eta.value());
        for (run, &x) in cell.by_run.iter().enumerate() {
            w.write_record([run.to_string(), eta.clone(), format_float(x)])
                .map_err(|e| csv_error(path, e))?;
        }
    }
    finish(path, w)
}

pub fn write_decision_log(path: &Path, log: &[DecisionRecord]) -> Result<()> {
    let mut w = csv_writer(path)?;
    w.write_record(DECISION_LOG_HEADER)
        .map_err(|e| csv_error(path, e))?;
    for rec in log {
        w.write_record([
            rec.t.to_string(),
            format_float(rec.wealth_before),
            format_float(rec.lambda),
            rec.choice.as_str().to_string(),
        ])
        .map_err(|e| csv_error(path, e))?;
    }
    finish(path, w)
}

#[derive(Deserialize)]
struct LogRow {
    t: usize,
    wealth_before: f64,
    lambda: f64,
    choice: Choice,
}

/// Reads a decision log. The log does not store risky payoffs, so
/// `payoff_applied` is `lambda` for safe choices and NaN for risky ones.
pub fn read_decision_log(path: &Path) -> Result<Vec<DecisionRecord>> {
    let file = fs::File::open(path).map_err(|e| Error::io(path, e))?;
    let mut r = csv::Reader::from_reader(file);
    let headers = r.headers().map_err(|e| csv_error(path, e))?;
    if headers.iter().ne(DECISION_LOG_HEADER) {
        return Err(Error::Parse {
            path: path.to_path_buf(),
            message: format!(
                "expected columns {}, found {}",
                DECISION_LOG_HEADER.join(","),
                headers.iter().collect::<Vec<_>>().join(",")
            ),
        });
    }
    r.deserialize::<LogRow>()
        .map(|row| {
            let row = row.map_err(|e| csv_error(path, e))?;
            Ok(DecisionRecord {
                t: row.t,
                wealth_before: row.wealth_before,
                lambda: row.lambda,
                choice: row.choice,
                payoff_applied: match row.choice {
                    Choice::Safe => row.lambda,
                    Choice::Risky => f64::NAN,
                },
            })
        })
        .collect()
}

/// Parameters of a threshold-curve export.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CurvesSpec {
    pub gamma: f64,
    pub sigma: f64,
    pub mu: f64,
    pub c: f64,
    pub etas: Vec<f64>,
    pub wealth_min: f64,
    pub wealth_max: f64,
    pub points: usize,
    pub quad_nodes: usize,
}

/// Everything needed to regenerate the files of one command.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub schema: String,
    pub command: String,
    pub master_seed: Option<u64>,
    pub version: String,
    pub config: Option<ExperimentConfig>,
    pub curves: Option<CurvesSpec>,
    #[serde(default)]
    pub calibrations: Vec<ResolvedCalibration>,
    /// Written files, relative to the manifest.
    pub outputs: Vec<String>,
}

impl RunManifest {
    pub fn new(command: &str) -> Self {
        RunManifest {
            schema: MANIFEST_SCHEMA.to_string(),
            command: command.to_string(),
            master_seed: None,
            version: env!("CARGO_PKG_VERSION").to_string(),
            config: None,
            curves: None,
            calibrations: Vec::new(),
            outputs: Vec::new(),
        }
    }

    pub fn to_toml(&self) -> Result<String> {
        toml::to_string(self).map_err(|e| Error::Config(format!("manifest: {e}")))
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        write_text(path, &self.to_toml()?)
    }

    pub fn read(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let m: RunManifest = toml::from_str(&text).map_err(|e| Error::Parse {
            path: path.to_path_buf(),
            message: e.to_string(),
        })?;
        if m.schema != MANIFEST_SCHEMA {
            return Err(Error::Parse {
                path: path.to_path_buf(),
                message: format!("unknown schema {}", m.schema),
            });
        }
        Ok(m)
    }
}

fn write_text(path: &Path, text: &str) -> Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    }
    fs::write(path, text).map_err(|e| Error::io(path, e))
}

/// Reads an experiment configuration; missing keys take their defaults.
pub fn load_config(path: &Path) -> Result<ExperimentConfig> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let config: ExperimentConfig = toml::from_str(&text).map_err(|e| Error::Parse {
        path: path.to_path_buf(),
        message: e.to_string(),
    })?;
    Ok(config)
}

pub fn save_config(path: &Path, config: &ExperimentConfig) -> Result<()> {
    let text = toml::to_string(config).map_err(|e| Error::Config(e.to_string()))?;
    write_text(path, &text)
}
