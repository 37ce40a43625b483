//! Configuration-driven experiment runner.
//!
//! [`run`] is pure: it turns a [`RunConfig`] into a [`RunOutput`] (the JSON
//! [`ResultRecord`] plus an optional CSV table). [`write_outputs`] owns the
//! filesystem side. Exit codes: 0 on success, 2 when a verification gate
//! fails, 1 for configuration and runtime errors.

mod config;
mod experiments;

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::{Duration, SystemTime, UNIX_EPOCH};

use serde::Serialize;
use sha2::{Digest, Sha256};

pub use config::{
    ConfigError, ExperimentKind, FieldVariant, FieldsConfig, GridConfig, LoopConfig, RunConfig, SweepAxis,
    SweepConfig, TimeLegConfig, DEFAULT_DRAWS,
};
pub use experiments::{
    DiagnoseOutputs, Outputs, PhaseOutputs, PotentialOutputs, SweepOutputs, SweepRow, VerifyOutputs,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_ERROR: i32 = 1;
pub const EXIT_TOLERANCE: i32 = 2;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("numerical error: {0}")]
    Numerical(#[from] crate::Error),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl CliError {
    fn io(path: &Path, source: std::io::Error) -> Self {
        CliError::Io { path: path.to_path_buf(), source }
    }
}

/// Command-line overrides applied on top of the config file.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Overrides {
    pub experiment: Option<ExperimentKind>,
    pub seed: Option<u64>,
    /// Replaces every gate tolerance of the selected experiment.
    pub tolerance: Option<f64>,
    pub out: Option<PathBuf>,
}

#[derive(Clone, Debug, Serialize)]
pub struct ToolInfo {
    pub name: &'static str,
    pub version: &'static str,
}

/// The machine-readable result of a run. Contains no timestamps, so equal
/// inputs serialize to identical bytes.
#[derive(Clone, Debug, Serialize)]
pub struct ResultRecord {
    pub tool: ToolInfo,
    pub convention_ledger_sha256: String,
    pub config: RunConfig,
    pub tolerances: BTreeMap<String, f64>,
    pub passed: bool,
    pub outputs: Outputs,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

/// Wall-clock information, kept out of [`ResultRecord`].
#[derive(Clone, Debug, Serialize)]
pub struct RunMetadata {
    pub started_unix_s: f64,
    pub elapsed_s: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(header: &[&str]) -> Self {
        Table { header: header.iter().map(|s| s.to_string()).collect(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    /// Comma separated, `.` decimal separator, header row first.
    pub fn to_csv(&self) -> String {
        let mut s = self.header.join(",");
        s.push('\n');
        for row in &self.rows {
            s.push_str(&row.join(","));
            s.push('\n');
        }
        s
    }
}

#[derive(Clone, Debug)]
pub struct RunOutput {
    pub record: ResultRecord,
    pub table: Option<Table>,
}

impl RunOutput {
    pub fn exit_code(&self) -> i32 {
        if self.record.passed {
            EXIT_OK
        } else {
            EXIT_TOLERANCE
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(&self.record).expect("result record serializes");
        s.push('\n');
        s
    }
}

pub fn convention_ledger_hash() -> String {
    hex::encode(Sha256::digest(crate::CONVENTION_LEDGER.as_bytes()))
}

/// Applies command-line overrides and revalidates.
pub fn apply_overrides(mut config: RunConfig, overrides: &Overrides) -> Result<RunConfig, ConfigError> {
    if let Some(kind) = overrides.experiment {
        config.experiment = kind;
    }
    if let Some(seed) = overrides.seed {
        config.seed = Some(seed);
    }
    if let Some(out) = &overrides.out {
        config.out = Some(out.clone());
    }
    if let Some(t) = overrides.tolerance {
        if !(t.is_finite() && t > 0.0) {
            return Err(ConfigError::new("--tolerance", format!("must be positive and finite, got {t}")));
        }
    }
    config.validate()?;
    Ok(config)
}

/// Runs one experiment.
pub fn run(config: &RunConfig, tolerance: Option<f64>) -> Result<RunOutput, CliError> {
    config.validate()?;
    let resolved = config.resolved();
    let (outputs, tolerances, passed, table, notes) = experiments::dispatch(&resolved, tolerance)?;
    Ok(RunOutput {
        record: ResultRecord {
            tool: ToolInfo { name: env!("CARGO_PKG_NAME"), version: env!("CARGO_PKG_VERSION") },
            convention_ledger_sha256: convention_ledger_hash(),
            config: resolved,
            tolerances,
            passed,
            outputs,
            notes,
        },
        table,
    })
}

/// Writes `result.json`, `table.csv` (when present) and `metadata.json`.
pub fn write_outputs(dir: &Path, output: &RunOutput, metadata: &RunMetadata) -> Result<(), CliError> {
    fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
    let write = |name: &str, contents: &str| {
        let path = dir.join(name);
        fs::write(&path, contents).map_err(|e| CliError::io(&path, e))
    };
    write("result.json", &output.to_json())?;
    if let Some(table) = &output.table {
        write("table.csv", &table.to_csv())?;
    }
    let mut meta = serde_json::to_string_pretty(metadata).expect("metadata serializes");
    meta.push('\n');
    write("metadata.json", &meta)
}

/// Reads the config, runs it and writes the outputs; returns the exit code.
pub fn execute(config_path: &Path, overrides: &Overrides) -> Result<(RunOutput, PathBuf), CliError> {
    let text = fs::read_to_string(config_path).map_err(|e| CliError::io(config_path, e))?;
    let config = apply_overrides(RunConfig::from_json(&text)?, overrides)?;
    let started = SystemTime::now();
    let output = run(&config, overrides.tolerance)?;
    let elapsed = started.elapsed().unwrap_or(Duration::ZERO);
    let metadata = RunMetadata {
        started_unix_s: started.duration_since(UNIX_EPOCH).unwrap_or(Duration::ZERO).as_secs_f64(),
        elapsed_s: elapsed.as_secs_f64(),
    };
    let dir = config.out.clone().unwrap_or_else(|| PathBuf::from("out"));
    write_outputs(&dir, &output, &metadata)?;
    Ok((output, dir))
}
