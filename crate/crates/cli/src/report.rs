//! Reports and their atomic on-disk form.

use std::io::Write;
use std::path::{Path, PathBuf};

use serde::Serialize;
use serde_json::{Map, Value};

use crate::config::ExperimentConfig;
use crate::error::{CliError, CliResult};

#[derive(Clone, Debug, Serialize)]
pub struct Assertion {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

/// A CSV table, already rendered.
#[derive(Clone, Debug)]
pub struct Table {
    pub name: String,
    pub csv: Vec<u8>,
}

/// Everything an experiment produces. All fields except `wall_time_ms` are
/// a function of the config alone.
#[derive(Clone, Debug)]
pub struct Report {
    pub config: ExperimentConfig,
    pub results: Map<String, Value>,
    pub assertions: Vec<Assertion>,
    pub tables: Vec<Table>,
    pub wall_time_ms: u128,
}

impl Report {
    pub fn new(config: ExperimentConfig) -> Self {
        Self {
            config,
            results: Map::new(),
            assertions: Vec::new(),
            tables: Vec::new(),
            wall_time_ms: 0,
        }
    }

    pub fn set(&mut self, key: &str, value: impl Into<Value>) {
        self.results.insert(key.to_string(), value.into());
    }

    pub fn check(&mut self, name: impl Into<String>, passed: bool, detail: impl Into<String>) {
        self.assertions.push(Assertion {
            name: name.into(),
            passed,
            detail: detail.into(),
        });
    }

    pub fn table(&mut self, name: &str, csv: Vec<u8>) {
        self.tables.push(Table {
            name: name.to_string(),
            csv,
        });
    }

    pub fn passed(&self) -> bool {
        self.assertions.iter().all(|a| a.passed)
    }

    /// The deterministic part of the report.
    pub fn payload(&self, stem: &str) -> Value {
        let mut out = Map::new();
        out.insert(
            "experiment".into(),
            serde_json::to_value(&self.config).expect("config serializes"),
        );
        out.insert("results".into(), Value::Object(self.results.clone()));
        out.insert(
            "assertions".into(),
            serde_json::to_value(&self.assertions).expect("assertions serialize"),
        );
        out.insert("passed".into(), Value::Bool(self.passed()));
        out.insert(
            "tables".into(),
            Value::Array(
                self.tables
                    .iter()
                    .map(|t| Value::String(table_file(stem, &t.name)))
                    .collect(),
            ),
        );
        Value::Object(out)
    }

    pub fn to_json(&self, stem: &str) -> String {
        let mut v = self.payload(stem);
        if let Value::Object(m) = &mut v {
            m.insert("wall_time_ms".into(), Value::from(self.wall_time_ms as u64));
        }
        let mut s = serde_json::to_string_pretty(&v).expect("report serializes");
        s.push('\n');
        s
    }

    /// Writes `<stem>.report.json` and one `<stem>.<table>.csv` per table
    /// into `dir`, each through a temporary file and a rename.
    pub fn write(&self, dir: &Path, stem: &str) -> CliResult<Vec<PathBuf>> {
        std::fs::create_dir_all(dir).map_err(|e| io_err(dir, e))?;
        let mut written = Vec::new();
        for t in &self.tables {
            written.push(write_atomic(dir, &table_file(stem, &t.name), &t.csv)?);
        }
        written.push(write_atomic(
            dir,
            &format!("{stem}.report.json"),
            self.to_json(stem).as_bytes(),
        )?);
        Ok(written)
    }
}

fn table_file(stem: &str, name: &str) -> String {
    format!("{stem}.{name}.csv")
}

fn io_err(path: &Path, source: std::io::Error) -> CliError {
    CliError::Io {
        path: path.to_path_buf(),
        source,
    }
}

fn write_atomic(dir: &Path, name: &str, bytes: &[u8]) -> CliResult<PathBuf> {
    let target = dir.join(name);
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(|e| io_err(dir, e))?;
    tmp.write_all(bytes).map_err(|e| io_err(&target, e))?;
    tmp.flush().map_err(|e| io_err(&target, e))?;
    tmp.persist(&target).map_err(|e| io_err(&target, e.error))?;
    Ok(target)
}
