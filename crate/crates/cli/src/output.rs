//! Deterministic artifact writing: tables as CSV or JSON, and the run
//! manifest with SHA-256 checksums.

use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use serde_json::{json, Map, Value};
use sha2::{Digest, Sha256};

use crate::config::Format;
use crate::error::{CliError, CliResult};

/// 17 significant digits in scientific notation; `-0` prints as `0`.
pub fn fmt_f64(v: f64) -> String {
    let v = if v == 0.0 { 0.0 } else { v };
    format!("{v:.16e}")
}

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Int(i64),
    Float(f64),
    Text(String),
}

impl Cell {
    fn csv(&self) -> String {
        match self {
            Cell::Int(i) => i.to_string(),
            Cell::Float(v) => fmt_f64(*v),
            Cell::Text(s) => s.clone(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Cell::Int(i) => json!(i),
            // Non-finite values have no JSON number form.
            Cell::Float(v) if v.is_finite() => Value::String(fmt_f64(*v)),
            Cell::Float(_) => Value::Null,
            Cell::Text(s) => json!(s),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub header: &'static [&'static str],
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(header: &'static [&'static str]) -> Self {
        Self {
            header,
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn to_csv(&self) -> String {
        let mut out = self.header.join(",");
        out.push('\n');
        for row in &self.rows {
            let line: Vec<String> = row.iter().map(Cell::csv).collect();
            out.push_str(&line.join(","));
            out.push('\n');
        }
        out
    }

    /// Array of row objects; floats are carried as 17-digit strings so the
    /// JSON form is as reproducible as the CSV form.
    pub fn to_json(&self) -> String {
        let rows: Vec<Value> = self
            .rows
            .iter()
            .map(|row| {
                let obj: Map<String, Value> = self
                    .header
                    .iter()
                    .zip(row)
                    .map(|(k, c)| (k.to_string(), c.json()))
                    .collect();
                Value::Object(obj)
            })
            .collect();
        let mut s = serde_json::to_string_pretty(&Value::Array(rows)).expect("serializable");
        s.push('\n');
        s
    }
}

#[derive(Debug, Clone)]
pub struct FileRecord {
    pub name: String,
    pub sha256: String,
    pub bytes: usize,
}

/// Collects artifacts written during one run and emits `manifest.json`.
pub struct RunOutput {
    dir: PathBuf,
    format: Format,
    files: Vec<FileRecord>,
    extra: Map<String, Value>,
    started: Instant,
}

impl RunOutput {
    pub fn create(dir: &Path, format: Format) -> CliResult<Self> {
        fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
        Ok(Self {
            dir: dir.to_path_buf(),
            format,
            files: Vec::new(),
            extra: Map::new(),
            started: Instant::now(),
        })
    }

    /// Writes `<stem>.csv` or `<stem>.json` according to the output format.
    pub fn table(&mut self, stem: &str, table: &Table) -> CliResult<()> {
        match self.format {
            Format::Csv => self.file(&format!("{stem}.csv"), table.to_csv().as_bytes()),
            Format::Json => self.file(&format!("{stem}.json"), table.to_json().as_bytes()),
        }
    }

    pub fn json_file(&mut self, name: &str, value: &Value) -> CliResult<()> {
        let mut s = serde_json::to_string_pretty(value).expect("serializable");
        s.push('\n');
        self.file(name, s.as_bytes())
    }

    pub fn file(&mut self, name: &str, bytes: &[u8]) -> CliResult<()> {
        let path = self.dir.join(name);
        fs::write(&path, bytes).map_err(|e| CliError::io(&path, e))?;
        self.files.push(FileRecord {
            name: name.to_string(),
            sha256: sha256_hex(bytes),
            bytes: bytes.len(),
        });
        Ok(())
    }

    pub fn set(&mut self, key: &str, value: Value) {
        self.extra.insert(key.to_string(), value);
    }

    pub fn finish(self, command: &str, config: Value, seed: u64, points: usize) -> CliResult<PathBuf> {
        let files: Vec<Value> = self
            .files
            .iter()
            .map(|f| json!({ "name": f.name, "sha256": f.sha256, "bytes": f.bytes }))
            .collect();
        let mut manifest = Map::new();
        manifest.insert("command".into(), json!(command));
        manifest.insert(
            "versions".into(),
            json!({ "nhspec": env!("CARGO_PKG_VERSION"), "nhspec-core": env!("CARGO_PKG_VERSION") }),
        );
        manifest.insert("config".into(), config);
        manifest.insert("seed".into(), json!(seed));
        manifest.insert("points".into(), json!(points));
        manifest.insert("files".into(), Value::Array(files));
        manifest.insert("wall_time_seconds".into(), json!(self.started.elapsed().as_secs_f64()));
        for (k, v) in self.extra {
            manifest.insert(k, v);
        }
        let path = self.dir.join("manifest.json");
        let mut s = serde_json::to_string_pretty(&Value::Object(manifest)).expect("serializable");
        s.push('\n');
        fs::write(&path, s).map_err(|e| CliError::io(&path, e))?;
        Ok(path)
    }
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

/// JSON number, or `null` when not finite.
pub fn num(v: f64) -> Value {
    if v.is_finite() {
        json!(v)
    } else {
        Value::Null
    }
}
