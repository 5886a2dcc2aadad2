//! JSON and CSV artifacts, each carrying the configuration that produced it.

use crate::config::RunConfig;
use crate::error::Result;
use serde::Serialize;
use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;

/// Header attached to every artifact.
#[derive(Debug, Clone, Serialize)]
pub struct Metadata {
    pub tool: String,
    pub version: String,
    pub command: String,
    /// Canonical text of the configuration.
    pub config: String,
    /// Derived parameters such as `c`, `delta`, `epsilon`.
    pub derived: BTreeMap<String, f64>,
    pub tolerances: BTreeMap<String, f64>,
    pub seed: u64,
}

impl Metadata {
    pub fn new(cfg: &RunConfig) -> Self {
        Self {
            tool: "hypertwist".into(),
            version: env!("CARGO_PKG_VERSION").into(),
            command: cfg.command.name().into(),
            config: cfg.to_text(),
            derived: BTreeMap::new(),
            tolerances: BTreeMap::from([("eigen_residual".to_string(), cfg.tol), ("geometric_tail".to_string(), cfg.tail_tol)]),
            seed: cfg.seed,
        }
    }

    /// Records `c`, `delta = policy(c, h)` and `epsilon = 20 c h`.
    pub fn with_form_scale(mut self, cfg: &RunConfig, c: f64) -> Self {
        self.derived.insert("c".into(), c);
        self.derived.insert("delta".into(), cfg.delta.resolve(c, cfg.h));
        self.derived.insert("epsilon".into(), 20.0 * c * cfg.h);
        self
    }

    pub fn derive(mut self, key: &str, value: f64) -> Self {
        self.derived.insert(key.into(), value);
        self
    }
}

#[derive(Serialize)]
struct Document<'a, T: Serialize> {
    metadata: &'a Metadata,
    result: &'a T,
}

/// `{"metadata": ..., "result": ...}` as pretty-printed JSON.
pub fn to_json<T: Serialize>(meta: &Metadata, result: &T) -> Result<String> {
    serde_json::to_string_pretty(&Document { metadata: meta, result })
        .map(|mut s| {
            s.push('\n');
            s
        })
        .map_err(|e| crate::Error::Io(e.to_string()))
}

pub fn write_json<T: Serialize>(path: &Path, meta: &Metadata, result: &T) -> Result<()> {
    std::fs::write(path, to_json(meta, result)?)?;
    Ok(())
}

/// One CSV cell.
#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Float(f64),
    Int(i64),
    Bool(bool),
    Text(String),
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Float(v)
    }
}

impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell::Int(v as i64)
    }
}

impl From<i64> for Cell {
    fn from(v: i64) -> Self {
        Cell::Int(v)
    }
}

impl From<bool> for Cell {
    fn from(v: bool) -> Self {
        Cell::Bool(v)
    }
}

impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::Text(v.into())
    }
}

/// Floats in scientific notation with 17 significant digits.
pub fn format_float(v: f64) -> String {
    if v.is_finite() {
        format!("{v:.16e}")
    } else {
        format!("{v}")
    }
}

fn cell(c: &Cell) -> String {
    match c {
        Cell::Float(v) => format_float(*v),
        Cell::Int(v) => v.to_string(),
        Cell::Bool(v) => v.to_string(),
        Cell::Text(s) if s.contains([',', '"', '\n']) => format!("\"{}\"", s.replace('"', "\"\"")),
        Cell::Text(s) => s.clone(),
    }
}

/// CSV with a `#`-prefixed metadata header (config lines as `# config: key = value`).
pub fn to_csv(meta: &Metadata, columns: &[&str], rows: &[Vec<Cell>]) -> String {
    let mut s = String::new();
    writeln!(s, "# tool: {} {}", meta.tool, meta.version).unwrap();
    writeln!(s, "# command: {}", meta.command).unwrap();
    for line in meta.config.lines() {
        writeln!(s, "# config: {line}").unwrap();
    }
    for (k, v) in &meta.derived {
        writeln!(s, "# derived: {k} = {}", format_float(*v)).unwrap();
    }
    for (k, v) in &meta.tolerances {
        writeln!(s, "# tolerance: {k} = {}", format_float(*v)).unwrap();
    }
    writeln!(s, "# seed: {}", meta.seed).unwrap();
    writeln!(s, "{}", columns.join(",")).unwrap();
    for r in rows {
        writeln!(s, "{}", r.iter().map(cell).collect::<Vec<_>>().join(",")).unwrap();
    }
    s
}

pub fn write_csv(path: &Path, meta: &Metadata, columns: &[&str], rows: &[Vec<Cell>]) -> Result<()> {
    std::fs::write(path, to_csv(meta, columns, rows))?;
    Ok(())
}
