use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::Serialize;
use serde_json::{json, Value};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum OutputFormat {
    #[default]
    Csv,
    Json,
}

impl OutputFormat {
    pub fn extension(self) -> &'static str {
        match self {
            OutputFormat::Csv => "csv",
            OutputFormat::Json => "json",
        }
    }
}

impl FromStr for OutputFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(OutputFormat::Csv),
            "json" => Ok(OutputFormat::Json),
            other => Err(Error::Config(format!("unknown format {other:?}; expected csv or json"))),
        }
    }
}

/// One table cell. Non-finite numbers are stored as [`Cell::Empty`].
#[derive(Clone, Debug, PartialEq)]
pub enum Cell {
    Num(f64),
    Int(i64),
    Text(String),
    Empty,
}

impl Cell {
    pub fn num(x: f64) -> Cell {
        if x.is_finite() {
            Cell::Num(x)
        } else {
            Cell::Empty
        }
    }

    pub fn opt(x: Option<f64>) -> Cell {
        x.map_or(Cell::Empty, Cell::num)
    }

    pub fn text(s: impl Into<String>) -> Cell {
        Cell::Text(s.into())
    }

    /// CSV form: floats in scientific notation with 17 significant digits.
    pub fn render(&self) -> String {
        match self {
            Cell::Num(x) => format!("{x:.16e}"),
            Cell::Int(i) => i.to_string(),
            Cell::Text(s) => s.clone(),
            Cell::Empty => String::new(),
        }
    }

    fn to_json(&self) -> Value {
        match self {
            Cell::Num(x) => json!(x),
            Cell::Int(i) => json!(i),
            Cell::Text(s) => json!(s),
            Cell::Empty => Value::Null,
        }
    }
}

impl From<usize> for Cell {
    fn from(x: usize) -> Cell {
        Cell::Int(x as i64)
    }
}

/// A named table with a JSON metadata block.
#[derive(Clone, Debug, PartialEq)]
pub struct Table {
    pub name: String,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
    pub meta: Value,
}

impl Table {
    pub fn new(name: impl Into<String>, columns: &[&str]) -> Self {
        Table {
            name: name.into(),
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
            meta: json!({}),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        assert_eq!(row.len(), self.columns.len(), "row width must match the header");
        self.rows.push(row);
    }

    pub fn with_meta(mut self, meta: impl Serialize) -> Self {
        self.meta = serde_json::to_value(meta).expect("metadata serializes");
        self
    }

    pub fn column(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| c == name)
    }

    /// CSV text with `# key: value` provenance lines ahead of the header.
    pub fn to_csv(&self, config_hash: &str) -> String {
        let mut out = format!(
            "# config_hash: {config_hash}\n# version: {}\n",
            env!("CARGO_PKG_VERSION")
        );
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(&self.columns).expect("in-memory write");
        for row in &self.rows {
            w.write_record(row.iter().map(Cell::render)).expect("in-memory write");
        }
        out.push_str(&String::from_utf8(w.into_inner().expect("flush")).expect("utf-8"));
        out
    }

    pub fn to_json(&self, config_hash: &str) -> Value {
        json!({
            "name": self.name,
            "version": env!("CARGO_PKG_VERSION"),
            "config_hash": config_hash,
            "meta": self.meta,
            "columns": self.columns,
            "rows": self.rows.iter().map(|r| r.iter().map(Cell::to_json).collect::<Vec<_>>()).collect::<Vec<_>>(),
        })
    }

    pub fn render(&self, format: OutputFormat, config_hash: &str) -> String {
        match format {
            OutputFormat::Csv => self.to_csv(config_hash),
            OutputFormat::Json => {
                let mut s = serde_json::to_string_pretty(&self.to_json(config_hash)).expect("serializes");
                s.push('\n');
                s
            }
        }
    }

    /// Writes `<dir>/<name>.<ext>`; CSV output also gets a `<name>.json` sidecar
    /// carrying the metadata. Returns the paths written.
    pub fn write(&self, dir: &Path, format: OutputFormat, config_hash: &str) -> Result<Vec<PathBuf>> {
        ensure_dir(dir)?;
        let main = dir.join(format!("{}.{}", self.name, format.extension()));
        write_file(&main, &self.render(format, config_hash))?;
        let mut written = vec![main];
        if format == OutputFormat::Csv {
            let sidecar = dir.join(format!("{}.json", self.name));
            let doc = json!({
                "name": self.name,
                "version": env!("CARGO_PKG_VERSION"),
                "config_hash": config_hash,
                "meta": self.meta,
            });
            write_file(&sidecar, &(serde_json::to_string_pretty(&doc).expect("serializes") + "\n"))?;
            written.push(sidecar);
        }
        Ok(written)
    }
}

pub(crate) fn ensure_dir(dir: &Path) -> Result<()> {
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let probe = dir.join(".write-probe");
    fs::write(&probe, b"").map_err(|e| Error::io(&probe, e))?;
    fs::remove_file(&probe).map_err(|e| Error::io(&probe, e))
}

pub(crate) fn write_file(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).map_err(|e| Error::io(path, e))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_layout() {
        let mut t = Table::new("demo", &["k", "value", "note"]);
        t.push(vec![Cell::from(1usize), Cell::num(0.1), Cell::text("a,b")]);
        t.push(vec![Cell::from(2usize), Cell::num(f64::NAN), Cell::Empty]);
        let csv = t.to_csv("abc");
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], "# config_hash: abc");
        assert_eq!(lines[2], "k,value,note");
        assert_eq!(lines[3], "1,1.0000000000000001e-1,\"a,b\"");
        assert_eq!(lines[4], "2,,");
    }

    #[test]
    fn seventeen_digits_round_trip() {
        for x in [std::f64::consts::PI, 1e-300, -2.5e17, 0.1 + 0.2] {
            let s = Cell::num(x).render();
            assert_eq!(s.parse::<f64>().unwrap(), x);
        }
    }

    #[test]
    fn json_nulls_for_empty() {
        let mut t = Table::new("demo", &["x"]);
        t.push(vec![Cell::Empty]);
        let v = t.to_json("h");
        assert_eq!(v["rows"][0][0], Value::Null);
        assert_eq!(v["config_hash"], "h");
    }

    #[test]
    fn unwritable_directory_is_io_error() {
        let tmp = tempfile::tempdir().unwrap();
        let file = tmp.path().join("plain");
        fs::write(&file, "x").unwrap();
        let err = Table::new("t", &["x"]).write(&file.join("sub"), OutputFormat::Csv, "h").unwrap_err();
        assert_eq!(err.exit_code(), 4);
    }
}
