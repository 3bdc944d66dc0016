//! Flat tables rendered as CSV or JSON.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use serde_json::{Map, Number, Value as Json};

use super::config::Format;
use super::CliError;

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Int(i64),
    Float(f64),
    Bool(bool),
    Str(String),
    Null,
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

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Float(v)
    }
}

impl From<bool> for Cell {
    fn from(v: bool) -> Self {
        Cell::Bool(v)
    }
}

impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::Str(v.to_owned())
    }
}

impl<T: Into<Cell>> From<Option<T>> for Cell {
    fn from(v: Option<T>) -> Self {
        v.map_or(Cell::Null, Into::into)
    }
}

impl Cell {
    /// 17 significant digits, so every float survives a round trip.
    fn csv(&self) -> String {
        match self {
            Cell::Int(i) => i.to_string(),
            Cell::Float(x) => format!("{x:.16e}"),
            Cell::Bool(b) => b.to_string(),
            Cell::Str(s) if s.contains([',', '"', '\n']) => format!("\"{}\"", s.replace('"', "\"\"")),
            Cell::Str(s) => s.clone(),
            Cell::Null => String::new(),
        }
    }

    fn json(&self) -> Json {
        match self {
            Cell::Int(i) => Json::from(*i),
            Cell::Float(x) => Number::from_f64(*x).map_or(Json::Null, Json::Number),
            Cell::Bool(b) => Json::Bool(*b),
            Cell::Str(s) => Json::String(s.clone()),
            Cell::Null => Json::Null,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub name: String,
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(name: &str, columns: &[&'static str]) -> Self {
        Self { name: name.to_owned(), columns: columns.to_vec(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len(), "row width in table {}", self.name);
        self.rows.push(row);
    }

    pub fn to_csv(&self) -> String {
        let mut out = self.columns.join(",");
        out.push('\n');
        for row in &self.rows {
            let line: Vec<String> = row.iter().map(Cell::csv).collect();
            let _ = writeln!(out, "{}", line.join(","));
        }
        out
    }

    /// Array of objects keyed by column name.
    pub fn to_json(&self) -> Json {
        Json::Array(
            self.rows
                .iter()
                .map(|row| {
                    let obj: Map<String, Json> =
                        self.columns.iter().zip(row).map(|(c, v)| ((*c).to_owned(), v.json())).collect();
                    Json::Object(obj)
                })
                .collect(),
        )
    }
}

/// Renders tables for stdout. Several CSV tables become `# name` sections;
/// JSON is a single object keyed by table name.
pub fn render(tables: &[Table], format: Format) -> String {
    match format {
        Format::Csv if tables.len() == 1 => tables[0].to_csv(),
        Format::Csv => {
            let mut out = String::new();
            for (i, t) in tables.iter().enumerate() {
                if i > 0 {
                    out.push('\n');
                }
                let _ = writeln!(out, "# {}", t.name);
                out.push_str(&t.to_csv());
            }
            out
        }
        Format::Json => {
            let obj: Map<String, Json> = tables.iter().map(|t| (t.name.clone(), t.to_json())).collect();
            let mut s = serde_json::to_string_pretty(&Json::Object(obj)).unwrap_or_default();
            s.push('\n');
            s
        }
    }
}

/// Destination file of each table for `--out path`: one file for a single
/// table or for JSON, otherwise `<stem>.<table>.csv` beside `path`.
pub fn output_paths(path: &Path, tables: &[Table], format: Format) -> Vec<PathBuf> {
    if format == Format::Json || tables.len() == 1 {
        return vec![path.to_path_buf()];
    }
    let stem = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_else(|| "hillgap".into());
    tables.iter().map(|t| path.with_file_name(format!("{stem}.{}.csv", t.name))).collect()
}

pub fn write_tables(path: &Path, tables: &[Table], format: Format) -> Result<Vec<PathBuf>, CliError> {
    let paths = output_paths(path, tables, format);
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir).map_err(|e| CliError::Io(format!("{}: {e}", dir.display())))?;
    }
    let contents: Vec<String> = if paths.len() == 1 {
        vec![render(tables, format)]
    } else {
        tables.iter().map(Table::to_csv).collect()
    };
    for (p, body) in paths.iter().zip(contents) {
        std::fs::write(p, body).map_err(|e| CliError::Io(format!("{}: {e}", p.display())))?;
    }
    Ok(paths)
}
