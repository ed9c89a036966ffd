//! CSV output.
//!
//! Every file starts with one `#` comment line holding the resolved
//! parameters as `key=value` pairs, then a header row. Numbers are written
//! with `{:.16e}` (17 significant digits), which round-trips any `f64`.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use crate::CliError;

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Num(f64),
    Text(String),
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Cell::Num(x)
    }
}

impl From<&str> for Cell {
    fn from(s: &str) -> Self {
        Cell::Text(s.to_string())
    }
}

impl From<String> for Cell {
    fn from(s: String) -> Self {
        Cell::Text(s)
    }
}

pub fn format_number(x: f64) -> String {
    format!("{x:.16e}")
}

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub name: String,
    pub params: Vec<(String, String)>,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(name: impl Into<String>, columns: &[&str]) -> Self {
        Self {
            name: name.into(),
            params: Vec::new(),
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    /// Adds `key=value` to the comment line. Numbers use their shortest
    /// round-trip form.
    pub fn param(mut self, key: &str, value: impl std::fmt::Display) -> Self {
        self.params.push((key.to_string(), value.to_string()));
        self
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        assert_eq!(row.len(), self.columns.len(), "row width of `{}`", self.name);
        self.rows.push(row);
    }

    pub fn render(&self) -> String {
        let mut out = String::from("#");
        for (k, v) in &self.params {
            let _ = write!(out, " {k}={v}");
        }
        out.push('\n');
        out.push_str(&self.columns.join(","));
        out.push('\n');
        for row in &self.rows {
            for (i, cell) in row.iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                match cell {
                    Cell::Num(x) => out.push_str(&format_number(*x)),
                    Cell::Text(s) => out.push_str(s),
                }
            }
            out.push('\n');
        }
        out
    }

    pub fn write_to(&self, dir: &Path) -> Result<PathBuf, CliError> {
        let path = dir.join(&self.name);
        std::fs::write(&path, self.render()).map_err(|source| CliError::Io {
            path: path.clone(),
            source,
        })?;
        Ok(path)
    }
}

/// Parsed form of a file written by [`Table::render`].
#[derive(Debug, Clone, PartialEq)]
pub struct ParsedTable {
    pub params: Vec<(String, String)>,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl ParsedTable {
    pub fn parse(text: &str) -> Result<Self, String> {
        let mut lines = text.lines();
        let comment = lines.next().ok_or("empty file")?;
        let rest = comment.strip_prefix('#').ok_or("first line is not a `#` comment")?;
        let params = rest
            .split_whitespace()
            .map(|kv| {
                kv.split_once('=')
                    .map(|(k, v)| (k.to_string(), v.to_string()))
                    .ok_or_else(|| format!("parameter `{kv}` is not key=value"))
            })
            .collect::<Result<Vec<_>, _>>()?;
        let header = lines.next().ok_or("missing header row")?;
        let columns: Vec<String> = header.split(',').map(str::to_string).collect();
        let mut rows = Vec::new();
        for (i, line) in lines.enumerate() {
            let row: Vec<String> = line.split(',').map(str::to_string).collect();
            if row.len() != columns.len() {
                return Err(format!("row {} has {} fields, header has {}", i + 1, row.len(), columns.len()));
            }
            rows.push(row);
        }
        Ok(Self {
            params,
            columns,
            rows,
        })
    }

    pub fn column(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| c == name)
    }

    /// Values of a numeric column.
    pub fn numbers(&self, name: &str) -> Result<Vec<f64>, String> {
        let i = self.column(name).ok_or_else(|| format!("missing column `{name}`"))?;
        self.rows
            .iter()
            .map(|r| r[i].parse::<f64>().map_err(|e| format!("column `{name}`: {e}")))
            .collect()
    }

    pub fn param(&self, key: &str) -> Option<&str> {
        self.params.iter().find(|(k, _)| k == key).map(|(_, v)| v.as_str())
    }
}
