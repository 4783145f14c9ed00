//! CSV and manifest input/output.
//!
//! Numbers are written with Rust's shortest round-trip formatting, so a file
//! written twice from the same values is byte-identical.

use std::fs::File;
use std::io::Write;
use std::path::Path;

use crate::error::{GasError, Result};
use crate::smoothing::ReturnSeries;

/// Which column of a CSV file to read.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub enum ColumnSelector {
    #[default]
    First,
    Index(usize),
    Name(String),
}

impl std::str::FromStr for ColumnSelector {
    type Err = GasError;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s.parse::<usize>() {
            Ok(i) => ColumnSelector::Index(i),
            Err(_) => ColumnSelector::Name(s.to_string()),
        })
    }
}

/// Reads one numeric column. A first row that does not parse as a number is
/// taken as a header.
pub fn read_column(path: &Path, column: &ColumnSelector) -> Result<Vec<f64>> {
    let file = File::open(path).map_err(|e| GasError::io(path, e))?;
    read_column_from(file, column)
}

pub fn read_column_from<R: std::io::Read>(reader: R, column: &ColumnSelector) -> Result<Vec<f64>> {
    let mut rdr = csv::ReaderBuilder::new().has_headers(false).flexible(true).from_reader(reader);
    let mut values = Vec::new();
    let mut index = match column {
        ColumnSelector::First => Some(0),
        ColumnSelector::Index(i) => Some(*i),
        ColumnSelector::Name(_) => None,
    };
    let mut first = true;
    for rec in rdr.records() {
        let rec = rec.map_err(|e| GasError::Parse {
            line: e.position().map(|p| p.line()).unwrap_or(0),
            msg: e.to_string(),
        })?;
        let line = rec.position().map(|p| p.line()).unwrap_or(0);
        if rec.iter().all(|f| f.trim().is_empty()) {
            continue;
        }
        if first {
            first = false;
            if let ColumnSelector::Name(name) = column {
                let pos = rec.iter().position(|f| f.trim() == name).ok_or_else(|| GasError::Parse {
                    line,
                    msg: format!("no column named `{name}` in header"),
                })?;
                index = Some(pos);
                continue;
            }
            let i = index.unwrap_or(0);
            let field = rec.get(i).map(str::trim).unwrap_or("");
            if field.parse::<f64>().is_err() {
                continue;
            }
        }
        let i = index.unwrap_or(0);
        let field = rec
            .get(i)
            .ok_or_else(|| GasError::Parse { line, msg: format!("missing column {i}") })?
            .trim();
        let v: f64 = field
            .parse()
            .map_err(|_| GasError::Parse { line, msg: format!("`{field}` is not a number") })?;
        if !v.is_finite() {
            return Err(GasError::Parse { line, msg: format!("`{field}` is not finite") });
        }
        values.push(v);
    }
    if values.is_empty() {
        return Err(GasError::Parse { line: 1, msg: "no numeric rows".into() });
    }
    Ok(values)
}

/// Reads a return series from a CSV column.
pub fn read_series(path: &Path, column: &ColumnSelector) -> Result<ReturnSeries<f64>> {
    ReturnSeries::new(read_column(path, column)?)
}

/// Writes a single-column series with a `return` header.
pub fn write_series(path: &Path, series: &[f64]) -> Result<()> {
    write_table(path, &["return"], series.iter().map(|v| vec![fmt_num(*v)]))
}

/// Formats a number for CSV output; non-finite values become empty fields.
pub fn fmt_num(v: f64) -> String {
    if v.is_finite() {
        format!("{v}")
    } else if v.is_nan() {
        String::new()
    } else if v > 0.0 {
        "inf".into()
    } else {
        "-inf".into()
    }
}

pub fn fmt_opt(v: Option<f64>) -> String {
    v.map(fmt_num).unwrap_or_default()
}

/// Writes a CSV table with a header row.
pub fn write_table<I>(path: &Path, header: &[&str], rows: I) -> Result<()>
where
    I: IntoIterator<Item = Vec<String>>,
{
    let mut w = csv::Writer::from_path(path).map_err(|e| csv_io(path, e))?;
    w.write_record(header).map_err(|e| csv_io(path, e))?;
    for row in rows {
        w.write_record(&row).map_err(|e| csv_io(path, e))?;
    }
    w.flush().map_err(|e| GasError::io(path, e))
}

fn csv_io(path: &Path, e: csv::Error) -> GasError {
    GasError::io(path, std::io::Error::other(e.to_string()))
}

/// Ordered `key=value` run manifest.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Manifest {
    entries: Vec<(String, String)>,
}

impl Manifest {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn set(&mut self, key: &str, value: impl ToString) -> &mut Self {
        let value = value.to_string().replace('\n', " ");
        match self.entries.iter_mut().find(|(k, _)| k == key) {
            Some(e) => e.1 = value,
            None => self.entries.push((key.to_string(), value)),
        }
        self
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.entries.iter().find(|(k, _)| k == key).map(|(_, v)| v.as_str())
    }

    pub fn entries(&self) -> &[(String, String)] {
        &self.entries
    }

    pub fn render(&self) -> String {
        self.entries.iter().map(|(k, v)| format!("{k}={v}\n")).collect()
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut m = Manifest::new();
        for (i, line) in text.lines().enumerate() {
            if line.trim().is_empty() {
                continue;
            }
            let (k, v) = line.split_once('=').ok_or_else(|| GasError::Parse {
                line: i as u64 + 1,
                msg: "expected key=value".into(),
            })?;
            m.set(k, v);
        }
        Ok(m)
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        let mut f = File::create(path).map_err(|e| GasError::io(path, e))?;
        f.write_all(self.render().as_bytes()).map_err(|e| GasError::io(path, e))
    }
}
