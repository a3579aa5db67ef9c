//! Strict CSV ingestion: header row, comma delimiter, period decimals.
//!
//! Grouping separators are rejected rather than guessed at. Source tables
//! printed with a period for thousands ("60.570" meaning 60 570) cannot be
//! told apart from decimals, so such data must be normalised before it
//! reaches these readers.

use std::fs::File;
use std::path::Path;

use csv::{ReaderBuilder, StringRecord};

use crate::error::{Error, Result};

pub(crate) fn parse_number(field: &str) -> std::result::Result<f64, String> {
    let s = field.trim();
    if s.is_empty() {
        return Err("empty numeric field".into());
    }
    if s.contains([',', '_', ' ', '\'', '\u{a0}']) || s.matches('.').count() > 1 {
        return Err(format!("`{s}` looks like it uses a thousands separator"));
    }
    match s.parse::<f64>() {
        Ok(v) if v.is_finite() => Ok(v),
        Ok(_) => Err(format!("`{s}` is not a finite number")),
        Err(_) => Err(format!("`{s}` is not a number")),
    }
}

fn open(path: &Path) -> Result<csv::Reader<File>> {
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    Ok(ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .from_reader(file))
}

pub(crate) struct Rows {
    path: String,
    reader: csv::Reader<File>,
    pub headers: StringRecord,
}

impl Rows {
    pub fn open(path: &Path) -> Result<Self> {
        let mut reader = open(path)?;
        let headers = reader
            .headers()
            .map_err(|e| parse_error(path, 1, e.to_string()))?
            .clone();
        Ok(Self {
            path: path.display().to_string(),
            reader,
            headers,
        })
    }

    pub fn expect_headers(&self, expected: &[&str]) -> Result<()> {
        let got: Vec<&str> = self.headers.iter().collect();
        if got != expected {
            return Err(Error::Parse {
                path: self.path.clone(),
                line: 1,
                message: format!(
                    "expected header `{}`, found `{}`",
                    expected.join(","),
                    got.join(",")
                ),
            });
        }
        Ok(())
    }

    pub fn path(&self) -> &str {
        &self.path
    }

    /// Yields `(line, record)` pairs, mapping reader failures to line errors.
    pub fn records(&mut self) -> impl Iterator<Item = Result<(u64, StringRecord)>> + '_ {
        let path = self.path.clone();
        self.reader.records().map(move |r| match r {
            Ok(rec) => {
                let line = rec.position().map_or(0, |p| p.line());
                Ok((line, rec))
            }
            Err(e) => {
                let line = e.position().map_or(0, |p| p.line());
                Err(Error::Parse {
                    path: path.clone(),
                    line,
                    message: e.to_string(),
                })
            }
        })
    }

    pub fn number(&self, line: u64, rec: &StringRecord, idx: usize) -> Result<f64> {
        let field = rec.get(idx).unwrap_or("");
        parse_number(field).map_err(|message| Error::Parse {
            path: self.path.clone(),
            line,
            message: format!("column `{}`: {message}", &self.headers[idx]),
        })
    }
}

fn parse_error(path: &Path, line: u64, message: String) -> Error {
    Error::Parse {
        path: path.display().to_string(),
        line,
        message,
    }
}

/// Reads a two-column `age,<value>` file whose ages run 0, 1, 2, ... without
/// gaps.
pub fn read_age_series(path: &Path, value_column: &str) -> Result<Vec<f64>> {
    let mut rows = Rows::open(path)?;
    rows.expect_headers(&["age", value_column])?;
    let mut values = Vec::new();
    let mut records = Vec::new();
    for r in rows.records() {
        records.push(r?);
    }
    for (line, rec) in &records {
        let age = rows.number(*line, rec, 0)?;
        let expected = values.len() as f64;
        if age != expected {
            return Err(Error::validation(format!(
                "{}: line {line}: non-contiguous ages: expected age {expected}, found {age}",
                rows.path()
            )));
        }
        values.push(rows.number(*line, rec, 1)?);
    }
    if values.is_empty() {
        return Err(Error::validation(format!("{}: no data rows", rows.path())));
    }
    Ok(values)
}
