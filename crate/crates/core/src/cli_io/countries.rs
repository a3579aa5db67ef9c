//! Cross-country records: published income, mortality and Weibull
//! parameters with the values they imply at each decade of age.

use std::path::Path;

use serde::Serialize;

use super::check::{Check, CheckReport, ToleranceKind};
use super::csv_io::Rows;
use crate::error::{Error, Result};
use crate::valuation::{eevl_age_weibull, eevl_mean_age, eevl_newborn_weibull};
use crate::weibull::WeibullParams;

pub const DECADE_AGES: [u32; 11] = [0, 10, 20, 30, 40, 50, 60, 70, 80, 90, 100];

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CountryRecord {
    pub name: String,
    /// Disposable income per capita.
    pub d: f64,
    /// Crude mortality per year.
    pub py: f64,
    /// Published mean age.
    pub t: f64,
    pub weibull: WeibullParams,
    pub e_t: f64,
    /// Published values at ages 0, 10, ..., 100.
    pub decades: [f64; 11],
}

fn header() -> Vec<String> {
    let mut h: Vec<String> = ["name", "D", "Py", "T", "a", "b", "c", "E_T"]
        .iter()
        .map(|s| s.to_string())
        .collect();
    h.extend(DECADE_AGES.iter().map(|a| format!("E{a}")));
    h
}

impl CountryRecord {
    fn validate(&self) -> Result<()> {
        let positive = [
            ("D", self.d),
            ("Py", self.py),
            ("T", self.t),
            ("E_T", self.e_t),
        ];
        for (field, v) in positive {
            if !(v > 0.0) {
                return Err(Error::validation(format!(
                    "{}: {field} must be positive, got {v}",
                    self.name
                )));
            }
        }
        self.weibull
            .validate()
            .map_err(|e| Error::validation(format!("{}: {e}", self.name)))?;
        if let Some(v) = self.decades.iter().find(|v| **v < 0.0) {
            return Err(Error::validation(format!(
                "{}: negative published value {v}",
                self.name
            )));
        }
        Ok(())
    }

    /// E_T recomputed from income and mortality.
    pub fn value_at_mean_age(&self) -> Result<f64> {
        eevl_mean_age(self.d, self.py)
    }

    pub fn weibull_mean(&self) -> f64 {
        self.weibull.mean()
    }

    /// Newborn value scaled from the published mean age.
    pub fn newborn_value(&self) -> Result<f64> {
        eevl_newborn_weibull(self.value_at_mean_age()?, self.t, &self.weibull)
    }

    pub fn value_at(&self, age: f64) -> Result<f64> {
        eevl_age_weibull(self.newborn_value()?, age, &self.weibull)
    }
}

pub fn read_countries(path: &Path) -> Result<Vec<CountryRecord>> {
    let mut rows = Rows::open(path)?;
    let expected = header();
    let expected: Vec<&str> = expected.iter().map(String::as_str).collect();
    rows.expect_headers(&expected)?;
    let mut records = Vec::new();
    for r in rows.records() {
        records.push(r?);
    }
    let mut out = Vec::with_capacity(records.len());
    for (line, rec) in &records {
        let name = rec.get(0).unwrap_or("").to_string();
        if name.is_empty() {
            return Err(Error::validation(format!(
                "{}: line {line}: empty country name",
                rows.path()
            )));
        }
        let num = |idx: usize| {
            rows.number(*line, rec, idx)
                .map_err(|e| Error::validation(format!("{name}: {e}")))
        };
        let mut decades = [0.0; 11];
        for (i, slot) in decades.iter_mut().enumerate() {
            *slot = num(8 + i)?;
        }
        let record = CountryRecord {
            weibull: WeibullParams {
                a: num(4)?,
                b: num(5)?,
                c: num(6)?,
            },
            name: name.clone(),
            d: num(1)?,
            py: num(2)?,
            t: num(3)?,
            e_t: num(7)?,
            decades,
        };
        record.validate()?;
        out.push(record);
    }
    if out.is_empty() {
        return Err(Error::validation(format!("{}: no data rows", rows.path())));
    }
    Ok(out)
}

/// Relative tolerances per published field.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CountryTolerances {
    pub e_t: f64,
    pub mean: f64,
    pub decades: f64,
}

impl Default for CountryTolerances {
    fn default() -> Self {
        Self {
            e_t: 0.005,
            mean: 0.01,
            decades: 0.02,
        }
    }
}

pub fn validate_countries(
    records: &[CountryRecord],
    tol: CountryTolerances,
) -> Result<CheckReport> {
    let mut report = CheckReport::default();
    for r in records {
        let id = |field: &str| format!("{}/{field}", r.name);
        report.push(Check::new(
            id("E_T"),
            r.e_t,
            r.value_at_mean_age()?,
            tol.e_t,
            ToleranceKind::Rel,
        ));
        report.push(Check::new(
            id("T"),
            r.t,
            r.weibull_mean(),
            tol.mean,
            ToleranceKind::Rel,
        ));
        let e0 = r.newborn_value()?;
        for (age, published) in DECADE_AGES.iter().zip(r.decades) {
            let actual = eevl_age_weibull(e0, *age as f64, &r.weibull)?;
            report.push(Check::new(
                id(&format!("E{age}")),
                published,
                actual,
                tol.decades,
                ToleranceKind::Rel,
            ));
        }
    }
    Ok(report)
}
