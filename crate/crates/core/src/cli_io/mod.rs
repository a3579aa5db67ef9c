//! File formats, scenario configuration and the command implementations
//! behind the `eevl` binary.

mod check;
mod config;
mod countries;
mod csv_io;
mod report;
mod reproduce;

use std::fmt::Write as _;
use std::path::Path;

use serde::Serialize;

pub use check::{Check, CheckReport, ToleranceKind};
pub use config::{ExpectancySource, FitSelection, Scenario, ScenarioConfig, DEFAULT_PYLL_AGE};
pub use countries::{
    read_countries, validate_countries, CountryRecord, CountryTolerances, DECADE_AGES,
};
pub use csv_io::read_age_series;
pub use report::{
    density_csv, life_table_csv, parse_life_table_csv, parse_valuation_csv, render_life_table,
    render_valuation, valuation_csv, OutputFormat,
};
pub use reproduce::{reproduce, ReproduceOptions, TABLES};

use crate::demography;
use crate::error::{Error, Result};
use crate::lifetable::{build_life_table, LifeTable, TerminalClosure, DEFAULT_RADIX};
use crate::valuation::{Valuation, ValuationMethod};
use crate::weibull::{self, FitReport, WeibullParams};

/// What a command produced: the document to write, a one-line summary for
/// the terminal, and whether every check passed.
#[derive(Debug, Clone, PartialEq)]
pub struct CommandOutput {
    pub body: String,
    pub summary: String,
    pub success: bool,
}

impl CommandOutput {
    fn ok(body: String, summary: String) -> Self {
        Self {
            body,
            summary,
            success: true,
        }
    }
}

/// Loads a scenario, optionally forcing reproduction rounding on.
pub fn load_scenario(path: &Path, force_reproduction: bool) -> Result<Scenario> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let mut config = ScenarioConfig::from_json(&text)?;
    config.reproduction_mode |= force_reproduction;
    Scenario::from_config(config, path.parent().unwrap_or_else(|| Path::new(".")))
}

fn scenario_life_table(s: &Scenario) -> Result<&LifeTable> {
    match &s.expectancy {
        Some(ExpectancySource::Table(t)) => Ok(t),
        _ => Err(Error::Missing("qx_path")),
    }
}

pub fn life_table_from_qx(path: &Path, terminal_person_years: Option<f64>) -> Result<LifeTable> {
    let q = read_age_series(path, "qx")?;
    let closure = terminal_person_years
        .map(TerminalClosure::PersonYearsPerSurvivor)
        .unwrap_or_default();
    build_life_table(&q, DEFAULT_RADIX, closure)
}

pub fn cmd_lifetable(table: &LifeTable, format: OutputFormat) -> Result<CommandOutput> {
    let e0 = table.rows()[0].ex;
    Ok(CommandOutput::ok(
        render_life_table(table, format)?,
        format!(
            "life expectancy at birth e0 = {e0:.2} years ({} ages)",
            table.rows().len()
        ),
    ))
}

pub fn cmd_lifetable_scenario(s: &Scenario, format: OutputFormat) -> Result<CommandOutput> {
    cmd_lifetable(scenario_life_table(s)?, format)
}

#[derive(Debug, Clone, Serialize)]
struct FitDocument<'a> {
    loglog: &'a FitReport,
    l1: &'a FitReport,
    selected: &'a FitReport,
}

pub fn cmd_fit(dist: &demography::AgeDistribution, format: OutputFormat) -> Result<CommandOutput> {
    let ecdf = demography::empirical_cdf(dist)?;
    let (loglog, l1) = weibull::fit_both(&ecdf)?;
    let pair = [loglog, l1];
    let selected = weibull::select_fit(&pair)?;
    let body = match format {
        OutputFormat::Json => {
            serde_json::to_string_pretty(&FitDocument {
                loglog: &pair[0],
                l1: &pair[1],
                selected,
            })? + "\n"
        }
        OutputFormat::Csv => {
            let mut out = String::from("method,a,b,c,l1_distance,mean,selected\n");
            for r in &pair {
                let p = r.params;
                let _ = writeln!(
                    out,
                    "{},{},{},{},{},{},{}",
                    r.method.label(),
                    p.a,
                    p.b,
                    p.c,
                    r.l1_distance,
                    r.mean,
                    std::ptr::eq(r, selected)
                );
            }
            out
        }
        OutputFormat::Markdown => {
            let mut out = String::from(
                "| method | a | b | c | L1 distance | mean |\n|---|---:|---:|---:|---:|---:|\n",
            );
            for r in &pair {
                let mark = if std::ptr::eq(r, selected) {
                    " (selected)"
                } else {
                    ""
                };
                let _ = writeln!(
                    out,
                    "| {}{mark} | {:.4} | {:.4} | {:.4} | {:.6} | {:.2} |",
                    r.method.label(),
                    r.params.a,
                    r.params.b,
                    r.params.c,
                    r.l1_distance,
                    r.mean
                );
            }
            out
        }
    };
    let p = selected.params;
    let summary = format!(
        "selected {}: a = {:.4}, b = {:.4}, L1 = {:.6}, mean = {:.2}",
        selected.method.label(),
        p.a,
        p.b,
        selected.l1_distance,
        selected.mean
    );
    Ok(CommandOutput::ok(body, summary))
}

pub fn cmd_fit_scenario(s: &Scenario, format: OutputFormat) -> Result<CommandOutput> {
    let dist = s
        .age_distribution
        .as_ref()
        .ok_or(Error::Missing("age_distribution_path"))?;
    cmd_fit(dist, format)
}

#[derive(Debug, Clone, Serialize)]
struct SingleValue {
    method: ValuationMethod,
    age: f64,
    value: f64,
}

pub fn cmd_value(
    s: &Scenario,
    method: ValuationMethod,
    age: Option<f64>,
    format: OutputFormat,
) -> Result<CommandOutput> {
    let ctx = s.context()?;
    let valuation = Valuation::new(&ctx, method)?;
    match age {
        Some(age) => {
            let value = valuation.value_at(age)?;
            let body = match format {
                OutputFormat::Csv => format!("age,value\n{age},{value}\n"),
                OutputFormat::Json => {
                    serde_json::to_string_pretty(&SingleValue { method, age, value })? + "\n"
                }
                OutputFormat::Markdown => {
                    format!("| Age | Value |\n|---:|---:|\n| {age} | {value:.0} |\n")
                }
            };
            Ok(CommandOutput::ok(
                body,
                format!("{method} at age {age}: {value:.0}"),
            ))
        }
        None => {
            let table = valuation.table()?;
            let summary = format!(
                "{method}: value at mean age {:.0}, at birth {:.0}",
                table.base_value_at_mean_age, table.newborn_value
            );
            Ok(CommandOutput::ok(
                render_valuation(&table, format)?,
                summary,
            ))
        }
    }
}

fn check_output(report: &CheckReport) -> CommandOutput {
    let failed = report.failures().count();
    CommandOutput {
        body: report.render(),
        summary: format!(
            "{} cells compared, {} passed, {failed} failed",
            report.checks.len(),
            report.checks.len() - failed
        ),
        success: failed == 0,
    }
}

pub fn cmd_reproduce(data_dir: &Path, opts: ReproduceOptions) -> Result<CommandOutput> {
    Ok(check_output(&reproduce(data_dir, opts)?))
}

pub fn cmd_countries(path: &Path, tol: CountryTolerances) -> Result<CommandOutput> {
    let records = read_countries(path)?;
    Ok(check_output(&validate_countries(&records, tol)?))
}

pub const DENSITY_STEP: f64 = 0.5;
pub const DENSITY_RANGE: (f64, f64) = (0.0, 100.0);

pub fn density_points(
    p: &WeibullParams,
    start: f64,
    end: f64,
    step: f64,
) -> Result<Vec<(f64, f64)>> {
    p.validate()?;
    if !(step > 0.0) || !(end >= start) || !start.is_finite() || !end.is_finite() {
        return Err(Error::validation(format!(
            "density grid needs start <= end and a positive step, got [{start}, {end}] step {step}"
        )));
    }
    let n = ((end - start) / step + 1e-9).floor() as usize;
    Ok((0..=n)
        .map(|i| {
            let t = start + i as f64 * step;
            (t, p.pdf(t))
        })
        .collect())
}

pub fn cmd_density(p: &WeibullParams) -> Result<CommandOutput> {
    let pts = density_points(p, DENSITY_RANGE.0, DENSITY_RANGE.1, DENSITY_STEP)?;
    let mass: f64 = pts.iter().map(|(_, f)| f * DENSITY_STEP).sum();
    Ok(CommandOutput::ok(
        density_csv(&pts),
        format!("{} points, Riemann mass {mass:.4}", pts.len()),
    ))
}
