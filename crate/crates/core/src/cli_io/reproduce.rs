//! Recomputes the Zaporizhzhia 2018 worked example and the cross-country
//! table from bundled fixtures, one check per published cell.

use std::path::{Path, PathBuf};

use super::check::{Check, CheckReport, ToleranceKind};
use super::config::Scenario;
use super::countries::{read_countries, validate_countries, CountryTolerances};
use super::csv_io::{read_age_series, Rows};
use crate::error::{Error, Result};
use crate::lifetable::{build_life_table, ExpectancySchedule, TerminalClosure, DEFAULT_RADIX};
use crate::valuation::{
    annuity_factor, build_valuation_table, discount_rate, eevl_age_ratio, eevl_mean_age,
    eevl_newborn_weibull, ValuationMethod,
};

pub const SCENARIO_FILE: &str = "zaporizhzhia_2018.json";
pub const EQUATIONS_FILE: &str = "worked_example.csv";
pub const QX_FILE: &str = "life_table_qx.csv";
pub const LIFE_TABLE_FILE: &str = "life_table_expected.csv";
pub const EX_FILE: &str = "life_expectancy.csv";
pub const COUNTRIES_FILE: &str = "countries.csv";
pub const COUNTRY_TOLERANCES_FILE: &str = "countries_tolerances.csv";

pub const TABLES: [(&str, ValuationMethod); 6] = [
    (
        "values_expectancy-ratio.csv",
        ValuationMethod::ExpectancyRatio,
    ),
    (
        "values_weibull-scaling.csv",
        ValuationMethod::WeibullScaling,
    ),
    (
        "values_discounted-income.csv",
        ValuationMethod::DiscountedIncome,
    ),
    (
        "values_discounted-income-ratio.csv",
        ValuationMethod::DiscountedIncomeRatio,
    ),
    ("values_discounted-grp.csv", ValuationMethod::DiscountedGrp),
    (
        "values_discounted-grp-ratio.csv",
        ValuationMethod::DiscountedGrpRatio,
    ),
];

#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct ReproduceOptions {
    /// Replaces every fixture tolerance when set.
    pub tolerance_override: Option<f64>,
}

fn required_files() -> Vec<&'static str> {
    let mut files = vec![
        SCENARIO_FILE,
        EQUATIONS_FILE,
        QX_FILE,
        LIFE_TABLE_FILE,
        EX_FILE,
        COUNTRIES_FILE,
        COUNTRY_TOLERANCES_FILE,
    ];
    files.extend(TABLES.iter().map(|(f, _)| *f));
    files
}

fn check_present(dir: &Path) -> Result<()> {
    let missing: Vec<&str> = required_files()
        .into_iter()
        .filter(|f| !dir.join(f).is_file())
        .collect();
    if missing.is_empty() {
        Ok(())
    } else {
        Err(Error::Config(format!(
            "data directory {} is missing: {}",
            dir.display(),
            missing.join(", ")
        )))
    }
}

fn read_all(path: &Path) -> Result<(Rows, Vec<(u64, csv::StringRecord)>)> {
    let mut rows = Rows::open(path)?;
    let mut records = Vec::new();
    for r in rows.records() {
        records.push(r?);
    }
    Ok((rows, records))
}

fn kind_at(rows: &Rows, line: u64, rec: &csv::StringRecord, idx: usize) -> Result<ToleranceKind> {
    let s = rec.get(idx).unwrap_or("");
    ToleranceKind::parse(s).ok_or_else(|| Error::Parse {
        path: rows.path().to_string(),
        line,
        message: format!("unknown tolerance kind `{s}`"),
    })
}

/// Published scalar with its tolerance.
#[derive(Debug, Clone, PartialEq)]
struct Expected {
    id: String,
    value: f64,
    tolerance: f64,
    kind: ToleranceKind,
}

fn read_equations(path: &Path) -> Result<Vec<Expected>> {
    let (rows, records) = read_all(path)?;
    rows.expect_headers(&["id", "expected", "tolerance", "kind"])?;
    records
        .iter()
        .map(|(line, rec)| {
            Ok(Expected {
                id: rec.get(0).unwrap_or("").to_string(),
                value: rows.number(*line, rec, 1)?,
                tolerance: rows.number(*line, rec, 2)?,
                kind: kind_at(&rows, *line, rec, 3)?,
            })
        })
        .collect()
}

fn read_table_fixture(path: &Path) -> Result<Vec<(u32, f64, f64)>> {
    let (rows, records) = read_all(path)?;
    rows.expect_headers(&["age", "expected", "rel_tol"])?;
    records
        .iter()
        .map(|(line, rec)| {
            Ok((
                rows.number(*line, rec, 0)? as u32,
                rows.number(*line, rec, 1)?,
                rows.number(*line, rec, 2)?,
            ))
        })
        .collect()
}

fn read_country_tolerances(path: &Path) -> Result<CountryTolerances> {
    let (rows, records) = read_all(path)?;
    rows.expect_headers(&["field", "rel_tol"])?;
    let mut tol = CountryTolerances::default();
    let mut decades: Option<f64> = None;
    for (line, rec) in &records {
        let v = rows.number(*line, rec, 1)?;
        match rec.get(0).unwrap_or("") {
            "E_T" => tol.e_t = v,
            "T" => tol.mean = v,
            f if f.starts_with('E') => decades = Some(decades.map_or(v, |d: f64| d.max(v))),
            f => {
                return Err(Error::Parse {
                    path: rows.path().to_string(),
                    line: *line,
                    message: format!("unknown field `{f}`"),
                })
            }
        }
    }
    if let Some(d) = decades {
        tol.decades = d;
    }
    Ok(tol)
}

struct Inputs {
    dir: PathBuf,
    scenario: Scenario,
    schedule: ExpectancySchedule,
}

impl Inputs {
    fn load(dir: &Path) -> Result<Self> {
        check_present(dir)?;
        let scenario = Scenario::load(&dir.join(SCENARIO_FILE))?;
        let schedule = ExpectancySchedule::new(read_age_series(&dir.join(EX_FILE), "ex")?)?;
        Ok(Self {
            dir: dir.to_path_buf(),
            scenario,
            schedule,
        })
    }

    fn mean_age(&self) -> Result<f64> {
        self.scenario.mean_age()?.ok_or(Error::Missing("mean_age"))
    }

    fn equation_value(&self, id: &str) -> Result<f64> {
        let s = &self.scenario;
        let income = s.disposable_income()?;
        let mortality = s.inputs.crude_mortality()?;
        let t = self.mean_age()?;
        let e_mean = self.schedule.life_expectancy_at(t)?;
        let e0 = self.schedule.at_birth();
        let rate = s.discount_rate()?;
        let weibull = s.weibull()?.ok_or(Error::Missing("weibull parameters"))?;
        let grp = s
            .inputs
            .grp_per_capita
            .ok_or(Error::Missing("grp_per_capita"))?;
        let base = eevl_mean_age(income, mortality)?;
        Ok(match id {
            "payments_per_capita" => s.inputs.payments_per_capita()?,
            "disposable_income" => income,
            "crude_mortality" => mortality,
            "eevl_mean_age" => base,
            "expectancy_at_mean_age" => e_mean,
            "newborn_expectancy_ratio" => eevl_age_ratio(base, e0, e_mean)?,
            "weibull_mean_age" => weibull.mean(),
            "newborn_weibull" => {
                let ctx = s.context()?;
                let mean = ctx.weibull_mean_age.unwrap_or_else(|| weibull.mean());
                eevl_newborn_weibull(base, mean, &weibull)?
            }
            "discount_rate" => discount_rate(s.inputs.deposit_rate)?,
            "discounted_income_birth_horizon" => income * annuity_factor(rate, e0 - t)?,
            "discounted_income_mean_age" => income * annuity_factor(rate, e_mean)?,
            "discounted_grp_mean_age" => grp * annuity_factor(rate, e_mean)?,
            other => {
                return Err(Error::Config(format!(
                    "{EQUATIONS_FILE}: unknown check id `{other}`"
                )))
            }
        })
    }

    fn equations(&self) -> Result<CheckReport> {
        let mut report = CheckReport::default();
        for e in read_equations(&self.dir.join(EQUATIONS_FILE))? {
            let actual = self.equation_value(&e.id)?;
            report.push(Check::new(
                format!("eq/{}", e.id),
                e.value,
                actual,
                e.tolerance,
                e.kind,
            ));
        }
        Ok(report)
    }

    fn life_table(&self) -> Result<CheckReport> {
        let q = read_age_series(&self.dir.join(QX_FILE), "qx")?;
        let closure = self
            .scenario
            .config
            .terminal_person_years
            .map(TerminalClosure::PersonYearsPerSurvivor)
            .unwrap_or_default();
        let table = build_life_table(
            &q,
            self.scenario.config.radix.unwrap_or(DEFAULT_RADIX),
            closure,
        )?;
        let (rows, records) = read_all(&self.dir.join(LIFE_TABLE_FILE))?;
        rows.expect_headers(&["age", "column", "expected", "abs_tol"])?;
        let mut report = CheckReport::default();
        for (line, rec) in &records {
            let age = rows.number(*line, rec, 0)? as u32;
            let column = rec.get(1).unwrap_or("");
            let row = table.row(age).ok_or_else(|| Error::Parse {
                path: rows.path().to_string(),
                line: *line,
                message: format!("age {age} is beyond the rebuilt table"),
            })?;
            let actual = match column {
                "lx" => row.lx,
                "dx" => row.dx,
                "Lx" => row.big_lx,
                "Tx" => row.tx,
                "ex" => row.ex,
                other => {
                    return Err(Error::Parse {
                        path: rows.path().to_string(),
                        line: *line,
                        message: format!("unknown life-table column `{other}`"),
                    })
                }
            };
            report.push(Check::new(
                format!("lifetable/{column}/{age}"),
                rows.number(*line, rec, 2)?,
                actual,
                rows.number(*line, rec, 3)?,
                ToleranceKind::Abs,
            ));
        }
        Ok(report)
    }

    fn countries(&self) -> Result<CheckReport> {
        let records = read_countries(&self.dir.join(COUNTRIES_FILE))?;
        let tol = read_country_tolerances(&self.dir.join(COUNTRY_TOLERANCES_FILE))?;
        let report = validate_countries(&records, tol)?;
        Ok(CheckReport {
            checks: report
                .checks
                .into_iter()
                .map(|mut c| {
                    c.id = format!("countries/{}", c.id);
                    c
                })
                .collect(),
        })
    }

    fn tables(&self) -> Result<CheckReport> {
        let ctx = self.scenario.context()?;
        let mut report = CheckReport::default();
        for (file, method) in TABLES {
            let table = build_valuation_table(&ctx, method)?;
            for (age, expected, tol) in read_table_fixture(&self.dir.join(file))? {
                let actual = table.value_at(age).ok_or_else(|| {
                    Error::Config(format!("{file}: age {age} is beyond the computed table"))
                })?;
                report.push(Check::new(
                    format!("{}/{age}", method.as_str()),
                    expected,
                    actual,
                    tol,
                    ToleranceKind::Rel,
                ));
            }
        }
        Ok(report)
    }
}

/// Runs every check against the fixtures in `data_dir`.
pub fn reproduce(data_dir: &Path, opts: ReproduceOptions) -> Result<CheckReport> {
    let inputs = Inputs::load(data_dir)?;
    let mut report = inputs.equations()?;
    report.extend(inputs.life_table()?);
    report.extend(inputs.countries()?);
    report.extend(inputs.tables()?);
    if let Some(t) = opts.tolerance_override {
        for c in &mut report.checks {
            c.tolerance = t;
        }
    }
    Ok(report)
}
