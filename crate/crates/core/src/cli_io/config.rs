//! Scenario configuration: a flat JSON document naming the economic inputs
//! and the data files for one region.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::csv_io::read_age_series;
use super::report::OutputFormat;
use crate::demography::{self, AgeDistribution, EconomicInputs, MandatoryPayments, Population};
use crate::error::{Error, Result};
use crate::lifetable::{
    build_life_table, ExpectancySchedule, LifeTable, TerminalClosure, DEFAULT_RADIX,
};
use crate::valuation::{discount_rate, Horizon, ValuationContext};
use crate::weibull::{self, WeibullParams};

/// Which Weibull estimate to use when parameters are fitted from data.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FitSelection {
    /// Whichever estimator has the smaller L1 distance.
    #[default]
    Best,
    LogLog,
    L1,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    #[serde(default)]
    pub region: String,
    pub gross_income_per_capita: f64,
    pub mandatory_payments_total: Option<f64>,
    pub mandatory_payments_per_capita: Option<f64>,
    pub deaths_annual: f64,
    pub population_start: Option<f64>,
    pub population_end: Option<f64>,
    pub population_mean: Option<f64>,
    pub deposit_rate: f64,
    pub grp_per_capita: Option<f64>,

    /// `age,count` file; its midpoint mean overrides nothing if `mean_age`
    /// is given explicitly.
    pub age_distribution_path: Option<PathBuf>,
    pub deaths_by_age_path: Option<PathBuf>,
    pub qx_path: Option<PathBuf>,
    pub ex_path: Option<PathBuf>,
    pub radix: Option<f64>,
    /// Person-years per survivor in the last life-table row.
    pub terminal_person_years: Option<f64>,

    pub mean_age: Option<f64>,
    pub weibull_a: Option<f64>,
    pub weibull_b: Option<f64>,
    pub weibull_c: Option<f64>,
    /// Published mean of the fitted distribution, used in place of the
    /// computed one when valuing by Weibull scaling.
    pub weibull_mean_age: Option<f64>,
    #[serde(default)]
    pub fit_method: FitSelection,
    #[serde(default)]
    pub horizon: Horizon,

    /// Round the discount rate to 4 decimals and mean ages to 1 decimal, as
    /// published worked examples do.
    #[serde(default)]
    pub reproduction_mode: bool,
    pub format: Option<OutputFormat>,
    pub pyll_normative_age: Option<f64>,
}

pub const DEFAULT_PYLL_AGE: f64 = 65.0;

impl ScenarioConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn economic_inputs(&self) -> Result<EconomicInputs> {
        let mandatory_payments = match (
            self.mandatory_payments_total,
            self.mandatory_payments_per_capita,
        ) {
            (Some(t), None) => MandatoryPayments::Total(t),
            (None, Some(p)) => MandatoryPayments::PerCapita(p),
            (None, None) => MandatoryPayments::PerCapita(0.0),
            (Some(_), Some(_)) => {
                return Err(Error::Config(
                    "give mandatory payments either as a total or per capita, not both".into(),
                ))
            }
        };
        let population = match (
            self.population_start,
            self.population_end,
            self.population_mean,
        ) {
            (Some(start), Some(end), None) => Population::StartEnd { start, end },
            (None, None, Some(m)) => Population::Mean(m),
            _ => {
                return Err(Error::Config(
                    "give either population_start and population_end, or population_mean".into(),
                ))
            }
        };
        let inputs = EconomicInputs {
            gross_income_per_capita: self.gross_income_per_capita,
            mandatory_payments,
            deaths_annual: self.deaths_annual,
            population,
            deposit_rate: self.deposit_rate,
            grp_per_capita: self.grp_per_capita,
        };
        inputs.validate()?;
        Ok(inputs)
    }

    pub fn weibull_params(&self) -> Result<Option<WeibullParams>> {
        match (self.weibull_a, self.weibull_b) {
            (Some(a), Some(b)) => Ok(Some(WeibullParams::new(
                a,
                b,
                self.weibull_c.unwrap_or(0.0),
            )?)),
            (None, None) => Ok(None),
            _ => Err(Error::Config(
                "weibull_a and weibull_b must be given together".into(),
            )),
        }
    }
}

/// Remaining life expectancy, either from a full table or a bare schedule.
#[derive(Debug, Clone, PartialEq)]
pub enum ExpectancySource {
    Table(LifeTable),
    Schedule(ExpectancySchedule),
}

impl ExpectancySource {
    pub fn schedule(&self) -> ExpectancySchedule {
        match self {
            ExpectancySource::Table(t) => t.expectancy(),
            ExpectancySource::Schedule(s) => s.clone(),
        }
    }
}

/// A configuration with its referenced files loaded and checked.
#[derive(Debug, Clone)]
pub struct Scenario {
    pub config: ScenarioConfig,
    pub inputs: EconomicInputs,
    pub age_distribution: Option<AgeDistribution>,
    pub deaths_by_age: Option<AgeDistribution>,
    pub expectancy: Option<ExpectancySource>,
}

fn round_to(v: f64, decimals: i32) -> f64 {
    let s = 10f64.powi(decimals);
    (v * s).round() / s
}

impl Scenario {
    /// Loads a config file, resolving relative data paths against its
    /// directory.
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let base = path.parent().unwrap_or_else(|| Path::new("."));
        Self::from_config(ScenarioConfig::from_json(&text)?, base)
    }

    pub fn from_config(config: ScenarioConfig, base: &Path) -> Result<Self> {
        let inputs = config.economic_inputs()?;
        let resolve = |p: &PathBuf| {
            if p.is_absolute() {
                p.clone()
            } else {
                base.join(p)
            }
        };

        let age_distribution = config
            .age_distribution_path
            .as_ref()
            .map(|p| {
                read_age_series(&resolve(p), "count")
                    .and_then(|c| AgeDistribution::with_open_end(c, true))
            })
            .transpose()?;
        let deaths_by_age = config
            .deaths_by_age_path
            .as_ref()
            .map(|p| read_age_series(&resolve(p), "deaths").and_then(AgeDistribution::new))
            .transpose()?;

        let expectancy = match (&config.qx_path, &config.ex_path) {
            (Some(_), Some(_)) => {
                return Err(Error::Config(
                    "give exactly one expectancy source: qx_path or ex_path".into(),
                ))
            }
            (Some(q), None) => {
                let q = read_age_series(&resolve(q), "qx")?;
                let closure = config
                    .terminal_person_years
                    .map(TerminalClosure::PersonYearsPerSurvivor)
                    .unwrap_or_default();
                let table = build_life_table(&q, config.radix.unwrap_or(DEFAULT_RADIX), closure)?;
                Some(ExpectancySource::Table(table))
            }
            (None, Some(e)) => Some(ExpectancySource::Schedule(ExpectancySchedule::new(
                read_age_series(&resolve(e), "ex")?,
            )?)),
            (None, None) => None,
        };

        Ok(Self {
            config,
            inputs,
            age_distribution,
            deaths_by_age,
            expectancy,
        })
    }

    pub fn reproduction_mode(&self) -> bool {
        self.config.reproduction_mode
    }

    pub fn disposable_income(&self) -> Result<f64> {
        demography::disposable_income(&self.inputs)
    }

    /// Data mean age: explicit config value first, then the distribution.
    pub fn mean_age(&self) -> Result<Option<f64>> {
        let m = match (self.config.mean_age, &self.age_distribution) {
            (Some(m), _) => Some(m),
            (None, Some(d)) => Some(demography::mean_age(d)?),
            (None, None) => None,
        };
        Ok(m.map(|m| {
            if self.reproduction_mode() {
                round_to(m, 1)
            } else {
                m
            }
        }))
    }

    /// Configured parameters, or a fit of the age distribution.
    pub fn weibull(&self) -> Result<Option<WeibullParams>> {
        if let Some(p) = self.config.weibull_params()? {
            return Ok(Some(p));
        }
        let Some(dist) = &self.age_distribution else {
            return Ok(None);
        };
        let ecdf = demography::empirical_cdf(dist)?;
        let (loglog, l1) = weibull::fit_both(&ecdf)?;
        Ok(Some(match self.config.fit_method {
            FitSelection::LogLog => loglog.params,
            FitSelection::L1 => l1.params,
            FitSelection::Best => weibull::select_fit(&[loglog, l1])?.params,
        }))
    }

    pub fn discount_rate(&self) -> Result<f64> {
        let e = discount_rate(self.inputs.deposit_rate)?;
        Ok(if self.reproduction_mode() {
            round_to(e, 4)
        } else {
            e
        })
    }

    pub fn context(&self) -> Result<ValuationContext> {
        let weibull = self.weibull()?;
        let weibull_mean_age = match (self.config.weibull_mean_age, weibull) {
            (Some(t), _) => Some(t),
            (None, Some(p)) if self.reproduction_mode() => Some(round_to(p.mean(), 1)),
            _ => None,
        };
        let ctx = ValuationContext {
            disposable_income: self.disposable_income()?,
            mortality: self.inputs.crude_mortality()?,
            mean_age: self.mean_age()?,
            expectancy: self.expectancy.as_ref().map(ExpectancySource::schedule),
            weibull,
            weibull_mean_age,
            discount_rate: self.discount_rate()?,
            grp_per_capita: self.inputs.grp_per_capita,
            horizon: self.config.horizon,
        };
        ctx.validate()?;
        Ok(ctx)
    }

    pub fn pyll(&self) -> Result<Option<f64>> {
        self.deaths_by_age
            .as_ref()
            .map(|d| {
                demography::pyll(
                    d,
                    self.config.pyll_normative_age.unwrap_or(DEFAULT_PYLL_AGE),
                )
            })
            .transpose()
    }
}
