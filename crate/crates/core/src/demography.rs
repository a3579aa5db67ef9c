//! Age-structured population summaries: crude mortality, mean age of the
//! living, the empirical age CDF, disposable income and potential years of
//! life lost.
//!
//! A count recorded at age `x` stands for the interval `[x, x + 1)`; every
//! operation that needs a point age uses the midpoint `x + 0.5`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Single-year population (or death) counts indexed by completed age.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AgeDistribution {
    counts: Vec<f64>,
    open_ended: bool,
}

impl AgeDistribution {
    pub fn new(counts: Vec<f64>) -> Result<Self> {
        Self::with_open_end(counts, false)
    }

    /// Like [`AgeDistribution::new`], but marks the last bin as "max age and
    /// older". The terminal bin is still valued at its midpoint.
    pub fn with_open_end(counts: Vec<f64>, open_ended: bool) -> Result<Self> {
        if counts.is_empty() {
            return Err(Error::validation("age distribution is empty"));
        }
        if let Some((age, c)) = counts
            .iter()
            .enumerate()
            .find(|(_, c)| !c.is_finite() || **c < 0.0)
        {
            return Err(Error::validation(format!(
                "count at age {age} must be finite and non-negative, got {c}"
            )));
        }
        // Death schedules may legitimately be all zero; populations may not.
        Ok(Self { counts, open_ended })
    }

    pub fn counts(&self) -> &[f64] {
        &self.counts
    }

    pub fn open_ended(&self) -> bool {
        self.open_ended
    }

    pub fn max_age(&self) -> usize {
        self.counts.len() - 1
    }

    pub fn total(&self) -> f64 {
        self.counts.iter().sum()
    }

    fn require_population(&self) -> Result<f64> {
        let total = self.total();
        if total > 0.0 {
            Ok(total)
        } else {
            Err(Error::validation("total population must be positive"))
        }
    }
}

/// Cumulative share of the population below each integer age boundary.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EmpiricalAgeCdf {
    points: Vec<(f64, f64)>,
}

impl EmpiricalAgeCdf {
    /// Builds a CDF from `(boundary, cumulative share)` pairs, checking the
    /// ordering and range invariants.
    pub fn from_points(points: Vec<(f64, f64)>) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::validation("empirical CDF has no points"));
        }
        for w in points.windows(2) {
            if w[1].0 <= w[0].0 {
                return Err(Error::validation(
                    "CDF abscissas must be strictly increasing",
                ));
            }
            if w[1].1 < w[0].1 {
                return Err(Error::validation("CDF values must be non-decreasing"));
            }
        }
        if points.iter().any(|&(_, f)| !(0.0..=1.0).contains(&f)) {
            return Err(Error::validation("CDF values must lie in [0, 1]"));
        }
        Ok(Self { points })
    }

    pub fn points(&self) -> &[(f64, f64)] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

/// How regional mandatory payments are reported.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MandatoryPayments {
    Total(f64),
    PerCapita(f64),
}

/// Population either as start/end of year counts or as a ready mean.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Population {
    StartEnd { start: f64, end: f64 },
    Mean(f64),
}

impl Population {
    pub fn mean(&self) -> Result<f64> {
        match *self {
            Population::StartEnd { start, end } => mean_population(start, end),
            Population::Mean(m) if m > 0.0 && m.is_finite() => Ok(m),
            Population::Mean(m) => Err(Error::validation(format!(
                "mean population must be positive, got {m}"
            ))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EconomicInputs {
    pub gross_income_per_capita: f64,
    pub mandatory_payments: MandatoryPayments,
    pub deaths_annual: f64,
    pub population: Population,
    pub deposit_rate: f64,
    pub grp_per_capita: Option<f64>,
}

impl EconomicInputs {
    pub fn validate(&self) -> Result<()> {
        positive("gross_income_per_capita", self.gross_income_per_capita)?;
        match self.mandatory_payments {
            MandatoryPayments::Total(v) | MandatoryPayments::PerCapita(v) => {
                if !(v.is_finite() && v >= 0.0) {
                    return Err(Error::validation(format!(
                        "mandatory payments must be non-negative, got {v}"
                    )));
                }
            }
        }
        if !(self.deaths_annual.is_finite() && self.deaths_annual >= 0.0) {
            return Err(Error::validation("deaths_annual must be non-negative"));
        }
        self.population.mean()?;
        if !(0.0..1.0).contains(&self.deposit_rate) {
            return Err(Error::validation(format!(
                "deposit rate must lie in [0, 1), got {}",
                self.deposit_rate
            )));
        }
        if let Some(grp) = self.grp_per_capita {
            positive("grp_per_capita", grp)?;
        }
        Ok(())
    }

    pub fn population_mean(&self) -> Result<f64> {
        self.population.mean()
    }

    pub fn payments_per_capita(&self) -> Result<f64> {
        match self.mandatory_payments {
            MandatoryPayments::PerCapita(v) => Ok(v),
            MandatoryPayments::Total(total) => Ok(total / self.population_mean()?),
        }
    }

    pub fn crude_mortality(&self) -> Result<f64> {
        crude_mortality(self.deaths_annual, self.population_mean()?)
    }
}

fn positive(name: &str, v: f64) -> Result<()> {
    if v.is_finite() && v > 0.0 {
        Ok(())
    } else {
        Err(Error::validation(format!(
            "{name} must be positive, got {v}"
        )))
    }
}

pub fn mean_population(start: f64, end: f64) -> Result<f64> {
    positive("population_start", start)?;
    positive("population_end", end)?;
    Ok(0.5 * (start + end))
}

/// Annual deaths per head of mean population.
pub fn crude_mortality(deaths_annual: f64, population_mean: f64) -> Result<f64> {
    if population_mean <= 0.0 || !population_mean.is_finite() {
        return Err(Error::domain(format!(
            "crude mortality needs a positive population, got {population_mean}"
        )));
    }
    if deaths_annual < 0.0 || !deaths_annual.is_finite() {
        return Err(Error::validation("deaths must be non-negative"));
    }
    Ok(deaths_annual / population_mean)
}

/// Mean age of the living, valuing each one-year bin at its midpoint.
pub fn mean_age(dist: &AgeDistribution) -> Result<f64> {
    let total = dist.require_population()?;
    let weighted: f64 = dist
        .counts
        .iter()
        .enumerate()
        .map(|(x, s)| s * (x as f64 + 0.5))
        .sum();
    Ok(weighted / total)
}

/// Cumulative population share below each boundary `x + 1`, with `(0, 0)`
/// prepended.
pub fn empirical_cdf(dist: &AgeDistribution) -> Result<EmpiricalAgeCdf> {
    let total = dist.require_population()?;
    let mut points = Vec::with_capacity(dist.counts.len() + 1);
    points.push((0.0, 0.0));
    let mut running = 0.0;
    for (x, s) in dist.counts.iter().enumerate() {
        running += s;
        points.push((x as f64 + 1.0, (running / total).min(1.0)));
    }
    // Summation rounding must not leave the last point short of 1.
    if let Some(last) = points.last_mut() {
        last.1 = 1.0;
    }
    Ok(EmpiricalAgeCdf { points })
}

/// Per-capita income net of mandatory payments.
pub fn disposable_income(inputs: &EconomicInputs) -> Result<f64> {
    let net = inputs.gross_income_per_capita - inputs.payments_per_capita()?;
    if net < 0.0 {
        return Err(Error::validation(format!(
            "mandatory payments exceed gross income (net {net:.2})"
        )));
    }
    Ok(net)
}

/// Potential years of life lost below `normative_age`.
pub fn pyll(deaths_by_age: &AgeDistribution, normative_age: f64) -> Result<f64> {
    if !(normative_age > 0.0 && normative_age.is_finite()) {
        return Err(Error::validation(format!(
            "normative age must be positive, got {normative_age}"
        )));
    }
    Ok(deaths_by_age
        .counts
        .iter()
        .enumerate()
        .filter(|(x, _)| (*x as f64) < normative_age)
        .map(|(x, d)| d * (normative_age - (x as f64 + 0.5)).max(0.0))
        .sum())
}
