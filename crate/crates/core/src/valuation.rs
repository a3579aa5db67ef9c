//! Money value of a statistical life, at the population mean age and for
//! every single year of age.
//!
//! Three families of per-age schedules are supported:
//!
//! * **Weibull scaling**: the value at the mean age is carried back to birth
//!   through the Weibull survival share and forward again to each age.
//! * **Expectancy ratio**: the value at the mean age scaled by
//!   `e(t) / e(T)`.
//! * **Discounted income**: income (or GRP) per head discounted continuously
//!   over the remaining lifetime, either directly at every age or once at
//!   the mean age and then spread with the expectancy ratio.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lifetable::ExpectancySchedule;
use crate::weibull::WeibullParams;

/// Ages covered by a full table.
pub const MAX_TABLE_AGE: u32 = 100;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ValuationMethod {
    WeibullScaling,
    ExpectancyRatio,
    DiscountedIncome,
    DiscountedGrp,
    DiscountedIncomeRatio,
    DiscountedGrpRatio,
}

impl ValuationMethod {
    pub const ALL: [ValuationMethod; 6] = [
        ValuationMethod::WeibullScaling,
        ValuationMethod::ExpectancyRatio,
        ValuationMethod::DiscountedIncome,
        ValuationMethod::DiscountedGrp,
        ValuationMethod::DiscountedIncomeRatio,
        ValuationMethod::DiscountedGrpRatio,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            ValuationMethod::WeibullScaling => "weibull-scaling",
            ValuationMethod::ExpectancyRatio => "expectancy-ratio",
            ValuationMethod::DiscountedIncome => "discounted-income",
            ValuationMethod::DiscountedGrp => "discounted-grp",
            ValuationMethod::DiscountedIncomeRatio => "discounted-income-ratio",
            ValuationMethod::DiscountedGrpRatio => "discounted-grp-ratio",
        }
    }
}

impl fmt::Display for ValuationMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ValuationMethod {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|m| m.as_str() == s)
            .ok_or_else(|| Error::validation(format!("unknown valuation method `{s}`")))
    }
}

/// Discounting horizon for the income methods.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Horizon {
    /// Remaining life expectancy at the subject's age.
    #[default]
    RemainingExpectancy,
    /// Life expectancy at birth minus the subject's age.
    BirthExpectancyMinusAge,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ValuationContext {
    /// Disposable income per head per year.
    pub disposable_income: f64,
    /// Crude mortality rate, the background annual probability of death.
    pub mortality: f64,
    /// Mean age of the living from the age distribution.
    pub mean_age: Option<f64>,
    pub expectancy: Option<ExpectancySchedule>,
    pub weibull: Option<WeibullParams>,
    /// Mean age used by the Weibull method; defaults to the Weibull mean.
    pub weibull_mean_age: Option<f64>,
    /// Continuous discount rate.
    pub discount_rate: f64,
    pub grp_per_capita: Option<f64>,
    #[serde(default)]
    pub horizon: Horizon,
}

impl ValuationContext {
    pub fn validate(&self) -> Result<()> {
        if !(self.disposable_income.is_finite() && self.disposable_income > 0.0) {
            return Err(Error::validation("disposable income must be positive"));
        }
        if !(self.mortality > 0.0 && self.mortality < 1.0) {
            return Err(Error::validation(format!(
                "mortality must lie in (0, 1), got {}",
                self.mortality
            )));
        }
        for (name, t) in [
            ("mean_age", self.mean_age),
            ("weibull_mean_age", self.weibull_mean_age),
        ] {
            if let Some(t) = t {
                if !(t > 0.0 && t < 120.0) {
                    return Err(Error::validation(format!(
                        "{name} must lie in (0, 120), got {t}"
                    )));
                }
            }
        }
        if !(self.discount_rate.is_finite() && self.discount_rate >= 0.0) {
            return Err(Error::validation("discount rate must be non-negative"));
        }
        if let Some(p) = &self.weibull {
            p.validate()?;
        }
        if let Some(g) = self.grp_per_capita {
            if !(g.is_finite() && g > 0.0) {
                return Err(Error::validation("GRP per capita must be positive"));
            }
        }
        Ok(())
    }

    /// Value of life at the mean age, `D / Py`.
    pub fn value_at_mean_age(&self) -> Result<f64> {
        eevl_mean_age(self.disposable_income, self.mortality)
    }

    fn expectancy(&self) -> Result<&ExpectancySchedule> {
        self.expectancy.as_ref().ok_or(Error::Missing("life table"))
    }

    fn mean(&self) -> Result<f64> {
        self.mean_age.ok_or(Error::Missing("mean_age"))
    }

    fn weibull(&self) -> Result<WeibullParams> {
        self.weibull.ok_or(Error::Missing("weibull parameters"))
    }

    fn grp(&self) -> Result<f64> {
        self.grp_per_capita.ok_or(Error::Missing("grp_per_capita"))
    }
}

pub fn eevl_mean_age(disposable_income: f64, mortality: f64) -> Result<f64> {
    if !(mortality > 0.0) {
        return Err(Error::domain(format!(
            "mortality must be positive, got {mortality}"
        )));
    }
    Ok(disposable_income / mortality)
}

/// Value at birth implied by the value at mean age `mean_age`.
pub fn eevl_newborn_weibull(value_at_mean: f64, mean_age: f64, p: &WeibullParams) -> Result<f64> {
    p.validate()?;
    if mean_age < p.c {
        return Err(Error::domain(format!(
            "mean age {mean_age} lies below the Weibull shift {}",
            p.c
        )));
    }
    Ok(value_at_mean / p.survival(mean_age))
}

pub fn eevl_age_weibull(newborn: f64, age: f64, p: &WeibullParams) -> Result<f64> {
    p.validate()?;
    if age < p.c {
        return Err(Error::domain(format!(
            "age {age} lies below the Weibull shift {}",
            p.c
        )));
    }
    Ok(newborn * p.survival(age))
}

/// `(e_t / e_T) * value_at_mean`.
pub fn eevl_age_ratio(value_at_mean: f64, e_age: f64, e_mean: f64) -> Result<f64> {
    if !(e_mean > 0.0) {
        return Err(Error::domain(format!(
            "life expectancy at the mean age must be positive, got {e_mean}"
        )));
    }
    if e_age == e_mean {
        return Ok(value_at_mean);
    }
    Ok(e_age / e_mean * value_at_mean)
}

/// Continuous rate `ln(1 + i)` equivalent to an annual rate `i`.
pub fn discount_rate(i: f64) -> Result<f64> {
    if !(i > -1.0) {
        return Err(Error::domain(format!(
            "annual rate must exceed -1, got {i}"
        )));
    }
    Ok(i.ln_1p())
}

/// `integral_0^t0 exp(-rate * t) dt`.
pub fn annuity_factor(rate: f64, t0: f64) -> Result<f64> {
    if !(t0 >= 0.0) {
        return Err(Error::validation(format!(
            "horizon must be non-negative, got {t0}"
        )));
    }
    if rate == 0.0 {
        return Ok(t0);
    }
    Ok(-(-rate * t0).exp_m1() / rate)
}

pub fn eevl_discounted(income: f64, rate: f64, t0: f64) -> Result<f64> {
    Ok(income * annuity_factor(rate, t0)?)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ValuationRow {
    pub age: u32,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ValuationTable {
    pub method: ValuationMethod,
    pub base_value_at_mean_age: f64,
    pub newborn_value: f64,
    pub rows: Vec<ValuationRow>,
}

impl ValuationTable {
    pub fn value_at(&self, age: u32) -> Option<f64> {
        self.rows.iter().find(|r| r.age == age).map(|r| r.value)
    }
}

/// A method bound to a context, ready to value any age.
#[derive(Debug, Clone)]
pub struct Valuation<'a> {
    method: ValuationMethod,
    ctx: &'a ValuationContext,
    base: f64,
    /// Newborn value for the Weibull method, `e(T)` for ratio methods.
    multiplier: f64,
    income: f64,
    max_age: u32,
}

impl<'a> Valuation<'a> {
    pub fn new(ctx: &'a ValuationContext, method: ValuationMethod) -> Result<Self> {
        ctx.validate()?;
        let e_base = ctx.value_at_mean_age()?;
        let mut income = ctx.disposable_income;
        let (base, multiplier, max_age) = match method {
            ValuationMethod::WeibullScaling => {
                let p = ctx.weibull()?;
                let t = ctx.weibull_mean_age.unwrap_or_else(|| p.mean());
                (e_base, eevl_newborn_weibull(e_base, t, &p)?, MAX_TABLE_AGE)
            }
            ValuationMethod::ExpectancyRatio => {
                let e = ctx.expectancy()?;
                let e_mean = e.life_expectancy_at(ctx.mean()?)?;
                (e_base, e_mean, e.max_age().min(MAX_TABLE_AGE))
            }
            ValuationMethod::DiscountedIncome | ValuationMethod::DiscountedGrp => {
                if method == ValuationMethod::DiscountedGrp {
                    income = ctx.grp()?;
                }
                let e = ctx.expectancy()?;
                let t0 = horizon(ctx, e, ctx.mean()?)?;
                (
                    eevl_discounted(income, ctx.discount_rate, t0)?,
                    0.0,
                    e.max_age().min(MAX_TABLE_AGE),
                )
            }
            ValuationMethod::DiscountedIncomeRatio | ValuationMethod::DiscountedGrpRatio => {
                if method == ValuationMethod::DiscountedGrpRatio {
                    income = ctx.grp()?;
                }
                let e = ctx.expectancy()?;
                let mean = ctx.mean()?;
                let base = eevl_discounted(income, ctx.discount_rate, horizon(ctx, e, mean)?)?;
                let e_mean = e.life_expectancy_at(mean)?;
                (base, e_mean, e.max_age().min(MAX_TABLE_AGE))
            }
        };
        Ok(Self {
            method,
            ctx,
            base,
            multiplier,
            income,
            max_age,
        })
    }

    pub fn method(&self) -> ValuationMethod {
        self.method
    }

    pub fn base_value_at_mean_age(&self) -> f64 {
        self.base
    }

    pub fn max_age(&self) -> u32 {
        self.max_age
    }

    pub fn value_at(&self, age: f64) -> Result<f64> {
        if !(0.0..=self.max_age as f64).contains(&age) {
            return Err(Error::Range {
                what: "age",
                value: age,
                min: 0.0,
                max: self.max_age as f64,
            });
        }
        match self.method {
            ValuationMethod::WeibullScaling => {
                eevl_age_weibull(self.multiplier, age, &self.ctx.weibull()?)
            }
            ValuationMethod::ExpectancyRatio
            | ValuationMethod::DiscountedIncomeRatio
            | ValuationMethod::DiscountedGrpRatio => {
                let e = self.ctx.expectancy()?;
                eevl_age_ratio(self.base, e.life_expectancy_at(age)?, self.multiplier)
            }
            ValuationMethod::DiscountedIncome | ValuationMethod::DiscountedGrp => {
                let e = self.ctx.expectancy()?;
                eevl_discounted(
                    self.income,
                    self.ctx.discount_rate,
                    horizon(self.ctx, e, age)?,
                )
            }
        }
    }

    pub fn table(&self) -> Result<ValuationTable> {
        let rows = (0..=self.max_age)
            .map(|age| {
                self.value_at(age as f64)
                    .map(|value| ValuationRow { age, value })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(ValuationTable {
            method: self.method,
            base_value_at_mean_age: self.base,
            newborn_value: rows[0].value,
            rows,
        })
    }
}

fn horizon(ctx: &ValuationContext, e: &ExpectancySchedule, age: f64) -> Result<f64> {
    Ok(match ctx.horizon {
        Horizon::RemainingExpectancy => e.life_expectancy_at(age)?,
        Horizon::BirthExpectancyMinusAge => (e.at_birth() - age).max(0.0),
    })
}

pub fn build_valuation_table(
    ctx: &ValuationContext,
    method: ValuationMethod,
) -> Result<ValuationTable> {
    Valuation::new(ctx, method)?.table()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rel(a: f64, b: f64) -> f64 {
        (a / b - 1.0).abs()
    }

    const D: f64 = 60_570.0;
    const PY: f64 = 27_871.0 / 1_713_715.0;

    #[test]
    fn mean_age_value() {
        assert!(rel(eevl_mean_age(D, PY).unwrap(), 3_724_291.0) < 1e-3);
        assert!(rel(eevl_mean_age(21_329.0, 0.0099).unwrap(), 2_154_444.0) < 5e-3);
        assert_eq!(eevl_mean_age(1.0, 1.0).unwrap(), 1.0);
        assert!(matches!(eevl_mean_age(1.0, 0.0), Err(Error::Domain(_))));
    }

    #[test]
    fn weibull_newborn_and_ages() {
        let p = WeibullParams::scale_shape(49.5, 2.04).unwrap();
        let e0 = eevl_newborn_weibull(3_724_291.0, 43.8, &p).unwrap();
        assert!(rel(e0, 8_117_411.0) < 1e-3, "{e0}");
        assert_eq!(eevl_newborn_weibull(5.0, 0.0, &p).unwrap(), 5.0);
        let germany = WeibullParams::scale_shape(46.4, 1.91).unwrap();
        assert!(
            rel(
                eevl_newborn_weibull(2.15e6, 41.2, &germany).unwrap(),
                4.77e6
            ) < 0.01
        );

        assert!(rel(eevl_age_weibull(8_117_411.0, 1.0, &p).unwrap(), 8_114_577.0) < 1e-3);
        assert_eq!(eevl_age_weibull(8_117_411.0, 0.0, &p).unwrap(), 8_117_411.0);
        assert!(rel(eevl_age_weibull(8_117_411.0, 100.0, &p).unwrap(), 122_013.0) < 5e-3);

        let shifted = WeibullParams::new(40.0, 2.0, 5.0).unwrap();
        assert!(eevl_age_weibull(1.0, 4.0, &shifted).is_err());
        assert!(eevl_newborn_weibull(1.0, 4.0, &shifted).is_err());
    }

    #[test]
    fn ratio_examples() {
        assert!(
            rel(
                eevl_age_ratio(3_724_291.0, 70.89, 31.32).unwrap(),
                8_429_309.0
            ) < 2e-3
        );
        assert_eq!(
            eevl_age_ratio(3_724_291.0, 31.32, 31.32).unwrap(),
            3_724_291.0
        );
        assert!(rel(eevl_age_ratio(3_724_291.0, 1.05, 31.32).unwrap(), 124_893.0) < 2e-3);
        assert!(eevl_age_ratio(1.0, 1.0, 0.0).is_err());
    }

    #[test]
    fn discount_rate_examples() {
        assert!((discount_rate(0.0859).unwrap() - 0.0824).abs() < 1e-4);
        assert_eq!(discount_rate(0.0).unwrap(), 0.0);
        assert!((discount_rate(std::f64::consts::E - 1.0).unwrap() - 1.0).abs() < 1e-15);
        assert!(discount_rate(-1.0).is_err());
    }

    #[test]
    fn annuity_examples() {
        assert_eq!(annuity_factor(0.0, 10.0).unwrap(), 10.0);
        let e = 0.02;
        assert!((annuity_factor(e, 50.0 / e).unwrap() - 1.0 / e).abs() < 1e-9 / e);
        assert!(annuity_factor(0.05, -1.0).is_err());
    }

    #[test]
    fn discounted_examples() {
        assert!(rel(eevl_discounted(D, 0.0824, 28.49).unwrap(), 664_744.0) < 2e-3);
        assert!(rel(eevl_discounted(D, 0.0824, 31.32).unwrap(), 679_357.0) < 2e-3);
        assert!(
            rel(
                eevl_discounted(91_000.0, 0.0824, 31.32).unwrap(),
                1_020_661.0
            ) < 2e-3
        );
    }

    fn schedule() -> ExpectancySchedule {
        // Linear expectancy falling from 70 at birth to 1 at 100.
        ExpectancySchedule::new((0..=100).map(|x| 70.0 - 0.69 * x as f64).collect()).unwrap()
    }

    fn ctx() -> ValuationContext {
        ValuationContext {
            disposable_income: D,
            mortality: PY,
            mean_age: Some(42.4),
            expectancy: Some(schedule()),
            weibull: Some(WeibullParams::scale_shape(49.5, 2.04).unwrap()),
            weibull_mean_age: None,
            discount_rate: 0.0824,
            grp_per_capita: Some(91_000.0),
            horizon: Horizon::default(),
        }
    }

    #[test]
    fn missing_inputs_are_named() {
        let mut c = ctx();
        c.weibull = None;
        let err = build_valuation_table(&c, ValuationMethod::WeibullScaling).unwrap_err();
        assert!(err.to_string().contains("weibull"), "{err}");
        let mut c = ctx();
        c.expectancy = None;
        assert!(matches!(
            build_valuation_table(&c, ValuationMethod::ExpectancyRatio),
            Err(Error::Missing("life table"))
        ));
        let mut c = ctx();
        c.grp_per_capita = None;
        assert!(matches!(
            build_valuation_table(&c, ValuationMethod::DiscountedGrpRatio),
            Err(Error::Missing("grp_per_capita"))
        ));
        let mut c = ctx();
        c.mean_age = None;
        assert!(matches!(
            build_valuation_table(&c, ValuationMethod::DiscountedIncome),
            Err(Error::Missing("mean_age"))
        ));
    }

    #[test]
    fn single_age_matches_table() {
        let c = ctx();
        for m in ValuationMethod::ALL {
            let v = Valuation::new(&c, m).unwrap();
            let t = v.table().unwrap();
            assert_eq!(t.rows.len(), 101);
            for age in [0u32, 17, 42, 100] {
                assert_eq!(
                    v.value_at(age as f64).unwrap(),
                    t.value_at(age).unwrap(),
                    "{m}"
                );
            }
            assert!(matches!(v.value_at(100.5), Err(Error::Range { .. })));
            assert!(matches!(v.value_at(-1.0), Err(Error::Range { .. })));
        }
    }

    #[test]
    fn identities_at_the_mean_age() {
        let c = ctx();
        let ratio = Valuation::new(&c, ValuationMethod::ExpectancyRatio).unwrap();
        let at_mean = ratio.value_at(42.4).unwrap();
        assert_eq!(at_mean, c.value_at_mean_age().unwrap());

        let w = Valuation::new(&c, ValuationMethod::WeibullScaling).unwrap();
        let t = c.weibull.unwrap().mean();
        assert!(rel(w.value_at(t).unwrap(), c.value_at_mean_age().unwrap()) < 1e-9);
    }

    #[test]
    fn tables_decrease_and_scale_linearly() {
        let c = ctx();
        for m in ValuationMethod::ALL {
            let t = build_valuation_table(&c, m).unwrap();
            for w in t.rows.windows(2) {
                assert!(w[1].value <= w[0].value, "{m} at {}", w[1].age);
                assert!(w[1].value >= 0.0);
            }
        }
        let mut scaled = c.clone();
        scaled.disposable_income *= 3.0;
        scaled.grp_per_capita = scaled.grp_per_capita.map(|g| g * 3.0);
        for m in ValuationMethod::ALL {
            let a = build_valuation_table(&c, m).unwrap();
            let b = build_valuation_table(&scaled, m).unwrap();
            for (x, y) in a.rows.iter().zip(&b.rows) {
                assert!(rel(y.value, 3.0 * x.value) < 1e-14, "{m}");
            }
        }
    }

    #[test]
    fn birth_horizon_option() {
        let mut c = ctx();
        c.horizon = Horizon::BirthExpectancyMinusAge;
        let v = Valuation::new(&c, ValuationMethod::DiscountedIncome).unwrap();
        let expect = eevl_discounted(D, 0.0824, 70.0 - 42.4).unwrap();
        assert!(rel(v.base_value_at_mean_age(), expect) < 1e-15);
        // Horizon clamps at zero beyond the birth expectancy.
        assert_eq!(v.value_at(90.0).unwrap(), 0.0);
    }

    #[test]
    fn method_names_round_trip() {
        for m in ValuationMethod::ALL {
            assert_eq!(m.as_str().parse::<ValuationMethod>().unwrap(), m);
            assert_eq!(serde_json::to_value(m).unwrap(), m.as_str());
        }
        assert!("bogus".parse::<ValuationMethod>().is_err());
    }
}
