use serde::{Deserialize, Serialize};

use super::gamma::gamma_unchecked;
use crate::error::{Error, Result};

/// Scale `a`, shape `b` and shift `c` of a Weibull distribution of ages.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WeibullParams {
    pub a: f64,
    pub b: f64,
    #[serde(default)]
    pub c: f64,
}

impl WeibullParams {
    pub fn new(a: f64, b: f64, c: f64) -> Result<Self> {
        let p = Self { a, b, c };
        p.validate()?;
        Ok(p)
    }

    /// Two-parameter form with the shift pinned at zero.
    pub fn scale_shape(a: f64, b: f64) -> Result<Self> {
        Self::new(a, b, 0.0)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.a.is_finite() && self.a > 0.0) {
            return Err(Error::validation(format!(
                "Weibull scale a must be > 0, got {}",
                self.a
            )));
        }
        if !(self.b.is_finite() && self.b > 0.0) {
            return Err(Error::validation(format!(
                "Weibull shape b must be > 0, got {}",
                self.b
            )));
        }
        if !(self.c.is_finite() && self.c >= 0.0) {
            return Err(Error::validation(format!(
                "Weibull shift c must be >= 0, got {}",
                self.c
            )));
        }
        Ok(())
    }

    /// `exp(-((t - c) / a)^b)`, the share older than `t`.
    pub fn survival(&self, t: f64) -> f64 {
        if t <= self.c {
            1.0
        } else {
            (-((t - self.c) / self.a).powf(self.b)).exp()
        }
    }

    pub fn cdf(&self, t: f64) -> f64 {
        if t < self.c {
            0.0
        } else {
            -(-((t - self.c) / self.a).powf(self.b)).exp_m1()
        }
    }

    /// Density; `+inf` at `t = c` when `b < 1`.
    pub fn pdf(&self, t: f64) -> f64 {
        if t < self.c {
            return 0.0;
        }
        let z = (t - self.c) / self.a;
        if z == 0.0 {
            return match self.b.partial_cmp(&1.0) {
                Some(std::cmp::Ordering::Less) => f64::INFINITY,
                Some(std::cmp::Ordering::Equal) => 1.0 / self.a,
                _ => 0.0,
            };
        }
        (self.b / self.a) * z.powf(self.b - 1.0) * (-z.powf(self.b)).exp()
    }

    /// `a * Gamma(1 + 1/b) + c`.
    pub fn mean(&self) -> f64 {
        self.a * gamma_unchecked(1.0 + 1.0 / self.b) + self.c
    }
}

pub fn weibull_cdf(t: f64, p: &WeibullParams) -> Result<f64> {
    p.validate()?;
    Ok(p.cdf(t))
}

pub fn weibull_pdf(t: f64, p: &WeibullParams) -> Result<f64> {
    p.validate()?;
    Ok(p.pdf(t))
}

pub fn weibull_mean(p: &WeibullParams) -> Result<f64> {
    p.validate()?;
    Ok(p.mean())
}
