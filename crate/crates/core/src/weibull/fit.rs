//! Estimating Weibull age-structure parameters from an empirical CDF.
//!
//! Two estimators are provided: ordinary least squares on the double-log
//! transform `ln(-ln(1 - F)) = b ln x - b ln a`, and direct minimisation of
//! the summed absolute CDF gap over the integer ages `0..=100`. The
//! estimate with the smaller gap is preferred.

use serde::{Deserialize, Serialize};

use super::dist::WeibullParams;
use super::simplex::{self, SimplexOptions};
use crate::demography::EmpiricalAgeCdf;
use crate::error::{Error, Result};

/// Largest abscissa used by both estimators.
pub const MAX_FIT_AGE: f64 = 100.0;

pub const SCALE_BOUNDS: (f64, f64) = (1.0, 200.0);
pub const SHAPE_BOUNDS: (f64, f64) = (0.1, 10.0);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum FitMethod {
    #[serde(rename = "log-log regression")]
    LogLogRegression,
    #[serde(rename = "direct L1")]
    DirectL1,
}

impl FitMethod {
    pub fn label(&self) -> &'static str {
        match self {
            FitMethod::LogLogRegression => "log-log regression",
            FitMethod::DirectL1 => "direct L1",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegressionFit {
    pub slope: f64,
    pub intercept: f64,
    pub params: WeibullParams,
    pub point_count: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(from = "FitReportRepr", into = "FitReportRepr")]
pub struct FitReport {
    pub method: FitMethod,
    pub params: WeibullParams,
    pub l1_distance: f64,
    pub mean: f64,
    /// False when the optimiser hit its evaluation cap.
    pub converged: bool,
    pub evaluations: usize,
}

#[derive(Serialize, Deserialize)]
struct FitReportRepr {
    method: FitMethod,
    a: f64,
    b: f64,
    c: f64,
    l1_distance: f64,
    mean: f64,
}

impl From<FitReport> for FitReportRepr {
    fn from(r: FitReport) -> Self {
        Self {
            method: r.method,
            a: r.params.a,
            b: r.params.b,
            c: r.params.c,
            l1_distance: r.l1_distance,
            mean: r.mean,
        }
    }
}

impl From<FitReportRepr> for FitReport {
    fn from(r: FitReportRepr) -> Self {
        Self {
            method: r.method,
            params: WeibullParams {
                a: r.a,
                b: r.b,
                c: r.c,
            },
            l1_distance: r.l1_distance,
            mean: r.mean,
            converged: true,
            evaluations: 0,
        }
    }
}

impl FitReport {
    pub fn from_params(method: FitMethod, ecdf: &EmpiricalAgeCdf, params: WeibullParams) -> Self {
        Self {
            method,
            params,
            l1_distance: l1_distance(ecdf, &params),
            mean: params.mean(),
            converged: true,
            evaluations: 0,
        }
    }
}

/// Least squares of `ln(-ln(1 - F))` on `ln x`.
pub fn fit_loglog(ecdf: &EmpiricalAgeCdf) -> Result<RegressionFit> {
    let pts: Vec<(f64, f64)> = ecdf
        .points()
        .iter()
        .filter(|&&(x, f)| x > 0.0 && x <= MAX_FIT_AGE && f > 0.0 && f < 1.0)
        .map(|&(x, f)| (x.ln(), (-(-f).ln_1p()).ln()))
        .collect();
    if pts.len() < 2 {
        return Err(Error::Fit(format!(
            "log-log regression needs at least 2 points with 0 < F < 1, found {}",
            pts.len()
        )));
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    if sxx == 0.0 {
        return Err(Error::Fit("all usable points share one abscissa".into()));
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    if !(slope > 0.0) {
        return Err(Error::Fit(format!(
            "regression slope {slope} does not give a valid Weibull shape"
        )));
    }
    let params = WeibullParams::scale_shape((-intercept / slope).exp(), slope)
        .map_err(|e| Error::Fit(e.to_string()))?;
    Ok(RegressionFit {
        slope,
        intercept,
        params,
        point_count: pts.len(),
    })
}

/// `sum |F*(x) - F(x)|` over the CDF points with `x <= 100`.
pub fn l1_distance(ecdf: &EmpiricalAgeCdf, p: &WeibullParams) -> f64 {
    ecdf.points()
        .iter()
        .filter(|(x, _)| *x <= MAX_FIT_AGE)
        .map(|&(x, f)| (f - p.cdf(x)).abs())
        .sum()
}

/// Direct search for the `(a, b)` minimising [`l1_distance`], shift fixed at 0.
pub fn fit_l1(ecdf: &EmpiricalAgeCdf, init: &WeibullParams) -> Result<FitReport> {
    fit_l1_with(ecdf, init, SimplexOptions::default())
}

pub fn fit_l1_with(
    ecdf: &EmpiricalAgeCdf,
    init: &WeibullParams,
    opts: SimplexOptions,
) -> Result<FitReport> {
    init.validate()?;
    let start = [
        init.a.clamp(SCALE_BOUNDS.0, SCALE_BOUNDS.1),
        init.b.clamp(SHAPE_BOUNDS.0, SHAPE_BOUNDS.1),
    ];
    let objective = |x: &[f64]| {
        l1_distance(
            ecdf,
            &WeibullParams {
                a: x[0],
                b: x[1],
                c: 0.0,
            },
        )
    };
    let r = simplex::minimize(
        objective,
        &start,
        &[SCALE_BOUNDS.0, SHAPE_BOUNDS.0],
        &[SCALE_BOUNDS.1, SHAPE_BOUNDS.1],
        opts,
    );
    let params = WeibullParams::scale_shape(r.x[0], r.x[1])?;
    Ok(FitReport {
        method: FitMethod::DirectL1,
        params,
        l1_distance: r.fx,
        mean: params.mean(),
        converged: r.converged,
        evaluations: r.evaluations,
    })
}

/// The smallest-distance report; ties go to the direct L1 fit, then to the
/// earlier report.
pub fn select_fit(reports: &[FitReport]) -> Result<&FitReport> {
    let rank = |r: &FitReport| match r.method {
        FitMethod::DirectL1 => 0,
        FitMethod::LogLogRegression => 1,
    };
    reports
        .iter()
        .enumerate()
        .min_by(|(i, a), (j, b)| {
            a.l1_distance
                .total_cmp(&b.l1_distance)
                .then(rank(a).cmp(&rank(b)))
                .then(i.cmp(j))
        })
        .map(|(_, r)| r)
        .ok_or_else(|| Error::validation("no fit reports to select from"))
}

/// Runs both estimators, seeding the L1 search with the regression result.
pub fn fit_both(ecdf: &EmpiricalAgeCdf) -> Result<(FitReport, FitReport)> {
    let reg = fit_loglog(ecdf)?;
    let loglog = FitReport::from_params(FitMethod::LogLogRegression, ecdf, reg.params);
    let l1 = fit_l1(ecdf, &reg.params)?;
    Ok((loglog, l1))
}
