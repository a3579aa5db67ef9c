//! Weibull distribution of ages among the living and its estimation.

mod dist;
mod fit;
mod gamma;
pub mod simplex;

pub use dist::{weibull_cdf, weibull_mean, weibull_pdf, WeibullParams};
pub use fit::{
    fit_both, fit_l1, fit_l1_with, fit_loglog, l1_distance, select_fit, FitMethod, FitReport,
    RegressionFit, MAX_FIT_AGE, SCALE_BOUNDS, SHAPE_BOUNDS,
};
pub use gamma::gamma;
