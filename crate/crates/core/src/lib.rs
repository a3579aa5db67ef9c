//! Economic equivalent of the value of a statistical life (EEVL).
//!
//! A person's value at the population mean age is disposable income divided
//! by crude mortality. Values at other ages follow from the age structure of
//! the living, described either by a fitted Weibull distribution or by a
//! life table, or from discounting income over the remaining lifetime.
//!
//! ```
//! use eevl::valuation::eevl_mean_age;
//!
//! let value = eevl_mean_age(60_570.0, 27_871.0 / 1_713_715.0).unwrap();
//! assert!((value - 3_724_291.0).abs() / 3_724_291.0 < 1e-3);
//! ```

// `!(x > 0.0)` is used deliberately so NaN fails validation.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli_io;
pub mod demography;
pub mod error;
pub mod lifetable;
pub mod valuation;
pub mod weibull;

pub use error::{Error, Result};
