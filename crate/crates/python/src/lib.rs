//! Python bindings for the `eevl` crate.

use std::path::PathBuf;

use pyo3::exceptions::{PyIOError, PyValueError};
use pyo3::prelude::*;

use eevl::cli_io::{self, ReproduceOptions};
use eevl::demography::{self, AgeDistribution, EmpiricalAgeCdf};
use eevl::lifetable::{self, ExpectancySchedule, TerminalClosure};
use eevl::valuation::{self, Horizon, ValuationContext, ValuationMethod};
use eevl::weibull;
use eevl::Error;

fn to_py(e: Error) -> PyErr {
    match e {
        Error::Io { .. } => PyIOError::new_err(e.to_string()),
        other => PyValueError::new_err(other.to_string()),
    }
}

trait IntoPy<T> {
    fn py(self) -> PyResult<T>;
}

impl<T> IntoPy<T> for eevl::Result<T> {
    fn py(self) -> PyResult<T> {
        self.map_err(to_py)
    }
}

#[pyclass(name = "WeibullParams", frozen, from_py_object)]
#[derive(Clone, Copy)]
struct PyWeibullParams(weibull::WeibullParams);

#[pymethods]
impl PyWeibullParams {
    #[new]
    #[pyo3(signature = (a, b, c = 0.0))]
    fn new(a: f64, b: f64, c: f64) -> PyResult<Self> {
        weibull::WeibullParams::new(a, b, c).py().map(Self)
    }

    #[getter]
    fn a(&self) -> f64 {
        self.0.a
    }

    #[getter]
    fn b(&self) -> f64 {
        self.0.b
    }

    #[getter]
    fn c(&self) -> f64 {
        self.0.c
    }

    fn cdf(&self, t: f64) -> f64 {
        self.0.cdf(t)
    }

    fn pdf(&self, t: f64) -> f64 {
        self.0.pdf(t)
    }

    fn survival(&self, t: f64) -> f64 {
        self.0.survival(t)
    }

    fn mean(&self) -> f64 {
        self.0.mean()
    }

    fn __repr__(&self) -> String {
        format!(
            "WeibullParams(a={}, b={}, c={})",
            self.0.a, self.0.b, self.0.c
        )
    }
}

#[pyclass(name = "FitReport", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyFitReport(weibull::FitReport);

#[pymethods]
impl PyFitReport {
    #[getter]
    fn method(&self) -> &'static str {
        self.0.method.label()
    }

    #[getter]
    fn params(&self) -> PyWeibullParams {
        PyWeibullParams(self.0.params)
    }

    #[getter]
    fn l1_distance(&self) -> f64 {
        self.0.l1_distance
    }

    #[getter]
    fn mean(&self) -> f64 {
        self.0.mean
    }

    #[getter]
    fn converged(&self) -> bool {
        self.0.converged
    }

    fn to_json(&self) -> PyResult<String> {
        serde_json::to_string(&self.0).map_err(|e| PyValueError::new_err(e.to_string()))
    }

    fn __repr__(&self) -> String {
        let p = self.0.params;
        format!(
            "FitReport(method='{}', a={}, b={}, c={}, l1_distance={}, mean={})",
            self.0.method.label(),
            p.a,
            p.b,
            p.c,
            self.0.l1_distance,
            self.0.mean
        )
    }
}

#[pyclass(name = "LifeTable", frozen)]
struct PyLifeTable(lifetable::LifeTable);

#[pymethods]
impl PyLifeTable {
    #[new]
    #[pyo3(signature = (qx, radix = lifetable::DEFAULT_RADIX, terminal_person_years = None))]
    fn new(qx: Vec<f64>, radix: f64, terminal_person_years: Option<f64>) -> PyResult<Self> {
        let closure = terminal_person_years
            .map(TerminalClosure::PersonYearsPerSurvivor)
            .unwrap_or_default();
        lifetable::build_life_table(&qx, radix, closure)
            .py()
            .map(Self)
    }

    fn __len__(&self) -> usize {
        self.0.rows().len()
    }

    /// Column by name: lx, dx, qx, px, Lx, Tx or ex.
    fn column(&self, name: &str) -> PyResult<Vec<f64>> {
        let pick: fn(&lifetable::LifeTableRow) -> f64 = match name {
            "lx" => |r| r.lx,
            "dx" => |r| r.dx,
            "qx" => |r| r.qx,
            "px" => |r| r.px,
            "Lx" => |r| r.big_lx,
            "Tx" => |r| r.tx,
            "ex" => |r| r.ex,
            other => return Err(PyValueError::new_err(format!("unknown column `{other}`"))),
        };
        Ok(self.0.rows().iter().map(pick).collect())
    }

    fn life_expectancy_at(&self, age: f64) -> PyResult<f64> {
        self.0.life_expectancy_at(age).py()
    }

    fn to_csv(&self) -> String {
        cli_io::life_table_csv(self.0.rows())
    }
}

#[pyclass(name = "ValuationContext")]
struct PyValuationContext(ValuationContext);

#[pymethods]
impl PyValuationContext {
    #[new]
    #[pyo3(signature = (
        disposable_income,
        mortality,
        discount_rate,
        mean_age = None,
        expectancy = None,
        weibull = None,
        weibull_mean_age = None,
        grp_per_capita = None,
        birth_horizon = false,
    ))]
    #[allow(clippy::too_many_arguments)]
    fn new(
        disposable_income: f64,
        mortality: f64,
        discount_rate: f64,
        mean_age: Option<f64>,
        expectancy: Option<Vec<f64>>,
        weibull: Option<PyWeibullParams>,
        weibull_mean_age: Option<f64>,
        grp_per_capita: Option<f64>,
        birth_horizon: bool,
    ) -> PyResult<Self> {
        let ctx = ValuationContext {
            disposable_income,
            mortality,
            mean_age,
            expectancy: expectancy.map(ExpectancySchedule::new).transpose().py()?,
            weibull: weibull.map(|w| w.0),
            weibull_mean_age,
            discount_rate,
            grp_per_capita,
            horizon: if birth_horizon {
                Horizon::BirthExpectancyMinusAge
            } else {
                Horizon::RemainingExpectancy
            },
        };
        ctx.validate().py()?;
        Ok(Self(ctx))
    }

    fn value_at_mean_age(&self) -> PyResult<f64> {
        self.0.value_at_mean_age().py()
    }

    /// Value at one age by the named method.
    fn value(&self, method: &str, age: f64) -> PyResult<f64> {
        let m: ValuationMethod = method.parse().py()?;
        valuation::Valuation::new(&self.0, m)
            .py()?
            .value_at(age)
            .py()
    }

    /// Values at ages 0, 1, ... by the named method.
    fn table(&self, method: &str) -> PyResult<Vec<f64>> {
        let m: ValuationMethod = method.parse().py()?;
        let t = valuation::build_valuation_table(&self.0, m).py()?;
        Ok(t.rows.into_iter().map(|r| r.value).collect())
    }
}

fn ecdf_from_counts(counts: Vec<f64>) -> PyResult<EmpiricalAgeCdf> {
    let dist = AgeDistribution::with_open_end(counts, true).py()?;
    demography::empirical_cdf(&dist).py()
}

#[pyfunction]
fn gamma(y: f64) -> PyResult<f64> {
    weibull::gamma(y).py()
}

#[pyfunction]
#[pyo3(signature = (t, a, b, c = 0.0))]
fn weibull_cdf(t: f64, a: f64, b: f64, c: f64) -> PyResult<f64> {
    weibull::weibull_cdf(t, &weibull::WeibullParams { a, b, c }).py()
}

#[pyfunction]
#[pyo3(signature = (t, a, b, c = 0.0))]
fn weibull_pdf(t: f64, a: f64, b: f64, c: f64) -> PyResult<f64> {
    weibull::weibull_pdf(t, &weibull::WeibullParams { a, b, c }).py()
}

#[pyfunction]
#[pyo3(signature = (a, b, c = 0.0))]
fn weibull_mean(a: f64, b: f64, c: f64) -> PyResult<f64> {
    weibull::weibull_mean(&weibull::WeibullParams { a, b, c }).py()
}

#[pyfunction]
fn mean_age(counts: Vec<f64>) -> PyResult<f64> {
    demography::mean_age(&AgeDistribution::with_open_end(counts, true).py()?).py()
}

#[pyfunction]
fn crude_mortality(deaths_annual: f64, population_mean: f64) -> PyResult<f64> {
    demography::crude_mortality(deaths_annual, population_mean).py()
}

/// Log-log regression fit of single-year age counts.
#[pyfunction]
fn fit_loglog(counts: Vec<f64>) -> PyResult<PyFitReport> {
    let ecdf = ecdf_from_counts(counts)?;
    let reg = weibull::fit_loglog(&ecdf).py()?;
    Ok(PyFitReport(weibull::FitReport::from_params(
        weibull::FitMethod::LogLogRegression,
        &ecdf,
        reg.params,
    )))
}

/// Both estimators and the selected one.
#[pyfunction]
fn fit(counts: Vec<f64>) -> PyResult<(PyFitReport, PyFitReport, PyFitReport)> {
    let ecdf = ecdf_from_counts(counts)?;
    let (loglog, l1) = weibull::fit_both(&ecdf).py()?;
    let pair = [loglog, l1];
    let selected = weibull::select_fit(&pair).py()?.clone();
    let [loglog, l1] = pair;
    Ok((PyFitReport(loglog), PyFitReport(l1), PyFitReport(selected)))
}

#[pyfunction]
fn eevl_mean_age(disposable_income: f64, mortality: f64) -> PyResult<f64> {
    valuation::eevl_mean_age(disposable_income, mortality).py()
}

#[pyfunction]
fn eevl_newborn_weibull(
    value_at_mean: f64,
    mean_age: f64,
    params: PyWeibullParams,
) -> PyResult<f64> {
    valuation::eevl_newborn_weibull(value_at_mean, mean_age, &params.0).py()
}

#[pyfunction]
fn eevl_age_weibull(newborn: f64, age: f64, params: PyWeibullParams) -> PyResult<f64> {
    valuation::eevl_age_weibull(newborn, age, &params.0).py()
}

#[pyfunction]
fn eevl_age_ratio(value_at_mean: f64, e_age: f64, e_mean: f64) -> PyResult<f64> {
    valuation::eevl_age_ratio(value_at_mean, e_age, e_mean).py()
}

#[pyfunction]
fn discount_rate(i: f64) -> PyResult<f64> {
    valuation::discount_rate(i).py()
}

#[pyfunction]
fn annuity_factor(rate: f64, t0: f64) -> PyResult<f64> {
    valuation::annuity_factor(rate, t0).py()
}

#[pyfunction]
fn eevl_discounted(income: f64, rate: f64, t0: f64) -> PyResult<f64> {
    valuation::eevl_discounted(income, rate, t0).py()
}

/// Runs the fixture checks in `data_dir`; returns (passed, report text).
#[pyfunction]
#[pyo3(signature = (data_dir, tolerance = None))]
fn reproduce(data_dir: PathBuf, tolerance: Option<f64>) -> PyResult<(bool, String)> {
    let report = cli_io::reproduce(
        &data_dir,
        ReproduceOptions {
            tolerance_override: tolerance,
        },
    )
    .py()?;
    Ok((report.all_passed(), report.render()))
}

#[pymodule]
fn eevl_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyWeibullParams>()?;
    m.add_class::<PyFitReport>()?;
    m.add_class::<PyLifeTable>()?;
    m.add_class::<PyValuationContext>()?;
    m.add_function(wrap_pyfunction!(gamma, m)?)?;
    m.add_function(wrap_pyfunction!(weibull_cdf, m)?)?;
    m.add_function(wrap_pyfunction!(weibull_pdf, m)?)?;
    m.add_function(wrap_pyfunction!(weibull_mean, m)?)?;
    m.add_function(wrap_pyfunction!(mean_age, m)?)?;
    m.add_function(wrap_pyfunction!(crude_mortality, m)?)?;
    m.add_function(wrap_pyfunction!(fit_loglog, m)?)?;
    m.add_function(wrap_pyfunction!(fit, m)?)?;
    m.add_function(wrap_pyfunction!(eevl_mean_age, m)?)?;
    m.add_function(wrap_pyfunction!(eevl_newborn_weibull, m)?)?;
    m.add_function(wrap_pyfunction!(eevl_age_weibull, m)?)?;
    m.add_function(wrap_pyfunction!(eevl_age_ratio, m)?)?;
    m.add_function(wrap_pyfunction!(discount_rate, m)?)?;
    m.add_function(wrap_pyfunction!(annuity_factor, m)?)?;
    m.add_function(wrap_pyfunction!(eevl_discounted, m)?)?;
    m.add_function(wrap_pyfunction!(reproduce, m)?)?;
    Ok(())
}
