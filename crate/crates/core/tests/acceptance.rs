//! Acceptance gate: one line per criterion, nonzero exit if any fails.

mod common;

use std::path::Path;
use std::process::ExitCode;

use common::quad::integrate;
use common::synth::{binned_population, exact_population};
use eevl::cli_io::{
    read_age_series, read_countries, validate_countries, CountryTolerances, Scenario,
};
use eevl::demography::empirical_cdf;
use eevl::lifetable::{build_life_table, ExpectancySchedule, TerminalClosure, DEFAULT_RADIX};
use eevl::valuation::{
    annuity_factor, build_valuation_table, eevl_age_ratio, eevl_age_weibull, eevl_mean_age,
    eevl_newborn_weibull, ValuationMethod,
};
use eevl::weibull::{fit_both, fit_loglog, gamma, select_fit, WeibullParams};

const MEAN_AGE_VALUE_TOL: f64 = 1e-3;
const RATIO_NEWBORN_TOL: f64 = 2e-3;
const WEIBULL_NEWBORN_TOL: f64 = 1e-3;
const DISCOUNTED_TOL: f64 = 2e-3;
const TABLE_RATIO_TOL: f64 = 2e-3;
const TABLE_WEIBULL_TOL: f64 = 5e-3;
const TABLE_DISCOUNTED_TOL: f64 = 2e-3;
const LIFE_TABLE_UNIT_TOL: f64 = 1.0;
const LIFE_TABLE_EX_TOL: f64 = 0.02;
const LIFE_TABLE_MAX_AGE: u32 = 98;
const COUNTRY_ET_TOL: f64 = 5e-3;
const COUNTRY_MEAN_TOL: f64 = 1e-2;
const COUNTRY_VALUE_TOL: f64 = 2e-2;
const NOISELESS_FIT_TOL: f64 = 1e-3;
const SYNTHETIC_FIT_TOL: f64 = 3e-2;
const SYNTHETIC_POPULATION: u64 = 1_700_000;
const ORACLE_TOL: f64 = 1e-8;
const INVERSION_TOL: f64 = 1e-9;

const DISPOSABLE_INCOME: f64 = 60_570.0;
const DEATHS: f64 = 27_871.0;
const POPULATION: f64 = 1_713_715.0;
const GRP_PER_CAPITA: f64 = 91_000.0;
const REPRODUCTION_RATE: f64 = 0.0824;

type Criterion = (&'static str, fn() -> Outcome);

struct Outcome {
    passed: bool,
    detail: String,
}

fn rel(actual: f64, expected: f64) -> f64 {
    ((actual - expected) / expected).abs()
}

fn data() -> std::path::PathBuf {
    common::data_dir()
}

/// Reads a fixture with header `age,expected,...`.
fn expected_column(path: &Path) -> Vec<(u32, f64)> {
    let text = std::fs::read_to_string(path).unwrap();
    text.lines()
        .skip(1)
        .filter(|l| !l.trim().is_empty())
        .map(|l| {
            let mut f = l.split(',');
            let age = f.next().unwrap().parse().unwrap();
            let v = f.next().unwrap().parse().unwrap();
            (age, v)
        })
        .collect()
}

/// Largest relative deviation of a method's table from a fixture.
fn table_deviation(
    scenario: &Scenario,
    method: ValuationMethod,
    fixture: &str,
) -> (f64, u32, usize) {
    let table = build_valuation_table(&scenario.context().unwrap(), method).unwrap();
    let expected = expected_column(&data().join(fixture));
    let mut worst = (0.0, 0);
    for &(age, e) in &expected {
        let d = rel(table.value_at(age).unwrap(), e);
        if d > worst.0 {
            worst = (d, age);
        }
    }
    (worst.0, worst.1, expected.len())
}

fn scenario() -> Scenario {
    Scenario::load(&data().join("zaporizhzhia_2018.json")).unwrap()
}

fn reference_expectancy() -> ExpectancySchedule {
    ExpectancySchedule::new(read_age_series(&data().join("life_expectancy.csv"), "ex").unwrap())
        .unwrap()
}

fn mortality() -> f64 {
    DEATHS / POPULATION
}

fn mean_age_value() -> Outcome {
    let v = eevl_mean_age(DISPOSABLE_INCOME, mortality()).unwrap();
    let err = rel(v, 3_724_291.0);
    Outcome {
        passed: err <= MEAN_AGE_VALUE_TOL,
        detail: format!("E_T = {v:.0}, rel error {err:.2e}"),
    }
}

fn ratio_method() -> Outcome {
    let e = reference_expectancy();
    let base = eevl_mean_age(DISPOSABLE_INCOME, mortality()).unwrap();
    let e_mean = e.life_expectancy_at(42.4).unwrap();
    let newborn = eevl_age_ratio(base, e.at_birth(), e_mean).unwrap();
    let err = rel(newborn, 8_429_309.0);
    let (worst, age, n) = table_deviation(
        &scenario(),
        ValuationMethod::ExpectancyRatio,
        "values_expectancy-ratio.csv",
    );
    Outcome {
        passed: err <= RATIO_NEWBORN_TOL && worst <= TABLE_RATIO_TOL,
        detail: format!(
            "E0 = {newborn:.0} (e0 {:.2}, e(42.4) {e_mean:.3}), rel error {err:.2e}; {n} cells, worst {worst:.2e} at age {age}",
            e.at_birth()
        ),
    }
}

fn weibull_method() -> Outcome {
    let p = WeibullParams::scale_shape(49.5, 2.04).unwrap();
    let base = eevl_mean_age(DISPOSABLE_INCOME, mortality()).unwrap();
    let newborn = eevl_newborn_weibull(base, 43.8, &p).unwrap();
    let err = rel(newborn, 8_117_411.0);
    let (worst, age, n) = table_deviation(
        &scenario(),
        ValuationMethod::WeibullScaling,
        "values_weibull-scaling.csv",
    );
    Outcome {
        passed: err <= WEIBULL_NEWBORN_TOL && worst <= TABLE_WEIBULL_TOL,
        detail: format!(
            "E0 = {newborn:.0}, rel error {err:.2e}; {n} cells, worst {worst:.2e} at age {age}"
        ),
    }
}

fn discounted_values() -> Outcome {
    let scalars = [
        (DISPOSABLE_INCOME, 28.49, 664_744.0),
        (DISPOSABLE_INCOME, 31.32, 679_357.0),
        (GRP_PER_CAPITA, 31.32, 1_020_661.0),
    ];
    let mut worst_scalar: f64 = 0.0;
    for (income, t0, expected) in scalars {
        let v = income * annuity_factor(REPRODUCTION_RATE, t0).unwrap();
        worst_scalar = worst_scalar.max(rel(v, expected));
    }
    let s = scenario();
    let tables = [
        (
            ValuationMethod::DiscountedIncome,
            "values_discounted-income.csv",
        ),
        (
            ValuationMethod::DiscountedIncomeRatio,
            "values_discounted-income-ratio.csv",
        ),
        (ValuationMethod::DiscountedGrp, "values_discounted-grp.csv"),
        (
            ValuationMethod::DiscountedGrpRatio,
            "values_discounted-grp-ratio.csv",
        ),
    ];
    let mut worst_cell: (f64, String) = (0.0, String::new());
    let mut cells = 0;
    for (method, file) in tables {
        let (w, age, n) = table_deviation(&s, method, file);
        cells += n;
        if w > worst_cell.0 {
            worst_cell = (w, format!("{method} age {age}"));
        }
    }
    Outcome {
        passed: worst_scalar <= DISCOUNTED_TOL && worst_cell.0 <= TABLE_DISCOUNTED_TOL,
        detail: format!(
            "scalars worst {worst_scalar:.2e}; {cells} cells, worst {:.2e} ({})",
            worst_cell.0, worst_cell.1
        ),
    }
}

fn life_table_rebuild() -> Outcome {
    let q = read_age_series(&data().join("life_table_qx.csv"), "qx").unwrap();
    let table = build_life_table(
        &q,
        DEFAULT_RADIX,
        TerminalClosure::PersonYearsPerSurvivor(1.05),
    )
    .unwrap();
    let text = std::fs::read_to_string(data().join("life_table_expected.csv")).unwrap();
    let mut failures = 0;
    let mut cells = 0;
    let mut worst: Vec<(String, f64)> = Vec::new();
    for line in text.lines().skip(1) {
        let f: Vec<&str> = line.split(',').collect();
        let age: u32 = f[0].parse().unwrap();
        if age > LIFE_TABLE_MAX_AGE {
            continue;
        }
        let expected: f64 = f[2].parse().unwrap();
        let row = table.row(age).unwrap();
        let (actual, tol) = match f[1] {
            "lx" => (row.lx, LIFE_TABLE_UNIT_TOL),
            "dx" => (row.dx, LIFE_TABLE_UNIT_TOL),
            "Lx" => (row.big_lx, LIFE_TABLE_UNIT_TOL),
            "Tx" => (row.tx, LIFE_TABLE_UNIT_TOL),
            "ex" => (row.ex, LIFE_TABLE_EX_TOL),
            other => panic!("unknown column {other}"),
        };
        let err = (actual - expected).abs();
        cells += 1;
        if err > tol {
            failures += 1;
        }
        match worst.iter_mut().find(|(c, _)| c == f[1]) {
            Some(w) => w.1 = w.1.max(err),
            None => worst.push((f[1].to_string(), err)),
        }
    }
    let summary: Vec<String> = worst.iter().map(|(c, e)| format!("{c} {e:.3}")).collect();
    Outcome {
        passed: failures == 0,
        detail: format!(
            "{cells} cells, {failures} outside tolerance; max abs error {}",
            summary.join(", ")
        ),
    }
}

fn cross_country() -> Outcome {
    let records = read_countries(&data().join("countries.csv")).unwrap();
    let tol = CountryTolerances {
        e_t: COUNTRY_ET_TOL,
        mean: COUNTRY_MEAN_TOL,
        decades: COUNTRY_VALUE_TOL,
    };
    let report = validate_countries(&records, tol).unwrap();
    let failed: Vec<String> = report
        .failures()
        .map(|c| format!("{} {:.1}%", c.id, 100.0 * c.error()))
        .collect();
    Outcome {
        passed: failed.is_empty(),
        detail: format!(
            "{} countries, {} cells, {} outside tolerance{}",
            records.len(),
            report.checks.len(),
            failed.len(),
            if failed.is_empty() {
                String::new()
            } else {
                format!(": {}", failed.join("; "))
            }
        ),
    }
}

fn fitting_properties() -> Outcome {
    let mut problems = Vec::new();
    let mut trials = 0;
    for &a in &[40.0, 49.5] {
        for &b in &[1.6, 2.04] {
            let truth = WeibullParams::scale_shape(a, b).unwrap();

            let exact =
                empirical_cdf(&exact_population(&truth, SYNTHETIC_POPULATION as f64, 100)).unwrap();
            let reg = fit_loglog(&exact).unwrap();
            if rel(reg.params.a, a) > NOISELESS_FIT_TOL || rel(reg.params.b, b) > NOISELESS_FIT_TOL
            {
                problems.push(format!(
                    "noiseless log-log ({a},{b}) gave ({:.4},{:.4})",
                    reg.params.a, reg.params.b
                ));
            }

            for seed in 0..2u64 {
                trials += 1;
                let pop = binned_population(
                    &truth,
                    SYNTHETIC_POPULATION,
                    100,
                    seed * 1000 + (a * b) as u64,
                );
                let ecdf = empirical_cdf(&pop).unwrap();
                let (loglog, l1) = fit_both(&ecdf).unwrap();
                if rel(l1.params.a, a) > SYNTHETIC_FIT_TOL
                    || rel(l1.params.b, b) > SYNTHETIC_FIT_TOL
                {
                    problems.push(format!(
                        "L1 ({a},{b}) seed {seed} gave ({:.3},{:.3})",
                        l1.params.a, l1.params.b
                    ));
                }
                if l1.l1_distance > loglog.l1_distance {
                    problems.push(format!(
                        "L1 distance above log-log for ({a},{b}) seed {seed}"
                    ));
                }
                let pair = [loglog.clone(), l1.clone()];
                let chosen = select_fit(&pair).unwrap();
                if chosen.l1_distance > loglog.l1_distance.min(l1.l1_distance) {
                    problems.push(format!(
                        "selection picked the larger distance for ({a},{b})"
                    ));
                }
            }
        }
    }
    Outcome {
        passed: problems.is_empty(),
        detail: if problems.is_empty() {
            format!("4 noiseless fits, {trials} sampled populations of {SYNTHETIC_POPULATION}")
        } else {
            problems.join("; ")
        },
    }
}

fn numerical_oracles() -> Outcome {
    let mut worst_gamma: f64 = 0.0;
    let mut y: f64 = 0.5;
    while y <= 30.0 {
        let q = integrate(
            |u: f64| 2.0 * u.powf(2.0 * y - 1.0) * (-u * u).exp(),
            0.0,
            y.sqrt() + 12.0,
            1e-13,
        );
        worst_gamma = worst_gamma.max(rel(gamma(y).unwrap(), q));
        y += 0.25;
    }
    let mut worst_af: f64 = 0.0;
    for e in [0.001, 0.01, 0.0824, 0.2, 0.5] {
        for t0 in [0.1, 1.0, 10.0, 31.32, 100.0] {
            let q = integrate(|t: f64| (-e * t).exp(), 0.0, t0, 1e-14);
            worst_af = worst_af.max(rel(annuity_factor(e, t0).unwrap(), q));
        }
    }
    let mut worst_pdf: f64 = 0.0;
    for (a, b) in [(49.5, 2.04), (40.0, 1.0), (46.4, 1.91), (30.0, 3.5)] {
        let p = WeibullParams::scale_shape(a, b).unwrap();
        for t in [5.0, 43.8, 100.0] {
            worst_pdf = worst_pdf.max(rel(integrate(|s| p.pdf(s), 0.0, t, 1e-13), p.cdf(t)));
        }
    }
    Outcome {
        passed: worst_gamma <= ORACLE_TOL && worst_af <= ORACLE_TOL && worst_pdf <= ORACLE_TOL,
        detail: format!(
            "gamma {worst_gamma:.1e}, annuity {worst_af:.1e}, pdf integral {worst_pdf:.1e}"
        ),
    }
}

fn inversion_identities() -> Outcome {
    let mut worst: f64 = 0.0;
    let mut exact = true;
    for (a, b) in [(49.5, 2.04), (43.31, 1.86), (39.82, 1.55), (60.0, 0.8)] {
        let p = WeibullParams::scale_shape(a, b).unwrap();
        for e in [1.0, 3_724_291.0, 2.15e6] {
            for t in [10.0, 42.4, 43.8, 80.0] {
                let back =
                    eevl_age_weibull(eevl_newborn_weibull(e, t, &p).unwrap(), t, &p).unwrap();
                worst = worst.max(rel(back, e));
            }
            for e_t in [0.5, 31.316, 70.89] {
                exact &= eevl_age_ratio(e, e_t, e_t).unwrap() == e;
            }
        }
    }
    Outcome {
        passed: worst <= INVERSION_TOL && exact,
        detail: format!("round-trip worst {worst:.1e}, ratio identity exact: {exact}"),
    }
}

fn main() -> ExitCode {
    let criteria: [Criterion; 9] = [
        ("mean-age value", mean_age_value),
        ("ratio method newborn value and table", ratio_method),
        ("Weibull method newborn value and table", weibull_method),
        (
            "discounted income and GRP values and tables",
            discounted_values,
        ),
        ("life table rebuilt from q_x", life_table_rebuild),
        ("cross-country derived values", cross_country),
        ("fitting on synthetic populations", fitting_properties),
        ("numerical oracles", numerical_oracles),
        ("inversion identities", inversion_identities),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let o = run();
        if !o.passed {
            failed += 1;
        }
        println!(
            "criterion {} {:<46} {}  {}",
            i + 1,
            name,
            if o.passed { "PASS" } else { "FAIL" },
            o.detail
        );
    }
    println!(
        "{} of {} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
