//! Single-year life tables built from a death-probability schedule, and
//! remaining-life-expectancy lookups at fractional ages.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const DEFAULT_RADIX: f64 = 100_000.0;

/// One age row. Column names follow the usual actuarial letters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LifeTableRow {
    pub age: u32,
    /// Survivors to exact age `x`.
    pub lx: f64,
    /// Deaths in `[x, x + 1)`.
    pub dx: f64,
    pub qx: f64,
    pub px: f64,
    /// Person-years lived in `[x, x + 1)`.
    #[serde(rename = "Lx")]
    pub big_lx: f64,
    /// Person-years lived above age `x`.
    #[serde(rename = "Tx")]
    pub tx: f64,
    pub ex: f64,
    /// `L(x+1) / L(x)`; absent on the terminal row.
    #[serde(rename = "Px")]
    pub survival_ratio: Option<f64>,
}

/// How person-years are assigned to survivors of the last age row.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TerminalClosure {
    /// `L = l * (1 + p) / 2`, deaths spread uniformly over the final year.
    #[default]
    UniformDeaths,
    /// `L = l * factor`, a supplied remaining lifetime per survivor.
    PersonYearsPerSurvivor(f64),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LifeTable {
    radix: f64,
    rows: Vec<LifeTableRow>,
}

impl LifeTable {
    pub fn radix(&self) -> f64 {
        self.radix
    }

    pub fn rows(&self) -> &[LifeTableRow] {
        &self.rows
    }

    pub fn max_age(&self) -> u32 {
        self.rows.len() as u32 - 1
    }

    pub fn row(&self, age: u32) -> Option<&LifeTableRow> {
        self.rows.get(age as usize)
    }

    pub fn expectancy(&self) -> ExpectancySchedule {
        ExpectancySchedule {
            ex: self.rows.iter().map(|r| r.ex).collect(),
        }
    }

    pub fn life_expectancy_at(&self, age: f64) -> Result<f64> {
        interpolate(self.rows.iter().map(|r| r.ex), self.rows.len(), age)
    }
}

/// Builds a full life table from `q[x]`, `x = 0..=ω`.
pub fn build_life_table(q: &[f64], radix: f64, closure: TerminalClosure) -> Result<LifeTable> {
    if q.is_empty() {
        return Err(Error::validation("death-probability schedule is empty"));
    }
    if !(radix.is_finite() && radix > 0.0) {
        return Err(Error::validation(format!(
            "radix must be positive, got {radix}"
        )));
    }
    if let Some((age, v)) = q
        .iter()
        .enumerate()
        .find(|(_, v)| !(0.0..=1.0).contains(*v))
    {
        return Err(Error::validation(format!(
            "q at age {age} must lie in [0, 1], got {v}"
        )));
    }
    if let TerminalClosure::PersonYearsPerSurvivor(f) = closure {
        if !(f.is_finite() && f >= 0.0) {
            return Err(Error::validation(format!(
                "terminal person-years factor must be non-negative, got {f}"
            )));
        }
    }

    let n = q.len();
    let mut lx = Vec::with_capacity(n + 1);
    lx.push(radix);
    for (x, qx) in q.iter().enumerate() {
        let l = lx[x];
        lx.push(l - l * qx);
    }

    let mut big_lx: Vec<f64> = (0..n - 1).map(|x| 0.5 * (lx[x] + lx[x + 1])).collect();
    let last = lx[n - 1];
    big_lx.push(match closure {
        TerminalClosure::UniformDeaths => 0.5 * last * (2.0 - q[n - 1]),
        TerminalClosure::PersonYearsPerSurvivor(f) => last * f,
    });

    let mut tx = vec![0.0; n];
    let mut acc = 0.0;
    for x in (0..n).rev() {
        acc += big_lx[x];
        tx[x] = acc;
    }

    let rows = (0..n)
        .map(|x| LifeTableRow {
            age: x as u32,
            lx: lx[x],
            dx: lx[x] * q[x],
            qx: q[x],
            px: 1.0 - q[x],
            big_lx: big_lx[x],
            tx: tx[x],
            ex: if lx[x] > 0.0 { tx[x] / lx[x] } else { 0.0 },
            survival_ratio: (x + 1 < n && big_lx[x] > 0.0).then(|| big_lx[x + 1] / big_lx[x]),
        })
        .collect();

    Ok(LifeTable { radix, rows })
}

/// Remaining life expectancy by integer age, without the other columns.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExpectancySchedule {
    ex: Vec<f64>,
}

impl ExpectancySchedule {
    pub fn new(ex: Vec<f64>) -> Result<Self> {
        if ex.is_empty() {
            return Err(Error::validation("expectancy schedule is empty"));
        }
        if let Some((age, v)) = ex
            .iter()
            .enumerate()
            .find(|(_, v)| !(v.is_finite() && **v >= 0.0))
        {
            return Err(Error::validation(format!(
                "life expectancy at age {age} must be finite and non-negative, got {v}"
            )));
        }
        Ok(Self { ex })
    }

    pub fn values(&self) -> &[f64] {
        &self.ex
    }

    pub fn max_age(&self) -> u32 {
        self.ex.len() as u32 - 1
    }

    pub fn at_birth(&self) -> f64 {
        self.ex[0]
    }

    /// `e(age)`, linear between neighbouring integer ages.
    pub fn life_expectancy_at(&self, age: f64) -> Result<f64> {
        interpolate(self.ex.iter().copied(), self.ex.len(), age)
    }
}

impl From<&LifeTable> for ExpectancySchedule {
    fn from(t: &LifeTable) -> Self {
        t.expectancy()
    }
}

fn interpolate(values: impl Iterator<Item = f64> + Clone, len: usize, age: f64) -> Result<f64> {
    let max = (len - 1) as f64;
    if !(0.0..=max).contains(&age) {
        return Err(Error::Range {
            what: "age",
            value: age,
            min: 0.0,
            max,
        });
    }
    let lo = age.floor() as usize;
    let frac = age - lo as f64;
    let mut it = values.skip(lo);
    let e_lo = it.next().expect("age checked against table length");
    if frac == 0.0 {
        return Ok(e_lo);
    }
    let e_hi = it
        .next()
        .expect("fractional age below max has an upper row");
    Ok(e_lo + frac * (e_hi - e_lo))
}
