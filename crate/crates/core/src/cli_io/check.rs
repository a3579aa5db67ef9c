use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ToleranceKind {
    Abs,
    Rel,
}

impl ToleranceKind {
    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "abs" => Some(ToleranceKind::Abs),
            "rel" => Some(ToleranceKind::Rel),
            _ => None,
        }
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            ToleranceKind::Abs => "abs",
            ToleranceKind::Rel => "rel",
        }
    }
}

/// One recomputed value compared against a published one.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub id: String,
    pub expected: f64,
    pub actual: f64,
    pub tolerance: f64,
    pub kind: ToleranceKind,
}

impl Check {
    pub fn new(
        id: impl Into<String>,
        expected: f64,
        actual: f64,
        tolerance: f64,
        kind: ToleranceKind,
    ) -> Self {
        Self {
            id: id.into(),
            expected,
            actual,
            tolerance,
            kind,
        }
    }

    pub fn error(&self) -> f64 {
        let diff = (self.actual - self.expected).abs();
        match self.kind {
            ToleranceKind::Abs => diff,
            ToleranceKind::Rel if self.expected == 0.0 => {
                if diff == 0.0 {
                    0.0
                } else {
                    f64::INFINITY
                }
            }
            ToleranceKind::Rel => diff / self.expected.abs(),
        }
    }

    pub fn passed(&self) -> bool {
        self.error() <= self.tolerance
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct CheckReport {
    pub checks: Vec<Check>,
}

impl CheckReport {
    pub fn push(&mut self, c: Check) {
        self.checks.push(c);
    }

    pub fn extend(&mut self, other: CheckReport) {
        self.checks.extend(other.checks);
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed())
    }

    pub fn all_passed(&self) -> bool {
        self.failures().next().is_none()
    }

    pub fn with_prefix<'a>(&'a self, prefix: &'a str) -> impl Iterator<Item = &'a Check> {
        self.checks.iter().filter(move |c| c.id.starts_with(prefix))
    }

    /// Line-per-check CSV followed by a one-line summary.
    pub fn render(&self) -> String {
        let mut out = String::from("check,expected,actual,error,tolerance,kind,status\n");
        for c in &self.checks {
            let _ = writeln!(
                out,
                "{},{},{},{:.6e},{},{},{}",
                c.id,
                c.expected,
                c.actual,
                c.error(),
                c.tolerance,
                c.kind.as_str(),
                if c.passed() { "pass" } else { "FAIL" }
            );
        }
        let failed = self.failures().count();
        let _ = writeln!(
            out,
            "# {} cells compared, {} passed, {} failed",
            self.checks.len(),
            self.checks.len() - failed,
            failed
        );
        out
    }
}
