use std::fmt::Write as _;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lifetable::{LifeTable, LifeTableRow};
use crate::valuation::{ValuationRow, ValuationTable};

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    #[default]
    Csv,
    Json,
    Markdown,
}

impl FromStr for OutputFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(OutputFormat::Csv),
            "json" => Ok(OutputFormat::Json),
            "markdown" | "md" => Ok(OutputFormat::Markdown),
            other => Err(Error::validation(format!(
                "unknown output format `{other}` (expected csv, json or markdown)"
            ))),
        }
    }
}

pub fn render_valuation(table: &ValuationTable, format: OutputFormat) -> Result<String> {
    Ok(match format {
        OutputFormat::Csv => valuation_csv(&table.rows),
        OutputFormat::Json => serde_json::to_string_pretty(table)? + "\n",
        OutputFormat::Markdown => valuation_markdown(table),
    })
}

pub fn valuation_csv(rows: &[ValuationRow]) -> String {
    let mut out = String::from("age,value\n");
    for r in rows {
        let _ = writeln!(out, "{},{}", r.age, r.value);
    }
    out
}

pub fn parse_valuation_csv(text: &str) -> Result<Vec<ValuationRow>> {
    let mut rdr = csv::Reader::from_reader(text.as_bytes());
    let mut rows = Vec::new();
    for rec in rdr.deserialize() {
        rows.push(rec?);
    }
    Ok(rows)
}

/// Column sizes for splitting `n` rows across `cols` side-by-side pairs,
/// earlier columns taking the remainder.
fn column_sizes(n: usize, cols: usize) -> Vec<usize> {
    (0..cols)
        .map(|i| n / cols + usize::from(i < n % cols))
        .collect()
}

fn group_thousands(v: f64) -> String {
    let s = format!("{:.0}", v.abs());
    let mut out = String::new();
    for (i, ch) in s.chars().enumerate() {
        if i > 0 && (s.len() - i) % 3 == 0 {
            out.push(',');
        }
        out.push(ch);
    }
    if v < 0.0 && s != "0" {
        out.insert(0, '-');
    }
    out
}

fn valuation_markdown(table: &ValuationTable) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "## Value of statistical life: {}\n", table.method);
    let _ = writeln!(
        out,
        "- value at mean age: {}",
        group_thousands(table.base_value_at_mean_age)
    );
    let _ = writeln!(
        out,
        "- value at birth: {}\n",
        group_thousands(table.newborn_value)
    );
    const PAIRS: usize = 4;
    out.push_str(&"| Age | Value ".repeat(PAIRS));
    out.push_str("|\n");
    out.push_str(&"|---:|---:".repeat(PAIRS));
    out.push_str("|\n");
    let sizes = column_sizes(table.rows.len(), PAIRS);
    let starts: Vec<usize> = sizes
        .iter()
        .scan(0, |acc, s| {
            let start = *acc;
            *acc += s;
            Some(start)
        })
        .collect();
    for line in 0..sizes[0] {
        for (col, &start) in starts.iter().enumerate() {
            if line < sizes[col] {
                let r = &table.rows[start + line];
                let _ = write!(out, "| {} | {} ", r.age, group_thousands(r.value));
            } else {
                out.push_str("| – | – ");
            }
        }
        out.push_str("|\n");
    }
    out
}

const LIFE_TABLE_HEADER: &str = "age,lx,dx,qx,px,Lx,Tx,ex,Px";

pub fn render_life_table(table: &LifeTable, format: OutputFormat) -> Result<String> {
    Ok(match format {
        OutputFormat::Csv => life_table_csv(table.rows()),
        OutputFormat::Json => serde_json::to_string_pretty(table)? + "\n",
        OutputFormat::Markdown => life_table_markdown(table.rows()),
    })
}

pub fn life_table_csv(rows: &[LifeTableRow]) -> String {
    let mut out = String::from(LIFE_TABLE_HEADER);
    out.push('\n');
    for r in rows {
        let px = r.survival_ratio.map(|v| v.to_string()).unwrap_or_default();
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{},{}",
            r.age, r.lx, r.dx, r.qx, r.px, r.big_lx, r.tx, r.ex, px
        );
    }
    out
}

pub fn parse_life_table_csv(text: &str) -> Result<Vec<LifeTableRow>> {
    let mut rdr = csv::Reader::from_reader(text.as_bytes());
    let headers: Vec<String> = rdr.headers()?.iter().map(str::to_owned).collect();
    if headers.join(",") != LIFE_TABLE_HEADER {
        return Err(Error::validation(format!(
            "life table CSV must have header `{LIFE_TABLE_HEADER}`"
        )));
    }
    let mut rows = Vec::new();
    for rec in rdr.deserialize() {
        rows.push(rec?);
    }
    Ok(rows)
}

fn life_table_markdown(rows: &[LifeTableRow]) -> String {
    let mut out = String::from(
        "| x | lx | dx | qx | px | Lx | Tx | ex | Px |\n|---:|---:|---:|---:|---:|---:|---:|---:|---:|\n",
    );
    for r in rows {
        let px = r
            .survival_ratio
            .map(|v| format!("{v:.5}"))
            .unwrap_or_else(|| "–".into());
        let _ = writeln!(
            out,
            "| {} | {} | {} | {:.5} | {:.5} | {} | {} | {:.2} | {} |",
            r.age,
            group_thousands(r.lx),
            group_thousands(r.dx),
            r.qx,
            r.px,
            group_thousands(r.big_lx),
            group_thousands(r.tx),
            r.ex,
            px
        );
    }
    out
}

pub fn density_csv(points: &[(f64, f64)]) -> String {
    let mut out = String::from("t,density\n");
    for (t, f) in points {
        let _ = writeln!(out, "{t},{f}");
    }
    out
}
