use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand};

use eevl::cli_io::{
    self, CommandOutput, CountryTolerances, OutputFormat, ReproduceOptions, Scenario,
};
use eevl::demography::AgeDistribution;
use eevl::valuation::ValuationMethod;
use eevl::weibull::WeibullParams;

#[derive(Parser)]
#[command(
    name = "eevl",
    version,
    about = "Economic equivalent of the value of a statistical life"
)]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// Scenario configuration (JSON).
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output format: csv, json or markdown.
    #[arg(long, global = true)]
    format: Option<OutputFormat>,
    /// Write the document here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Round intermediate quantities the way published tables do.
    #[arg(long, global = true)]
    reproduction_mode: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Build a life table from an `age,qx` file.
    Lifetable {
        /// `age,qx` file; overrides the config's qx_path.
        #[arg(long)]
        qx: Option<PathBuf>,
        /// Person-years lived per survivor in the last row.
        #[arg(long)]
        terminal_person_years: Option<f64>,
    },
    /// Fit Weibull parameters to an age distribution.
    Fit {
        /// `age,count` file; overrides the config's age_distribution_path.
        #[arg(long)]
        counts: Option<PathBuf>,
    },
    /// Value a life by one of the six methods.
    Value {
        #[arg(long)]
        method: ValuationMethod,
        /// Single age instead of the full 0..100 table.
        #[arg(long)]
        age: Option<f64>,
    },
    /// Recompute every published number from the bundled fixtures.
    Reproduce {
        #[arg(long, default_value = "data")]
        data: PathBuf,
        /// Use this tolerance for every check.
        #[arg(long)]
        tolerance: Option<f64>,
    },
    /// Check country records against their published derived values.
    Countries { csv: PathBuf },
    /// Weibull density on a 0.5-year grid over [0, 100].
    Density {
        #[arg(long)]
        a: f64,
        #[arg(long)]
        b: f64,
        #[arg(long, default_value_t = 0.0)]
        c: f64,
    },
}

fn load(common: &Common) -> anyhow::Result<Scenario> {
    let Some(path) = &common.config else {
        bail!("this command needs --config <path>");
    };
    cli_io::load_scenario(path, common.reproduction_mode)
        .with_context(|| format!("loading {}", path.display()))
}

fn run(cli: &Cli) -> anyhow::Result<CommandOutput> {
    let c = &cli.common;
    let loaded = match (&cli.command, &c.config) {
        (_, Some(_)) => Some(load(c)?),
        _ => None,
    };
    let format = c
        .format
        .or(loaded.as_ref().and_then(|s| s.config.format))
        .unwrap_or_default();
    let out = match &cli.command {
        Command::Lifetable {
            qx: Some(path),
            terminal_person_years,
        } => {
            let table = cli_io::life_table_from_qx(path, *terminal_person_years)?;
            cli_io::cmd_lifetable(&table, format)?
        }
        Command::Lifetable { qx: None, .. } => {
            cli_io::cmd_lifetable_scenario(&scenario_or_fail(&loaded)?, format)?
        }
        Command::Fit { counts: Some(path) } => {
            let counts = cli_io::read_age_series(path, "count")?;
            let dist = AgeDistribution::with_open_end(counts, true)?;
            cli_io::cmd_fit(&dist, c.format.unwrap_or(OutputFormat::Json))?
        }
        Command::Fit { counts: None } => {
            let s = scenario_or_fail(&loaded)?;
            cli_io::cmd_fit_scenario(
                &s,
                c.format.or(s.config.format).unwrap_or(OutputFormat::Json),
            )?
        }
        Command::Value { method, age } => {
            cli_io::cmd_value(&scenario_or_fail(&loaded)?, *method, *age, format)?
        }
        Command::Reproduce { data, tolerance } => cli_io::cmd_reproduce(
            data,
            ReproduceOptions {
                tolerance_override: *tolerance,
            },
        )?,
        Command::Countries { csv } => cli_io::cmd_countries(csv, CountryTolerances::default())?,
        Command::Density { a, b, c } => cli_io::cmd_density(&WeibullParams::new(*a, *b, *c)?)?,
    };
    Ok(out)
}

fn scenario_or_fail(loaded: &Option<Scenario>) -> anyhow::Result<Scenario> {
    loaded.clone().context("this command needs --config <path>")
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(out) => {
            let written = match &cli.common.out {
                Some(path) => std::fs::write(path, &out.body)
                    .with_context(|| format!("writing {}", path.display())),
                None => {
                    print!("{}", out.body);
                    Ok(())
                }
            };
            if let Err(e) = written {
                eprintln!("error: {e:#}");
                return ExitCode::from(2);
            }
            eprintln!("{}", out.summary);
            if out.success {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
