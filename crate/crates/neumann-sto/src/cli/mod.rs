//! Command-line front end: published tables, parameter sweeps and timing.

mod commands;
mod reference;
mod report;

use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};

pub use commands::{cmd_bench, cmd_sweep, cmd_table, BenchLine, Point, RunOptions, SweepGrid, TableRun, TABLE_TOLERANCE};
pub use reference::{mantissa, reference_rows, table_rows, ReferenceRow};
pub use report::{matching_digits, bracket_format, Quantity, ReportRow, RunReport, MAX_MATCHING_DIGITS};

use crate::error::{Error, Result};
use crate::hp_oracle::OracleConfig;
use crate::neumann_driver::DEFAULT_MU_SWITCH;
use crate::series::ExpansionSettings;

/// Environment variable naming the directory relative `--out` paths resolve against.
pub const OUT_DIR_ENV: &str = "NEUMANN_STO_OUT_DIR";

#[derive(Debug, Parser)]
#[command(name = "neumann-sto", version, about = "Large-order expansions of the basic integrals of the Neumann series")]
pub struct Cli {
    /// Relative size below which a series term counts as negligible.
    #[arg(long, global = true, default_value_t = 2e-16)]
    pub tol: f64,
    /// Term cap of the large-order series.
    #[arg(long, global = true, default_value_t = 200)]
    pub max_terms: usize,
    /// Order from which the large-order engines are used.
    #[arg(long, global = true, default_value_t = DEFAULT_MU_SWITCH)]
    pub mu_switch: usize,
    /// Also evaluate every point with the arbitrary-precision oracle.
    #[arg(long, global = true)]
    pub oracle: bool,
    /// Digits the oracle certifies.
    #[arg(long, global = true, default_value_t = 30)]
    pub oracle_digits: u32,
    /// Directory for relative output paths.
    #[arg(long, global = true, env = OUT_DIR_ENV)]
    pub out_dir: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Csv,
    Json,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Reproduce published table 1 (L), 2 or 3 (W).
    Table {
        #[arg(value_parser = clap::value_parser!(u8).range(1..=3))]
        which: u8,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Evaluate a cartesian grid; `--alpha2` selects W, otherwise L.
    Sweep {
        /// Orders as `a..b`, `a..b:step` (inclusive) or a comma list.
        #[arg(long, value_parser = parse_orders)]
        mu: Orders,
        #[arg(long, value_delimiter = ',', required = true)]
        alpha: Vec<f64>,
        #[arg(long, value_delimiter = ',')]
        alpha2: Vec<f64>,
        #[arg(long, value_delimiter = ',', default_value = "0")]
        p: Vec<usize>,
        #[arg(long, value_delimiter = ',', default_value = "0")]
        p2: Vec<usize>,
        #[arg(long, value_delimiter = ',', default_value = "0")]
        sigma: Vec<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
    },
    /// Time the fast path over a table grid.
    Bench {
        #[arg(long)]
        reps: usize,
        #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u8).range(1..=3))]
        table: u8,
    },
}

/// Parsed `--mu` list.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Orders(pub Vec<usize>);

/// `a..b`, `a..b:step` or `a,b,c`. A range with `b < a` is empty.
pub fn parse_orders(s: &str) -> std::result::Result<Orders, String> {
    let bad = |_| format!("invalid order list {s:?}");
    if let Some((a, rest)) = s.split_once("..") {
        let (b, step) = match rest.split_once(':') {
            Some((b, st)) => (b, st.trim().parse::<usize>().map_err(bad)?),
            None => (rest, 1),
        };
        if step == 0 {
            return Err("step must be positive".into());
        }
        let a: usize = a.trim().parse().map_err(bad)?;
        let b: usize = b.trim().parse().map_err(bad)?;
        return Ok(Orders((a..=b).step_by(step).collect()));
    }
    s.split(',').filter(|t| !t.trim().is_empty()).map(|t| t.trim().parse().map_err(bad)).collect::<std::result::Result<_, _>>().map(Orders)
}

impl Cli {
    fn options(&self) -> Result<RunOptions> {
        let settings = ExpansionSettings { rel_tol: self.tol, max_terms: self.max_terms, ..ExpansionSettings::default() };
        let settings = ExpansionSettings { divergence_window: settings.divergence_window.min(self.max_terms.max(1)), ..settings };
        settings.validate()?;
        let oracle = if self.oracle {
            let cfg = OracleConfig { target_digits: self.oracle_digits, working_digits: self.oracle_digits + 20, ..OracleConfig::default() };
            cfg.validate()?;
            Some(cfg)
        } else {
            None
        };
        Ok(RunOptions { settings, mu_switch: self.mu_switch, oracle })
    }

    fn resolve(&self, out: &Option<PathBuf>) -> Option<PathBuf> {
        out.as_ref().map(|p| match &self.out_dir {
            Some(dir) if p.is_relative() => dir.join(p),
            _ => p.clone(),
        })
    }
}

fn render(report: &RunReport, format: Format) -> Result<String> {
    match format {
        Format::Text => Ok(report.to_text()),
        Format::Csv => report.to_csv(),
        Format::Json => report.to_json().map(|s| s + "\n"),
    }
}

fn emit(text: &str, path: Option<PathBuf>) -> Result<()> {
    match path {
        Some(p) => {
            if let Some(dir) = p.parent().filter(|d| !d.as_os_str().is_empty()) {
                std::fs::create_dir_all(dir)?;
            }
            std::fs::write(&p, text)?;
            Ok(())
        }
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

/// Runs one parsed invocation and returns the process exit code: 0 on
/// success, 1 if `table` found a converged row off its published value.
pub fn run(cli: &Cli) -> Result<i32> {
    let opts = cli.options()?;
    match &cli.command {
        Command::Table { which, out, format } => {
            let run = cmd_table(*which, &opts)?;
            emit(&render(&run.report, *format)?, cli.resolve(out))?;
            if run.mismatches > 0 {
                eprintln!("{} converged row(s) deviate from the published values by more than {TABLE_TOLERANCE:e}", run.mismatches);
                return Ok(1);
            }
            Ok(0)
        }
        Command::Sweep { mu, alpha, alpha2, p, p2, sigma, out, format } => {
            let grid = SweepGrid {
                mu: mu.0.clone(),
                p1: p.clone(),
                p2: p2.clone(),
                sigma: sigma.clone(),
                alpha1: alpha.clone(),
                alpha2: alpha2.clone(),
            };
            let report = cmd_sweep(&grid, &opts)?;
            emit(&render(&report, *format)?, cli.resolve(out))?;
            Ok(0)
        }
        Command::Bench { reps, table } => {
            for line in cmd_bench(*reps, *table, &opts)? {
                println!(
                    "{:<40} {:>4} values x {:>4} reps: {:>12.3} us/value (sd {:.3})",
                    line.label, line.values, line.repetitions, line.mean_us, line.stddev_us
                );
            }
            Ok(0)
        }
    }
}

/// Entry point of the binary.
pub fn main_from_args() -> i32 {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                Error::Settings(_) | Error::Domain { .. } => 2,
                _ => 3,
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn order_lists() {
        assert_eq!(parse_orders("10..60:10").unwrap().0, vec![10, 20, 30, 40, 50, 60]);
        assert_eq!(parse_orders("3..5").unwrap().0, vec![3, 4, 5]);
        assert_eq!(parse_orders("7,9").unwrap().0, vec![7, 9]);
        assert!(parse_orders("5..2").unwrap().0.is_empty());
        assert!(parse_orders("1..4:0").is_err());
        assert!(parse_orders("x").is_err());
    }

    #[test]
    fn cli_definition_is_consistent() {
        use clap::CommandFactory;
        Cli::command().debug_assert();
    }
}
