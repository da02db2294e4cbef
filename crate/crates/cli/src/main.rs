//! `fanotope`: polygon reports, Laurent inversion runs and period series
//! from the command line.
//!
//! Exit codes: 0 success, 2 invalid input, 3 a mathematical precondition
//! failed, 4 a requested comparison did not hold.

mod commands;
mod input;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};

use commands::{ClassicalOptions, ScaffoldOptions};
use input::pick;
use report::{emit, render_json, render_text, Output};

pub const EXIT_INVALID: u8 = 2;
pub const EXIT_PRECONDITION: u8 = 3;
pub const EXIT_MISMATCH: u8 = 4;

/// An error carrying the exit code it maps to.
#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub error: anyhow::Error,
}

impl Failure {
    pub fn invalid(e: impl Into<anyhow::Error>) -> Self {
        Failure { code: EXIT_INVALID, error: e.into() }
    }

    pub fn precondition(e: impl Into<anyhow::Error>) -> Self {
        Failure { code: EXIT_PRECONDITION, error: e.into() }
    }
}

#[derive(Parser)]
#[command(name = "fanotope", version, about = "Exact invariants and period series for toric del Pezzo surfaces")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct Common {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Write the report here instead of stdout.
    #[arg(long, global = true, value_name = "FILE")]
    out: Option<PathBuf>,
    /// Record wall-clock time in the report (makes output non-deterministic).
    #[arg(long, global = true)]
    timing: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Args)]
struct Source {
    /// Input JSON file.
    #[arg(long = "in", value_name = "FILE", conflicts_with = "fixture")]
    input: Option<PathBuf>,
    /// Bundled input: paper, paper-P, paper-scaffolding or paper-f.
    #[arg(long, value_name = "NAME")]
    fixture: Option<String>,
}

#[derive(Subcommand)]
enum Command {
    /// Fano checks and invariants of a lattice polygon.
    Polygon {
        #[command(flatten)]
        source: Source,
    },
    /// Toric ambient space, hypersurface and chart analysis from a scaffolding.
    Scaffold {
        #[command(flatten)]
        source: Source,
        /// Fail with exit code 4 unless the struts' hull is the target polygon.
        #[arg(long)]
        check_hull: bool,
        /// Comma-separated variables for the fibre avoidance check.
        #[arg(long, value_delimiter = ',')]
        avoid: Option<Vec<String>>,
    },
    /// Classical and quantum period sequences.
    Periods {
        #[command(subcommand)]
        command: PeriodsCommand,
    },
}

#[derive(Subcommand)]
enum PeriodsCommand {
    /// Classical period of a Laurent polynomial.
    Classical {
        #[command(flatten)]
        source: Source,
        /// Truncation order; defaults to 12, or 6 with --symbolic.
        #[arg(long)]
        order: Option<usize>,
        /// Keep parameters free instead of using the file's specialization.
        #[arg(long)]
        symbolic: bool,
        /// Parameter values such as "a1=1,b1=0"; override the file.
        #[arg(long)]
        assign: Option<String>,
    },
    /// Regularized quantum period of the hypersurface built from a scaffolding.
    Quantum {
        #[command(flatten)]
        source: Source,
        #[arg(long, default_value_t = 12)]
        order: usize,
    },
    /// Compare the regularized quantum period with a classical period.
    Compare {
        /// Scaffolding JSON file.
        #[arg(long, value_name = "FILE")]
        scaffold: Option<PathBuf>,
        /// Laurent polynomial JSON file.
        #[arg(long, value_name = "FILE")]
        laurent: Option<PathBuf>,
        /// Bundled inputs for whichever file is not given ("paper").
        #[arg(long, value_name = "NAME")]
        fixture: Option<String>,
        #[arg(long, default_value_t = 12)]
        order: usize,
        #[arg(long)]
        assign: Option<String>,
    },
}

fn dispatch(command: Command) -> Result<Output, Failure> {
    match command {
        Command::Polygon { source } => {
            commands::polygon(&pick(source.input, source.fixture.as_deref(), "paper-P", "polygon")?)
        }
        Command::Scaffold { source, check_hull, avoid } => commands::scaffold(
            &pick(source.input, source.fixture.as_deref(), "paper-scaffolding", "scaffolding")?,
            &ScaffoldOptions { check_hull, avoid },
        ),
        Command::Periods { command } => match command {
            PeriodsCommand::Classical { source, order, symbolic, assign } => {
                let default = if symbolic { commands::SYMBOLIC_ORDER_CAP } else { 12 };
                commands::classical(
                    &pick(source.input, source.fixture.as_deref(), "paper-f", "Laurent polynomial")?,
                    &ClassicalOptions { order: order.unwrap_or(default), symbolic, assign },
                )
            }
            PeriodsCommand::Quantum { source, order } => commands::quantum(
                &pick(source.input, source.fixture.as_deref(), "paper-scaffolding", "scaffolding")?,
                order,
            ),
            PeriodsCommand::Compare { scaffold, laurent, fixture, order, assign } => {
                let fx = fixture.as_deref();
                let s = pick(scaffold, fx, "paper-scaffolding", "scaffolding (--scaffold)")?;
                let l = pick(laurent, fx, "paper-f", "Laurent polynomial (--laurent)")?;
                commands::compare(&s, &l, order, assign.as_deref())
            }
        },
    }
}

fn run(cli: Cli) -> Result<u8, Failure> {
    let start = Instant::now();
    let mut output = dispatch(cli.command)?;
    if cli.common.timing {
        output.report.timing_ms = Some(start.elapsed().as_millis() as u64);
    }
    let body = match cli.common.format {
        Format::Json => render_json(&output.report),
        Format::Text => render_text(&output),
    };
    emit(&body, cli.common.out.as_deref())?;
    Ok(if output.mismatch { EXIT_MISMATCH } else { 0 })
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INVALID } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {:#}", f.error);
            ExitCode::from(f.code)
        }
    }
}
