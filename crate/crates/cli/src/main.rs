//! `emprint`: generate training sets, build reduced bases and empirical
//! interpolants, and compare node-selection criteria. All outputs are files.

use std::process::ExitCode;

use clap::{Parser, Subcommand};

mod commands;
mod config;

use config::{RunConfig, SharedArgs};

#[derive(Parser)]
#[command(name = "emprint", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sample a built-in family into training.csv
    Generate(SharedArgs),
    /// Greedy reduced basis: basis.csv and greedy_errors.csv
    Basis(SharedArgs),
    /// Empirical interpolant per criterion: interpolant_<tag>.json
    Eim(SharedArgs),
    /// Criterion comparison: report_<tag>.json plus kappa/lambda/errors/nodes CSVs
    Compare(SharedArgs),
    /// Check the residual/determinant identity step by step: theorem.csv
    VerifyTheorem(SharedArgs),
}

#[derive(Debug)]
pub enum CliError {
    Verification(String),
    Input(String),
    Degenerate(String),
    Interpolant(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Verification(_) => 1,
            CliError::Input(_) => 2,
            CliError::Degenerate(_) => 3,
            CliError::Interpolant(_) => 4,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Verification(m) | CliError::Input(m) | CliError::Degenerate(m) | CliError::Interpolant(m) => m,
        }
    }
}

type Handler = fn(&RunConfig) -> Result<String, CliError>;

fn run(cli: Cli) -> Result<String, CliError> {
    let (args, f): (&SharedArgs, Handler) = match &cli.command {
        Command::Generate(a) => (a, commands::generate),
        Command::Basis(a) => (a, commands::basis_cmd),
        Command::Eim(a) => (a, commands::eim),
        Command::Compare(a) => (a, commands::compare),
        Command::VerifyTheorem(a) => (a, commands::verify_theorem),
    };
    f(&RunConfig::resolve(args)?)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(2) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli) {
        Ok(summary) => {
            println!("{summary}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            let kind = match e {
                CliError::Verification(_) => "verification failed",
                _ => "error",
            };
            eprintln!("emprint: {kind}: {}", e.message());
            ExitCode::from(e.exit_code())
        }
    }
}
