use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use funex::{decompose_csv, list_scenarios, CliError, OUT_DIR_ENV};

#[derive(Parser)]
#[command(name = "funex", version, about = "Functional-economics scenario runner")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a scenario file or a bundled scenario by name.
    Run {
        #[arg(long)]
        scenario: String,
        /// Output directory.
        #[arg(long, env = OUT_DIR_ENV)]
        out: Option<PathBuf>,
        /// Dotted-path override, e.g. `exchange.rho_star=2.0`. Repeatable.
        #[arg(long = "set", value_name = "KEY=VALUE")]
        overrides: Vec<String>,
    },
    /// List bundled scenarios.
    List,
    /// Birkhoff decomposition of a bistochastic matrix given as CSV rows.
    Decompose {
        #[arg(long)]
        matrix: PathBuf,
        /// Write the terms here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    match dispatch(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn dispatch(cli: Cli) -> Result<ExitCode, CliError> {
    match cli.command {
        Command::Run {
            scenario,
            out,
            overrides,
        } => {
            let report = funex::run(&scenario, out.as_deref(), &overrides)?;
            println!("{report}");
            if report.success() {
                Ok(ExitCode::SUCCESS)
            } else {
                for (section, msg) in report.failures() {
                    eprintln!("section {section} failed: {msg}");
                }
                Ok(ExitCode::FAILURE)
            }
        }
        Command::List => {
            for (name, description) in list_scenarios() {
                println!("{name:<24} {description}");
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Decompose { matrix, out } => {
            let text = fs::read_to_string(&matrix).map_err(|e| CliError::Io {
                path: matrix,
                source: e,
            })?;
            let csv = decompose_csv(&text)?;
            match out {
                Some(path) => fs::write(&path, csv).map_err(|e| CliError::Io { path, source: e })?,
                None => std::io::stdout().write_all(&csv).map_err(|e| CliError::Io {
                    path: "<stdout>".into(),
                    source: e,
                })?,
            }
            Ok(ExitCode::SUCCESS)
        }
    }
}
