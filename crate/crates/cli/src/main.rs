use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use sgn_cli::{acceptance, commands, output};

/// Shallow-water dispersive solvers: parameter sweeps, convergence and timing
/// studies, and the acceptance suite. CSV output goes below `SGN_OUTPUT_ROOT`
/// (default: the current directory).
#[derive(Parser)]
#[command(name = "sgn", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run every combination of the config's sweep lists and write profiles.
    Run { config: PathBuf },
    /// Soliton error table over the config's grids.
    Converge { config: PathBuf },
    /// Wall-time comparison of the three solvers.
    Timing { config: PathBuf },
    /// Run the acceptance suite; exits non-zero if any criterion fails.
    Accept,
}

fn main() -> ExitCode {
    match execute(Cli::parse().command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}

fn execute(command: Command) -> anyhow::Result<ExitCode> {
    match command {
        Command::Run { config } => {
            for path in commands::run_config(&commands::load(&config)?)? {
                println!("{}", path.display());
            }
        }
        Command::Converge { config } => println!("{}", commands::converge_config(&commands::load(&config)?)?.display()),
        Command::Timing { config } => println!("{}", commands::timing_config(&commands::load(&config)?)?.display()),
        Command::Accept => {
            let outcomes = acceptance::run_all(|o| println!("{}", o.line()));
            let path = acceptance::write_csv(&output::output_root().join("acceptance.csv"), &outcomes)?;
            let failed = outcomes.iter().filter(|o| !o.passed).count();
            println!("{} of {} criteria passed; summary in {}", outcomes.len() - failed, outcomes.len(), path.display());
            if failed > 0 {
                return Ok(ExitCode::FAILURE);
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}
