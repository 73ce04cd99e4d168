use std::process::ExitCode;

use clap::{Parser, Subcommand};

mod bench;
mod commands;
mod config;
mod error;
mod output;
mod verify;

use error::{CliError, CliResult};

/// Spectral solvers for polynomials of the discrete Laplacian.
///
/// Exit codes: 0 success, 1 verification failed or output error,
/// 2 invalid input, 3 singular operator, 4 internal size guard exceeded.
#[derive(Debug, Parser)]
#[command(name = "lapoly", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Solve P(A) x = b and write nodes with solution values
    Solve(commands::SolveArgs),
    /// Entries of P(A)^{-1}
    Inverse(commands::InverseArgs),
    /// Implicit time stepping of u' + P(A) u = 0
    Evolve(commands::EvolveArgs),
    /// Compare spectral results with dense elimination
    Verify(verify::VerifyArgs),
    /// Time the direct jump against step-by-step integration
    Bench(bench::BenchArgs),
}

/// Honors LAPOLY_THREADS (0 or unset = rayon default).
fn init_threads() -> CliResult<()> {
    let Ok(raw) = std::env::var("LAPOLY_THREADS") else {
        return Ok(());
    };
    let n: usize = raw
        .trim()
        .parse()
        .map_err(|_| CliError::invalid(format!("LAPOLY_THREADS must be a count, got {raw:?}")))?;
    if n > 0 {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| CliError::invalid(format!("cannot size thread pool: {e}")))?;
    }
    Ok(())
}

fn run(cli: Cli) -> CliResult<()> {
    init_threads()?;
    match &cli.command {
        Command::Solve(a) => commands::solve(a),
        Command::Inverse(a) => commands::inverse(a),
        Command::Evolve(a) => commands::evolve_cmd(a),
        Command::Verify(a) => verify::verify(a),
        Command::Bench(a) => bench::bench(a),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("lapoly: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
