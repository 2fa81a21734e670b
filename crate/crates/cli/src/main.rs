//! `agglab` — command-line driver for the coalescence laboratory.
//!
//! `agglab <command> --config <path> [--out <path>] [--threads N]`
//!
//! Commands: `simulate` (Monte Carlo ensembles), `ode` (closed moment
//! hierarchy), `exact` (constant-kernel transform solution), `lift`
//! (mass-solution lift) and `verify` (the full acceptance suite).
//!
//! Exit codes: 0 all checks pass, 1 verification failure, 2 configuration
//! error, 3 runtime error.

mod config;
mod run;
mod table;

use clap::{Args, Parser, Subcommand};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "agglab", version, about = "Mass-impulsion coalescence laboratory")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct RunArgs {
    /// JSON configuration file.
    #[arg(long)]
    config: PathBuf,
    /// CSV output path; a JSON mirror with metadata is written alongside.
    /// CSV goes to stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Worker threads for ensemble runs (default: all cores). Output is
    /// identical for every thread count.
    #[arg(long)]
    threads: Option<usize>,
}

#[derive(Subcommand)]
enum Command {
    /// Run a stochastic coalescence ensemble and report moments.
    Simulate(RunArgs),
    /// Integrate the closed even-moment hierarchy of the quadratic kernel.
    Ode(RunArgs),
    /// Evaluate the exact constant-kernel transform solution and limits.
    Exact(RunArgs),
    /// Evaluate the mass-solution lift: P_k tables, residuals, factorization.
    Lift(RunArgs),
    /// Run the acceptance suite; nonzero exit on any criterion failure.
    Verify(RunArgs),
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (name, args) = match &cli.command {
        Command::Simulate(a) => ("simulate", a),
        Command::Ode(a) => ("ode", a),
        Command::Exact(a) => ("exact", a),
        Command::Lift(a) => ("lift", a),
        Command::Verify(a) => ("verify", a),
    };

    if let Some(threads) = args.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global()
        {
            eprintln!("runtime error: could not configure {threads} threads: {e}");
            return ExitCode::from(3);
        }
    }

    let text = match std::fs::read_to_string(&args.config) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("config error: cannot read {}: {e}", args.config.display());
            return ExitCode::from(2);
        }
    };

    let parsed = match config::parse_config(&text, name) {
        Ok(p) => p,
        Err(errors) => {
            eprintln!("{errors}");
            return ExitCode::from(2);
        }
    };

    let outcome = match run::execute(&parsed, &text) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("{e}");
            return ExitCode::from(3);
        }
    };

    for line in &outcome.status_lines {
        eprintln!("{line}");
    }
    if let Err(e) = outcome.table.emit(args.out.as_deref()) {
        eprintln!("runtime error: cannot write output: {e}");
        return ExitCode::from(3);
    }
    if outcome.checks_passed {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}
