//! Command-line front end. Every subcommand reads one JSON configuration
//! file and writes its artifacts into the output directory.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use heteroclinic::cli;

#[derive(Parser)]
#[command(
    name = "heteroclinic",
    version,
    about = "Connecting orbits of ẍ = a(εt)V'(x) by direct action minimization",
    propagate_version = true
)]
struct Cli {
    #[command(subcommand)]
    command: Commands,
}

#[derive(Args)]
struct RunArgs {
    /// JSON run configuration.
    #[arg(long)]
    config: PathBuf,
    /// Output directory (overrides output_dir from the config; default "out").
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Commands {
    /// Minimize the action once and write the solution path and report.
    Solve(RunArgs),
    /// Run one minimization per ε in eps_list and tabulate the levels.
    Sweep(RunArgs),
    /// Estimate b_eps, b_0 and the class-dependent reference levels.
    Levels(RunArgs),
    /// Solve, then run the solution-grade checks on the result.
    Verify(RunArgs),
    /// Compare a constant-coefficient solve against the phase-plane oracle.
    OracleCompare(RunArgs),
    /// Check the coefficient against its declared class on a finite window.
    Classify(RunArgs),
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (name, args) = match &cli.command {
        Commands::Solve(a) => ("solve", a),
        Commands::Sweep(a) => ("sweep", a),
        Commands::Levels(a) => ("levels", a),
        Commands::Verify(a) => ("verify", a),
        Commands::OracleCompare(a) => ("oracle_compare", a),
        Commands::Classify(a) => ("classify", a),
    };
    let code = cli::run_command(name, &args.config, args.out.as_deref());
    ExitCode::from(code as u8)
}
