use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use seasonal_dispersal::config::load_config;
use seasonal_dispersal::scenario::{run_scenario, Analysis, RunStatus};

#[derive(Parser)]
#[command(version, about = "Seasonal nonlocal dispersal model runner")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Integrate from the configured initial data and write the trajectory
    Simulate(RunArgs),
    /// Persistence regime and threshold eigenvalue of the configured habitat
    Classify(RunArgs),
    /// Principal eigenpair of the discretized dispersal operator
    Spectrum(RunArgs),
    /// Locate the habitat length where the threshold changes sign
    CriticalLength(RunArgs),
    /// Positive periodic solution by monotone iteration
    Periodic(RunArgs),
    /// Deviation of the periodic solution from the ODE orbit for growing habitats
    ProfileStudy(RunArgs),
    /// Periodic orbit of the spatially homogeneous model
    OdeReference(RunArgs),
}

#[derive(Args)]
struct RunArgs {
    #[arg(long)]
    config: PathBuf,
    /// Replace a config entry, e.g. `--override d=1`
    #[arg(long = "override", value_name = "KEY=VALUE")]
    overrides: Vec<String>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (analysis, args) = match cli.command {
        Command::Simulate(a) => (Analysis::Simulate, a),
        Command::Classify(a) => (Analysis::Classify, a),
        Command::Spectrum(a) => (Analysis::Spectrum, a),
        Command::CriticalLength(a) => (Analysis::CriticalLength, a),
        Command::Periodic(a) => (Analysis::Periodic, a),
        Command::ProfileStudy(a) => (Analysis::ProfileStudy, a),
        Command::OdeReference(a) => (Analysis::OdeReference, a),
    };
    let cfg = match load_config(&args.config, &args.overrides) {
        Ok(cfg) => cfg,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    let summary = run_scenario(&cfg, analysis);
    print!("{}", summary.to_text());
    match summary.status {
        RunStatus::Ok => ExitCode::SUCCESS,
        RunStatus::Failed(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(3)
        }
    }
}
