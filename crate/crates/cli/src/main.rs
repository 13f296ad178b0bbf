use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand};
use slitpath::fixtures::load_fixture;
use slitpath::run::{run, Channel, RunOptions};
use slitpath::scenario::parse_scenario;

#[derive(Parser)]
#[command(name = "slitpath", version, about = "One- and two-slit intensity scans from the free-particle propagator")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate a scenario and write its CSV, JSON and plot files.
    Scan(ScanArgs),
    /// Print a shipped fixture as a scenario file.
    Show {
        fixture: String,
    },
}

#[derive(Args)]
struct ScanArgs {
    /// Shipped parameter set (fig3a … fig4d).
    #[arg(long, conflicts_with = "config", required_unless_present = "config")]
    fixture: Option<String>,
    /// Scenario file in TOML.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output directory.
    #[arg(long, default_value = "out")]
    out: PathBuf,
    /// Intensity columns to write.
    #[arg(long, value_enum, value_delimiter = ',')]
    channels: Option<Vec<Channel>>,
    /// Compare the closed form with direct quadrature at fixed probe points.
    #[arg(long)]
    oracle_check: bool,
    /// Worker threads for grid evaluation.
    #[arg(long)]
    threads: Option<usize>,
}

fn main() -> ExitCode {
    match execute(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}

fn execute(cli: Cli) -> Result<ExitCode> {
    match cli.command {
        Command::Show { fixture } => {
            print!("{}", load_fixture(&fixture)?.emit());
            Ok(ExitCode::SUCCESS)
        }
        Command::Scan(args) => scan(args),
    }
}

fn scan(args: ScanArgs) -> Result<ExitCode> {
    let scenario = match (&args.fixture, &args.config) {
        (Some(name), _) => load_fixture(name)?,
        (None, Some(path)) => {
            let text = std::fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
            parse_scenario(&text).with_context(|| format!("in {}", path.display()))?
        }
        (None, None) => unreachable!("clap requires one of --fixture and --config"),
    };
    let options = RunOptions { channels: args.channels, oracle_check: args.oracle_check, threads: args.threads };
    let rendered = run(&scenario, &options, &args.out)?;
    for a in &rendered.artifacts {
        println!("wrote {}", args.out.join(a.file_name).display());
    }
    if let Some(o) = &rendered.oracle {
        println!(
            "oracle check: max relative deviation {:.3e} over {} probes (tolerance {:e})",
            o.max_relative_deviation,
            o.probes.len(),
            o.tolerance
        );
        if !o.within_tolerance {
            eprintln!("error: oracle check exceeded its tolerance");
            return Ok(ExitCode::FAILURE);
        }
    }
    Ok(ExitCode::SUCCESS)
}
