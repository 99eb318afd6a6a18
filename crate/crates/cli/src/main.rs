use clap::Parser;
use std::path::PathBuf;
use wentzell_cli::{invoke, Invocation};

/// Simulate, analyse and sweep scenarios with dynamic boundary conditions.
///
/// Exit codes: 0 completed or verdict holds, 2 blow-up detected,
/// 3 invalid input, 4 verdict fails.
#[derive(Debug, Parser)]
#[command(name = "wentzell", version)]
struct Args {
    /// Scenario document (TOML, schema version 1).
    #[arg(long)]
    scenario: PathBuf,
    /// Output directory, created if missing.
    #[arg(long, default_value = "wentzell-out")]
    out: PathBuf,
    /// One of run, spectrum, diagnose, waves, sweep.
    #[arg(long, default_value = "run")]
    command: String,
    /// Sweep axis KEY=v1,v2,...; repeat for a Cartesian grid.
    #[arg(long)]
    sweep: Vec<String>,
    /// Overrides the solver snapshot cadence.
    #[arg(long)]
    snapshot_cadence: Option<f64>,
    /// Seed for randomized diagnostics.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Omit the wall-clock line from summaries.
    #[arg(long)]
    no_metadata: bool,
}

fn main() {
    let args = match Args::try_parse() {
        Ok(a) => a,
        Err(e) => {
            let _ = e.print();
            std::process::exit(if e.use_stderr() { 3 } else { 0 });
        }
    };
    let inv = Invocation {
        scenario: args.scenario,
        out: args.out,
        command: args.command,
        sweep: args.sweep,
        snapshot_cadence: args.snapshot_cadence,
        seed: args.seed,
        metadata: !args.no_metadata,
    };
    let code = match invoke(&inv) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            3
        }
    };
    std::process::exit(code);
}
