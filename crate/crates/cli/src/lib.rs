//! Scenario files, commands and sweeps for `wentzell-core`.

pub mod commands;
pub mod convert;
pub mod output;
pub mod schema;
pub mod sweep;

use anyhow::{anyhow, Context, Result};
use std::fs;
use std::path::PathBuf;

use commands::{execute, Command};
use output::write_summary;

/// Parsed command-line request.
#[derive(Debug, Clone)]
pub struct Invocation {
    pub scenario: PathBuf,
    pub out: PathBuf,
    pub command: String,
    pub sweep: Vec<String>,
    pub snapshot_cadence: Option<f64>,
    pub seed: u64,
    pub metadata: bool,
}

/// Executes the request and returns the process exit code. Invalid input
/// and unwritable outputs are errors (exit 3 in the binary).
pub fn invoke(inv: &Invocation) -> Result<i32> {
    let text = fs::read_to_string(&inv.scenario).with_context(|| format!("cannot read {}", inv.scenario.display()))?;
    let command = Command::parse(&inv.command)?;
    // full parse first so schema errors carry line numbers
    convert::parse_document(&text)?;
    let mut table: toml::Table = toml::from_str(&text).map_err(|e| anyhow!("scenario: {e}"))?;
    if let Some(c) = inv.snapshot_cadence {
        sweep::set_path(&mut table, "solver.snapshot_cadence", toml::Value::Float(c))?;
    }
    let doc = convert::document_from_table(table.clone())?;
    fs::create_dir_all(&inv.out).with_context(|| format!("cannot create {}", inv.out.display()))?;

    let mut axes = sweep::document_axes(&doc.sweep.grid)?;
    for spec in &inv.sweep {
        axes.push(sweep::parse_axis(spec)?);
    }
    if command == Command::Sweep || !inv.sweep.is_empty() {
        let member = if command == Command::Sweep {
            sweep::member_command(doc.sweep.command.as_deref(), &axes)?
        } else {
            command
        };
        let (code, summary) = sweep::execute_sweep(&table, member, &axes, &inv.out, inv.seed, inv.metadata)?;
        write_summary(&inv.out.join("summary.toml"), &summary.0, inv.metadata)?;
        return Ok(code);
    }
    let report = execute(command, &doc, &inv.out, inv.seed)?;
    write_summary(&inv.out.join("summary.toml"), &report.summary.0, inv.metadata)?;
    Ok(report.outcome.exit_code())
}
