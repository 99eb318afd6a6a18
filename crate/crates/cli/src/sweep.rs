//! Parameter sweeps: Cartesian grids of document overrides, run
//! concurrently and merged in key order.

use anyhow::{anyhow, bail, Result};
use rayon::prelude::*;
use std::fs;
use std::path::Path;

use crate::commands::{execute, Command, Outcome};
use crate::convert::document_from_table;
use crate::output::{write_summary, Table};

/// Short names for the common sweep parameters.
pub fn resolve_key(key: &str) -> &str {
    match key {
        "nu" => "spectrum.nu",
        "epsilon" => "solver.epsilon",
        "scale" => "initial_scale",
        other => other,
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Axis {
    pub key: String,
    pub values: Vec<toml::Value>,
}

fn scalar(text: &str) -> toml::Value {
    let text = text.trim();
    if let Ok(i) = text.parse::<i64>() {
        toml::Value::Integer(i)
    } else if let Ok(f) = text.parse::<f64>() {
        toml::Value::Float(f)
    } else {
        toml::Value::String(text.to_string())
    }
}

/// Parses `KEY=v1,v2,...`.
pub fn parse_axis(spec: &str) -> Result<Axis> {
    let (key, values) = spec.split_once('=').ok_or_else(|| anyhow!("--sweep `{spec}`: expected KEY=v1,v2,..."))?;
    let key = key.trim();
    if key.is_empty() {
        bail!("--sweep `{spec}`: empty key");
    }
    let values: Vec<toml::Value> = values.split(',').filter(|v| !v.trim().is_empty()).map(scalar).collect();
    if values.is_empty() {
        bail!("--sweep `{spec}`: no values");
    }
    Ok(Axis { key: key.to_string(), values })
}

/// Axes declared in the document's `[sweep.grid]` table.
pub fn document_axes(grid: &toml::Table) -> Result<Vec<Axis>> {
    grid.iter()
        .map(|(key, v)| match v {
            toml::Value::Array(values) if !values.is_empty() => Ok(Axis { key: key.clone(), values: values.clone() }),
            _ => bail!("sweep.grid.{key}: expected a nonempty array"),
        })
        .collect()
}

/// Sets a dotted path; numeric segments index arrays from 1.
pub fn set_path(table: &mut toml::Table, path: &str, value: toml::Value) -> Result<()> {
    let parts: Vec<&str> = path.split('.').collect();
    let mut node = table
        .entry(parts[0].to_string())
        .or_insert_with(|| if parts.len() == 1 { value.clone() } else { toml::Value::Table(toml::Table::new()) });
    for (depth, part) in parts.iter().enumerate().skip(1) {
        node = match node {
            toml::Value::Table(t) => t.entry(part.to_string()).or_insert_with(|| toml::Value::Table(toml::Table::new())),
            toml::Value::Array(a) => {
                let k: usize = part.parse().map_err(|_| anyhow!("sweep key `{path}`: `{part}` is not an array index"))?;
                if k == 0 || k > a.len() {
                    bail!("sweep key `{path}`: index {k} outside 1..={}", a.len());
                }
                &mut a[k - 1]
            }
            _ => bail!("sweep key `{path}`: `{}` is not a table or array", parts[..depth].join(".")),
        };
    }
    *node = value;
    Ok(())
}

fn label(v: &toml::Value) -> String {
    match v {
        toml::Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

fn order(a: &toml::Value, b: &toml::Value) -> std::cmp::Ordering {
    let as_f = |v: &toml::Value| v.as_float().or_else(|| v.as_integer().map(|i| i as f64));
    match (as_f(a), as_f(b)) {
        (Some(x), Some(y)) => x.total_cmp(&y),
        _ => label(a).cmp(&label(b)),
    }
}

/// Base command of the members: the explicit one, else `spectrum` when an
/// axis touches the spectrum table, else `run`.
pub fn member_command(explicit: Option<&str>, axes: &[Axis]) -> Result<Command> {
    if let Some(name) = explicit {
        let c = Command::parse(name)?;
        if c == Command::Sweep {
            bail!("sweep.command: members cannot be sweeps");
        }
        return Ok(c);
    }
    Ok(if axes.iter().any(|a| resolve_key(&a.key).starts_with("spectrum.")) { Command::Spectrum } else { Command::Run })
}

struct Member {
    key: String,
    overrides: Vec<(String, toml::Value)>,
}

fn members(axes: &[Axis]) -> Vec<Member> {
    let mut combos: Vec<Vec<toml::Value>> = vec![Vec::new()];
    for axis in axes {
        let mut values = axis.values.clone();
        values.sort_by(order);
        values.dedup();
        combos = combos
            .into_iter()
            .flat_map(|c| values.iter().map(move |v| {
                let mut next = c.clone();
                next.push(v.clone());
                next
            }))
            .collect();
    }
    combos
        .into_iter()
        .map(|values| Member {
            key: axes.iter().zip(&values).map(|(a, v)| format!("{}={}", a.key, label(v))).collect::<Vec<_>>().join("_"),
            overrides: axes.iter().zip(values).map(|(a, v)| (resolve_key(&a.key).to_string(), v)).collect(),
        })
        .collect()
}

/// Runs every member into `out/<key>/` and returns the merged summary and
/// the combined outcome: 3 if a member had invalid input, else the worst of
/// verdict failure (4), blow-up (2) and success (0).
pub fn execute_sweep(base: &toml::Table, command: Command, axes: &[Axis], out: &Path, seed: u64, metadata: bool) -> Result<(i32, Table)> {
    if axes.is_empty() {
        bail!("sweep: no axes (use --sweep KEY=v1,v2,... or [sweep.grid])");
    }
    let members = members(axes);
    let results: Vec<(String, Result<(Outcome, Table)>)> = members
        .par_iter()
        .map(|m| {
            let run = || -> Result<(Outcome, Table)> {
                let mut table = base.clone();
                for (path, v) in &m.overrides {
                    set_path(&mut table, path, v.clone())?;
                }
                let doc = document_from_table(table)?;
                let dir = out.join(&m.key);
                fs::create_dir_all(&dir).map_err(|e| anyhow!("cannot create {}: {e}", dir.display()))?;
                let report = execute(command, &doc, &dir, seed)?;
                write_summary(&dir.join("summary.toml"), &report.summary.0, metadata)?;
                Ok((report.outcome, report.summary))
            };
            (m.key.clone(), run())
        })
        .collect();
    let mut invalid = false;
    let mut worst = Outcome::Success;
    let mut tables = Vec::new();
    for (key, result) in results {
        let mut t = Table::new();
        t.set("key", key.as_str()).set("dir", key.as_str());
        match result {
            Ok((outcome, summary)) => {
                worst = worst.max(outcome);
                t.set("outcome", outcome.label()).set("exit_code", outcome.exit_code() as i64).child("summary", summary);
            }
            Err(e) => {
                invalid = true;
                t.set("outcome", "invalid_input").set("exit_code", 3).set("error", format!("{e:#}"));
            }
        }
        tables.push(t);
    }
    let mut summary = Table::new();
    summary
        .set("command", "sweep")
        .set("member_command", command.name())
        .set("axes", axes.iter().map(|a| toml::Value::String(a.key.clone())).collect::<Vec<_>>())
        .list("member", tables);
    let code = if invalid { 3 } else { worst.exit_code() };
    summary.set("exit_code", code as i64);
    Ok((code, summary))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn axis_parsing() {
        let a = parse_axis("nu=1,0.5,0.25").unwrap();
        assert_eq!(a.key, "nu");
        assert_eq!(a.values, vec![toml::Value::Integer(1), toml::Value::Float(0.5), toml::Value::Float(0.25)]);
        assert!(parse_axis("nu").is_err());
        assert!(parse_axis("nu=").is_err());
    }

    #[test]
    fn members_are_sorted_and_keyed() {
        let axes = vec![parse_axis("nu=1,0.25,0.5").unwrap(), parse_axis("scale=10,1").unwrap()];
        let keys: Vec<String> = members(&axes).into_iter().map(|m| m.key).collect();
        assert_eq!(keys[0], "nu=0.25_scale=1");
        assert_eq!(keys[5], "nu=1_scale=10");
        assert_eq!(keys.len(), 6);
    }

    #[test]
    fn dotted_paths() {
        let mut t: toml::Table = toml::from_str("[[field]]\nf = \"0\"\n[[field]]\nf = \"u1\"").unwrap();
        set_path(&mut t, "field.2.f", "u2".into()).unwrap();
        set_path(&mut t, "spectrum.nu", toml::Value::Float(0.5)).unwrap();
        set_path(&mut t, "initial_scale", toml::Value::Integer(3)).unwrap();
        assert_eq!(t["field"][1]["f"].as_str(), Some("u2"));
        assert_eq!(t["spectrum"]["nu"].as_float(), Some(0.5));
        assert_eq!(t["initial_scale"].as_integer(), Some(3));
        assert!(set_path(&mut t, "field.3.f", "u".into()).is_err());
        assert!(set_path(&mut t, "initial_scale.x", "u".into()).is_err());
    }

    #[test]
    fn inferred_member_command() {
        let nu = vec![parse_axis("nu=1").unwrap()];
        assert_eq!(member_command(None, &nu).unwrap(), Command::Spectrum);
        let eps = vec![parse_axis("epsilon=1e-3").unwrap()];
        assert_eq!(member_command(None, &eps).unwrap(), Command::Run);
        assert_eq!(member_command(Some("diagnose"), &eps).unwrap(), Command::Diagnose);
        assert!(member_command(Some("sweep"), &eps).is_err());
    }
}
