//! CSV and summary writers. Numbers use Rust's shortest round-trip
//! formatting, so repeated runs produce identical bytes.

use anyhow::{Context, Result};
use std::fmt::Write as _;
use std::fs;
use std::path::Path;
use wentzell_core::solver::MonitorSeries;

pub fn num(v: f64) -> String {
    if v.is_nan() {
        "nan".into()
    } else if v.is_infinite() {
        if v > 0.0 { "inf".into() } else { "-inf".into() }
    } else {
        format!("{v:e}")
    }
}

pub fn write_csv(path: &Path, header: &[String], rows: &[Vec<String>]) -> Result<()> {
    let mut text = header.join(",");
    text.push('\n');
    for row in rows {
        text.push_str(&row.join(","));
        text.push('\n');
    }
    fs::write(path, text).with_context(|| format!("cannot write {}", path.display()))
}

/// Unit of a monitor channel, shown in the CSV header.
pub fn channel_unit(name: &str) -> &'static str {
    if name == "dt" {
        "time"
    } else if name.ends_with("mass") || name == "mass_total" {
        "state*measure"
    } else if name == "energy" {
        "state^m"
    } else {
        "state"
    }
}

pub fn write_monitors(path: &Path, series: &MonitorSeries<f64>) -> Result<()> {
    let mut header = vec!["t [time]".to_string()];
    header.extend(series.names().iter().map(|n| format!("{n} [{}]", channel_unit(n))));
    let rows: Vec<Vec<String>> = series
        .times()
        .iter()
        .enumerate()
        .map(|(k, &t)| {
            let mut row = vec![num(t)];
            row.extend(series.columns().iter().map(|c| num(c[k])));
            row
        })
        .collect();
    write_csv(path, &header, &rows)
}

/// Serializes the summary table. The optional first line is the only place
/// a wall-clock value may appear.
pub fn write_summary(path: &Path, summary: &toml::Table, metadata: bool) -> Result<()> {
    let mut text = String::new();
    if metadata {
        let secs = std::time::SystemTime::now()
            .duration_since(std::time::UNIX_EPOCH)
            .map(|d| d.as_secs())
            .unwrap_or(0);
        let _ = writeln!(text, "# wentzell {}, written at unix time {secs}", env!("CARGO_PKG_VERSION"));
    }
    text.push_str(&toml::to_string(summary).context("summary serialization")?);
    fs::write(path, text).with_context(|| format!("cannot write {}", path.display()))
}

/// Builder for summary tables.
#[derive(Debug, Default, Clone)]
pub struct Table(pub toml::Table);

impl Table {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn set(&mut self, key: &str, value: impl Into<toml::Value>) -> &mut Self {
        self.0.insert(key.to_string(), value.into());
        self
    }

    pub fn floats(&mut self, key: &str, values: &[f64]) -> &mut Self {
        self.set(key, values.iter().map(|&v| toml::Value::Float(v)).collect::<Vec<_>>())
    }

    pub fn child(&mut self, key: &str, table: Table) -> &mut Self {
        self.set(key, toml::Value::Table(table.0))
    }

    pub fn list(&mut self, key: &str, tables: Vec<Table>) -> &mut Self {
        self.set(key, tables.into_iter().map(|t| toml::Value::Table(t.0)).collect::<Vec<_>>())
    }
}

/// Initial, final, minimum and maximum of each monitor channel.
pub fn channel_summary(series: &MonitorSeries<f64>) -> Vec<Table> {
    series
        .names()
        .iter()
        .zip(series.columns())
        .map(|(name, col)| {
            let mut t = Table::new();
            t.set("name", name.as_str());
            if let (Some(&first), Some(&last)) = (col.first(), col.last()) {
                t.set("initial", first).set("final", last);
                t.set("min", col.iter().copied().fold(f64::INFINITY, f64::min));
                t.set("max", col.iter().copied().fold(f64::NEG_INFINITY, f64::max));
            }
            t
        })
        .collect()
}
