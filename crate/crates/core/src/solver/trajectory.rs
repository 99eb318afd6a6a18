//! Run results: snapshots, monitor channels and termination status.

use crate::domain::FieldState;
use crate::scalar::Real;

/// Named scalar channels sampled on a shared time grid.
#[derive(Debug, Clone, PartialEq)]
pub struct MonitorSeries<T> {
    times: Vec<T>,
    names: Vec<String>,
    columns: Vec<Vec<T>>,
}

impl<T: Real> MonitorSeries<T> {
    pub fn new(names: Vec<String>) -> Self {
        let columns = vec![Vec::new(); names.len()];
        Self { times: Vec::new(), names, columns }
    }

    /// Builds a series from complete columns, checking that all lengths agree.
    pub fn from_columns(times: Vec<T>, names: Vec<String>, columns: Vec<Vec<T>>) -> Result<Self, String> {
        if names.len() != columns.len() {
            return Err("one name per column required".into());
        }
        if columns.iter().any(|c| c.len() != times.len()) {
            return Err("every column must match the time grid".into());
        }
        if times.windows(2).any(|w| !(w[1] > w[0])) {
            return Err("time grid must be strictly increasing".into());
        }
        Ok(Self { times, names, columns })
    }

    pub fn push(&mut self, t: T, row: &[T]) {
        assert_eq!(row.len(), self.names.len(), "monitor row width");
        self.times.push(t);
        for (c, v) in self.columns.iter_mut().zip(row) {
            c.push(*v);
        }
    }

    pub fn times(&self) -> &[T] {
        &self.times
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn channel(&self, name: &str) -> Option<&[T]> {
        self.names.iter().position(|n| n == name).map(|k| self.columns[k].as_slice())
    }

    pub fn columns(&self) -> &[Vec<T>] {
        &self.columns
    }

    /// Copy restricted to samples with `keep(t)` true.
    pub fn filter_times(&self, keep: impl Fn(T) -> bool) -> Self {
        let idx: Vec<usize> = (0..self.times.len()).filter(|&k| keep(self.times[k])).collect();
        Self {
            times: idx.iter().map(|&k| self.times[k]).collect(),
            names: self.names.clone(),
            columns: self.columns.iter().map(|c| idx.iter().map(|&k| c[k]).collect()).collect(),
        }
    }

    /// Rows whose time equals each entry of `grid` exactly.
    pub fn sample_at(&self, grid: &[T]) -> Result<Self, String> {
        let mut idx = Vec::with_capacity(grid.len());
        for &t in grid {
            match self.times.iter().position(|&s| s == t) {
                Some(k) => idx.push(k),
                None => return Err(format!("no monitor sample at t = {}", t)),
            }
        }
        Ok(Self {
            times: idx.iter().map(|&k| self.times[k]).collect(),
            names: self.names.clone(),
            columns: self.columns.iter().map(|c| idx.iter().map(|&k| c[k]).collect()).collect(),
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum RunStatus<T> {
    Completed,
    BlowUp { t: T, norm: T },
    StepFailure { t: T, reason: String },
}

impl<T> RunStatus<T> {
    pub fn is_completed(&self) -> bool {
        matches!(self, RunStatus::Completed)
    }

    pub fn is_blowup(&self) -> bool {
        matches!(self, RunStatus::BlowUp { .. })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory<T> {
    pub snapshots: Vec<FieldState<T>>,
    pub monitors: MonitorSeries<T>,
    pub status: RunStatus<T>,
}

impl<T: Real> Trajectory<T> {
    pub fn final_state(&self) -> &FieldState<T> {
        self.snapshots.last().expect("trajectory holds the initial snapshot")
    }

    pub fn snapshot_times(&self) -> Vec<T> {
        self.snapshots.iter().map(|s| s.t).collect()
    }

    /// Monitor rows at the snapshot times only.
    pub fn snapshot_monitors(&self) -> Result<MonitorSeries<T>, String> {
        self.monitors.sample_at(&self.snapshot_times())
    }
}
