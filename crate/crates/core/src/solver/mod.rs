//! Time integration in flux form with dynamic boundary nodes.

pub mod blowup;
pub mod config;
pub mod run;
mod system;
pub mod trajectory;

pub use blowup::{detect_blowup, dt_underflow_status};
pub use config::{EnergyMonitor, MonitorConfig, Scheme, SolverConfig};
pub use run::{run, step, xvec_channel_name, Stepper};
pub use trajectory::{MonitorSeries, RunStatus, Trajectory};
