//! Single steps and full runs with monitors, snapshots and blow-up detection.

use super::blowup::dt_underflow_status;
use super::config::Scheme;
use super::system::System;
use super::trajectory::{MonitorSeries, RunStatus, Trajectory};
use crate::analysis::energy::{energy_functional, l1_mu};
use crate::analysis::norms::{bulk_norm, sup_norm, trace_norm, xvec_norm};
use crate::domain::{total_mass, FieldState, FieldValues};
use crate::model::Scenario;
use crate::scalar::Real;

/// Name of the monitor channel for product-space exponents `r`.
pub fn xvec_channel_name<T: Real>(r: &[T]) -> String {
    let parts: Vec<String> = r.iter().map(|v| format!("{}", v.to_f64_lossy())).collect();
    format!("xvec[{}]", parts.join(";"))
}

/// Advances states of one scenario by single steps.
pub struct Stepper<'a, T> {
    system: System<'a, T>,
    scheme: Scheme,
}

impl<'a, T: Real> Stepper<'a, T> {
    pub fn new(scenario: &'a Scenario<T>) -> Result<Self, String> {
        scenario.validate().map_err(|e| e.to_string())?;
        Ok(Self { system: System::new(scenario), scheme: scenario.solver.scheme })
    }

    /// Working unknowns: bulk values with boundary nodes taken from the trace.
    fn unknowns(&self, state: &FieldState<T>) -> Vec<Vec<T>> {
        state
            .fields
            .iter()
            .map(|f| {
                let mut u = f.bulk.clone();
                for (slot, b) in self.system.mesh.boundary().iter().enumerate() {
                    u[b.node] = f.trace[slot];
                }
                u
            })
            .collect()
    }

    fn advance(&self, u: &[Vec<T>], t: T, dt: T) -> Result<Vec<Vec<T>>, String> {
        let next = match self.scheme {
            Scheme::ExplicitHeun => self.system.heun(u, t, dt)?,
            Scheme::BackwardEuler => self.system.backward_euler(u, t + dt, dt)?,
        };
        if next.iter().flatten().any(|v| !v.is_finite()) {
            return Err("non-finite value produced".into());
        }
        Ok(next)
    }

    fn to_state(&self, u: Vec<Vec<T>>, t: T) -> FieldState<T> {
        let mesh = self.system.mesh;
        FieldState::new(t, u.into_iter().map(|b| FieldValues::from_bulk(mesh, b)).collect())
    }

    /// One step of size `dt` from `state`.
    pub fn step(&self, state: &FieldState<T>, dt: T) -> Result<FieldState<T>, String> {
        let cfg = &self.system.scenario.solver;
        if !(dt >= cfg.min_dt) || !state.is_finite() {
            return Err("step size below minimum or non-finite state".into());
        }
        let u = self.unknowns(state);
        let next = self.advance(&u, state.t, dt)?;
        Ok(self.to_state(next, state.t + dt))
    }

    /// Largest explicit step permitted by the stability limits at `state`.
    pub fn stable_dt(&self, state: &FieldState<T>) -> T {
        self.system.stable_dt(&self.unknowns(state))
    }
}

/// One step of `scenario` from `state`.
pub fn step<T: Real>(state: &FieldState<T>, scenario: &Scenario<T>, dt: T) -> Result<FieldState<T>, String> {
    Stepper::new(scenario)?.step(state, dt)
}

struct Monitor<'s, 'a, T> {
    system: &'s System<'a, T>,
    porosity: Vec<T>,
    betas: Vec<Vec<T>>,
    deltas: Vec<T>,
    energy_weight: Option<FieldValues<T>>,
}

impl<'s, 'a, T: Real> Monitor<'s, 'a, T> {
    fn new(system: &'s System<'a, T>) -> Self {
        let sc = system.scenario;
        let energy_weight = sc.monitors.energy.as_ref().and_then(|e| e.weight.clone()).map(|w| {
            let n = l1_mu(&w, system.mesh);
            FieldValues::new(w.bulk.iter().map(|v| *v / n).collect(), w.trace.iter().map(|v| *v / n).collect())
        });
        Self {
            porosity: system.porosity(),
            betas: (0..system.m).map(|i| system.mass_beta(i)).collect(),
            deltas: (0..system.m).map(|i| system.norm_delta(i)).collect(),
            energy_weight,
            system,
        }
    }

    fn names(&self) -> Vec<String> {
        let sc = self.system.scenario;
        let mut names = vec!["xinf".to_string(), "dt".to_string(), "mass_total".to_string()];
        for k in 1..=self.system.m {
            for c in ["mass", "bulk_l1", "bulk_l2", "bulk_linf", "trace_l1", "trace_l2", "trace_linf"] {
                names.push(format!("u{k}_{c}"));
            }
        }
        names.extend(sc.monitors.xvec.iter().map(|r| xvec_channel_name(r)));
        if sc.monitors.energy.is_some() {
            names.push("energy".into());
        }
        names
    }

    fn row(&self, state: &FieldState<T>, dt: T) -> Vec<T> {
        let sc = self.system.scenario;
        let mesh = self.system.mesh;
        let (one, two, inf) = (T::one(), T::lit(2.0), T::infinity());
        let mut per_field = Vec::new();
        let mut mass_total = T::zero();
        for (i, f) in state.fields.iter().enumerate() {
            let mass = total_mass(f, mesh, &self.porosity, &self.betas[i]).unwrap_or_else(|_| T::nan());
            mass_total += mass;
            per_field.push(mass);
            for s in [one, two, inf] {
                per_field.push(bulk_norm(f, mesh, s).unwrap_or_else(|_| T::nan()));
            }
            for s in [one, two, inf] {
                per_field.push(trace_norm(f, mesh, s).unwrap_or_else(|_| T::nan()));
            }
        }
        let mut row = vec![sup_norm(&state.fields), dt, mass_total];
        row.extend(per_field);
        let partition = sc.partition();
        for r in &sc.monitors.xvec {
            row.push(xvec_norm(&state.fields, mesh, r, &self.deltas, &partition).unwrap_or_else(|_| T::nan()));
        }
        if let Some(e) = &sc.monitors.energy {
            let v = energy_functional(&state.fields, mesh, &e.exponents, self.energy_weight.as_ref(), false);
            row.push(v.unwrap_or_else(|_| T::nan()));
        }
        row
    }
}

/// Integrates `scenario` to its horizon. Errors end the run with a status
/// instead of panicking.
pub fn run<T: Real>(scenario: &Scenario<T>) -> Trajectory<T> {
    let init = scenario.initial_state();
    let stepper = match Stepper::new(scenario) {
        Ok(s) => s,
        Err(reason) => {
            return Trajectory {
                snapshots: vec![init],
                monitors: MonitorSeries::new(Vec::new()),
                status: RunStatus::StepFailure { t: T::zero(), reason },
            }
        }
    };
    let system = &stepper.system;
    let cfg = &scenario.solver;
    let horizon = scenario.horizon;
    let cadence = cfg.cadence(horizon);
    let max_dt = cfg.max_dt(horizon);
    let monitor = Monitor::new(system);
    let mut monitors = MonitorSeries::new(monitor.names());
    monitors.push(T::zero(), &monitor.row(&init, T::zero()));
    let mut norm = sup_norm(&init.fields);
    let mut snapshots = vec![init.clone()];
    let mut status = RunStatus::Completed;
    if norm >= cfg.blowup_threshold {
        return Trajectory { snapshots, monitors, status: RunStatus::BlowUp { t: T::zero(), norm } };
    }

    let mut u = stepper.unknowns(&init);
    let mut t = T::zero();
    let mut k_snap = 1usize;
    let mut implicit_dt = max_dt;
    let slack = horizon * T::lit(1e-12);
    let mut prev_norm = norm;
    while t < horizon - slack {
        let target = (cadence * T::from_usize_lossy(k_snap)).min(horizon);
        let mut dt = match cfg.scheme {
            Scheme::ExplicitHeun => system.stable_dt(&u).min(max_dt),
            Scheme::BackwardEuler => implicit_dt,
        };
        let mut hits = false;
        if t + dt >= target - slack {
            dt = target - t;
            hits = true;
        }
        if dt < cfg.min_dt && !hits {
            status = dt_underflow_status(t, dt, prev_norm, norm);
            break;
        }
        let mut result = stepper.advance(&u, t, dt);
        if cfg.scheme == Scheme::BackwardEuler {
            while result.is_err() && dt / T::lit(2.0) >= cfg.min_dt {
                dt /= T::lit(2.0);
                hits = false;
                result = stepper.advance(&u, t, dt);
            }
            implicit_dt = (dt * T::lit(2.0)).min(max_dt);
        }
        u = match result {
            Ok(v) => v,
            Err(reason) => {
                status = RunStatus::StepFailure { t, reason };
                break;
            }
        };
        t = if hits { target } else { t + dt };
        let state = stepper.to_state(u.clone(), t);
        prev_norm = norm;
        norm = sup_norm(&state.fields);
        monitors.push(t, &monitor.row(&state, dt));
        let blown = norm >= cfg.blowup_threshold;
        if hits {
            k_snap += 1;
        }
        if hits || blown || t >= horizon - slack {
            snapshots.push(state);
        }
        if blown {
            status = RunStatus::BlowUp { t, norm };
            break;
        }
    }
    Trajectory { snapshots, monitors, status }
}
