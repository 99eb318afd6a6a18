//! Solver and monitor configuration.

use crate::domain::FieldValues;
use crate::model::RegularizationMode;
use crate::scalar::Real;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Scheme {
    #[default]
    ExplicitHeun,
    BackwardEuler,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolverConfig<T> {
    pub scheme: Scheme,
    pub cfl: T,
    /// Regularisation parameter; `None` selects 1e-6 when some diffusion
    /// exponent is positive and 0 otherwise.
    pub epsilon: Option<T>,
    pub regularization: RegularizationMode,
    /// Largest step; `None` selects horizon / 100.
    pub max_dt: Option<T>,
    pub min_dt: T,
    /// Snapshot spacing; `None` selects horizon / 64.
    pub snapshot_cadence: Option<T>,
    pub blowup_threshold: T,
    pub newton_tol: T,
    pub newton_max_iter: usize,
}

impl<T: Real> Default for SolverConfig<T> {
    fn default() -> Self {
        Self {
            scheme: Scheme::ExplicitHeun,
            cfl: T::lit(0.4),
            epsilon: None,
            regularization: RegularizationMode::Additive,
            max_dt: None,
            min_dt: T::lit(1e-12),
            snapshot_cadence: None,
            blowup_threshold: T::lit(1e8),
            newton_tol: T::lit(1e-10),
            newton_max_iter: 50,
        }
    }
}

impl<T: Real> SolverConfig<T> {
    pub fn check(&self, horizon: T) -> Result<(), String> {
        if !(self.cfl > T::zero() && self.cfl < T::one()) {
            return Err("cfl must lie in (0, 1)".into());
        }
        if let Some(e) = self.epsilon {
            if !(e >= T::zero()) {
                return Err("epsilon must be nonnegative".into());
            }
        }
        if !(self.min_dt > T::zero()) || !(self.max_dt(horizon) > self.min_dt) {
            return Err("need 0 < min_dt < max_dt".into());
        }
        if let Some(c) = self.snapshot_cadence {
            if !(c > T::zero()) {
                return Err("snapshot cadence must be positive".into());
            }
        }
        if !(self.blowup_threshold > T::zero()) || !(self.newton_tol > T::zero()) || self.newton_max_iter == 0 {
            return Err("blow-up threshold, Newton tolerance and iteration cap must be positive".into());
        }
        Ok(())
    }

    pub fn max_dt(&self, horizon: T) -> T {
        self.max_dt.unwrap_or(horizon / T::lit(100.0))
    }

    pub fn cadence(&self, horizon: T) -> T {
        self.snapshot_cadence.unwrap_or(horizon / T::lit(64.0))
    }
}

/// Weighted energy `∫ Σᵢ |uᵢ|^{mᵢ}/mᵢ φ dμ` recorded as channel `energy`.
#[derive(Debug, Clone, PartialEq)]
pub struct EnergyMonitor<T> {
    pub exponents: Vec<T>,
    /// Weight on nodes and boundary nodes; uniform when absent. Normalised to
    /// unit `L¹(μ)` norm before use.
    pub weight: Option<FieldValues<T>>,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct MonitorConfig<T> {
    /// Each entry adds an `xvec[...]` channel with those per-field exponents.
    pub xvec: Vec<Vec<T>>,
    pub energy: Option<EnergyMonitor<T>>,
}
