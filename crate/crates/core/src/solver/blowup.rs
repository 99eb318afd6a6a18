//! Blow-up detection on an `X^∞` monitor series.

use super::trajectory::RunStatus;
use crate::scalar::Real;

/// `BlowUp` at the first sample whose norm reaches `threshold` (closed
/// threshold), otherwise `Completed`. Non-finite norms count as blow-up.
pub fn detect_blowup<T: Real>(times: &[T], norms: &[T], threshold: T) -> RunStatus<T> {
    for (&t, &n) in times.iter().zip(norms) {
        if !n.is_finite() || n >= threshold {
            return RunStatus::BlowUp { t, norm: n };
        }
    }
    RunStatus::Completed
}

/// Status when the adaptive step would drop below `min_dt`: blow-up if the
/// norm is still increasing, a step failure otherwise.
pub fn dt_underflow_status<T: Real>(t: T, dt: T, previous_norm: T, norm: T) -> RunStatus<T> {
    if norm > previous_norm {
        RunStatus::BlowUp { t, norm }
    } else {
        RunStatus::StepFailure { t, reason: format!("time step {} below minimum", dt.to_f64_lossy()) }
    }
}
