use super::AnalysisError;
use crate::scalar::Real;
use crate::solver::{xvec_channel_name, MonitorSeries};

pub const SPREAD_RATIO: f64 = 1.1;
pub const TAIL_FRACTION: f64 = 0.1;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PropertyVerdict {
    /// Uniform dissipative bound for `t ≥ η`.
    Dissipative,
    /// Common asymptotic bound only.
    Asymptotic,
    /// Global bound depending monotonically on the initial data.
    DataDependent,
    Inconclusive,
    BlowUp,
}

#[derive(Debug, Clone, Copy)]
pub struct EnsembleRun<'a, T> {
    pub monitors: &'a MonitorSeries<T>,
    pub blown_up: bool,
}

/// Classifies an ensemble from its `xvec[r]` and `xinf` channels. Checks in
/// order: any blow-up; max/min spread ≤ 1.1 for all `t ≥ η`; spread ≤ 1.1
/// over the final 10% of the horizon; suprema ordered like the initial
/// `X^∞` norms.
pub fn property_p_classify<T: Real>(runs: &[EnsembleRun<'_, T>], r: &[T], eta: T) -> Result<PropertyVerdict, AnalysisError> {
    if runs.iter().any(|run| run.blown_up) {
        return Ok(PropertyVerdict::BlowUp);
    }
    if runs.len() < 3 {
        return Err(AnalysisError::Input(format!("ensemble of {} runs; at least 3 required", runs.len())));
    }
    let grid = runs[0].monitors.times();
    if grid.is_empty() || runs.iter().any(|run| run.monitors.times() != grid) {
        return Err(AnalysisError::Input("ensemble members do not share a time grid".into()));
    }
    let name = xvec_channel_name(r);
    let channel = |run: &EnsembleRun<'_, T>, ch: &str| -> Result<Vec<T>, AnalysisError> {
        run.monitors
            .channel(ch)
            .map(|c| c.to_vec())
            .ok_or_else(|| AnalysisError::Input(format!("missing channel `{}`", ch)))
    };
    let norms: Vec<Vec<T>> = runs.iter().map(|run| channel(run, &name)).collect::<Result<_, _>>()?;
    let initial: Vec<T> = runs
        .iter()
        .map(|run| channel(run, "xinf").map(|c| c[0]))
        .collect::<Result<_, _>>()?;
    let (imin, imax) = min_max(initial.iter().copied());
    if !(imax >= T::lit(100.0) * imin) {
        return Err(AnalysisError::Input(format!(
            "initial X^∞ norms span [{}, {}], less than two decades",
            imin, imax
        )));
    }

    let limit = T::lit(SPREAD_RATIO);
    let spread_ok = |keep: &dyn Fn(T) -> bool| -> bool {
        let mut any = false;
        for (k, &t) in grid.iter().enumerate() {
            if !keep(t) {
                continue;
            }
            any = true;
            let (lo, hi) = min_max(norms.iter().map(|c| c[k]));
            if !(hi <= limit * lo) {
                return false;
            }
        }
        any
    };
    if spread_ok(&|t| t >= eta) {
        return Ok(PropertyVerdict::Dissipative);
    }
    let horizon = *grid.last().unwrap();
    let tail_start = horizon * (T::one() - T::lit(TAIL_FRACTION));
    if spread_ok(&|t| t >= tail_start) {
        return Ok(PropertyVerdict::Asymptotic);
    }
    let mut order: Vec<usize> = (0..runs.len()).collect();
    order.sort_by(|&a, &b| initial[a].partial_cmp(&initial[b]).unwrap_or(std::cmp::Ordering::Equal));
    let sups: Vec<T> = order
        .iter()
        .map(|&k| norms[k].iter().fold(T::neg_infinity(), |m, &v| m.max(v)))
        .collect();
    if sups.iter().all(|s| s.is_finite()) && sups.windows(2).all(|w| w[1] >= w[0]) {
        return Ok(PropertyVerdict::DataDependent);
    }
    Ok(PropertyVerdict::Inconclusive)
}

fn min_max<T: Real>(it: impl Iterator<Item = T>) -> (T, T) {
    it.fold((T::infinity(), T::neg_infinity()), |(lo, hi), v| (lo.min(v), hi.max(v)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn series(f: impl Fn(f64) -> f64, initial: f64) -> MonitorSeries<f64> {
        let t: Vec<f64> = (0..=100).map(|k| k as f64 * 0.05).collect();
        let x: Vec<f64> = t.iter().map(|&t| f(t)).collect();
        let mut xinf = x.clone();
        xinf[0] = initial;
        MonitorSeries::from_columns(t, vec!["xinf".into(), xvec_channel_name(&[2.0])], vec![xinf, x]).unwrap()
    }

    fn classify(members: &[MonitorSeries<f64>], eta: f64) -> PropertyVerdict {
        let runs: Vec<_> = members.iter().map(|m| EnsembleRun { monitors: m, blown_up: false }).collect();
        property_p_classify(&runs, &[2.0], eta).unwrap()
    }

    #[test]
    fn collapsing_ensemble_is_dissipative() {
        let m: Vec<_> = [1.0, 10.0, 100.0].iter().map(|&s| series(move |t| s * (-5.0 * t).exp() + 1.0, s)).collect();
        // spread at t = 1 is (1 + 100e⁻⁵)/(1 + e⁻⁵) ≈ 1.66, inside 1.1 from t ≈ 1.4
        assert_eq!(classify(&m, 1.0), PropertyVerdict::Asymptotic);
        assert_eq!(classify(&m, 1.5), PropertyVerdict::Dissipative);
    }

    #[test]
    fn late_collapse_is_asymptotic() {
        let m: Vec<_> = [1.0, 10.0, 100.0]
            .iter()
            .map(|&s| series(move |t| 1.0 + s / (1.0 + t.powi(6)), s))
            .collect();
        assert_eq!(classify(&m, 1.0), PropertyVerdict::Asymptotic);
    }

    #[test]
    fn persistent_spread_is_data_dependent() {
        let m: Vec<_> = [1.0, 10.0, 100.0].iter().map(|&s| series(move |_| s, s)).collect();
        assert_eq!(classify(&m, 1.0), PropertyVerdict::DataDependent);
    }

    #[test]
    fn blow_up_wins() {
        let m = series(|t| t, 1.0);
        let runs = [EnsembleRun { monitors: &m, blown_up: true }];
        assert_eq!(property_p_classify(&runs, &[2.0], 1.0).unwrap(), PropertyVerdict::BlowUp);
    }

    #[test]
    fn narrow_initial_span_rejected() {
        let m: Vec<_> = [1.0, 2.0, 3.0].iter().map(|&s| series(move |_| s, s)).collect();
        let runs: Vec<_> = m.iter().map(|m| EnsembleRun { monitors: m, blown_up: false }).collect();
        assert!(property_p_classify(&runs, &[2.0], 1.0).is_err());
    }
}
