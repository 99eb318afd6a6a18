use super::AnalysisError;
use crate::domain::{FieldState, Mesh, Region};
use crate::scalar::{abs_pow, Real};

pub const DEFAULT_LEVELS: usize = 10;
pub const CERTIFY_THRESHOLD: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq)]
pub struct DeGiorgiReport<T> {
    pub level: T,
    pub horizon: T,
    pub tau: T,
    pub delta: T,
    pub gamma: T,
    /// `k_n = L(2 − 2^{−n})`.
    pub levels: Vec<T>,
    /// `t_n`, with `t_0 = T − 2τ` and `t_n = t_{n−1} + τ/2^n`.
    pub times: Vec<T>,
    pub y: Vec<T>,
    /// Largest value of any field over the stored snapshots in `[T − τ, T]`.
    pub window_max: T,
    /// `Y_{n_max} ≤ 10⁻¹⁰` and no snapshot in `[T − τ, T]` exceeds `2L`.
    pub certified: bool,
    /// `2L` when certified.
    pub bound: Option<T>,
}

/// Level-set energies
/// `Y_n = (1/|Q_n|)(∬(u − k_n)_+^δ dx dt + ∬(u − k_n)_+^γ dS dt)` over
/// `I_n = [t_n, T]`, summed over fields, with trapezoid quadrature in space
/// and over the stored snapshots in time. `|Q_n| = |I_n|·|Ω|`.
#[allow(clippy::too_many_arguments)]
pub fn degiorgi_sequence<T: Real>(
    snapshots: &[FieldState<T>],
    mesh: &Mesh<T>,
    level: T,
    horizon: T,
    tau: T,
    delta: T,
    gamma: T,
    n_max: usize,
) -> Result<DeGiorgiReport<T>, AnalysisError> {
    let two = T::lit(2.0);
    let t0 = horizon - two * tau;
    if !(tau > T::zero()) || !(t0 > T::zero()) {
        return Err(AnalysisError::Input(format!("need T − 2τ > 0, got T = {}, τ = {}", horizon, tau)));
    }
    if !(level >= T::one()) {
        return Err(AnalysisError::Input(format!("level L = {} must be at least 1", level)));
    }
    if delta < T::one() || gamma < T::one() {
        return Err(AnalysisError::Exponent(delta.min(gamma).to_f64_lossy()));
    }
    let slack = horizon * T::lit(1e-12);
    let window: Vec<&FieldState<T>> = snapshots
        .iter()
        .filter(|s| s.t >= t0 - slack && s.t <= horizon + slack)
        .collect();
    if window.len() < 8 {
        return Err(AnalysisError::Input(format!(
            "{} snapshots in [T − 2τ, T]; at least 8 required",
            window.len()
        )));
    }
    if (window.last().unwrap().t - horizon).abs() > slack {
        return Err(AnalysisError::Input(format!("no snapshot at T = {}", horizon)));
    }

    let bulk_measure = mesh.measure_of(Region::Bulk);
    let levels: Vec<T> = (0..=n_max).map(|n| level * (two - two.powi(-(n as i32)))).collect();
    let mut times = vec![t0];
    for n in 1..=n_max {
        times.push(times[n - 1] + tau / two.powi(n as i32));
    }
    let mut y = Vec::with_capacity(n_max + 1);
    for n in 0..=n_max {
        let k = levels[n];
        let samples: Vec<(T, T)> = window.iter().map(|s| (s.t, excess(s, mesh, k, delta, gamma))).collect();
        let integral = integrate_from(&samples, times[n]);
        y.push(integral / ((horizon - times[n]) * bulk_measure));
    }

    let last_start = horizon - tau;
    let window_max = window
        .iter()
        .filter(|s| s.t >= last_start - slack)
        .flat_map(|s| s.fields.iter().flat_map(|f| f.bulk.iter().chain(&f.trace)))
        .fold(T::neg_infinity(), |m, &v| m.max(v));
    let limit = two * level;
    let certified = y[n_max] <= T::lit(CERTIFY_THRESHOLD) && window_max <= limit;
    Ok(DeGiorgiReport {
        level,
        horizon,
        tau,
        delta,
        gamma,
        levels,
        times,
        y,
        window_max,
        certified,
        bound: certified.then_some(limit),
    })
}

fn excess<T: Real>(s: &FieldState<T>, mesh: &Mesh<T>, k: T, delta: T, gamma: T) -> T {
    let mut total = T::zero();
    for f in &s.fields {
        for (&w, &v) in mesh.bulk_weights().iter().zip(&f.bulk) {
            if v > k {
                total += w * abs_pow(v - k, delta);
            }
        }
        for (b, &v) in mesh.boundary().iter().zip(&f.trace) {
            if v > k {
                total += b.surface_weight * abs_pow(v - k, gamma);
            }
        }
    }
    total
}

/// `∫_{start}^{end} F dt` for the piecewise-linear interpolant of `samples`.
fn integrate_from<T: Real>(samples: &[(T, T)], start: T) -> T {
    let two = T::lit(2.0);
    let mut total = T::zero();
    for w in samples.windows(2) {
        let ((ta, fa), (tb, fb)) = (w[0], w[1]);
        if tb <= start {
            continue;
        }
        let (ta, fa) = if ta < start {
            let theta = (start - ta) / (tb - ta);
            (start, fa + theta * (fb - fa))
        } else {
            (ta, fa)
        };
        total += (tb - ta) * (fa + fb) / two;
    }
    total
}

#[derive(Debug, Clone, PartialEq)]
pub struct LevelSearch<T> {
    /// Least certifying level found, within 1% relative.
    pub level: T,
    pub report: DeGiorgiReport<T>,
    /// Direct maximum over `[T − τ, T]`, for comparison with `2L`.
    pub direct_max: T,
}

/// Bisection for the least `L ≥ 1` whose sequence certifies.
#[allow(clippy::too_many_arguments)]
pub fn degiorgi_least_level<T: Real>(
    snapshots: &[FieldState<T>],
    mesh: &Mesh<T>,
    horizon: T,
    tau: T,
    delta: T,
    gamma: T,
    n_max: usize,
) -> Result<LevelSearch<T>, AnalysisError> {
    let eval = |l: T| degiorgi_sequence(snapshots, mesh, l, horizon, tau, delta, gamma, n_max);
    let probe = eval(T::one())?;
    let direct_max = probe.window_max;
    if probe.certified {
        return Ok(LevelSearch { level: T::one(), report: probe, direct_max });
    }
    let mut hi = direct_max.max(T::one());
    let mut hi_report = eval(hi)?;
    while !hi_report.certified {
        hi *= T::lit(2.0);
        if !hi.is_finite() {
            return Err(AnalysisError::Input("no finite level certifies".into()));
        }
        hi_report = eval(hi)?;
    }
    let mut lo = T::one();
    while (hi - lo) > T::lit(0.01) * hi {
        let mid = (lo + hi) / T::lit(2.0);
        let r = eval(mid)?;
        if r.certified {
            hi = mid;
            hi_report = r;
        } else {
            lo = mid;
        }
    }
    Ok(LevelSearch { level: hi, report: hi_report, direct_max })
}
