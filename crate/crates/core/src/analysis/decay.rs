use super::AnalysisError;
use crate::scalar::Real;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DecayModel<T> {
    /// `a + b·t^{−1/(ν−1)}`.
    Algebraic { nu: T },
    /// `Q e^{−c₀t} + C₀`.
    Exponential,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DecayFit<T> {
    pub model: DecayModel<T>,
    /// `b` (algebraic) or `Q` (exponential).
    pub amplitude: T,
    /// `a` (algebraic) or `C₀` (exponential).
    pub floor: T,
    /// `1/(ν−1)` (algebraic) or `c₀` (exponential).
    pub rate: T,
    /// Single constant `c` of `c(1 + t^{−1/(ν−1)})` dominating the fit:
    /// `max(a, b)`; `Q + C₀` for the exponential model.
    pub envelope_constant: T,
    pub fit_points: usize,
    pub holdout_points: usize,
    /// Largest `Y/envelope` over the holdout samples.
    pub worst_ratio: T,
    pub holds: bool,
}

impl<T: Real> DecayFit<T> {
    pub fn envelope(&self, t: T) -> T {
        match self.model {
            DecayModel::Algebraic { .. } => self.floor + self.amplitude * t.powf(-self.rate),
            DecayModel::Exponential => self.floor + self.amplitude * (-self.rate * t).exp(),
        }
    }
}

const HOLDOUT_TOLERANCE: f64 = 1.05;

/// Fits the decay envelope on samples with `0 < t < T/2` by relative
/// least squares (nonnegative constants), then checks every sample with
/// `t ≥ T/2` against 1.05 × the fitted envelope.
pub fn verify_decay<T: Real>(times: &[T], values: &[T], model: DecayModel<T>) -> Result<DecayFit<T>, AnalysisError> {
    if times.len() != values.len() {
        return Err(AnalysisError::Input("times and values differ in length".into()));
    }
    let pts: Vec<(T, T)> = times
        .iter()
        .zip(values)
        .filter(|(t, _)| **t > T::zero())
        .map(|(&t, &y)| (t, y))
        .collect();
    if pts.iter().any(|&(_, y)| !(y > T::zero()) || !y.is_finite()) {
        return Err(AnalysisError::Input("series must be positive and finite".into()));
    }
    let (t_min, t_max) = match (pts.first(), pts.last()) {
        (Some(a), Some(b)) => (a.0, b.0),
        _ => return Err(AnalysisError::Input("series too short".into())),
    };
    if t_max < T::lit(10.0) * t_min {
        return Err(AnalysisError::Input(format!(
            "series spans t ∈ [{}, {}], less than a decade",
            t_min, t_max
        )));
    }
    let cut = t_max / T::lit(2.0);
    let (fit, hold): (Vec<_>, Vec<_>) = pts.iter().partition(|p| p.0 < cut);
    if fit.len() < 3 || hold.is_empty() {
        return Err(AnalysisError::Input("series too short".into()));
    }

    let (amplitude, floor, rate) = match model {
        DecayModel::Algebraic { nu } => {
            if !(nu > T::one()) {
                return Err(AnalysisError::Input(format!("ν = {} must exceed 1", nu)));
            }
            let rate = T::one() / (nu - T::one());
            let (a, b, _) = fit_floor_amplitude(&fit, |t| t.powf(-rate));
            (b, a, rate)
        }
        DecayModel::Exponential => {
            let (c0, a, b) = fit_exponential(&fit, t_max - t_min);
            (b, a, c0)
        }
    };
    let envelope_constant = match model {
        DecayModel::Algebraic { .. } => amplitude.max(floor),
        DecayModel::Exponential => amplitude + floor,
    };
    let mut out = DecayFit {
        model,
        amplitude,
        floor,
        rate,
        envelope_constant,
        fit_points: fit.len(),
        holdout_points: hold.len(),
        worst_ratio: T::zero(),
        holds: false,
    };
    let worst = hold.iter().fold(T::zero(), |w, &&(t, y)| w.max(y / out.envelope(t)));
    out.worst_ratio = worst;
    out.holds = worst <= T::lit(HOLDOUT_TOLERANCE);
    Ok(out)
}

/// Minimizes `Σ((y − a − b·s(t))/y)²` over `a, b ≥ 0`; returns `(a, b, cost)`.
fn fit_floor_amplitude<T: Real>(pts: &[&(T, T)], shape: impl Fn(T) -> T) -> (T, T, T) {
    let rows: Vec<(T, T)> = pts.iter().map(|&&(t, y)| (T::one() / y, shape(t) / y)).collect();
    let cost = |a: T, b: T| -> T {
        rows.iter()
            .map(|&(p, q)| {
                let r = T::one() - a * p - b * q;
                r * r
            })
            .sum()
    };
    let (mut spp, mut spq, mut sqq, mut sp, mut sq) = (T::zero(), T::zero(), T::zero(), T::zero(), T::zero());
    for &(p, q) in &rows {
        spp += p * p;
        spq += p * q;
        sqq += q * q;
        sp += p;
        sq += q;
    }
    let mut candidates = vec![(sp / spp, T::zero()), (T::zero(), sq / sqq)];
    let det = spp * sqq - spq * spq;
    if det.abs() > T::epsilon() * spp * sqq {
        let a = (sp * sqq - sq * spq) / det;
        let b = (spp * sq - spq * sp) / det;
        if a >= T::zero() && b >= T::zero() {
            candidates.push((a, b));
        }
    }
    candidates
        .into_iter()
        .map(|(a, b)| (a, b, cost(a, b)))
        .fold(None, |best: Option<(T, T, T)>, c| match best {
            Some(b) if b.2 <= c.2 => Some(b),
            _ => Some(c),
        })
        .expect("candidate list is nonempty")
}

/// Variable projection over the rate `c₀`: log grid then golden section.
fn fit_exponential<T: Real>(pts: &[&(T, T)], span: T) -> (T, T, T) {
    let cost_at = |c0: T| fit_floor_amplitude(pts, |t| (-c0 * t).exp());
    let lo = T::lit(1e-3) / span;
    let hi = T::lit(1e3) / span;
    let steps = 120;
    let ratio = (hi / lo).ln() / T::from_usize_lossy(steps);
    let grid: Vec<T> = (0..=steps).map(|k| lo * (ratio * T::from_usize_lossy(k)).exp()).collect();
    let costs: Vec<T> = grid.iter().map(|&c| cost_at(c).2).collect();
    let best = (0..grid.len()).fold(0, |b, k| if costs[k] < costs[b] { k } else { b });
    let mut a = grid[best.saturating_sub(1)].ln();
    let mut b = grid[(best + 1).min(steps)].ln();
    let g = T::lit(0.618_033_988_749_894_9);
    let f = |x: T| cost_at(x.exp()).2;
    let mut x1 = b - g * (b - a);
    let mut x2 = a + g * (b - a);
    let (mut f1, mut f2) = (f(x1), f(x2));
    for _ in 0..80 {
        if f1 <= f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - g * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + g * (b - a);
            f2 = f(x2);
        }
    }
    let c0 = ((a + b) / T::lit(2.0)).exp();
    let (fl, amp, _) = cost_at(c0);
    (c0, fl, amp)
}
