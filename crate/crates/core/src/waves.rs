//! Boundary conservation law `∂ₜu + ∂ᵣA(u) = 0` with `A' = a`: flux
//! primitives, self-similar and traveling profiles, and residual checks.

use crate::model::Expr;
use crate::quadrature::adaptive_simpson;
use crate::scalar::{signed_pow, Real};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum WaveError {
    #[error("a is not invertible at {0}")]
    NotInvertible(String),
    #[error("{0}")]
    Input(String),
}

/// Wave speed `a(u) = A'(u)`.
#[derive(Debug, Clone, PartialEq)]
pub enum WaveSpeed<T> {
    Constant(T),
    /// `coef·|u|^p`.
    Power { coef: T, p: T },
    /// Expression in the variable `u`.
    Expression(Expr),
}

impl<T: Real> WaveSpeed<T> {
    pub fn parse(text: &str) -> Result<Self, WaveError> {
        Expr::parse(text, &["u"])
            .map(WaveSpeed::Expression)
            .map_err(|e| WaveError::Input(e.to_string()))
    }

    pub fn a(&self, u: T) -> T {
        match self {
            WaveSpeed::Constant(c) => *c,
            WaveSpeed::Power { coef, p } => *coef * crate::scalar::abs_pow(u, *p),
            WaveSpeed::Expression(e) => e.eval(&[u]),
        }
    }
}

pub const PRIMITIVE_TOLERANCE: f64 = 1e-10;
pub const INVERSE_TOLERANCE: f64 = 1e-12;

/// `A(u) = ∫₀ᵘ a`, closed form for constant and power speeds.
pub fn flux_primitive<T: Real>(speed: &WaveSpeed<T>, u: T) -> T {
    match speed {
        WaveSpeed::Constant(c) => *c * u,
        WaveSpeed::Power { coef, p } => *coef * signed_pow(u, *p + T::one()) / (*p + T::one()),
        WaveSpeed::Expression(e) => {
            let f = |s: T| e.eval(&[s]);
            adaptive_simpson(&f, T::zero(), u, T::lit(PRIMITIVE_TOLERANCE))
        }
    }
}

/// `u(r, t) = a⁻¹(r/t)` on the branch `u ≥ 0`.
pub fn self_similar_profile<T: Real>(speed: &WaveSpeed<T>, r: T, t: T) -> Result<T, WaveError> {
    if !(t > T::zero()) {
        return Err(WaveError::Input(format!("t = {} must be positive", t)));
    }
    let zeta = r / t;
    match speed {
        WaveSpeed::Constant(_) => Err(WaveError::NotInvertible(format!("r/t = {} (constant speed)", zeta))),
        WaveSpeed::Power { coef, p } => {
            if !(*p > T::zero()) || !(*coef > T::zero()) {
                return Err(WaveError::NotInvertible(format!("r/t = {} (non-increasing power)", zeta)));
            }
            if zeta < T::zero() {
                return Err(WaveError::NotInvertible(format!("r/t = {} < 0", zeta)));
            }
            Ok((zeta / *coef).powf(T::one() / *p))
        }
        WaveSpeed::Expression(_) => invert_by_bisection(speed, zeta),
    }
}

fn invert_by_bisection<T: Real>(speed: &WaveSpeed<T>, zeta: T) -> Result<T, WaveError> {
    let mut lo = T::zero();
    let a_lo = speed.a(lo);
    if a_lo > zeta {
        return Err(WaveError::NotInvertible(format!("r/t = {} below a(0) = {}", zeta, a_lo)));
    }
    let mut hi = T::one();
    let mut grows = 0;
    while speed.a(hi) < zeta {
        hi *= T::lit(2.0);
        grows += 1;
        if grows > 200 || !hi.is_finite() {
            return Err(WaveError::NotInvertible(format!("r/t = {} outside the range of a", zeta)));
        }
    }
    if speed.a(hi) == a_lo {
        return Err(WaveError::NotInvertible(format!("r/t = {} (a flat on [0, {}])", zeta, hi)));
    }
    let tol = T::lit(INVERSE_TOLERANCE);
    while hi - lo > tol * (T::one() + hi.abs()) {
        let mid = (lo + hi) / T::lit(2.0);
        if speed.a(mid) < zeta {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok((lo + hi) / T::lit(2.0))
}

#[derive(Debug, Clone, PartialEq)]
pub enum ProfileKind<T> {
    SelfSimilar,
    /// `u = η(r − ct)` with `η` an expression in `z`.
    Traveling { c: T, eta: Expr },
}

#[derive(Debug, Clone, PartialEq)]
pub struct WaveProfile<T> {
    pub speed: WaveSpeed<T>,
    pub kind: ProfileKind<T>,
    pub r_range: (T, T),
    pub t_range: (T, T),
}

impl<T: Real> WaveProfile<T> {
    pub fn sample(&self, r: T, t: T) -> Result<T, WaveError> {
        if r < self.r_range.0 || r > self.r_range.1 || t < self.t_range.0 || t > self.t_range.1 {
            return Err(WaveError::Input(format!("(r, t) = ({}, {}) outside the validity window", r, t)));
        }
        match &self.kind {
            ProfileKind::SelfSimilar => self_similar_profile(&self.speed, r, t),
            ProfileKind::Traveling { c, eta } => Ok(eta.eval(&[r - *c * t])),
        }
    }

    /// Tensor samples `u[j][i] = u(r_i, t_j)` on uniform grids.
    pub fn tabulate(&self, nr: usize, nt: usize) -> Result<Vec<Vec<T>>, WaveError> {
        let (r0, r1) = self.r_range;
        let (t0, t1) = self.t_range;
        let step = |a: T, b: T, n: usize, k: usize| a + (b - a) * T::from_usize_lossy(k) / T::from_usize_lossy(n - 1);
        (0..nt)
            .map(|j| (0..nr).map(|i| self.sample(step(r0, r1, nr, i), step(t0, t1, nt, j))).collect())
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TravelingReport<T> {
    /// `max |(−c + a(η))η'|` over the grid.
    pub eigen_residual: T,
    /// `max |∂ₜu + ∂ᵣA(u)|` for `u(r, t) = η(r − ct)` by central differences.
    pub claw_residual: T,
}

/// Residuals of a traveling wave `η(r − ct)` on the points `grid` (values of `r − ct`).
pub fn traveling_wave_check<T: Real>(
    speed: &WaveSpeed<T>,
    eta: &dyn Fn(T) -> T,
    c: T,
    grid: &[T],
) -> Result<TravelingReport<T>, WaveError> {
    if !(c > T::zero()) {
        return Err(WaveError::Input(format!("speed c = {} must be positive", c)));
    }
    if grid.len() < 2 {
        return Err(WaveError::Input("grid needs at least two points".into()));
    }
    let span = grid.iter().fold(T::zero(), |m, &z| m.max((z - grid[0]).abs()));
    let d = span * T::lit(1e-4) / T::from_usize_lossy(grid.len());
    let two = T::lit(2.0);
    let mut eigen = T::zero();
    let mut claw = T::zero();
    for &z in grid {
        let deta = (eta(z + d) - eta(z - d)) / (two * d);
        eigen = eigen.max(((-c + speed.a(eta(z))) * deta).abs());
        // u(r, t) = η(r − ct) around (r, t) = (z, 0)
        let ut = (eta(z - c * d) - eta(z + c * d)) / (two * d);
        let ar = (flux_primitive(speed, eta(z + d)) - flux_primitive(speed, eta(z - d))) / (two * d);
        claw = claw.max((ut + ar).abs());
    }
    Ok(TravelingReport { eigen_residual: eigen, claw_residual: claw })
}

/// Mean absolute central-difference residual of `∂ₜu + ∂ᵣA(u)` over the
/// interior of the tensor samples `u[j][i] = u(r_i, t_j)`.
pub fn claw_residual<T: Real>(speed: &WaveSpeed<T>, samples: &[Vec<T>], h: T, dt: T) -> Result<T, WaveError> {
    let nt = samples.len();
    let nr = samples.first().map_or(0, |r| r.len());
    if nt < 4 || nr < 4 {
        return Err(WaveError::Input(format!("grid {}×{} too coarse; need at least 4×4", nr, nt)));
    }
    if samples.iter().any(|row| row.len() != nr) {
        return Err(WaveError::Input("ragged sample grid".into()));
    }
    if !(h > T::zero() && dt > T::zero()) {
        return Err(WaveError::Input("spacings must be positive".into()));
    }
    let two = T::lit(2.0);
    let flux: Vec<Vec<T>> = samples
        .iter()
        .map(|row| row.iter().map(|&u| flux_primitive(speed, u)).collect())
        .collect();
    let mut total = T::zero();
    for j in 1..nt - 1 {
        for i in 1..nr - 1 {
            let ut = (samples[j + 1][i] - samples[j - 1][i]) / (two * dt);
            let ar = (flux[j][i + 1] - flux[j][i - 1]) / (two * h);
            total += (ut + ar).abs();
        }
    }
    Ok(total / T::from_usize_lossy((nt - 2) * (nr - 2)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn square() -> WaveSpeed<f64> {
        WaveSpeed::Power { coef: 1.0, p: 2.0 }
    }

    #[test]
    fn primitives() {
        assert!((flux_primitive(&square(), 3.0) - 9.0).abs() < 1e-14);
        assert_eq!(flux_primitive(&WaveSpeed::Constant(1.0), 2.5), 2.5);
        let quad = WaveSpeed::<f64>::parse("abs(u)^1.5").unwrap();
        let closed = 2f64.powf(2.5) / 2.5;
        assert!((flux_primitive(&quad, 2.0) - closed).abs() < 1e-8);
        assert!((flux_primitive(&WaveSpeed::Power { coef: 1.0, p: 1.5 }, 2.0) - closed).abs() < 1e-14);
    }

    #[test]
    fn self_similar_inverse() {
        assert!((self_similar_profile(&square(), 0.25, 1.0).unwrap() - 0.5).abs() < 1e-15);
        assert_eq!(self_similar_profile(&square(), 0.0, 3.0).unwrap(), 0.0);
        assert!(matches!(
            self_similar_profile(&WaveSpeed::Constant(1.0), 0.5, 1.0),
            Err(WaveError::NotInvertible(_))
        ));
        let e = WaveSpeed::<f64>::parse("u^2").unwrap();
        assert!((self_similar_profile(&e, 0.5, 2.0).unwrap() - 0.5).abs() < 1e-11);
        assert!(self_similar_profile(&WaveSpeed::<f64>::parse("1").unwrap(), 0.5, 1.0).is_err());
    }

    #[test]
    fn constant_traveling_waves() {
        let g: Vec<f64> = (0..50).map(|k| k as f64 * 0.1).collect();
        let r = traveling_wave_check(&square(), &|_| 0.7, 0.3, &g).unwrap();
        assert_eq!((r.eigen_residual, r.claw_residual), (0.0, 0.0));
        let r = traveling_wave_check(&square(), &|_| 0.7, 0.49, &g).unwrap();
        assert_eq!(r.eigen_residual, 0.0);
    }

    #[test]
    fn nonconstant_profile_has_residual() {
        let g: Vec<f64> = (0..50).map(|k| k as f64 * 0.1).collect();
        let r = traveling_wave_check(&square(), &|z: f64| 1.0 + 0.5 * z.sin(), 1.0, &g).unwrap();
        assert!(r.eigen_residual > 0.1 && r.claw_residual > 0.1);
    }

    #[test]
    fn claw_residual_cases() {
        let nr = 20;
        let nt = 10;
        let h = 0.9 / (nr - 1) as f64;
        let dt = 0.5 / (nt - 1) as f64;
        let constant = vec![vec![0.3; nr]; nt];
        assert_eq!(claw_residual(&square(), &constant, h, dt).unwrap(), 0.0);
        let linear: Vec<Vec<f64>> = (0..nt).map(|_| (0..nr).map(|i| 0.1 + h * i as f64).collect()).collect();
        // ∂ᵣ(r³/3) = r², mean of r² over interior points
        let expect: f64 = (1..nr - 1).map(|i| (0.1 + h * i as f64).powi(2)).sum::<f64>() / (nr - 2) as f64;
        let got = claw_residual(&square(), &linear, h, dt).unwrap();
        assert!((got - expect).abs() < 1e-3);
        assert!(claw_residual(&square(), &constant[..3], h, dt).is_err());
    }
}
