//! Diffusion laws `a(s)`, their primitives `A(s) = ∫₀ˢ a`, the
//! ε-regularisation and the Darcy closure `a(u) = u·b(u)`.

use super::expr::Expr;
use super::ModelError;
use crate::quadrature::adaptive_simpson;
use crate::scalar::{abs_pow, signed_pow, Real};

#[derive(Debug, Clone, PartialEq)]
pub enum DiffusionLaw<T> {
    /// `a ≡ d`.
    Constant(T),
    /// `a(s) = α|s|^p`.
    Power { alpha: T, p: T },
    /// `a(s) = |s|^p (α + (σ − α) s²/(1 + s²))`, which lies between `α|s|^p`
    /// and `σ|s|^p`.
    BoundedPower { alpha: T, sigma: T, p: T },
    /// Piecewise linear through `(s_k, a_k)`, constant beyond the end knots.
    Tabulated { s: Vec<T>, a: Vec<T> },
    /// `a(u) = u·b(u)` for a general equation of state `b` in the variable `u`.
    Darcy(Expr),
}

impl<T: Real> DiffusionLaw<T> {
    pub fn check(&self) -> Result<(), ModelError> {
        let bad = |m: &str| Err(ModelError::Invalid(m.to_string()));
        match self {
            DiffusionLaw::Constant(d) if !(*d > T::zero()) => bad("constant diffusion must be positive"),
            DiffusionLaw::Power { alpha, p } if !(*alpha > T::zero()) || !(*p >= T::zero()) => {
                bad("power diffusion needs alpha > 0 and p >= 0")
            }
            DiffusionLaw::BoundedPower { alpha, sigma, p }
                if !(*alpha > T::zero()) || !(*p >= T::zero()) || !(*sigma >= *alpha) =>
            {
                bad("bounded power diffusion needs alpha > 0, sigma >= alpha and p >= 0")
            }
            DiffusionLaw::Tabulated { s, a } => {
                if s.len() < 2 || s.len() != a.len() {
                    return bad("tabulated diffusion needs at least two (s, a) pairs of equal length");
                }
                if s.windows(2).any(|w| !(w[1] > w[0])) {
                    return bad("tabulated diffusion knots must be strictly increasing");
                }
                if a.iter().any(|v| !(*v >= T::zero())) {
                    return bad("tabulated diffusion values must be nonnegative");
                }
                Ok(())
            }
            DiffusionLaw::Darcy(b) if b.max_var().is_some_and(|v| v > 0) => {
                bad("equation of state may only depend on u")
            }
            _ => Ok(()),
        }
    }

    #[inline]
    pub fn a(&self, s: T) -> T {
        match self {
            DiffusionLaw::Constant(d) => *d,
            DiffusionLaw::Power { alpha, p } => *alpha * abs_pow(s, *p),
            DiffusionLaw::BoundedPower { alpha, sigma, p } => {
                let s2 = s * s;
                abs_pow(s, *p) * (*alpha + (*sigma - *alpha) * s2 / (T::one() + s2))
            }
            DiffusionLaw::Tabulated { s: knots, a } => interpolate(knots, a, s),
            DiffusionLaw::Darcy(b) => s * b.eval(&[s]),
        }
    }

    /// `A(s) = ∫₀ˢ a(r) dr`, in closed form where one exists.
    #[inline]
    pub fn primitive(&self, s: T) -> T {
        match self {
            DiffusionLaw::Constant(d) => *d * s,
            DiffusionLaw::Power { alpha, p } => *alpha * signed_pow(s, *p + T::one()) / (*p + T::one()),
            DiffusionLaw::BoundedPower { alpha, sigma, p } => {
                // r = |s| v^{1/(p+1)} turns |r|^p dr into |s|^{p+1}/(p+1) dv
                let q = T::one() / (*p + T::one());
                let mag = s.abs();
                let w = |v: T| {
                    let r = mag * v.powf(q);
                    let r2 = r * r;
                    *alpha + (*sigma - *alpha) * r2 / (T::one() + r2)
                };
                let mean = adaptive_simpson(&w, T::zero(), T::one(), T::lit(1e-13));
                signed_pow(s, *p + T::one()) * q * mean
            }
            DiffusionLaw::Tabulated { s: knots, a } => tabulated_cumulative(knots, a, s) - tabulated_cumulative(knots, a, T::zero()),
            DiffusionLaw::Darcy(_) => {
                let f = |r: T| self.a(r);
                adaptive_simpson(&f, T::zero(), s, T::lit(1e-12))
            }
        }
    }

    /// Exponent `p` of the lower bound `a(s) ≥ α|s|^p`.
    pub fn exponent(&self) -> T {
        match self {
            DiffusionLaw::Power { p, .. } | DiffusionLaw::BoundedPower { p, .. } => *p,
            _ => T::zero(),
        }
    }

    /// `(α, p)` of the lower bound `a(s) ≥ α|s|^p` implied by the law itself.
    pub fn lower_bound(&self) -> (T, T) {
        match self {
            DiffusionLaw::Constant(d) => (*d, T::zero()),
            DiffusionLaw::Power { alpha, p } | DiffusionLaw::BoundedPower { alpha, p, .. } => (*alpha, *p),
            DiffusionLaw::Tabulated { a, .. } => (a.iter().fold(T::infinity(), |m, v| m.min(*v)), T::zero()),
            DiffusionLaw::Darcy(_) => (T::zero(), T::zero()),
        }
    }

    /// Upper constant `σ` with `a(s) ≤ σ|s|^p`, where the law provides one.
    pub fn upper_constant(&self) -> Option<T> {
        match self {
            DiffusionLaw::Constant(d) => Some(*d),
            DiffusionLaw::Power { alpha, .. } => Some(*alpha),
            DiffusionLaw::BoundedPower { sigma, .. } => Some(*sigma),
            DiffusionLaw::Tabulated { a, .. } => Some(a.iter().fold(T::zero(), |m, v| m.max(*v))),
            DiffusionLaw::Darcy(_) => None,
        }
    }
}

fn interpolate<T: Real>(knots: &[T], vals: &[T], s: T) -> T {
    let n = knots.len();
    if s <= knots[0] {
        return vals[0];
    }
    if s >= knots[n - 1] {
        return vals[n - 1];
    }
    let k = knots.partition_point(|&x| x <= s) - 1;
    let w = (s - knots[k]) / (knots[k + 1] - knots[k]);
    vals[k] + w * (vals[k + 1] - vals[k])
}

/// Exact integral of the piecewise linear interpolant from `knots[0]` to `s`.
fn tabulated_cumulative<T: Real>(knots: &[T], vals: &[T], s: T) -> T {
    let n = knots.len();
    let half = T::lit(0.5);
    if s <= knots[0] {
        return vals[0] * (s - knots[0]);
    }
    let mut acc = T::zero();
    for k in 0..n - 1 {
        if s <= knots[k + 1] {
            let v = interpolate(knots, vals, s);
            return acc + half * (vals[k] + v) * (s - knots[k]);
        }
        acc += half * (vals[k] + vals[k + 1]) * (knots[k + 1] - knots[k]);
    }
    acc + vals[n - 1] * (s - knots[n - 1])
}

/// Equation of state `b` for the Darcy closure.
#[derive(Debug, Clone, PartialEq)]
pub enum EquationOfState<T> {
    /// `b(u) = c·u^q`.
    Power { coef: T, q: T },
    /// General `b(u)`, an expression in `u`.
    Expression(Expr),
}

/// Diffusivity `a(u) = u·b(u)` of the porous-medium closure. Power laws give
/// the power form `a = c|u|^{q+1}`, which agrees with `u·b(u)` for `u ≥ 0`.
pub fn darcy_diffusivity<T: Real>(b: &EquationOfState<T>) -> DiffusionLaw<T> {
    match b {
        EquationOfState::Power { coef, q } => DiffusionLaw::Power { alpha: *coef, p: *q + T::one() },
        EquationOfState::Expression(e) => DiffusionLaw::Darcy(e.clone()),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum RegularizationMode {
    /// `a^ε(s) = a(s) + ε`.
    #[default]
    Additive,
    /// `a^ε(s) = a(s + ε)`.
    Shift,
}

/// A diffusion law together with its ε-regularisation.
#[derive(Debug, Clone, PartialEq)]
pub struct Diffusion<T> {
    pub law: DiffusionLaw<T>,
    pub epsilon: T,
    pub mode: RegularizationMode,
}

impl<T: Real> Diffusion<T> {
    pub fn plain(law: DiffusionLaw<T>) -> Self {
        Self { law, epsilon: T::zero(), mode: RegularizationMode::Additive }
    }

    #[inline]
    pub fn a(&self, s: T) -> T {
        if self.epsilon == T::zero() {
            return self.law.a(s);
        }
        match self.mode {
            RegularizationMode::Additive => self.law.a(s) + self.epsilon,
            RegularizationMode::Shift => self.law.a(s + self.epsilon),
        }
    }

    #[inline]
    pub fn primitive(&self, s: T) -> T {
        if self.epsilon == T::zero() {
            return self.law.primitive(s);
        }
        match self.mode {
            RegularizationMode::Additive => self.law.primitive(s) + self.epsilon * s,
            RegularizationMode::Shift => self.law.primitive(s + self.epsilon) - self.law.primitive(self.epsilon),
        }
    }

    /// [`Diffusion::a`] applied elementwise, with identical results.
    pub fn a_into(&self, src: &[T], dst: &mut [T]) {
        match &self.law {
            DiffusionLaw::Constant(d) => self.regularized_a(src, dst, |_| *d),
            DiffusionLaw::Power { alpha, p } => self.regularized_a(src, dst, |s| *alpha * abs_pow(s, *p)),
            law => self.regularized_a(src, dst, |s| law.a(s)),
        }
    }

    /// [`Diffusion::primitive`] applied elementwise, with identical results.
    pub fn primitive_into(&self, src: &[T], dst: &mut [T]) {
        match &self.law {
            DiffusionLaw::Constant(d) => self.regularized_primitive(src, dst, |s| *d * s),
            DiffusionLaw::Power { alpha, p } => {
                let q = *p + T::one();
                self.regularized_primitive(src, dst, |s| *alpha * signed_pow(s, q) / q)
            }
            law => self.regularized_primitive(src, dst, |s| law.primitive(s)),
        }
    }

    #[inline(always)]
    fn regularized_a(&self, src: &[T], dst: &mut [T], law: impl Fn(T) -> T) {
        let eps = self.epsilon;
        let pairs = dst.iter_mut().zip(src);
        match self.mode {
            _ if eps == T::zero() => pairs.for_each(|(d, &s)| *d = law(s)),
            RegularizationMode::Additive => pairs.for_each(|(d, &s)| *d = law(s) + eps),
            RegularizationMode::Shift => pairs.for_each(|(d, &s)| *d = law(s + eps)),
        }
    }

    #[inline(always)]
    fn regularized_primitive(&self, src: &[T], dst: &mut [T], law: impl Fn(T) -> T) {
        let eps = self.epsilon;
        let pairs = dst.iter_mut().zip(src);
        match self.mode {
            _ if eps == T::zero() => pairs.for_each(|(d, &s)| *d = law(s)),
            RegularizationMode::Additive => pairs.for_each(|(d, &s)| *d = law(s) + eps * s),
            RegularizationMode::Shift => {
                let base = law(eps);
                pairs.for_each(|(d, &s)| *d = law(s + eps) - base)
            }
        }
    }
}

/// Result of [`regularize_diffusion`].
#[derive(Debug, Clone, PartialEq)]
pub struct Regularized<T> {
    pub diffusion: Diffusion<T>,
    /// Set when the shifted law drops below `ε/2` somewhere on the check grid.
    pub warning: Option<String>,
}

pub fn regularize_diffusion<T: Real>(
    law: &DiffusionLaw<T>,
    epsilon: T,
    mode: RegularizationMode,
) -> Result<Regularized<T>, ModelError> {
    if !(epsilon > T::zero()) {
        return Err(ModelError::Invalid("regularization parameter must be positive".into()));
    }
    law.check()?;
    let diffusion = Diffusion { law: law.clone(), epsilon, mode };
    let mut warning = None;
    if mode == RegularizationMode::Shift {
        let n = 2001;
        let grid = (0..n)
            .map(|k| T::lit(-1.0 + 2.0 * k as f64 / (n - 1) as f64))
            .chain(std::iter::once(-epsilon));
        let (mut worst_s, mut worst) = (T::zero(), T::infinity());
        for s in grid {
            let v = diffusion.a(s);
            if v < worst {
                worst = v;
                worst_s = s;
            }
        }
        if worst < epsilon / T::lit(2.0) {
            warning = Some(format!(
                "shifted diffusion is not bounded below by epsilon/2: a(s + eps) = {} at s = {}",
                worst.to_f64_lossy(),
                worst_s.to_f64_lossy()
            ));
        }
    }
    Ok(Regularized { diffusion, warning })
}
