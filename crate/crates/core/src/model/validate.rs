//! Sampling checks of the declared structural assumptions.

use super::boundary::BoundaryKind;
use super::reaction::ReactionTerm;
use super::scenario::Scenario;
use super::ModelError;
use crate::quadrature::halton;
use crate::scalar::{abs_pow, Real};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum AssumptionClass {
    /// `aᵢ(s) ≥ αᵢ|s|^{pᵢ}`.
    A1,
    /// `αᵢ|s|^{pᵢ} ≤ aᵢ(s) ≤ σᵢ|s|^{pᵢ}`.
    A1Bis,
    /// `Σ fᵢsᵢ ≥ −Σ C_{fᵢ}|sᵢ|² − C̃_f`, likewise for `g` on J and `h` on I.
    A2,
    /// `Σ fᵢsᵢ|sᵢ|^{mᵢ−2} ≥ −Σ C_{fᵢ}|sᵢ|^{mᵢ} − C̃_f`, likewise for `g`.
    A3,
    /// As `A3` with right-hand exponents `mᵢ + pᵢ`.
    A3Bis,
    /// `|fᵢ| ≤ C_f(Σ|sⱼ|^{θⱼ} + 1)` and `|gᵢ| ≤ C_g(Σ|sⱼ|^{βⱼ} + 1)`.
    Growth,
}

/// Axis-aligned box in state space, one interval per field.
#[derive(Debug, Clone, PartialEq)]
pub struct SampleBox<T> {
    pub lower: Vec<T>,
    pub upper: Vec<T>,
}

impl<T: Real> SampleBox<T> {
    pub fn symmetric(m: usize, radius: T) -> Self {
        Self { lower: vec![-radius; m], upper: vec![radius; m] }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Counterexample<T> {
    /// Which inequality failed (`a`, `f`, `g` or `h`).
    pub term: &'static str,
    pub state: Vec<T>,
    pub x: T,
    pub t: T,
    pub lhs: T,
    pub rhs: T,
}

#[derive(Debug, Clone, PartialEq)]
pub enum AssumptionOutcome<T> {
    Holds { samples: usize },
    Violated(Counterexample<T>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct AssumptionReport<T> {
    pub class: AssumptionClass,
    pub outcome: AssumptionOutcome<T>,
}

impl<T> AssumptionReport<T> {
    pub fn holds(&self) -> bool {
        matches!(self.outcome, AssumptionOutcome::Holds { .. })
    }
}

/// Evaluates each declared class on the box corners, its centre and `count`
/// Halton points; the first violation is reported.
pub fn validate_assumptions<T: Real>(
    scenario: &Scenario<T>,
    sample_box: &SampleBox<T>,
    count: usize,
) -> Result<Vec<AssumptionReport<T>>, ModelError> {
    let m = scenario.field_count();
    if sample_box.lower.len() != m || sample_box.upper.len() != m {
        return Err(ModelError::Invalid("sample box must have one interval per field".into()));
    }
    if sample_box.lower.iter().zip(&sample_box.upper).any(|(l, u)| !(l <= u) || !l.is_finite() || !u.is_finite()) {
        return Err(ModelError::Invalid("sample box must be bounded with lower <= upper".into()));
    }
    if count < 1000 {
        return Err(ModelError::Invalid("at least 1000 samples are required".into()));
    }
    if m + 2 > 16 {
        return Err(ModelError::Invalid("sampling supports at most 14 fields".into()));
    }
    let points = sample_points(scenario, sample_box, count);
    let checker = Checker { scenario, m };
    Ok(scenario
        .declarations
        .classes
        .iter()
        .map(|&class| {
            let outcome = points
                .iter()
                .find_map(|(s, x, t)| checker.check(class, s, *x, *t))
                .map_or(AssumptionOutcome::Holds { samples: points.len() }, AssumptionOutcome::Violated);
            AssumptionReport { class, outcome }
        })
        .collect())
}

fn sample_points<T: Real>(scenario: &Scenario<T>, b: &SampleBox<T>, count: usize) -> Vec<(Vec<T>, T, T)> {
    let m = b.lower.len();
    let length = scenario.mesh.extents()[0];
    let lerp = |lo: T, hi: T, q: f64| lo + (hi - lo) * T::lit(q);
    let half = T::lit(0.5);
    let mut pts = Vec::new();
    if m <= 10 {
        for mask in 0..(1usize << m) {
            let s = (0..m).map(|j| if mask >> j & 1 == 1 { b.upper[j] } else { b.lower[j] }).collect();
            pts.push((s, T::zero(), T::zero()));
        }
    }
    pts.push(((0..m).map(|j| (b.lower[j] + b.upper[j]) * half).collect(), T::zero(), T::zero()));
    for k in 1..=count as u64 {
        let q = halton(k, m + 2);
        let s = (0..m).map(|j| lerp(b.lower[j], b.upper[j], q[j])).collect();
        pts.push((s, length * T::lit(q[m]), scenario.horizon * T::lit(q[m + 1])));
    }
    pts
}

struct Checker<'a, T> {
    scenario: &'a Scenario<T>,
    m: usize,
}

impl<T: Real> Checker<'_, T> {
    fn check(&self, class: AssumptionClass, s: &[T], x: T, t: T) -> Option<Counterexample<T>> {
        let sc = self.scenario;
        let d = &sc.declarations;
        let ce = |term, lhs, rhs| {
            if lhs < rhs - tolerance(lhs, rhs) {
                Some(Counterexample { term, state: s.to_vec(), x, t, lhs, rhs })
            } else {
                None
            }
        };
        match class {
            AssumptionClass::A1 | AssumptionClass::A1Bis => {
                for (i, field) in sc.fields.iter().enumerate() {
                    let (alpha0, p0) = field.diffusion.lower_bound();
                    let alpha = d.alpha.get(i).copied().unwrap_or(alpha0);
                    let p = d.p.get(i).copied().unwrap_or(p0);
                    let a = field.diffusion.a(s[i]);
                    let lower = alpha * abs_pow(s[i], p);
                    if let Some(c) = ce("a", a, lower) {
                        return Some(c);
                    }
                    if class == AssumptionClass::A1Bis {
                        let sigma = d.sigma.get(i).copied().or(field.diffusion.upper_constant()).unwrap_or(T::infinity());
                        let upper = sigma * abs_pow(s[i], p);
                        if let Some(c) = ce("a", upper, a) {
                            return Some(c);
                        }
                    }
                }
                None
            }
            AssumptionClass::A2 | AssumptionClass::A3 | AssumptionClass::A3Bis => {
                let exponent = |i: usize| match class {
                    AssumptionClass::A2 => (T::lit(2.0), T::lit(2.0)),
                    AssumptionClass::A3 => (d.m(i), d.m(i)),
                    _ => (d.m(i), d.m(i) + sc.fields[i].diffusion.exponent()),
                };
                let part = self.partition_terms();
                let groups: [(&'static str, &[(usize, &ReactionTerm<T>)], &dyn Fn(usize) -> T, T); 3] = [
                    ("f", &part.f, &|i| d.c_f(i), d.ct_f),
                    ("g", &part.g, &|i| d.c_g(i), d.ct_g),
                    ("h", &part.h, &|i| d.c_h(i), d.ct_h),
                ];
                for (term, members, c, ct) in groups {
                    if members.is_empty() || (term == "h" && class != AssumptionClass::A2) {
                        continue;
                    }
                    let mut lhs = T::zero();
                    let mut rhs = -ct;
                    for &(i, r) in members {
                        let (mi, ri) = exponent(i);
                        lhs += r.value(x, t, s) * s[i] * abs_pow(s[i], mi - T::lit(2.0));
                        rhs -= c(i) * abs_pow(s[i], ri);
                    }
                    if let Some(cx) = ce(term, lhs, rhs) {
                        return Some(cx);
                    }
                }
                None
            }
            AssumptionClass::Growth => {
                let part = self.partition_terms();
                let bound = |exps: &[T], c: T| {
                    let sum: T = (0..self.m).map(|j| abs_pow(s[j], exps.get(j).copied().unwrap_or(T::one()))).sum();
                    c * (sum + T::one())
                };
                for (term, members, exps, c) in
                    [("f", &part.f, &d.theta, d.growth_f), ("g", &part.g, &d.beta, d.growth_g)]
                {
                    let b = bound(exps, c);
                    for &(_, r) in members.iter() {
                        let v = r.value(x, t, s).abs();
                        if let Some(cx) = ce(term, b, v) {
                            return Some(cx);
                        }
                    }
                }
                None
            }
        }
    }

    fn partition_terms(&self) -> Terms<'_, T> {
        let mut out = Terms { f: Vec::new(), g: Vec::new(), h: Vec::new() };
        for (i, field) in self.scenario.fields.iter().enumerate() {
            out.f.push((i, &field.f));
            match &field.boundary.gamma1 {
                BoundaryKind::Dynamic { g, .. } => out.g.push((i, g)),
                BoundaryKind::Static { h } => out.h.push((i, h)),
                BoundaryKind::Dirichlet(_) => {}
            }
        }
        out
    }
}

struct Terms<'a, T> {
    f: Vec<(usize, &'a ReactionTerm<T>)>,
    g: Vec<(usize, &'a ReactionTerm<T>)>,
    h: Vec<(usize, &'a ReactionTerm<T>)>,
}

fn tolerance<T: Real>(a: T, b: T) -> T {
    T::epsilon() * T::lit(64.0) * (a.abs() + b.abs())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domain::{build_mesh, BoundaryPart, SideLabels};
    use crate::model::{BoundaryAssignment, DiffusionLaw, FieldSpec, SpatialField};

    fn scenario(diffusion: DiffusionLaw<f64>, f: &str) -> Scenario<f64> {
        let mesh = build_mesh(1, &[1.0], &[10], &SideLabels::interval(BoundaryPart::Gamma1, BoundaryPart::Gamma1)).unwrap();
        let field = FieldSpec {
            name: "u".into(),
            diffusion,
            f: ReactionTerm::parse(f, 1).unwrap(),
            boundary: BoundaryAssignment::new(BoundaryKind::dynamic(1.0, ReactionTerm::zero(1)), BoundaryKind::neumann(1)),
            initial: SpatialField::constant(0.0),
            initial_trace: None,
        };
        Scenario::new(mesh, vec![field], 1.0)
    }

    #[test]
    fn power_law_satisfies_a1_with_equality() {
        let mut sc = scenario(DiffusionLaw::Power { alpha: 1.0, p: 2.0 }, "0");
        sc.declarations.classes = vec![AssumptionClass::A1, AssumptionClass::A1Bis];
        let r = validate_assumptions(&sc, &SampleBox::symmetric(1, 10.0), 1000).unwrap();
        assert!(r.iter().all(AssumptionReport::holds));
    }

    #[test]
    fn cubic_reactions() {
        let mut sc = scenario(DiffusionLaw::Constant(1.0), "u^3");
        sc.declarations.classes = vec![AssumptionClass::A2];
        let r = validate_assumptions(&sc, &SampleBox::symmetric(1, 10.0), 1000).unwrap();
        assert!(r[0].holds());

        let mut sc = scenario(DiffusionLaw::Constant(1.0), "-u^3");
        sc.declarations.classes = vec![AssumptionClass::A2];
        sc.declarations.c_f = vec![1.0];
        sc.declarations.ct_f = 1.0;
        let r = validate_assumptions(&sc, &SampleBox::symmetric(1, 10.0), 1000).unwrap();
        match &r[0].outcome {
            AssumptionOutcome::Violated(c) => {
                assert_eq!(c.term, "f");
                let s = c.state[0];
                assert!(-s.powi(4) < -s * s - 1.0);
            }
            other => panic!("expected a violation, got {other:?}"),
        }
    }

    #[test]
    fn growth_and_a3() {
        let mut sc = scenario(DiffusionLaw::Constant(1.0), "u^3 - u");
        sc.declarations.classes = vec![AssumptionClass::Growth, AssumptionClass::A3];
        sc.declarations.theta = vec![3.0];
        sc.declarations.beta = vec![1.0];
        sc.declarations.growth_f = 1.0;
        sc.declarations.growth_g = 1.0;
        sc.declarations.m = vec![4.0];
        sc.declarations.c_f = vec![1.0];
        sc.declarations.ct_f = 1.0;
        let r = validate_assumptions(&sc, &SampleBox::symmetric(1, 5.0), 2000).unwrap();
        assert!(r.iter().all(AssumptionReport::holds), "{r:?}");
        sc.declarations.theta = vec![2.0];
        let r = validate_assumptions(&sc, &SampleBox::symmetric(1, 5.0), 2000).unwrap();
        assert!(!r[0].holds());
    }

    #[test]
    fn rejects_bad_requests() {
        let sc = scenario(DiffusionLaw::Constant(1.0), "u");
        assert!(validate_assumptions(&sc, &SampleBox::symmetric(1, 1.0), 10).is_err());
        assert!(validate_assumptions(&sc, &SampleBox::symmetric(2, 1.0), 1000).is_err());
    }
}
