//! Full problem description.

use super::boundary::{BoundaryAssignment, BoundaryKind, DynamicWeight};
use super::diffusion::{Diffusion, DiffusionLaw};
use super::reaction::{ReactionTerm, SpatialField};
use super::validate::AssumptionClass;
use super::ModelError;
use crate::domain::{BoundaryPart, FieldState, FieldValues, Mesh};
use crate::scalar::Real;
use crate::solver::config::{MonitorConfig, SolverConfig};

#[derive(Debug, Clone, PartialEq)]
pub struct FieldSpec<T> {
    pub name: String,
    pub diffusion: DiffusionLaw<T>,
    /// Bulk reaction `f` in `∂ₜu − Δ A(u) + f = 0`.
    pub f: ReactionTerm<T>,
    pub boundary: BoundaryAssignment<T>,
    /// Bulk initial datum.
    pub initial: SpatialField,
    /// Boundary initial datum; the restriction of `initial` when absent.
    pub initial_trace: Option<SpatialField>,
}

/// Declared structural constants, checked by sampling in
/// [`validate_assumptions`](super::validate_assumptions).
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Declarations<T> {
    pub classes: Vec<AssumptionClass>,
    pub c_f: Vec<T>,
    pub c_g: Vec<T>,
    pub c_h: Vec<T>,
    pub ct_f: T,
    pub ct_g: T,
    pub ct_h: T,
    /// Dissipation exponents `mᵢ ≥ 1`; 2 when empty.
    pub m: Vec<T>,
    /// Growth exponents of `f` and `g`; empty when undeclared.
    pub theta: Vec<T>,
    pub beta: Vec<T>,
    pub growth_f: T,
    pub growth_g: T,
    /// Overrides of the diffusion bounds `α|s|^p ≤ a ≤ σ|s|^p`.
    pub alpha: Vec<T>,
    pub p: Vec<T>,
    pub sigma: Vec<T>,
}

impl<T: Real> Declarations<T> {
    fn entry(v: &[T], i: usize, default: T) -> T {
        v.get(i).copied().unwrap_or(default)
    }

    pub fn c_f(&self, i: usize) -> T {
        Self::entry(&self.c_f, i, T::zero())
    }

    pub fn c_g(&self, i: usize) -> T {
        Self::entry(&self.c_g, i, T::zero())
    }

    pub fn c_h(&self, i: usize) -> T {
        Self::entry(&self.c_h, i, T::zero())
    }

    pub fn m(&self, i: usize) -> T {
        Self::entry(&self.m, i, T::lit(2.0))
    }
}

/// Index sets of fields with static (`I`) and dynamic (`J`) conditions on Γ₁.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Partition {
    pub static_fields: Vec<usize>,
    pub dynamic_fields: Vec<usize>,
}

impl Partition {
    pub fn check_covers(&self, m: usize) -> Result<(), ModelError> {
        let mut seen = vec![false; m];
        for &i in self.static_fields.iter().chain(&self.dynamic_fields) {
            if i >= m || seen[i] {
                return Err(ModelError::Partition(format!("field index {i} repeated or out of range")));
            }
            seen[i] = true;
        }
        if let Some(i) = seen.iter().position(|s| !s) {
            return Err(ModelError::Partition(format!("field {} is in neither index set", i + 1)));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Scenario<T> {
    pub mesh: Mesh<T>,
    pub fields: Vec<FieldSpec<T>>,
    /// Porosity `α(x)` multiplying `∂ₜu` in the bulk.
    pub porosity: SpatialField,
    /// Permeability `K(x)` inside the divergence.
    pub conductivity: SpatialField,
    pub declarations: Declarations<T>,
    pub horizon: T,
    pub solver: SolverConfig<T>,
    pub monitors: MonitorConfig<T>,
}

impl<T: Real> Scenario<T> {
    /// Scenario with unit coefficients and default solver/monitor settings.
    pub fn new(mesh: Mesh<T>, fields: Vec<FieldSpec<T>>, horizon: T) -> Self {
        Self {
            mesh,
            fields,
            porosity: SpatialField::constant(1.0),
            conductivity: SpatialField::constant(1.0),
            declarations: Declarations::default(),
            horizon,
            solver: SolverConfig::default(),
            monitors: MonitorConfig::default(),
        }
    }

    pub fn field_count(&self) -> usize {
        self.fields.len()
    }

    pub fn partition(&self) -> Partition {
        let (dynamic_fields, static_fields) =
            (0..self.fields.len()).partition(|&i| self.fields[i].boundary.gamma1.is_dynamic());
        Partition { static_fields, dynamic_fields }
    }

    pub fn validate(&self) -> Result<(), ModelError> {
        let m = self.fields.len();
        if m == 0 {
            return Err(ModelError::Invalid("scenario has no fields".into()));
        }
        if !(self.horizon > T::zero()) || !self.horizon.is_finite() {
            return Err(ModelError::Invalid("horizon must be positive and finite".into()));
        }
        self.solver.check(self.horizon).map_err(ModelError::Invalid)?;
        let mesh = &self.mesh;
        for (i, field) in self.fields.iter().enumerate() {
            let label = i + 1;
            field.diffusion.check()?;
            let mut terms = vec![&field.f];
            for kind in [&field.boundary.gamma1, &field.boundary.gamma2] {
                match kind {
                    BoundaryKind::Static { h } => terms.push(h),
                    BoundaryKind::Dynamic { g, .. } => terms.push(g),
                    BoundaryKind::Dirichlet(v) if !v.is_finite() => {
                        return Err(ModelError::Invalid(format!("field {label}: Dirichlet value must be finite")))
                    }
                    BoundaryKind::Dirichlet(_) => {}
                }
            }
            if terms.iter().any(|r| r.field_count() != m) {
                return Err(ModelError::Invalid(format!("field {label}: reaction term sized for another system")));
            }
            if field.boundary.gamma2.is_dynamic() {
                return Err(ModelError::Partition(format!(
                    "field {label}: dynamic conditions belong on Γ1; Γ2 carries Dirichlet or static kinds"
                )));
            }
            match &field.boundary.gamma1 {
                BoundaryKind::Dynamic { weight: DynamicWeight::Uniform(d), .. } if !(*d > T::zero()) => {
                    return Err(ModelError::Invalid(format!("field {label}: dynamic weight delta must be > 0")));
                }
                BoundaryKind::Dynamic { weight: DynamicWeight::Field(beta), .. } => {
                    for b in mesh.boundary_nodes_of(BoundaryPart::Gamma1) {
                        let [x, y] = mesh.coords()[b.node];
                        let v: T = beta.eval(x, y);
                        if !(v >= T::zero()) || !v.is_finite() {
                            return Err(ModelError::Invalid(format!("field {label}: beta(x) negative at node {}", b.node)));
                        }
                    }
                }
                _ => {}
            }
        }
        for (node, c) in mesh.coords().iter().enumerate() {
            let a: T = self.porosity.eval(c[0], c[1]);
            let interior = mesh.boundary_slot(node).is_none();
            if !a.is_finite() || a < T::zero() || (interior && a == T::zero()) {
                return Err(ModelError::Invalid(format!("porosity must be positive in the bulk (node {node})")));
            }
        }
        for face in mesh.faces() {
            let k: T = self.conductivity.eval(face.midpoint[0], face.midpoint[1]);
            if !(k > T::zero()) || !k.is_finite() {
                return Err(ModelError::Invalid("permeability must be positive".into()));
            }
        }
        let d = &self.declarations;
        for (name, v) in [("c_f", &d.c_f), ("c_g", &d.c_g), ("c_h", &d.c_h), ("m", &d.m), ("theta", &d.theta), ("beta", &d.beta), ("alpha", &d.alpha), ("p", &d.p), ("sigma", &d.sigma)] {
            if !v.is_empty() && v.len() != m {
                return Err(ModelError::Invalid(format!("declared `{name}` must list one value per field")));
            }
        }
        if d.m.iter().any(|&mi| !(mi >= T::one())) {
            return Err(ModelError::Invalid("dissipation exponents must satisfy m_i >= 1".into()));
        }
        if d.theta.iter().chain(&d.beta).any(|&v| !(v > T::zero())) {
            return Err(ModelError::Invalid("growth exponents theta_i, beta_i must be positive".into()));
        }
        if let Some(e) = &self.monitors.energy {
            if e.exponents.len() != m || e.exponents.iter().any(|&v| !(v >= T::one())) {
                return Err(ModelError::Invalid("energy monitor needs one exponent >= 1 per field".into()));
            }
        }
        if self.monitors.xvec.iter().any(|r| r.len() != m || r.iter().any(|&v| !(v >= T::one()))) {
            return Err(ModelError::Invalid("xvec monitor needs one exponent >= 1 per field".into()));
        }
        self.partition().check_covers(m)
    }

    /// Effective regularisation parameter.
    pub fn epsilon(&self) -> T {
        self.solver.epsilon.unwrap_or_else(|| {
            if self.fields.iter().any(|f| f.diffusion.exponent() > T::zero()) {
                T::lit(1e-6)
            } else {
                T::zero()
            }
        })
    }

    /// Regularised diffusions used by the solver.
    pub fn diffusions(&self) -> Vec<Diffusion<T>> {
        let eps = self.epsilon();
        self.fields
            .iter()
            .map(|f| Diffusion { law: f.diffusion.clone(), epsilon: eps, mode: self.solver.regularization })
            .collect()
    }

    /// Initial state at `t = 0`: bulk from `initial`, trace from
    /// `initial_trace`, Dirichlet parts overwritten by their values.
    pub fn initial_state(&self) -> FieldState<T> {
        let mesh = &self.mesh;
        let fields = self
            .fields
            .iter()
            .map(|f| {
                let mut bulk = mesh.sample(|x, y| f.initial.eval(x, y));
                let src = f.initial_trace.as_ref().unwrap_or(&f.initial);
                let mut trace = mesh.sample_boundary(|x, y| src.eval(x, y));
                for (slot, b) in mesh.boundary().iter().enumerate() {
                    if let BoundaryKind::Dirichlet(v) = f.boundary.on(b.part) {
                        trace[slot] = *v;
                        bulk[b.node] = *v;
                    }
                }
                FieldValues::new(bulk, trace)
            })
            .collect();
        FieldState::new(T::zero(), fields)
    }

    /// DeGiorgi exponents `δ = max{2, θᵢ+1, pᵢ/2+1}`, `γ = max{2, βᵢ+1, pᵢ/2+1}`.
    pub fn degiorgi_exponents(&self) -> (T, T) {
        let two = T::lit(2.0);
        let mut delta = two;
        let mut gamma = two;
        for (i, f) in self.fields.iter().enumerate() {
            let half_p = f.diffusion.exponent() / two + T::one();
            delta = delta.max(half_p);
            gamma = gamma.max(half_p);
            if let Some(&th) = self.declarations.theta.get(i) {
                delta = delta.max(th + T::one());
            }
            if let Some(&b) = self.declarations.beta.get(i) {
                gamma = gamma.max(b + T::one());
            }
        }
        (delta, gamma)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domain::{build_mesh, SideLabels};

    pub(crate) fn heat_field(boundary: BoundaryAssignment<f64>) -> FieldSpec<f64> {
        FieldSpec {
            name: "u".into(),
            diffusion: DiffusionLaw::Constant(1.0),
            f: ReactionTerm::zero(1),
            boundary,
            initial: SpatialField::parse("sin(pi*x)").unwrap(),
            initial_trace: None,
        }
    }

    fn interval(left: BoundaryPart, right: BoundaryPart) -> Mesh<f64> {
        build_mesh(1, &[1.0], &[20], &SideLabels::interval(left, right)).unwrap()
    }

    #[test]
    fn partition_and_validation() {
        let mesh = interval(BoundaryPart::Gamma2, BoundaryPart::Gamma1);
        let dynamic = BoundaryAssignment::new(BoundaryKind::dynamic(1.0, ReactionTerm::zero(1)), BoundaryKind::Dirichlet(0.0));
        let sc = Scenario::new(mesh.clone(), vec![heat_field(dynamic)], 1.0);
        sc.validate().unwrap();
        assert_eq!(sc.partition(), Partition { static_fields: vec![], dynamic_fields: vec![0] });

        let zero_delta = BoundaryAssignment::new(BoundaryKind::dynamic(0.0, ReactionTerm::zero(1)), BoundaryKind::Dirichlet(0.0));
        assert!(Scenario::new(mesh.clone(), vec![heat_field(zero_delta)], 1.0).validate().is_err());

        let on_gamma2 = BoundaryAssignment::new(BoundaryKind::Dirichlet(0.0), BoundaryKind::dynamic(1.0, ReactionTerm::zero(1)));
        assert!(Scenario::new(mesh.clone(), vec![heat_field(on_gamma2)], 1.0).validate().is_err());

        let bad = Partition { static_fields: vec![0], dynamic_fields: vec![0] };
        assert!(bad.check_covers(1).is_err());
        assert!(Partition { static_fields: vec![], dynamic_fields: vec![] }.check_covers(1).is_err());
    }

    #[test]
    fn initial_state_honours_traces_and_dirichlet() {
        let mesh = interval(BoundaryPart::Gamma1, BoundaryPart::Gamma1);
        let mut field = heat_field(BoundaryAssignment::new(BoundaryKind::dynamic(1.0, ReactionTerm::zero(1)), BoundaryKind::Dirichlet(0.0)));
        field.initial_trace = Some(SpatialField::constant(3.0));
        let sc = Scenario::new(mesh, vec![field], 1.0);
        let s = sc.initial_state();
        assert_eq!(s.fields[0].trace, vec![3.0, 3.0]);
        assert!(s.fields[0].bulk[0].abs() < 1e-15);

        let mesh = interval(BoundaryPart::Gamma2, BoundaryPart::Gamma1);
        let field = heat_field(BoundaryAssignment::new(BoundaryKind::neumann(1), BoundaryKind::Dirichlet(2.0)));
        let s = Scenario::new(mesh, vec![field], 1.0).initial_state();
        assert_eq!(s.fields[0].bulk[0], 2.0);
        assert_eq!(s.fields[0].trace[0], 2.0);
    }

    #[test]
    fn default_epsilon_and_exponents() {
        let mesh = interval(BoundaryPart::Gamma1, BoundaryPart::Gamma1);
        let mut field = heat_field(BoundaryAssignment::new(BoundaryKind::neumann(1), BoundaryKind::neumann(1)));
        let sc = Scenario::new(mesh.clone(), vec![field.clone()], 1.0);
        assert_eq!(sc.epsilon(), 0.0);
        field.diffusion = DiffusionLaw::Power { alpha: 1.0, p: 2.0 };
        let mut sc = Scenario::new(mesh, vec![field], 1.0);
        assert_eq!(sc.epsilon(), 1e-6);
        sc.declarations.theta = vec![3.0];
        assert_eq!(sc.degiorgi_exponents(), (4.0, 2.0));
    }
}
