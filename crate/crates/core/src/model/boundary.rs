//! Boundary assignments per field and boundary part.

use super::reaction::{ReactionTerm, SpatialField};
use crate::scalar::Real;

/// Capacity of a dynamic boundary condition.
#[derive(Debug, Clone, PartialEq)]
pub enum DynamicWeight<T> {
    /// Uniform weight `δ > 0`.
    Uniform(T),
    /// Spatially varying `β(x) ≥ 0`; nodes where it vanishes become algebraic
    /// flux constraints.
    Field(SpatialField),
}

/// How a dynamic node couples to the bulk.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Coupling {
    #[default]
    Flux,
    /// Flux and sources removed: the trace keeps its initial value.
    Frozen,
}

#[derive(Debug, Clone, PartialEq)]
pub enum BoundaryKind<T> {
    /// `u = value`.
    Dirichlet(T),
    /// `∂ₙu + h(x, t, u⃗) = 0`.
    Static { h: ReactionTerm<T> },
    /// `β ∂ₜu + ∂ₙA(u) + g(x, t, u⃗) = h₂(x)`.
    Dynamic { weight: DynamicWeight<T>, g: ReactionTerm<T>, h2: SpatialField, coupling: Coupling },
}

impl<T: Real> BoundaryKind<T> {
    pub fn neumann(m: usize) -> Self {
        BoundaryKind::Static { h: ReactionTerm::zero(m) }
    }

    /// Dynamic condition with uniform weight, source `g` and no `h₂`.
    pub fn dynamic(delta: T, g: ReactionTerm<T>) -> Self {
        BoundaryKind::Dynamic {
            weight: DynamicWeight::Uniform(delta),
            g,
            h2: SpatialField::constant(0.0),
            coupling: Coupling::Flux,
        }
    }

    pub fn is_dynamic(&self) -> bool {
        matches!(self, BoundaryKind::Dynamic { .. })
    }

    /// Weight at position `(x, y)` for dynamic kinds.
    pub fn weight_at(&self, x: T, y: T) -> Option<T> {
        match self {
            BoundaryKind::Dynamic { weight: DynamicWeight::Uniform(d), .. } => Some(*d),
            BoundaryKind::Dynamic { weight: DynamicWeight::Field(f), .. } => Some(f.eval(x, y)),
            _ => None,
        }
    }
}

/// Boundary conditions of one field on Γ₁ and Γ₂.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundaryAssignment<T> {
    pub gamma1: BoundaryKind<T>,
    pub gamma2: BoundaryKind<T>,
}

impl<T: Real> BoundaryAssignment<T> {
    pub fn new(gamma1: BoundaryKind<T>, gamma2: BoundaryKind<T>) -> Self {
        Self { gamma1, gamma2 }
    }

    pub fn on(&self, part: crate::domain::BoundaryPart) -> &BoundaryKind<T> {
        match part {
            crate::domain::BoundaryPart::Gamma1 => &self.gamma1,
            crate::domain::BoundaryPart::Gamma2 => &self.gamma2,
        }
    }
}
