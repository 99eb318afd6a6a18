use super::{SpectralError, Variant};
use crate::domain::{BoundaryPart, Mesh};
use crate::scalar::Real;

/// Denominator of the Rayleigh quotient.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Denominator {
    /// `∫Ω φ² + ∫Γ1 φ²`, consistent with the weak form of the pencil.
    Gamma1Mass,
    /// `∫Ω φ² + ∫Γ φ²` over the whole boundary.
    FullTrace,
}

/// Rayleigh quotient of the nodal function `phi` (one value per mesh node).
/// The numerator is `‖∇φ‖² + ∫Γ2 φ²` for the classic problem and
/// `a‖∇φ‖² − C_f∫Ω φ² − C_g∫Γ1 φ²` for the generalized one.
pub fn rayleigh_quotient<T: Real>(
    phi: &[T],
    mesh: &Mesh<T>,
    variant: &Variant<T>,
    denominator: Denominator,
) -> Result<T, SpectralError> {
    if phi.len() != mesh.node_count() {
        return Err(SpectralError::Input(format!(
            "expected {} nodal values, got {}",
            mesh.node_count(),
            phi.len()
        )));
    }
    if phi.iter().all(|&v| v == T::zero()) {
        return Err(SpectralError::ZeroVector);
    }
    let gradient: T = mesh
        .faces()
        .iter()
        .map(|f| {
            let d = phi[f.a] - phi[f.b];
            f.transmissibility * d * d
        })
        .sum();
    let bulk: T = mesh.bulk_weights().iter().zip(phi).map(|(&w, &v)| w * v * v).sum();
    let surface = |part: BoundaryPart| -> T {
        mesh.boundary_nodes_of(part)
            .map(|b| b.surface_weight * phi[b.node] * phi[b.node])
            .sum()
    };
    let (g1, g2) = (surface(BoundaryPart::Gamma1), surface(BoundaryPart::Gamma2));
    let numerator = match variant {
        Variant::Classic => gradient + g2,
        Variant::Generalized(c) => c.diffusion_scale() * gradient - c.c_f * bulk - c.c_g * g1,
    };
    let denom = match denominator {
        Denominator::Gamma1Mass => bulk + g1,
        Denominator::FullTrace => bulk + g1 + g2,
    };
    if denom == T::zero() {
        return Err(SpectralError::ZeroVector);
    }
    Ok(numerator / denom)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domain::{build_mesh, BoundaryPart::*, SideLabels};

    #[test]
    fn constant_with_robin_left_end() {
        let mesh: Mesh<f64> = build_mesh(1, &[1.0], &[10], &SideLabels::interval(Gamma2, Gamma1)).unwrap();
        let one = vec![1.0; 11];
        let r = rayleigh_quotient(&one, &mesh, &Variant::Classic, Denominator::FullTrace).unwrap();
        assert!((r - 1.0 / 3.0).abs() < 1e-14);
    }

    #[test]
    fn constant_without_gamma2_is_in_kernel() {
        let mesh: Mesh<f64> = build_mesh(1, &[1.0], &[10], &SideLabels::interval(Gamma1, Gamma1)).unwrap();
        let one = vec![1.0; 11];
        for d in [Denominator::Gamma1Mass, Denominator::FullTrace] {
            assert_eq!(rayleigh_quotient(&one, &mesh, &Variant::Classic, d).unwrap(), 0.0);
        }
        assert_eq!(
            rayleigh_quotient(&[0.0; 11], &mesh, &Variant::Classic, Denominator::FullTrace),
            Err(SpectralError::ZeroVector)
        );
    }
}
