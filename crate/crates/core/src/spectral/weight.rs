use super::{assemble_wentzell, solve_spectrum, GeneralizedCoefficients, SolveOptions, SpectralError, Variant};
use crate::analysis::l1_mu;
use crate::domain::FieldValues;
use crate::model::Scenario;
use crate::scalar::Real;

/// First eigenfunction of field `i`'s generalized problem as a nodal field
/// (zero on Γ2), made nonnegative and normalized to `‖φ₁‖_{L¹(μ)} = 1`.
pub fn ground_state_weight<T: Real>(scenario: &Scenario<T>, i: usize) -> Result<FieldValues<T>, SpectralError> {
    let coefficients = GeneralizedCoefficients::from_scenario(scenario, i);
    let system = assemble_wentzell(&scenario.mesh, Variant::Generalized(coefficients))?;
    let pair = solve_spectrum(&system, 1, SolveOptions::default())?.remove(0);
    let mut field = FieldValues::from_bulk(&scenario.mesh, system.expand(&pair.vector));
    let peak = field.bulk.iter().fold(T::zero(), |m, &v| m.max(v.abs()));
    let tol = peak * T::epsilon() * T::lit(64.0);
    if field.bulk.iter().any(|&v| v < -tol) {
        return Err(SpectralError::GroundState("first eigenfunction changes sign".into()));
    }
    for v in field.bulk.iter_mut().chain(field.trace.iter_mut()) {
        *v = v.max(T::zero());
    }
    let norm = l1_mu(&field, &scenario.mesh);
    for v in field.bulk.iter_mut().chain(field.trace.iter_mut()) {
        *v /= norm;
    }
    Ok(field)
}
