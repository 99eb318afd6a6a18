//! Norms on `X^{s1,s2} = L^{s1}(Ω) ⊕ L^{s2}(Γ)` and the product space norm.

use super::AnalysisError;
use crate::domain::{FieldValues, Mesh};
use crate::model::Partition;
use crate::scalar::Real;

/// `(Σ wₖ|vₖ|^s)^{1/s}`, scaled by the maximum to avoid overflow; `s = ∞`
/// gives the maximum.
pub fn weighted_lp<T: Real>(values: &[T], weights: &[T], s: T) -> T {
    let max = values.iter().fold(T::zero(), |m, v| m.max(v.abs()));
    if s.is_infinite() || max == T::zero() {
        return max;
    }
    let sum: T = values.iter().zip(weights).map(|(v, w)| *w * (v.abs() / max).powf(s)).sum();
    max * sum.powf(T::one() / s)
}

fn check_exponent<T: Real>(s: T) -> Result<(), AnalysisError> {
    if s >= T::one() {
        Ok(())
    } else {
        Err(AnalysisError::Exponent(s.to_f64_lossy()))
    }
}

/// `‖u‖_{L^s(Ω)}` with lumped bulk weights.
pub fn bulk_norm<T: Real>(u: &FieldValues<T>, mesh: &Mesh<T>, s: T) -> Result<T, AnalysisError> {
    check_exponent(s)?;
    Ok(weighted_lp(&u.bulk, mesh.bulk_weights(), s))
}

/// `‖u‖_{L^s(Γ)}` over the whole boundary, using the trace values.
pub fn trace_norm<T: Real>(u: &FieldValues<T>, mesh: &Mesh<T>, s: T) -> Result<T, AnalysisError> {
    check_exponent(s)?;
    let w: Vec<T> = mesh.boundary().iter().map(|b| b.surface_weight).collect();
    Ok(weighted_lp(&u.trace, &w, s))
}

/// `‖u‖_{X^{s1,s2}} = ‖u‖_{L^{s1}(Ω)} + ‖u‖_{L^{s2}(Γ)}`, or the maximum of
/// the two sup norms when both exponents are infinite.
pub fn x_norm<T: Real>(u: &FieldValues<T>, mesh: &Mesh<T>, s1: T, s2: T) -> Result<T, AnalysisError> {
    let b = bulk_norm(u, mesh, s1)?;
    let g = trace_norm(u, mesh, s2)?;
    if s1.is_infinite() && s2.is_infinite() {
        Ok(b.max(g))
    } else {
        Ok(b + g)
    }
}

/// `Σ_{i∈I}‖uᵢ‖_{L^{rᵢ}(Ω)} + Σ_{i∈J}(‖uᵢ‖_{L^{rᵢ}(Ω)} + δᵢ‖uᵢ‖_{L^{rᵢ}(Γ)})`.
pub fn xvec_norm<T: Real>(
    fields: &[FieldValues<T>],
    mesh: &Mesh<T>,
    r: &[T],
    delta: &[T],
    partition: &Partition,
) -> Result<T, AnalysisError> {
    let m = fields.len();
    partition.check_covers(m).map_err(|e| AnalysisError::Input(e.to_string()))?;
    if r.len() != m || delta.len() != m {
        return Err(AnalysisError::Input("need one exponent and one weight per field".into()));
    }
    let mut total = T::zero();
    for &i in &partition.static_fields {
        total += bulk_norm(&fields[i], mesh, r[i])?;
    }
    for &i in &partition.dynamic_fields {
        if !(delta[i] > T::zero()) {
            return Err(AnalysisError::Input(format!("field {} needs a positive boundary weight", i + 1)));
        }
        total += bulk_norm(&fields[i], mesh, r[i])? + delta[i] * trace_norm(&fields[i], mesh, r[i])?;
    }
    Ok(total)
}

/// `max{‖u‖_{L^∞(Ω)}, ‖u‖_{L^∞(Γ)}}` over all fields.
pub fn sup_norm<T: Real>(fields: &[FieldValues<T>]) -> T {
    fields
        .iter()
        .flat_map(|f| f.bulk.iter().chain(f.trace.iter()))
        .fold(T::zero(), |m, v| m.max(v.abs()))
}
