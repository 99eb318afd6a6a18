use super::AnalysisError;
use crate::domain::{FieldValues, Mesh};
use crate::scalar::{abs_pow, Real};

#[derive(Debug, Clone, PartialEq)]
pub struct TraceProbe<T> {
    /// `∫Γ|u|^{s+n} dS`.
    pub lhs: T,
    /// `ε(s+n)∫Ω|∇u|²|u|^{p+n−1} dx`.
    pub gradient: T,
    /// `(s+n)(‖u‖^{s+n}_{L^{s+n}(Ω)} + 1)`, the factor multiplying `C/ε`.
    pub bulk: T,
    /// Least `C ≥ 0` with `lhs ≤ gradient + (C/ε)·bulk`.
    pub least_c: T,
}

/// Evaluates both sides of the trace inequality
/// `∫Γ|u|^{s+n} ≤ ε(s+n)∫Ω|∇u|²|u|^{p+n−1} + (C/ε)(s+n)(‖u‖^{s+n}_{L^{s+n}(Ω)} + 1)`
/// on a discrete sample.
pub fn trace_probe<T: Real>(u: &FieldValues<T>, mesh: &Mesh<T>, n: T, s: T, p: T, eps: T) -> Result<TraceProbe<T>, AnalysisError> {
    if !(n >= T::one() && p >= T::zero() && s > -T::one() && eps > T::zero()) {
        return Err(AnalysisError::Input(format!(
            "need n ≥ 1, p ≥ 0, s > −1, ε > 0; got n = {}, p = {}, s = {}, ε = {}",
            n, p, s, eps
        )));
    }
    let q = s + n;
    let two = T::lit(2.0);
    let lhs: T = mesh
        .boundary()
        .iter()
        .zip(&u.trace)
        .map(|(b, &v)| b.surface_weight * abs_pow(v, q))
        .sum();
    let grad: T = mesh
        .faces()
        .iter()
        .map(|f| {
            let (a, b) = (u.bulk[f.a], u.bulk[f.b]);
            let d = a - b;
            f.transmissibility * d * d * abs_pow((a.abs() + b.abs()) / two, p + n - T::one())
        })
        .sum();
    let bulk_int: T = mesh.bulk_weights().iter().zip(&u.bulk).map(|(&w, &v)| w * abs_pow(v, q)).sum();
    let gradient = eps * q * grad;
    let bulk = q * (bulk_int + T::one());
    let least_c = (eps * (lhs - gradient) / bulk).max(T::zero());
    Ok(TraceProbe { lhs, gradient, bulk, least_c })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domain::{build_mesh, BoundaryPart::*, SideLabels};

    #[test]
    fn constant_sample() {
        let m: Mesh<f64> = build_mesh(1, &[1.0], &[10], &SideLabels::interval(Gamma1, Gamma1)).unwrap();
        let r = trace_probe(&FieldValues::constant(&m, 1.0), &m, 2.0, 1.0, 0.0, 1.0).unwrap();
        assert!((r.lhs - 2.0).abs() < 1e-14);
        assert_eq!(r.gradient, 0.0);
        assert!((r.bulk - 6.0).abs() < 1e-14);
        assert!((r.least_c - 1.0 / 3.0).abs() < 1e-14);
        let z = trace_probe(&FieldValues::constant(&m, 0.0), &m, 2.0, 1.0, 0.0, 1.0).unwrap();
        assert_eq!((z.lhs, z.least_c), (0.0, 0.0));
        assert!(trace_probe(&FieldValues::constant(&m, 0.0), &m, 0.5, 1.0, 0.0, 1.0).is_err());
    }
}
