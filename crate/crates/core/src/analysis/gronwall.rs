use super::AnalysisError;
use crate::scalar::Real;

/// `(c2/c1)^ν + (c1(ν−1)t)^{−1/(ν−1)}`, the bound for `Y' + c1 Y^ν ≤ c2`.
pub fn gronwall_envelope<T: Real>(c1: T, c2: T, nu: T, t: T) -> Result<T, AnalysisError> {
    if !(c1 > T::zero() && c2 > T::zero() && t > T::zero()) {
        return Err(AnalysisError::Input(format!(
            "c1 = {}, c2 = {}, t = {} must all be positive",
            c1, c2, t
        )));
    }
    if !(nu > T::one()) {
        return Err(AnalysisError::Input(format!(
            "ν = {} ≤ 1: use the exponential decay model instead",
            nu
        )));
    }
    let e = nu - T::one();
    Ok((c2 / c1).powf(nu) + (c1 * e * t).powf(-T::one() / e))
}

/// `ν = minᵢ(mᵢ/pᵢ) + 1`, skipping fields with `pᵢ = 0`. Fails when every
/// `pᵢ` vanishes (no algebraic regime).
pub fn decay_exponent<T: Real>(m: &[T], p: &[T]) -> Result<T, AnalysisError> {
    if m.len() != p.len() || m.is_empty() {
        return Err(AnalysisError::Input("need one mᵢ per pᵢ".into()));
    }
    let mut best: Option<T> = None;
    for (&mi, &pi) in m.iter().zip(p) {
        if pi < T::zero() || mi < T::one() {
            return Err(AnalysisError::Input(format!("m = {}, p = {} out of range", mi, pi)));
        }
        if pi > T::zero() {
            let r = mi / pi;
            best = Some(best.map_or(r, |b| b.min(r)));
        }
    }
    best.map(|r| r + T::one())
        .ok_or_else(|| AnalysisError::Input("all pᵢ = 0: exponential regime".into()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn envelope_values() {
        assert_eq!(gronwall_envelope(1.0, 1.0, 2.0, 1.0).unwrap(), 2.0);
        let v: f64 = gronwall_envelope(2.0, 4.0, 3.0, 0.5).unwrap();
        assert!((v - (8.0 + 0.5f64.sqrt())).abs() < 1e-12);
        assert!(gronwall_envelope(1.0, 1.0, 1.0, 1.0).is_err());
        assert!(gronwall_envelope(1.0, 0.0, 2.0, 1.0).is_err());
    }

    #[test]
    fn exponent_rule() {
        assert_eq!(decay_exponent(&[2.0], &[2.0]).unwrap(), 2.0);
        assert_eq!(decay_exponent(&[2.0, 3.0], &[1.0, 0.0]).unwrap(), 3.0);
        assert!(decay_exponent(&[2.0], &[0.0]).is_err());
    }
}
