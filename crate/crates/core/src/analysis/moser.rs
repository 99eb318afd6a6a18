use super::AnalysisError;
use crate::domain::{FieldValues, Mesh};
use crate::scalar::{abs_pow, Real};

#[derive(Debug, Clone, PartialEq)]
pub struct LadderReport<T> {
    pub k: usize,
    /// `n_k = 2^k − 1`.
    pub n: usize,
    /// `(∫|u|^{n_k+1} dμ̂)^{1/(n_k+1)}` with `μ̂ = μ/μ(Ω̄)`.
    pub value: T,
    /// `‖u‖_{X^∞}`.
    pub sup: T,
    /// `(sup − value)/sup`, zero when `u ≡ 0`.
    pub gap: T,
}

pub const MAX_LADDER_RUNG: usize = 8;

/// Normalized ladder values for `k = 0..=k_max`, evaluated in log space.
pub fn moser_ladder<T: Real>(u: &FieldValues<T>, mesh: &Mesh<T>, k_max: usize) -> Result<Vec<LadderReport<T>>, AnalysisError> {
    if k_max > MAX_LADDER_RUNG {
        return Err(AnalysisError::Input(format!("k_max = {} exceeds {}", k_max, MAX_LADDER_RUNG)));
    }
    let mut terms: Vec<(T, T)> = Vec::with_capacity(u.bulk.len() + u.trace.len());
    for (&w, &v) in mesh.bulk_weights().iter().zip(&u.bulk) {
        terms.push((w, v.abs()));
    }
    for (b, &v) in mesh.boundary().iter().zip(&u.trace) {
        terms.push((b.surface_weight, v.abs()));
    }
    let sup = terms.iter().fold(T::zero(), |m, &(_, v)| m.max(v));
    let log_total = mesh.measure_of(crate::domain::Region::Closure).ln();
    let mut out = Vec::with_capacity(k_max + 1);
    for k in 0..=k_max {
        let n = (1usize << k) - 1;
        let q = T::from_usize_lossy(n + 1);
        let value = if sup == T::zero() {
            T::zero()
        } else {
            // log ∫|u|^q dμ̂ = log Σ w exp(q log|u|) − log μ(Ω̄), shifted by q log sup
            let log_sup = sup.ln();
            let s: T = terms
                .iter()
                .filter(|&&(w, v)| v > T::zero() && w > T::zero())
                .map(|&(w, v)| w * (q * (v.ln() - log_sup)).exp())
                .sum();
            (log_sup + (s.ln() - log_total) / q).exp()
        };
        let gap = if sup == T::zero() { T::zero() } else { (sup - value) / sup };
        out.push(LadderReport { k, n, value, sup, gap });
    }
    Ok(out)
}

/// Both sides of `∫|∇u|²|u|^{n−1} = (2/(n+1))² ∫|∇|u|^{(n+1)/2}|²` on the
/// bulk nodal values, using face differences and face-averaged `|u|`.
pub fn power_identity<T: Real>(bulk: &[T], mesh: &Mesh<T>, n: T) -> Result<(T, T), AnalysisError> {
    if !(n >= T::one()) {
        return Err(AnalysisError::Exponent(n.to_f64_lossy()));
    }
    let two = T::lit(2.0);
    let q = (n + T::one()) / two;
    let factor = (two / (n + T::one())).powi(2);
    let mut lhs = T::zero();
    let mut rhs = T::zero();
    for f in mesh.faces() {
        let (a, b) = (bulk[f.a], bulk[f.b]);
        let d = a - b;
        let mid = (a.abs() + b.abs()) / two;
        lhs += f.transmissibility * d * d * abs_pow(mid, n - T::one());
        let e = abs_pow(a, q) - abs_pow(b, q);
        rhs += f.transmissibility * e * e;
    }
    Ok((lhs, factor * rhs))
}
