//! Weighted energy `∫_Ω̄ ℰ(u⃗) φ dμ` with `ℰ = Σ |uᵢ|^{mᵢ}/mᵢ`.

use super::AnalysisError;
use crate::domain::{FieldValues, Mesh};
use crate::scalar::{abs_pow, Real};

/// `‖φ‖_{L¹(μ)} = ∫_Ω |φ| dx + ∫_Γ |φ| dS`.
pub fn l1_mu<T: Real>(phi: &FieldValues<T>, mesh: &Mesh<T>) -> T {
    let bulk: T = phi.bulk.iter().zip(mesh.bulk_weights()).map(|(v, w)| v.abs() * *w).sum();
    let surf: T = phi.trace.iter().zip(mesh.boundary()).map(|(v, b)| v.abs() * b.surface_weight).sum();
    bulk + surf
}

/// Uniform weight with unit `L¹(μ)` norm, i.e. `1/μ(Ω̄)`.
pub fn uniform_weight<T: Real>(mesh: &Mesh<T>) -> FieldValues<T> {
    FieldValues::constant(mesh, T::one() / mesh.measure_of(crate::domain::Region::Closure))
}

/// `∫ ℰ(u⃗) φ dμ`. With `normalize`, `φ` is first scaled to unit `L¹(μ)` norm;
/// `None` uses the uniform normalised weight.
pub fn energy_functional<T: Real>(
    fields: &[FieldValues<T>],
    mesh: &Mesh<T>,
    exponents: &[T],
    weight: Option<&FieldValues<T>>,
    normalize: bool,
) -> Result<T, AnalysisError> {
    if exponents.len() != fields.len() {
        return Err(AnalysisError::Input("need one energy exponent per field".into()));
    }
    if let Some(&m) = exponents.iter().find(|&&m| !(m >= T::one())) {
        return Err(AnalysisError::Exponent(m.to_f64_lossy()));
    }
    let uniform;
    let phi = match weight {
        Some(w) => w,
        None => {
            uniform = uniform_weight(mesh);
            &uniform
        }
    };
    if phi.bulk.iter().chain(&phi.trace).any(|v| !(*v >= T::zero())) {
        return Err(AnalysisError::Input("energy weight must be nonnegative".into()));
    }
    let scale = if normalize && weight.is_some() {
        let n = l1_mu(phi, mesh);
        if n == T::zero() {
            return Err(AnalysisError::Input("energy weight vanishes identically".into()));
        }
        T::one() / n
    } else {
        T::one()
    };
    let density = |vals: &dyn Fn(&FieldValues<T>) -> T| -> T {
        fields.iter().zip(exponents).map(|(f, &m)| abs_pow(vals(f), m) / m).sum()
    };
    let mut total = T::zero();
    for (k, w) in mesh.bulk_weights().iter().enumerate() {
        total += *w * phi.bulk[k] * density(&|f| f.bulk[k]);
    }
    for (slot, b) in mesh.boundary().iter().enumerate() {
        total += b.surface_weight * phi.trace[slot] * density(&|f| f.trace[slot]);
    }
    Ok(total * scale)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domain::{build_mesh, BoundaryPart, SideLabels};

    fn unit(cells: usize) -> Mesh<f64> {
        build_mesh(1, &[1.0], &[cells], &SideLabels::interval(BoundaryPart::Gamma2, BoundaryPart::Gamma1)).unwrap()
    }

    #[test]
    fn energy_examples() {
        let mesh = unit(40);
        let fields = vec![FieldValues::constant(&mesh, 2.0), FieldValues::constant(&mesh, -1.0)];
        let e = energy_functional(&fields, &mesh, &[2.0, 3.0], None, true).unwrap();
        assert!((e - 7.0 / 3.0).abs() < 1e-12);
        let zero = vec![FieldValues::constant(&mesh, 0.0)];
        assert_eq!(energy_functional(&zero, &mesh, &[2.0], None, true).unwrap(), 0.0);

        let mesh = unit(1000);
        let lin = vec![FieldValues::from_bulk(&mesh, mesh.sample(|x, _| x))];
        let e = energy_functional(&lin, &mesh, &[2.0], None, true).unwrap();
        assert!((e - 2.0 / 9.0).abs() < 1e-6);
        // an unnormalised constant weight gives the same value once normalised
        let w = FieldValues::constant(&mesh, 5.0);
        let e2 = energy_functional(&lin, &mesh, &[2.0], Some(&w), true).unwrap();
        assert!((e - e2).abs() < 1e-14);
    }

    #[test]
    fn rejects_bad_weights() {
        let mesh = unit(10);
        let f = vec![FieldValues::constant(&mesh, 1.0)];
        let w = FieldValues::constant(&mesh, -1.0);
        assert!(energy_functional(&f, &mesh, &[2.0], Some(&w), true).is_err());
        assert!(energy_functional(&f, &mesh, &[0.5], None, true).is_err());
    }
}
