use super::{EigenSystem, SpectralError, Variant};
use crate::linalg::{symmetric_eigen, DenseMatrix, SymTridiagonal};
use crate::scalar::Real;

/// Post-processing applied to discrete eigenvalues before reporting.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Correction {
    #[default]
    None,
    /// 1D only. Removes the leading `h²` dispersion error of the three-point
    /// stencil: with `q = (μ + C_f)/a`, reports `a(q + h²q²/12) − C_f`.
    Dispersion,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct SolveOptions {
    pub correction: Correction,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EigenPair<T> {
    /// Reported eigenvalue (after any correction).
    pub value: T,
    /// Eigenvalue of the discrete pencil itself.
    pub discrete: T,
    /// `M`-normalized eigenvector over the pencil unknowns; its largest
    /// entry in magnitude is positive.
    pub vector: Vec<T>,
    /// `‖Kφ − μMφ‖₂ / ‖Kφ‖₂`, floored at round-off scale when `Kφ ≈ 0`.
    pub residual: T,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GroundState<T> {
    pub lambda1: T,
    pub gap: Option<T>,
    pub single_signed: bool,
}

impl<T: Real> GroundState<T> {
    pub fn holds(&self) -> bool {
        self.lambda1 > T::zero() && self.gap.is_none_or(|g| g > T::zero()) && self.single_signed
    }
}

/// Lowest `k` eigenpairs of `Kφ = ΛMφ`, ascending. When the classic problem
/// has a Γ2 part of positive measure, the ground state is checked to be
/// positive, simple and single-signed.
pub fn solve_spectrum<T: Real>(
    system: &EigenSystem<T>,
    k: usize,
    options: SolveOptions,
) -> Result<Vec<EigenPair<T>>, SpectralError> {
    let n = system.size();
    if k > n {
        return Err(SpectralError::TooMany { requested: k, size: n });
    }
    if options.correction == Correction::Dispersion && system.dimension != 1 {
        return Err(SpectralError::Input("dispersion correction is defined for 1D meshes only".into()));
    }
    let mass = system.mass();
    let scale: Vec<T> = mass.iter().map(|&m| T::one() / m.sqrt()).collect();
    let (values, vectors) = if system.is_tridiagonal() {
        let mut off = vec![T::zero(); n.saturating_sub(1)];
        for &(i, _, v) in &system.upper {
            off[i] += v * scale[i] * scale[i + 1];
        }
        let diag: Vec<T> = system.diag.iter().zip(&scale).map(|(&d, &s)| d * s * s).collect();
        let tri = SymTridiagonal::new(diag, off);
        let vals = tri.lowest_eigenvalues(k);
        let vecs = tri.eigenvectors(&vals);
        (vals, vecs)
    } else {
        let kd = system.stiffness_dense();
        let a = DenseMatrix::from_fn(n, n, |i, j| kd[(i, j)] * scale[i] * scale[j]);
        let (mut vals, mut vecs) = symmetric_eigen(&a);
        vals.truncate(k);
        vecs.truncate(k);
        (vals, vecs)
    };
    let k_norm = stiffness_inf_norm(system);
    let mut pairs = Vec::with_capacity(k);
    for (mu, y) in values.into_iter().zip(vectors) {
        if !mu.is_finite() || y.iter().any(|v| !v.is_finite()) {
            return Err(SpectralError::Convergence(format!("non-finite eigenpair near {}", mu)));
        }
        let mut phi: Vec<T> = y.iter().zip(&scale).map(|(&v, &s)| v * s).collect();
        let norm = system.mass_norm_sq(&phi).sqrt();
        let peak = phi.iter().fold(T::zero(), |m, &v| if v.abs() > m.abs() { v } else { m });
        let sign = if peak < T::zero() { -T::one() } else { T::one() };
        for v in &mut phi {
            *v = *v * sign / norm;
        }
        let kphi = system.apply_stiffness(&phi);
        let r: T = kphi
            .iter()
            .zip(&phi)
            .zip(&mass)
            .map(|((&kv, &p), &m)| {
                let d = kv - mu * m * p;
                d * d
            })
            .sum::<T>()
            .sqrt();
        let kn = kphi.iter().map(|&v| v * v).sum::<T>().sqrt();
        let phi_norm = phi.iter().map(|&v| v * v).sum::<T>().sqrt();
        let floor = k_norm * phi_norm * T::epsilon() * T::lit(16.0);
        pairs.push(EigenPair {
            value: correct(system, mu, options.correction),
            discrete: mu,
            vector: phi,
            residual: r / kn.max(floor),
        });
    }
    if matches!(system.variant, Variant::Classic) && system.gamma2_measure > T::zero() {
        if let Some(gs) = ground_state(&pairs) {
            if !gs.holds() {
                return Err(SpectralError::GroundState(format!(
                    "Λ1 = {}, gap = {:?}, single-signed = {}",
                    gs.lambda1, gs.gap, gs.single_signed
                )));
            }
        }
    }
    Ok(pairs)
}

/// Positivity, simplicity and sign of the first eigenpair, when present.
pub fn ground_state<T: Real>(pairs: &[EigenPair<T>]) -> Option<GroundState<T>> {
    let first = pairs.first()?;
    let peak = first.vector.iter().fold(T::zero(), |m, &v| m.max(v.abs()));
    let tol = peak * T::epsilon() * T::lit(64.0);
    Some(GroundState {
        lambda1: first.discrete,
        gap: pairs.get(1).map(|p| p.discrete - first.discrete),
        single_signed: first.vector.iter().all(|&v| v >= -tol),
    })
}

fn stiffness_inf_norm<T: Real>(system: &EigenSystem<T>) -> T {
    let mut rows: Vec<T> = system.diag.iter().map(|d| d.abs()).collect();
    for &(i, j, v) in &system.upper {
        rows[i] += v.abs();
        rows[j] += v.abs();
    }
    rows.into_iter().fold(T::zero(), T::max)
}

fn correct<T: Real>(system: &EigenSystem<T>, mu: T, correction: Correction) -> T {
    match correction {
        Correction::None => mu,
        Correction::Dispersion => {
            let (a, c) = match &system.variant {
                Variant::Classic => (T::one(), T::zero()),
                Variant::Generalized(g) => (g.diffusion_scale(), g.c_f),
            };
            let h = system.spacing;
            let q = (mu + c) / a;
            a * (q + h * h * q * q / T::lit(12.0)) - c
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domain::{build_mesh, BoundaryPart::*, SideLabels};
    use crate::spectral::assemble_wentzell;

    #[test]
    fn neumann_type_problem_has_constant_ground_state() {
        let mesh: crate::domain::Mesh<f64> = build_mesh(1, &[1.0], &[50], &SideLabels::interval(Gamma1, Gamma1)).unwrap();
        let sys = assemble_wentzell(&mesh, Variant::Classic).unwrap();
        let pairs = solve_spectrum(&sys, 3, SolveOptions::default()).unwrap();
        assert!(pairs[0].value.abs() < 1e-10);
        let v0 = pairs[0].vector[0];
        assert!(pairs[0].vector.iter().all(|v| (v - v0).abs() < 1e-8));
        // μ(Ω̄) = 3 so the normalized constant is 1/√3
        assert!((v0 - 1.0 / 3f64.sqrt()).abs() < 1e-8);
        assert!(pairs[1].value > 0.0);
    }

    #[test]
    fn two_dimensional_dense_path_is_m_orthonormal() {
        let mesh = build_mesh(2, &[1.0, 1.0], &[6, 6], &SideLabels { left: Some(Gamma2), right: Some(Gamma1), bottom: Some(Gamma1), top: Some(Gamma1) }).unwrap();
        let sys = assemble_wentzell(&mesh, Variant::Classic).unwrap();
        let pairs = solve_spectrum(&sys, 4, SolveOptions::default()).unwrap();
        let m = sys.mass();
        for a in &pairs {
            assert!(a.residual < 1e-8);
            for b in &pairs {
                let dot: f64 = a.vector.iter().zip(&b.vector).zip(&m).map(|((x, y), w)| x * y * w).sum();
                let expect = if std::ptr::eq(a, b) { 1.0 } else { 0.0 };
                assert!((dot - expect).abs() < 1e-9);
            }
        }
        assert!(solve_spectrum(&sys, 2, SolveOptions { correction: Correction::Dispersion }).is_err());
    }

    #[test]
    fn too_many_pairs_rejected() {
        let mesh = build_mesh(1, &[1.0], &[4], &SideLabels::interval(Gamma1, Gamma1)).unwrap();
        let sys = assemble_wentzell(&mesh, Variant::Classic).unwrap();
        assert!(matches!(
            solve_spectrum(&sys, 6, SolveOptions::default()),
            Err(SpectralError::TooMany { .. })
        ));
    }
}
