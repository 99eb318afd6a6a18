use super::SpectralError;
use crate::domain::{BoundaryPart, Mesh};
use crate::linalg::DenseMatrix;
use crate::model::Scenario;
use crate::scalar::Real;

/// Per-field data of the generalized problem
/// `−aΔφ − C_f φ = Λφ` in Ω, `a∂ₙφ − C_g φ = Λφ` on Γ1, `φ = 0` on Γ2,
/// with `a = α(m−1)(2/(m+p))²`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GeneralizedCoefficients<T> {
    pub alpha: T,
    pub m: T,
    pub p: T,
    pub c_f: T,
    pub c_g: T,
}

impl<T: Real> GeneralizedCoefficients<T> {
    pub fn diffusion_scale(&self) -> T {
        let two = T::lit(2.0);
        let r = two / (self.m + self.p);
        self.alpha * (self.m - T::one()) * r * r
    }

    /// Coefficients of field `i`, taking `α` and `p` from the declarations
    /// when present and from the diffusion law otherwise.
    pub fn from_scenario(scenario: &Scenario<T>, i: usize) -> Self {
        let d = &scenario.declarations;
        let (alpha, p) = scenario.fields[i].diffusion.lower_bound();
        GeneralizedCoefficients {
            alpha: d.alpha.get(i).copied().unwrap_or(alpha),
            m: d.m(i),
            p: d.p.get(i).copied().unwrap_or(p),
            c_f: d.c_f(i),
            c_g: d.c_g(i),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Variant<T> {
    /// `−Δφ = Λφ` in Ω, `∂ₙφ = Λφ` on Γ1, `∂ₙφ + φ = 0` on Γ2.
    Classic,
    Generalized(GeneralizedCoefficients<T>),
}

/// Symmetric pencil over the unconstrained nodes. `K` is stored as its
/// diagonal plus strictly upper entries; `M = bulk_mass + surface_mass`.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenSystem<T> {
    pub variant: Variant<T>,
    pub(crate) dimension: usize,
    pub(crate) spacing: T,
    pub(crate) node_count: usize,
    pub(crate) unknowns: Vec<usize>,
    pub(crate) diag: Vec<T>,
    pub(crate) upper: Vec<(usize, usize, T)>,
    pub(crate) bulk_mass: Vec<T>,
    pub(crate) surface_mass: Vec<T>,
    pub(crate) gamma2_measure: T,
}

pub fn assemble_wentzell<T: Real>(mesh: &Mesh<T>, variant: Variant<T>) -> Result<EigenSystem<T>, SpectralError> {
    let n = mesh.node_count();
    let (conductance, constrained) = match &variant {
        Variant::Classic => (T::one(), false),
        Variant::Generalized(c) => {
            let a = c.diffusion_scale();
            if !(a > T::zero()) || !a.is_finite() {
                return Err(SpectralError::Input(format!(
                    "diffusion scale α(m−1)(2/(m+p))² = {} must be positive",
                    a
                )));
            }
            (a, true)
        }
    };
    let mut reduced = vec![None; n];
    let mut unknowns = Vec::with_capacity(n);
    for (node, slot) in reduced.iter_mut().enumerate() {
        let on_gamma2 = mesh
            .boundary_slot(node)
            .map(|s| mesh.boundary()[s].part == BoundaryPart::Gamma2)
            .unwrap_or(false);
        if constrained && on_gamma2 {
            continue;
        }
        *slot = Some(unknowns.len());
        unknowns.push(node);
    }
    if unknowns.is_empty() {
        return Err(SpectralError::Empty);
    }
    let size = unknowns.len();
    let mut diag = vec![T::zero(); size];
    let mut upper = Vec::with_capacity(mesh.faces().len());
    for f in mesh.faces() {
        let c = conductance * f.transmissibility;
        match (reduced[f.a], reduced[f.b]) {
            (Some(i), Some(j)) => {
                diag[i] += c;
                diag[j] += c;
                upper.push((i.min(j), i.max(j), -c));
            }
            (Some(i), None) | (None, Some(i)) => diag[i] += c,
            (None, None) => {}
        }
    }
    let mut bulk_mass = vec![T::zero(); size];
    let mut surface_mass = vec![T::zero(); size];
    for (r, &node) in unknowns.iter().enumerate() {
        bulk_mass[r] = mesh.bulk_weights()[node];
    }
    for b in mesh.boundary() {
        let Some(r) = reduced[b.node] else { continue };
        match (b.part, &variant) {
            (BoundaryPart::Gamma1, _) => surface_mass[r] = b.surface_weight,
            (BoundaryPart::Gamma2, Variant::Classic) => diag[r] += b.surface_weight,
            (BoundaryPart::Gamma2, Variant::Generalized(_)) => {}
        }
    }
    if let Variant::Generalized(c) = &variant {
        for r in 0..size {
            diag[r] -= c.c_f * bulk_mass[r] + c.c_g * surface_mass[r];
        }
    }
    upper.sort_by_key(|x| (x.0, x.1));
    Ok(EigenSystem {
        variant,
        dimension: mesh.dimension(),
        spacing: mesh.spacing()[0],
        node_count: n,
        unknowns,
        diag,
        upper,
        bulk_mass,
        surface_mass,
        gamma2_measure: mesh.measure_of(crate::domain::Region::Gamma2),
    })
}

impl<T: Real> EigenSystem<T> {
    pub fn size(&self) -> usize {
        self.unknowns.len()
    }

    /// Mesh nodes carried by the pencil, in pencil order.
    pub fn unknowns(&self) -> &[usize] {
        &self.unknowns
    }

    /// Diagonal of `M`.
    pub fn mass(&self) -> Vec<T> {
        self.bulk_mass.iter().zip(&self.surface_mass).map(|(&a, &b)| a + b).collect()
    }

    pub fn bulk_mass(&self) -> &[T] {
        &self.bulk_mass
    }

    pub fn surface_mass(&self) -> &[T] {
        &self.surface_mass
    }

    pub fn gamma2_measure(&self) -> T {
        self.gamma2_measure
    }

    pub fn stiffness_dense(&self) -> DenseMatrix<T> {
        let n = self.size();
        let mut k = DenseMatrix::zeros(n, n);
        for (i, &d) in self.diag.iter().enumerate() {
            k[(i, i)] = d;
        }
        for &(i, j, v) in &self.upper {
            k[(i, j)] += v;
            k[(j, i)] += v;
        }
        k
    }

    pub fn apply_stiffness(&self, x: &[T]) -> Vec<T> {
        let mut y: Vec<T> = self.diag.iter().zip(x).map(|(&d, &v)| d * v).collect();
        for &(i, j, v) in &self.upper {
            y[i] += v * x[j];
            y[j] += v * x[i];
        }
        y
    }

    /// `φᵀKφ`.
    pub fn quadratic_form(&self, x: &[T]) -> T {
        self.apply_stiffness(x).iter().zip(x).map(|(&a, &b)| a * b).sum()
    }

    /// `φᵀMφ`.
    pub fn mass_norm_sq(&self, x: &[T]) -> T {
        self.mass().iter().zip(x).map(|(&m, &v)| m * v * v).sum()
    }

    /// Nodal vector over the whole mesh, zero on constrained nodes.
    pub fn expand(&self, x: &[T]) -> Vec<T> {
        let mut full = vec![T::zero(); self.node_count];
        for (&node, &v) in self.unknowns.iter().zip(x) {
            full[node] = v;
        }
        full
    }

    /// Restriction of a full nodal vector to the pencil unknowns.
    pub fn restrict(&self, full: &[T]) -> Vec<T> {
        self.unknowns.iter().map(|&n| full[n]).collect()
    }

    /// Whether `K` couples only consecutive unknowns.
    pub(crate) fn is_tridiagonal(&self) -> bool {
        self.upper.iter().all(|&(i, j, _)| j == i + 1)
    }

    /// Same mass, stiffness replaced by `scale·K − diag(bulk_shift·w + surface_shift·S)`.
    pub(crate) fn shifted(&self, scale: T, bulk_shift: T, surface_shift: T) -> Self {
        let mut out = self.clone();
        for r in 0..out.size() {
            out.diag[r] = scale * self.diag[r] - bulk_shift * self.bulk_mass[r] - surface_shift * self.surface_mass[r];
        }
        for e in &mut out.upper {
            e.2 *= scale;
        }
        out
    }
}
