use super::{solve_spectrum, EigenSystem, SolveOptions, SpectralError};
use crate::linalg::{symmetric_eigen, SymTridiagonal};
use crate::scalar::Real;

#[derive(Debug, Clone, PartialEq)]
pub struct Lambda1<T> {
    /// `inf_i Λ_{1,i}`.
    pub value: T,
    /// Field attaining the infimum.
    pub field: usize,
    /// `false` when the infimum is not positive.
    pub dissipative: bool,
}

/// Infimum of the first eigenvalues of the per-field generalized problems.
/// Systems are solved on separate threads.
pub fn lambda1_inf<T: Real>(systems: &[EigenSystem<T>]) -> Result<Lambda1<T>, SpectralError> {
    if systems.is_empty() {
        return Err(SpectralError::Input("no systems given".into()));
    }
    let firsts: Vec<Result<T, SpectralError>> = std::thread::scope(|scope| {
        let handles: Vec<_> = systems
            .iter()
            .map(|s| scope.spawn(move || solve_spectrum(s, 1, SolveOptions::default()).map(|p| p[0].discrete)))
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().unwrap_or_else(|_| Err(SpectralError::Convergence("solver thread panicked".into()))))
            .collect()
    });
    let firsts: Vec<T> = firsts.into_iter().collect::<Result<_, _>>()?;
    Ok(lambda1_of(&firsts))
}

pub(crate) fn lambda1_of<T: Real>(firsts: &[T]) -> Lambda1<T> {
    let (field, &value) = firsts
        .iter()
        .enumerate()
        .fold((0, &firsts[0]), |best, cur| if *cur.1 < *best.1 { cur } else { best });
    Lambda1 {
        value,
        field,
        dissipative: value > T::zero(),
    }
}

impl<T: Real> Lambda1<T> {
    /// Infimum of already computed first eigenvalues.
    pub fn from_values(firsts: &[T]) -> Option<Self> {
        (!firsts.is_empty()).then(|| lambda1_of(firsts))
    }
}

/// Roots of `det(−νΛ_j I + Π − ζI) = 0` for diagonal
/// `Π = diag(bulk_shift, surface_shift)`, one pair per `Λ_j`.
pub fn linearized_spectrum<T: Real>(lambdas: &[T], nu: T, bulk_shift: T, surface_shift: T) -> Vec<[T; 2]> {
    lambdas
        .iter()
        .map(|&l| [-nu * l + bulk_shift, -nu * l + surface_shift])
        .collect()
}

/// All eigenvalues `ζ` (descending) of the discrete linearization
/// `−νΔ_W + Π`, that is of the pencil `(Π_M − νK, M)` where `Π_M` weights
/// the bulk shift by bulk mass and the surface shift by Γ1 mass.
pub fn direct_linearized_spectrum<T: Real>(
    system: &EigenSystem<T>,
    nu: T,
    bulk_shift: T,
    surface_shift: T,
) -> Result<Vec<T>, SpectralError> {
    if !(nu > T::zero()) {
        return Err(SpectralError::Input(format!("ν = {} must be positive", nu)));
    }
    let shifted = system.shifted(nu, bulk_shift, surface_shift);
    let n = shifted.size();
    let mut vals = if shifted.is_tridiagonal() {
        let tri = scaled_tridiagonal(&shifted);
        (0..n).map(|k| tri.eigenvalue(k)).collect::<Vec<T>>()
    } else {
        let mass = shifted.mass();
        let kd = shifted.stiffness_dense();
        let a = crate::linalg::DenseMatrix::from_fn(n, n, |i, j| kd[(i, j)] / (mass[i] * mass[j]).sqrt());
        symmetric_eigen(&a).0
    };
    for v in &mut vals {
        *v = -*v;
    }
    Ok(vals)
}

fn scaled_tridiagonal<T: Real>(system: &EigenSystem<T>) -> SymTridiagonal<T> {
    let mass = system.mass();
    let n = system.size();
    let diag: Vec<T> = system.diag.iter().zip(&mass).map(|(&d, &m)| d / m).collect();
    let mut off = vec![T::zero(); n.saturating_sub(1)];
    for &(i, _, v) in &system.upper {
        off[i] += v / (mass[i] * mass[i + 1]).sqrt();
    }
    SymTridiagonal::new(diag, off)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IndexMethod {
    /// Positive roots of [`linearized_spectrum`]; a single branch when the
    /// two shifts coincide.
    HeuristicCount,
    /// Positive eigenvalues of the assembled discrete linearization.
    Direct,
}

#[derive(Debug, Clone, Copy)]
pub enum IndexSource<'a, T> {
    Eigenvalues(&'a [T]),
    System(&'a EigenSystem<T>),
}

/// Number of unstable directions of the linearization at an equilibrium.
pub fn instability_index<T: Real>(
    source: IndexSource<'_, T>,
    nu: T,
    bulk_shift: T,
    surface_shift: T,
    method: IndexMethod,
) -> Result<usize, SpectralError> {
    if !(nu > T::zero()) {
        return Err(SpectralError::Input(format!("ν = {} must be positive", nu)));
    }
    match (method, source) {
        (IndexMethod::HeuristicCount, IndexSource::Eigenvalues(lambdas)) => {
            Ok(heuristic_count(lambdas, nu, bulk_shift, surface_shift))
        }
        (IndexMethod::HeuristicCount, IndexSource::System(system)) => {
            let size = system.size();
            let pairs = solve_spectrum(system, size, SolveOptions::default())?;
            let lambdas: Vec<T> = pairs.iter().map(|p| p.discrete).collect();
            Ok(heuristic_count(&lambdas, nu, bulk_shift, surface_shift))
        }
        (IndexMethod::Direct, IndexSource::System(system)) => {
            let shifted = system.shifted(nu, bulk_shift, surface_shift);
            if shifted.is_tridiagonal() {
                Ok(scaled_tridiagonal(&shifted).count_below(T::zero()))
            } else {
                let zetas = direct_linearized_spectrum(system, nu, bulk_shift, surface_shift)?;
                Ok(zetas.iter().filter(|&&z| z > T::zero()).count())
            }
        }
        (IndexMethod::Direct, IndexSource::Eigenvalues(lambdas)) => {
            if bulk_shift != surface_shift {
                return Err(SpectralError::Input(
                    "a direct count from eigenvalues alone needs equal shifts".into(),
                ));
            }
            Ok(lambdas.iter().filter(|&&l| -nu * l + bulk_shift > T::zero()).count())
        }
    }
}

fn heuristic_count<T: Real>(lambdas: &[T], nu: T, bulk_shift: T, surface_shift: T) -> usize {
    let roots = linearized_spectrum(lambdas, nu, bulk_shift, surface_shift);
    let branches = if bulk_shift == surface_shift { 1 } else { 2 };
    roots
        .iter()
        .map(|r| r[..branches].iter().filter(|&&z| z > T::zero()).count())
        .sum()
}
