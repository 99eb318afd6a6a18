#![allow(dead_code)]

use wentzell_core::domain::{build_mesh, BoundaryPart, Mesh, SideLabels};
use wentzell_core::model::{
    BoundaryAssignment, BoundaryKind, DiffusionLaw, FieldSpec, ReactionTerm, Scenario, SpatialField,
};

pub fn interval(cells: usize, left: BoundaryPart, right: BoundaryPart) -> Mesh<f64> {
    build_mesh(1, &[1.0], &[cells], &SideLabels::interval(left, right)).unwrap()
}

pub fn reaction(src: &str) -> ReactionTerm<f64> {
    ReactionTerm::parse(src, 1).unwrap()
}

pub fn field(
    diffusion: DiffusionLaw<f64>,
    f: &str,
    gamma1: BoundaryKind<f64>,
    gamma2: BoundaryKind<f64>,
    initial: &str,
) -> FieldSpec<f64> {
    FieldSpec {
        name: "u".into(),
        diffusion,
        f: reaction(f),
        boundary: BoundaryAssignment::new(gamma1, gamma2),
        initial: SpatialField::parse(initial).unwrap(),
        initial_trace: None,
    }
}

pub fn dynamic(delta: f64, g: &str) -> BoundaryKind<f64> {
    BoundaryKind::dynamic(delta, reaction(g))
}

pub fn scalar_scenario(mesh: Mesh<f64>, field: FieldSpec<f64>, horizon: f64) -> Scenario<f64> {
    Scenario::new(mesh, vec![field], horizon)
}

pub fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).fold(0.0, |m, (x, y)| m.max((x - y).abs()))
}

/// Squared roots of `(1 − k²)cos k − 2k sin k = 0`: eigenvalues of
/// `−φ'' = Λφ` on (0,1) with `−φ'(0) + φ(0) = 0` and `φ'(1) = Λφ(1)`,
/// from the determinant of the `A cos kx + B sin kx` ansatz.
pub fn robin_wentzell_oracle(count: usize) -> Vec<f64> {
    let det = |k: f64| (1.0 - k * k) * k.cos() - 2.0 * k * k.sin();
    let mut roots = Vec::new();
    let step = 1e-3;
    let mut a = 1e-9;
    while roots.len() < count {
        let b = a + step;
        if det(a) * det(b) < 0.0 {
            let (mut lo, mut hi) = (a, b);
            for _ in 0..200 {
                let mid = 0.5 * (lo + hi);
                if det(lo) * det(mid) <= 0.0 {
                    hi = mid;
                } else {
                    lo = mid;
                }
            }
            let k = 0.5 * (lo + hi);
            roots.push(k * k);
        }
        a = b;
    }
    roots
}

/// Random trigonometric polynomial on (0,1) of degree ≤ `max_degree`.
pub fn random_trig(rng: &mut impl rand::Rng, max_degree: usize) -> impl Fn(f64) -> f64 {
    let degree = rng.gen_range(0..=max_degree);
    let coeffs: Vec<(f64, f64)> = (0..=degree).map(|_| (rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect();
    move |x: f64| {
        coeffs
            .iter()
            .enumerate()
            .map(|(k, (a, b))| {
                let w = std::f64::consts::PI * k as f64 * x;
                a * w.cos() + b * w.sin()
            })
            .sum()
    }
}
