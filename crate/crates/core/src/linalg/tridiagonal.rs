//! Symmetric tridiagonal eigenvalues by Sturm-sequence bisection and
//! eigenvectors by inverse iteration.

use crate::scalar::Real;

#[derive(Debug, Clone, PartialEq)]
pub struct SymTridiagonal<T> {
    /// Diagonal, length `n`.
    pub diag: Vec<T>,
    /// Off-diagonal, length `n - 1`.
    pub off: Vec<T>,
}

impl<T: Real> SymTridiagonal<T> {
    pub fn new(diag: Vec<T>, off: Vec<T>) -> Self {
        assert_eq!(off.len() + 1, diag.len().max(1), "off-diagonal length");
        Self { diag, off }
    }

    pub fn len(&self) -> usize {
        self.diag.len()
    }

    pub fn is_empty(&self) -> bool {
        self.diag.is_empty()
    }

    /// Gershgorin interval containing the whole spectrum.
    pub fn gershgorin(&self) -> (T, T) {
        let n = self.len();
        let mut lo = T::infinity();
        let mut hi = T::neg_infinity();
        for i in 0..n {
            let mut r = T::zero();
            if i > 0 {
                r += self.off[i - 1].abs();
            }
            if i + 1 < n {
                r += self.off[i].abs();
            }
            lo = lo.min(self.diag[i] - r);
            hi = hi.max(self.diag[i] + r);
        }
        (lo, hi)
    }

    pub fn norm_bound(&self) -> T {
        let (lo, hi) = self.gershgorin();
        lo.abs().max(hi.abs()).max(T::min_positive_value())
    }

    /// Number of eigenvalues strictly below `x`.
    pub fn count_below(&self, x: T) -> usize {
        let tiny = T::min_positive_value().sqrt() * self.norm_bound();
        let mut count = 0;
        let mut q = T::one();
        for i in 0..self.len() {
            let coupling = if i == 0 {
                T::zero()
            } else {
                self.off[i - 1] * self.off[i - 1] / q
            };
            q = self.diag[i] - x - coupling;
            if q.abs() < tiny {
                q = -tiny;
            }
            if q < T::zero() {
                count += 1;
            }
        }
        count
    }

    /// The `k`-th smallest eigenvalue (0-based) by bisection.
    pub fn eigenvalue(&self, k: usize) -> T {
        assert!(k < self.len(), "eigenvalue index out of range");
        let (mut lo, mut hi) = self.gershgorin();
        let pad = self.norm_bound() * T::epsilon() * T::lit(4.0);
        lo -= pad;
        hi += pad;
        let two = T::lit(2.0);
        for _ in 0..200 {
            let mid = (lo + hi) / two;
            if mid <= lo || mid >= hi {
                break;
            }
            if self.count_below(mid) > k {
                hi = mid;
            } else {
                lo = mid;
            }
            if hi - lo <= T::epsilon() * (lo.abs() + hi.abs()) {
                break;
            }
        }
        (lo + hi) / two
    }

    /// The `k` smallest eigenvalues, ascending.
    pub fn lowest_eigenvalues(&self, k: usize) -> Vec<T> {
        (0..k.min(self.len())).map(|j| self.eigenvalue(j)).collect()
    }

    /// Solves `(T - shift I) x = rhs` by Gaussian elimination with partial
    /// pivoting. Zero pivots are replaced by a tiny multiple of the norm.
    pub fn shifted_solve(&self, shift: T, rhs: &[T]) -> Vec<T> {
        let n = self.len();
        let tiny = T::epsilon() * self.norm_bound();
        // rows stored as (sub, diag, sup, sup2) after pivoting
        let mut dl: Vec<T> = (0..n.saturating_sub(1)).map(|i| self.off[i]).collect();
        let mut d: Vec<T> = self.diag.iter().map(|&v| v - shift).collect();
        let mut du: Vec<T> = dl.clone();
        let mut du2 = vec![T::zero(); n.saturating_sub(2)];
        let mut b = rhs.to_vec();
        for i in 0..n.saturating_sub(1) {
            if d[i].abs() >= dl[i].abs() {
                if d[i].abs() < tiny {
                    d[i] = tiny;
                }
                let m = dl[i] / d[i];
                d[i + 1] -= m * du[i];
                b[i + 1] = b[i + 1] - m * b[i];
                dl[i] = T::zero();
            } else {
                let m = d[i] / dl[i];
                d[i] = dl[i];
                let tmp = d[i + 1];
                d[i + 1] = du[i] - m * tmp;
                if i + 2 < n {
                    du2[i] = du[i + 1];
                    du[i + 1] = -m * du2[i];
                }
                du[i] = tmp;
                let bi = b[i];
                b[i] = b[i + 1];
                b[i + 1] = bi - m * b[i + 1];
            }
        }
        if n > 0 && d[n - 1].abs() < tiny {
            d[n - 1] = tiny;
        }
        let mut x = vec![T::zero(); n];
        for i in (0..n).rev() {
            let mut s = b[i];
            if i + 1 < n {
                s -= du[i] * x[i + 1];
            }
            if i + 2 < n {
                s -= du2[i] * x[i + 2];
            }
            x[i] = s / d[i];
        }
        x
    }

    /// Eigenvectors for the given (accurate) eigenvalues by inverse iteration,
    /// re-orthogonalised within clusters of close eigenvalues.
    pub fn eigenvectors(&self, eigenvalues: &[T]) -> Vec<Vec<T>> {
        let n = self.len();
        let norm = self.norm_bound();
        let cluster_tol = norm * T::lit(1e-3);
        let mut vecs: Vec<Vec<T>> = Vec::with_capacity(eigenvalues.len());
        for (j, &lambda) in eigenvalues.iter().enumerate() {
            let cluster_start = (0..j)
                .rev()
                .take_while(|&i| (eigenvalues[i] - lambda).abs() <= cluster_tol)
                .last()
                .unwrap_or(j);
            // deterministic, non-symmetric start vector
            let mut x: Vec<T> = (0..n)
                .map(|i| T::one() + T::lit(((i * 7 + j * 13) % 17) as f64 / 17.0))
                .collect();
            let shift = lambda + norm * T::epsilon() * T::lit(2.0);
            for _ in 0..4 {
                x = self.shifted_solve(shift, &x);
                for prev in &vecs[cluster_start..j] {
                    let dot: T = prev.iter().zip(&x).map(|(&a, &b)| a * b).sum();
                    for (xi, &pi) in x.iter_mut().zip(prev) {
                        *xi -= dot * pi;
                    }
                }
                normalize(&mut x);
            }
            vecs.push(x);
        }
        vecs
    }

    pub fn mul_vec(&self, x: &[T]) -> Vec<T> {
        let n = self.len();
        (0..n)
            .map(|i| {
                let mut s = self.diag[i] * x[i];
                if i > 0 {
                    s += self.off[i - 1] * x[i - 1];
                }
                if i + 1 < n {
                    s += self.off[i] * x[i + 1];
                }
                s
            })
            .collect()
    }
}

pub(crate) fn normalize<T: Real>(x: &mut [T]) {
    let nrm: T = x.iter().map(|&v| v * v).sum::<T>().sqrt();
    if nrm > T::zero() {
        for v in x.iter_mut() {
            *v /= nrm;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn laplacian(n: usize) -> SymTridiagonal<f64> {
        SymTridiagonal::new(vec![2.0; n], vec![-1.0; n - 1])
    }

    #[test]
    fn dirichlet_laplacian_spectrum() {
        let n = 50;
        let t = laplacian(n);
        let h = std::f64::consts::PI / (n as f64 + 1.0);
        for k in 0..n {
            let exact = 2.0 - 2.0 * ((k as f64 + 1.0) * h).cos();
            assert!((t.eigenvalue(k) - exact).abs() < 1e-12, "k = {k}");
        }
        assert_eq!(t.count_below(0.0), 0);
        assert_eq!(t.count_below(5.0), n);
    }

    #[test]
    fn inverse_iteration_residuals() {
        let t = laplacian(40);
        let vals = t.lowest_eigenvalues(5);
        let vecs = t.eigenvectors(&vals);
        for (l, v) in vals.iter().zip(&vecs) {
            let tv = t.mul_vec(v);
            let r: f64 = tv.iter().zip(v).map(|(a, b)| (a - l * b).powi(2)).sum::<f64>().sqrt();
            assert!(r < 1e-10);
        }
        for i in 0..5 {
            for j in 0..i {
                let d: f64 = vecs[i].iter().zip(&vecs[j]).map(|(a, b)| a * b).sum();
                assert!(d.abs() < 1e-10);
            }
        }
    }

    #[test]
    fn degenerate_pair_is_orthogonalised() {
        // two decoupled identical blocks
        let t: SymTridiagonal<f64> = SymTridiagonal::new(vec![2.0, 2.0, 2.0, 2.0], vec![-1.0, 0.0, -1.0]);
        let vals = t.lowest_eigenvalues(4);
        assert!((vals[0] - 1.0).abs() < 1e-12 && (vals[1] - 1.0).abs() < 1e-12);
        let vecs = t.eigenvectors(&vals);
        let d: f64 = vecs[0].iter().zip(&vecs[1]).map(|(a, b)| a * b).sum();
        assert!(d.abs() < 1e-10);
    }

    #[test]
    fn shifted_solve_matches_multiplication() {
        let t = SymTridiagonal::new(vec![1.0, -3.0, 0.5, 2.0, 0.0], vec![4.0, 0.1, -2.0, 1.0]);
        let x = vec![1.0, -2.0, 0.5, 3.0, 1.5];
        let b: Vec<f64> = t.mul_vec(&x).iter().zip(&x).map(|(a, xi)| a - 0.3 * xi).collect();
        let y = t.shifted_solve(0.3, &b);
        for (a, b) in x.iter().zip(&y) {
            assert!((a - b).abs() < 1e-12);
        }
    }
}
