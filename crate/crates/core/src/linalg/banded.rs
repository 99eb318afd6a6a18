//! Banded matrices with an LU solve using partial pivoting.

use crate::scalar::Real;

/// Square band matrix with `lower` sub- and `upper` super-diagonals. Rows are
/// stored with room for the fill-in produced by row interchanges.
#[derive(Debug, Clone)]
pub struct BandMatrix<T> {
    n: usize,
    lower: usize,
    upper: usize,
    width: usize,
    data: Vec<T>,
}

impl<T: Real> BandMatrix<T> {
    pub fn zeros(n: usize, lower: usize, upper: usize) -> Self {
        let width = 2 * lower + upper + 1;
        Self { n, lower, upper, width, data: vec![T::zero(); n * width] }
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn bandwidths(&self) -> (usize, usize) {
        (self.lower, self.upper)
    }

    fn slot(&self, i: usize, j: usize) -> Option<usize> {
        if j + self.lower < i || j > i + self.upper + self.lower || i >= self.n || j >= self.n {
            return None;
        }
        Some(i * self.width + (j + self.lower - i))
    }

    pub fn get(&self, i: usize, j: usize) -> T {
        if j > i + self.upper {
            return T::zero();
        }
        self.slot(i, j).map_or(T::zero(), |s| self.data[s])
    }

    /// Adds `v` to entry `(i, j)`. Panics outside the declared band.
    pub fn add(&mut self, i: usize, j: usize, v: T) {
        assert!(j + self.lower >= i && j <= i + self.upper, "entry ({i}, {j}) outside band");
        let s = self.slot(i, j).expect("entry inside band");
        self.data[s] += v;
    }

    pub fn set(&mut self, i: usize, j: usize, v: T) {
        assert!(j + self.lower >= i && j <= i + self.upper, "entry ({i}, {j}) outside band");
        let s = self.slot(i, j).expect("entry inside band");
        self.data[s] = v;
    }

    pub fn clear(&mut self) {
        self.data.iter_mut().for_each(|v| *v = T::zero());
    }

    pub fn mul_vec(&self, x: &[T]) -> Vec<T> {
        (0..self.n)
            .map(|i| {
                let lo = i.saturating_sub(self.lower);
                let hi = (i + self.upper + 1).min(self.n);
                (lo..hi).map(|j| self.get(i, j) * x[j]).sum()
            })
            .collect()
    }

    /// Solves `A x = b`, consuming a copy of the matrix. Returns `None` when a
    /// pivot vanishes.
    pub fn solve(&self, b: &[T]) -> Option<Vec<T>> {
        let n = self.n;
        let (kl, ku, w) = (self.lower, self.upper, self.width);
        let mut a = self.data.clone();
        let mut x = b.to_vec();
        let at = |i: usize, j: usize| i * w + (j + kl - i);
        let scale = a.iter().fold(T::zero(), |m, v| m.max(v.abs()));
        if scale == T::zero() {
            return None;
        }
        for k in 0..n {
            let last_row = (k + kl).min(n - 1);
            let last_col = (k + kl + ku).min(n - 1);
            let mut p = k;
            for i in k + 1..=last_row {
                if a[at(i, k)].abs() > a[at(p, k)].abs() {
                    p = i;
                }
            }
            if a[at(p, k)].abs() <= scale * T::epsilon() * T::lit(1e-3) {
                return None;
            }
            if p != k {
                for j in k..=last_col {
                    a.swap(at(k, j), at(p, j));
                }
                x.swap(k, p);
            }
            let piv = a[at(k, k)];
            for i in k + 1..=last_row {
                let m = a[at(i, k)] / piv;
                if m == T::zero() {
                    continue;
                }
                a[at(i, k)] = T::zero();
                for j in k + 1..=last_col {
                    let v = a[at(k, j)];
                    a[at(i, j)] -= m * v;
                }
                let xk = x[k];
                x[i] -= m * xk;
            }
        }
        for i in (0..n).rev() {
            let last_col = (i + kl + ku).min(n - 1);
            let mut s = x[i];
            for j in i + 1..=last_col {
                s -= a[at(i, j)] * x[j];
            }
            x[i] = s / a[at(i, i)];
        }
        Some(x)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::DenseMatrix;

    #[test]
    fn band_solve_matches_dense() {
        let n = 12;
        let (kl, ku) = (2, 3);
        let mut band = BandMatrix::zeros(n, kl, ku);
        let mut dense = DenseMatrix::zeros(n, n);
        for i in 0..n {
            for j in i.saturating_sub(kl)..(i + ku + 1).min(n) {
                // small diagonal forces pivoting
                let v = if i == j { 0.01 } else { ((i * 5 + j * 3) % 7) as f64 - 3.0 };
                band.set(i, j, v);
                dense[(i, j)] = v;
            }
        }
        let b: Vec<f64> = (0..n).map(|i| (i as f64).sin()).collect();
        let xb = band.solve(&b).unwrap();
        let xd = dense.solve(&b).unwrap();
        for (p, q) in xb.iter().zip(&xd) {
            assert!((p - q).abs() < 1e-9, "{p} vs {q}");
        }
        let r = band.mul_vec(&xb);
        for (p, q) in r.iter().zip(&b) {
            assert!((p - q).abs() < 1e-10);
        }
    }
}
