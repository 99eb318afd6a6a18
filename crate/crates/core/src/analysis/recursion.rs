use crate::scalar::Real;

pub const RECURSION_TAIL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct RecursionReport<T> {
    /// `C^{−1/κ} b^{−1/κ²}`.
    pub threshold: T,
    pub sequence: Vec<T>,
    /// First index with `Y_n < 10⁻¹²`.
    pub first_below: Option<usize>,
    pub converges: bool,
}

/// Iterates `Y_{n+1} = C bⁿ Y_n^{1+κ}` in log space for `n_max` steps.
pub fn recursion_lemma<T: Real>(c: T, b: T, kappa: T, y0: T, n_max: usize) -> RecursionReport<T> {
    let threshold = c.powf(-T::one() / kappa) * b.powf(-T::one() / (kappa * kappa));
    let tail = T::lit(RECURSION_TAIL);
    let mut sequence = vec![y0];
    let (lc, lb) = (c.ln(), b.ln());
    let mut y = y0;
    for n in 0..n_max {
        y = if y == T::zero() {
            T::zero()
        } else {
            (lc + T::from_usize_lossy(n) * lb + (T::one() + kappa) * y.ln()).exp()
        };
        sequence.push(y);
        if !y.is_finite() {
            break;
        }
    }
    let first_below = sequence.iter().position(|&v| v < tail);
    let converges = sequence.last().is_some_and(|&v| v < tail);
    RecursionReport { threshold, sequence, first_below, converges }
}
