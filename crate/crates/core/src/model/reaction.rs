//! Reaction terms: polynomials in the state plus optional tabulated `(x, t)`
//! forcing, and spatial coefficient fields.

use super::expr::Expr;
use super::ModelError;
use crate::scalar::Real;

/// Names accepted for state variable `i` (0-based) in a system of `m` fields:
/// `u1..um`, and plain `u` when `m = 1`.
pub fn state_variable_index(name: &str, m: usize) -> Option<usize> {
    if name == "u" && m == 1 {
        return Some(0);
    }
    let k: usize = name.strip_prefix('u')?.parse().ok()?;
    (1..=m).contains(&k).then(|| k - 1)
}

/// Bilinear interpolation table `F(x, t)` on a tensor grid, clamped outside.
#[derive(Debug, Clone, PartialEq)]
pub struct ForcingTable<T> {
    xs: Vec<T>,
    ts: Vec<T>,
    /// Row-major, `ts.len()` rows of `xs.len()` values.
    values: Vec<T>,
}

impl<T: Real> ForcingTable<T> {
    pub fn new(xs: Vec<T>, ts: Vec<T>, values: Vec<T>) -> Result<Self, ModelError> {
        let inc = |v: &[T]| !v.is_empty() && v.windows(2).all(|w| w[1] > w[0]);
        if !inc(&xs) || !inc(&ts) {
            return Err(ModelError::Invalid("forcing grid must be nonempty and strictly increasing".into()));
        }
        if values.len() != xs.len() * ts.len() || values.iter().any(|v| !v.is_finite()) {
            return Err(ModelError::Invalid(format!(
                "forcing table needs {} finite values, got {}",
                xs.len() * ts.len(),
                values.len()
            )));
        }
        Ok(Self { xs, ts, values })
    }

    pub fn eval(&self, x: T, t: T) -> T {
        let (i, wx) = locate(&self.xs, x);
        let (k, wt) = locate(&self.ts, t);
        let nx = self.xs.len();
        let at = |k: usize, i: usize| self.values[k * nx + i];
        let i1 = (i + 1).min(nx - 1);
        let k1 = (k + 1).min(self.ts.len() - 1);
        let lo = at(k, i) + wx * (at(k, i1) - at(k, i));
        let hi = at(k1, i) + wx * (at(k1, i1) - at(k1, i));
        lo + wt * (hi - lo)
    }
}

fn locate<T: Real>(grid: &[T], v: T) -> (usize, T) {
    let n = grid.len();
    if n == 1 || v <= grid[0] {
        return (0, T::zero());
    }
    if v >= grid[n - 1] {
        return (n - 1, T::zero());
    }
    let k = grid.partition_point(|&g| g <= v) - 1;
    (k, (v - grid[k]) / (grid[k + 1] - grid[k]))
}

/// A reaction term `r(x, t, s⃗) = P(s⃗) + F(x, t)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ReactionTerm<T> {
    text: String,
    poly: Expr,
    partials: Vec<Expr>,
    forcing: Option<ForcingTable<T>>,
}

impl<T: Real> ReactionTerm<T> {
    pub fn zero(m: usize) -> Self {
        Self { text: "0".into(), poly: Expr::zero(), partials: vec![Expr::zero(); m], forcing: None }
    }

    /// Parses a polynomial in the state variables of an `m`-field system.
    pub fn parse(text: &str, m: usize) -> Result<Self, ModelError> {
        let poly = Expr::parse_with(text, &|name| state_variable_index(name, m))?;
        if !poly.is_polynomial() {
            return Err(ModelError::NotPolynomial(text.to_string()));
        }
        let partials = (0..m).map(|j| poly.derivative(j)).collect();
        Ok(Self { text: text.to_string(), poly, partials, forcing: None })
    }

    pub fn with_forcing(mut self, table: ForcingTable<T>) -> Self {
        self.forcing = Some(table);
        self
    }

    pub fn text(&self) -> &str {
        &self.text
    }

    pub fn forcing(&self) -> Option<&ForcingTable<T>> {
        self.forcing.as_ref()
    }

    pub fn is_zero(&self) -> bool {
        self.poly == Expr::Num(0.0) && self.forcing.is_none()
    }

    pub fn field_count(&self) -> usize {
        self.partials.len()
    }

    pub fn value(&self, x: T, t: T, s: &[T]) -> T {
        let v = self.poly.eval(s);
        match &self.forcing {
            Some(f) => v + f.eval(x, t),
            None => v,
        }
    }

    /// `∂r/∂s_j`.
    pub fn partial(&self, j: usize, s: &[T]) -> T {
        self.partials[j].eval(s)
    }

    pub fn polynomial(&self) -> &Expr {
        &self.poly
    }
}

/// A coefficient or data field given as an expression in `x` and `y`.
#[derive(Debug, Clone, PartialEq)]
pub struct SpatialField {
    text: String,
    expr: Expr,
}

impl SpatialField {
    pub fn parse(text: &str) -> Result<Self, ModelError> {
        let expr = Expr::parse(text, &["x", "y"])?;
        Ok(Self { text: text.to_string(), expr })
    }

    pub fn constant(c: f64) -> Self {
        Self { text: format!("{c}"), expr: Expr::Num(c) }
    }

    pub fn text(&self) -> &str {
        &self.text
    }

    pub fn is_constant(&self) -> bool {
        self.expr.is_constant()
    }

    pub fn eval<T: Real>(&self, x: T, y: T) -> T {
        self.expr.eval(&[x, y])
    }
}

impl Default for SpatialField {
    fn default() -> Self {
        Self::constant(1.0)
    }
}
