//! Tensor meshes on intervals and rectangles, the bulk ⊕ boundary measure
//! `dμ = dx ⊕ dS`, and discrete field states.
//!
//! Nodes are ordered lexicographically by `(y, x)`: node `(i, j)` has index
//! `j * (nx + 1) + i`. Bulk quadrature is the trapezoidal rule written as
//! lumped per-node weights; boundary nodes additionally carry a surface
//! weight (one per endpoint in 1D, half of each adjacent edge in 2D).

use crate::scalar::Real;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum DomainError {
    #[error("dimension must be 1 or 2, got {0}")]
    Dimension(usize),
    #[error("expected {expected} extents/cell counts, got {got}")]
    Arity { expected: usize, got: usize },
    #[error("extent along axis {axis} must be positive and finite")]
    Extent { axis: usize },
    #[error("cell count along axis {axis} is {count}; at least 4 required")]
    CellCount { axis: usize, count: usize },
    #[error("boundary side {0:?} has no Γ1/Γ2 label")]
    UnlabeledSide(Side),
    #[error("coefficient field {name} has a negative entry at index {index}")]
    NegativeCoefficient { name: &'static str, index: usize },
    #[error("array {name} has length {got}, expected {expected}")]
    Length {
        name: &'static str,
        expected: usize,
        got: usize,
    },
}

/// The two parts of the boundary partition `Γ = Γ̄1 ∪ Γ̄2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BoundaryPart {
    Gamma1,
    Gamma2,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Side {
    Left,
    Right,
    Bottom,
    Top,
}

impl Side {
    /// Axis the outward normal points along.
    pub fn axis(self) -> usize {
        match self {
            Side::Left | Side::Right => 0,
            Side::Bottom | Side::Top => 1,
        }
    }

    /// True when the outward normal points in the negative coordinate direction.
    pub fn is_lower(self) -> bool {
        matches!(self, Side::Left | Side::Bottom)
    }
}

/// Γ1/Γ2 label for each side of the domain. `bottom`/`top` are ignored in 1D.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct SideLabels {
    pub left: Option<BoundaryPart>,
    pub right: Option<BoundaryPart>,
    pub bottom: Option<BoundaryPart>,
    pub top: Option<BoundaryPart>,
}

impl SideLabels {
    pub fn interval(left: BoundaryPart, right: BoundaryPart) -> Self {
        Self {
            left: Some(left),
            right: Some(right),
            ..Self::default()
        }
    }

    pub fn uniform(part: BoundaryPart) -> Self {
        Self {
            left: Some(part),
            right: Some(part),
            bottom: Some(part),
            top: Some(part),
        }
    }

    pub fn get(&self, side: Side) -> Option<BoundaryPart> {
        match side {
            Side::Left => self.left,
            Side::Right => self.right,
            Side::Bottom => self.bottom,
            Side::Top => self.top,
        }
    }
}

/// Measurable subsets of the closure `Ω̄` used by [`Mesh::measure_of`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Region {
    Bulk,
    Gamma1,
    Gamma2,
    Closure,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BoundaryNode<T> {
    pub node: usize,
    pub part: BoundaryPart,
    pub surface_weight: T,
    /// Side whose outward normal is used for normal derivatives at this node.
    /// Corners use the side carrying the node's own part, x-sides first.
    pub normal_side: Side,
}

/// Conservative coupling between two neighbouring nodes: the flux from `b`
/// into `a` is `transmissibility * (A(u_b) - A(u_a))`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Face<T> {
    pub a: usize,
    pub b: usize,
    pub transmissibility: T,
    /// Face midpoint, used to sample the permeability `K(x)`.
    pub midpoint: [T; 2],
}

#[derive(Debug, Clone, PartialEq)]
pub struct Mesh<T> {
    dim: usize,
    cells: [usize; 2],
    extents: [T; 2],
    spacing: [T; 2],
    coords: Vec<[T; 2]>,
    bulk_weights: Vec<T>,
    boundary: Vec<BoundaryNode<T>>,
    boundary_slot: Vec<Option<usize>>,
    faces: Vec<Face<T>>,
}

/// Builds a uniform tensor mesh on `[0, L]` or `[0, Lx] × [0, Ly]`.
pub fn build_mesh<T: Real>(
    dimension: usize,
    extents: &[T],
    cells: &[usize],
    labels: &SideLabels,
) -> Result<Mesh<T>, DomainError> {
    if !(1..=2).contains(&dimension) {
        return Err(DomainError::Dimension(dimension));
    }
    if extents.len() != dimension {
        return Err(DomainError::Arity {
            expected: dimension,
            got: extents.len(),
        });
    }
    if cells.len() != dimension {
        return Err(DomainError::Arity {
            expected: dimension,
            got: cells.len(),
        });
    }
    for (axis, &e) in extents.iter().enumerate() {
        if !(e > T::zero()) || !e.is_finite() {
            return Err(DomainError::Extent { axis });
        }
    }
    for (axis, &c) in cells.iter().enumerate() {
        if c < 4 {
            return Err(DomainError::CellCount { axis, count: c });
        }
    }
    let sides: &[Side] = if dimension == 1 {
        &[Side::Left, Side::Right]
    } else {
        &[Side::Left, Side::Right, Side::Bottom, Side::Top]
    };
    for &s in sides {
        if labels.get(s).is_none() {
            return Err(DomainError::UnlabeledSide(s));
        }
    }

    let nx = cells[0];
    let ny = if dimension == 2 { cells[1] } else { 0 };
    let lx = extents[0];
    let ly = if dimension == 2 { extents[1] } else { T::one() };
    let hx = lx / T::from_usize_lossy(nx);
    let hy = if dimension == 2 {
        ly / T::from_usize_lossy(ny)
    } else {
        T::one()
    };
    let half = T::lit(0.5);
    let n_nodes = (nx + 1) * (ny + 1);

    let mut coords = Vec::with_capacity(n_nodes);
    let mut bulk_weights = Vec::with_capacity(n_nodes);
    for j in 0..=ny {
        for i in 0..=nx {
            let x = if i == nx { lx } else { hx * T::from_usize_lossy(i) };
            let y = if dimension == 1 {
                T::zero()
            } else if j == ny {
                ly
            } else {
                hy * T::from_usize_lossy(j)
            };
            coords.push([x, y]);
            let wx = if i == 0 || i == nx { hx * half } else { hx };
            let wy = if dimension == 1 {
                T::one()
            } else if j == 0 || j == ny {
                hy * half
            } else {
                hy
            };
            bulk_weights.push(wx * wy);
        }
    }

    let mut boundary = Vec::new();
    let mut boundary_slot = vec![None; n_nodes];
    for j in 0..=ny {
        for i in 0..=nx {
            let node = j * (nx + 1) + i;
            let mut touching: Vec<Side> = Vec::with_capacity(2);
            if i == 0 {
                touching.push(Side::Left);
            }
            if i == nx {
                touching.push(Side::Right);
            }
            if dimension == 2 {
                if j == 0 {
                    touching.push(Side::Bottom);
                }
                if j == ny {
                    touching.push(Side::Top);
                }
            }
            if touching.is_empty() {
                continue;
            }
            let part = if touching
                .iter()
                .any(|&s| labels.get(s) == Some(BoundaryPart::Gamma2))
            {
                BoundaryPart::Gamma2
            } else {
                BoundaryPart::Gamma1
            };
            let normal_side = *touching
                .iter()
                .find(|&&s| labels.get(s) == Some(part))
                .expect("node part comes from a touching side");
            let surface_weight = if dimension == 1 {
                T::one()
            } else {
                // half of every boundary edge adjacent to the node
                let mut w = T::zero();
                for &s in &touching {
                    w += match s.axis() {
                        0 => {
                            if j == 0 || j == ny {
                                hy * half
                            } else {
                                hy
                            }
                        }
                        _ => {
                            if i == 0 || i == nx {
                                hx * half
                            } else {
                                hx
                            }
                        }
                    };
                }
                w
            };
            boundary_slot[node] = Some(boundary.len());
            boundary.push(BoundaryNode {
                node,
                part,
                surface_weight,
                normal_side,
            });
        }
    }

    let mut faces = Vec::new();
    for j in 0..=ny {
        for i in 0..nx {
            let a = j * (nx + 1) + i;
            let width = if dimension == 1 {
                T::one()
            } else if j == 0 || j == ny {
                hy * half
            } else {
                hy
            };
            faces.push(Face {
                a,
                b: a + 1,
                transmissibility: width / hx,
                midpoint: [(coords[a][0] + coords[a + 1][0]) * half, coords[a][1]],
            });
        }
    }
    if dimension == 2 {
        for j in 0..ny {
            for i in 0..=nx {
                let a = j * (nx + 1) + i;
                let b = a + nx + 1;
                let width = if i == 0 || i == nx { hx * half } else { hx };
                faces.push(Face {
                    a,
                    b,
                    transmissibility: width / hy,
                    midpoint: [coords[a][0], (coords[a][1] + coords[b][1]) * half],
                });
            }
        }
    }

    Ok(Mesh {
        dim: dimension,
        cells: [nx, ny],
        extents: [lx, if dimension == 2 { ly } else { T::zero() }],
        spacing: [hx, if dimension == 2 { hy } else { T::zero() }],
        coords,
        bulk_weights,
        boundary,
        boundary_slot,
        faces,
    })
}

impl<T: Real> Mesh<T> {
    /// Shorthand for a 1D mesh on `[0, length]`.
    pub fn interval(
        length: T,
        cells: usize,
        left: BoundaryPart,
        right: BoundaryPart,
    ) -> Result<Self, DomainError> {
        build_mesh(1, &[length], &[cells], &SideLabels::interval(left, right))
    }

    pub fn dimension(&self) -> usize {
        self.dim
    }

    /// Cell counts `[nx, ny]` (`ny = 0` in 1D).
    pub fn cells(&self) -> [usize; 2] {
        self.cells
    }

    /// Cell widths `[hx, hy]` (`hy = 0` in 1D).
    pub fn spacing(&self) -> [T; 2] {
        self.spacing
    }

    pub fn extents(&self) -> [T; 2] {
        self.extents
    }

    /// Smallest cell width over active axes.
    pub fn min_spacing(&self) -> T {
        if self.dim == 1 {
            self.spacing[0]
        } else {
            self.spacing[0].min(self.spacing[1])
        }
    }

    /// `Σ_axes 1/h²`, the scale of the discrete Laplacian's spectral radius.
    pub fn inverse_spacing_sq(&self) -> T {
        let hx = self.spacing[0];
        let mut s = T::one() / (hx * hx);
        if self.dim == 2 {
            let hy = self.spacing[1];
            s += T::one() / (hy * hy);
        }
        s
    }

    pub fn node_count(&self) -> usize {
        self.coords.len()
    }

    pub fn index(&self, i: usize, j: usize) -> usize {
        j * (self.cells[0] + 1) + i
    }

    /// Grid position `(i, j)` of a node index.
    pub fn position(&self, node: usize) -> (usize, usize) {
        let stride = self.cells[0] + 1;
        (node % stride, node / stride)
    }

    pub fn coords(&self) -> &[[T; 2]] {
        &self.coords
    }

    pub fn x(&self, node: usize) -> T {
        self.coords[node][0]
    }

    /// Lumped trapezoidal bulk weights, one per node.
    pub fn bulk_weights(&self) -> &[T] {
        &self.bulk_weights
    }

    /// Boundary nodes in increasing node order.
    pub fn boundary(&self) -> &[BoundaryNode<T>] {
        &self.boundary
    }

    /// Position of `node` in [`Mesh::boundary`], if it is a boundary node.
    pub fn boundary_slot(&self, node: usize) -> Option<usize> {
        self.boundary_slot[node]
    }

    pub fn faces(&self) -> &[Face<T>] {
        &self.faces
    }

    pub fn boundary_nodes_of(&self, part: BoundaryPart) -> impl Iterator<Item = &BoundaryNode<T>> {
        self.boundary.iter().filter(move |b| b.part == part)
    }

    /// Surface weight at `node`, zero for interior nodes.
    pub fn surface_weight(&self, node: usize) -> T {
        self.boundary_slot[node]
            .map(|s| self.boundary[s].surface_weight)
            .unwrap_or_else(T::zero)
    }

    /// `μ(region)` under `dμ = dx ⊕ dS`.
    pub fn measure_of(&self, region: Region) -> T {
        let surface = |part| {
            self.boundary_nodes_of(part)
                .map(|b| b.surface_weight)
                .fold(T::zero(), |a, b| a + b)
        };
        match region {
            Region::Bulk => self.bulk_weights.iter().copied().fold(T::zero(), |a, b| a + b),
            Region::Gamma1 => surface(BoundaryPart::Gamma1),
            Region::Gamma2 => surface(BoundaryPart::Gamma2),
            Region::Closure => {
                self.measure_of(Region::Bulk)
                    + self.measure_of(Region::Gamma1)
                    + self.measure_of(Region::Gamma2)
            }
        }
    }

    /// Node on the other side of `node` along the inward normal of `side`,
    /// `k` steps in.
    pub fn inward_neighbor(&self, node: usize, side: Side, k: usize) -> usize {
        let (i, j) = self.position(node);
        match side {
            Side::Left => self.index(i + k, j),
            Side::Right => self.index(i - k, j),
            Side::Bottom => self.index(i, j + k),
            Side::Top => self.index(i, j - k),
        }
    }

    /// Second-order one-sided outward normal derivative of nodal values `v`
    /// at boundary node `b`.
    pub fn normal_derivative(&self, values: &[T], b: &BoundaryNode<T>) -> T {
        let h = self.spacing[b.normal_side.axis()];
        let n1 = self.inward_neighbor(b.node, b.normal_side, 1);
        let n2 = self.inward_neighbor(b.node, b.normal_side, 2);
        (T::lit(3.0) * values[b.node] - T::lit(4.0) * values[n1] + values[n2]) / (T::lit(2.0) * h)
    }

    /// Samples `f(x, y)` at every node.
    pub fn sample(&self, f: impl Fn(T, T) -> T) -> Vec<T> {
        self.coords.iter().map(|c| f(c[0], c[1])).collect()
    }

    /// Samples `f(x, y)` at every boundary node (in boundary order).
    pub fn sample_boundary(&self, f: impl Fn(T, T) -> T) -> Vec<T> {
        self.boundary
            .iter()
            .map(|b| {
                let c = self.coords[b.node];
                f(c[0], c[1])
            })
            .collect()
    }
}

/// Bulk node values and boundary trace values of one field.
#[derive(Debug, Clone, PartialEq)]
pub struct FieldValues<T> {
    pub bulk: Vec<T>,
    /// One value per entry of [`Mesh::boundary`].
    pub trace: Vec<T>,
}

impl<T: Real> FieldValues<T> {
    pub fn new(bulk: Vec<T>, trace: Vec<T>) -> Self {
        Self { bulk, trace }
    }

    /// Field whose trace is the restriction of the bulk values.
    pub fn from_bulk(mesh: &Mesh<T>, bulk: Vec<T>) -> Self {
        let trace = mesh.boundary().iter().map(|b| bulk[b.node]).collect();
        Self { bulk, trace }
    }

    pub fn constant(mesh: &Mesh<T>, c: T) -> Self {
        Self {
            bulk: vec![c; mesh.node_count()],
            trace: vec![c; mesh.boundary().len()],
        }
    }

    pub fn is_finite(&self) -> bool {
        self.bulk.iter().chain(self.trace.iter()).all(|v| v.is_finite())
    }

    /// Copies bulk boundary-node values into the trace.
    pub fn sync_trace(&mut self, mesh: &Mesh<T>) {
        for (slot, b) in mesh.boundary().iter().enumerate() {
            self.trace[slot] = self.bulk[b.node];
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FieldState<T> {
    pub t: T,
    pub fields: Vec<FieldValues<T>>,
    pub blown_up: bool,
}

impl<T: Real> FieldState<T> {
    pub fn new(t: T, fields: Vec<FieldValues<T>>) -> Self {
        Self {
            t,
            fields,
            blown_up: false,
        }
    }

    pub fn field_count(&self) -> usize {
        self.fields.len()
    }

    pub fn is_finite(&self) -> bool {
        self.fields.iter().all(FieldValues::is_finite)
    }
}

fn check_nonnegative<T: Real>(name: &'static str, v: &[T]) -> Result<(), DomainError> {
    match v.iter().position(|&x| !(x >= T::zero())) {
        Some(index) => Err(DomainError::NegativeCoefficient { name, index }),
        None => Ok(()),
    }
}

/// `∫Ω α u dx + ∫Γ β u dS` for a single field. `alpha` is per node, `beta`
/// per boundary node.
pub fn total_mass<T: Real>(
    field: &FieldValues<T>,
    mesh: &Mesh<T>,
    alpha: &[T],
    beta: &[T],
) -> Result<T, DomainError> {
    if alpha.len() != mesh.node_count() {
        return Err(DomainError::Length {
            name: "alpha",
            expected: mesh.node_count(),
            got: alpha.len(),
        });
    }
    if beta.len() != mesh.boundary().len() {
        return Err(DomainError::Length {
            name: "beta",
            expected: mesh.boundary().len(),
            got: beta.len(),
        });
    }
    check_nonnegative("alpha", alpha)?;
    check_nonnegative("beta", beta)?;
    let bulk: T = mesh
        .bulk_weights()
        .iter()
        .zip(alpha)
        .zip(&field.bulk)
        .map(|((&w, &a), &u)| w * a * u)
        .sum();
    let surface: T = mesh
        .boundary()
        .iter()
        .zip(beta)
        .zip(&field.trace)
        .map(|((b, &be), &v)| b.surface_weight * be * v)
        .sum();
    Ok(bulk + surface)
}
