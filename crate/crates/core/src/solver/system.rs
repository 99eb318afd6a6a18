//! Semi-discrete system: flux-form bulk balance, boundary-node roles, the
//! explicit right-hand side, local constraint solves and the implicit Newton
//! system.

use crate::domain::Mesh;
use crate::linalg::BandMatrix;
use crate::model::{BoundaryKind, Coupling, Diffusion, ReactionTerm, Scenario};
use crate::scalar::Real;

#[derive(Debug, Clone)]
pub(crate) enum Role<T> {
    Interior,
    Dynamic { slot: usize, surface: T, h2: T },
    /// Dynamic node with vanishing weight: `K ∂ₙA(u) + g = h₂`.
    Algebraic { slot: usize, n1: usize, n2: usize, inv2h: T, k: T, h2: T },
    /// `∂ₙu + h = 0`.
    Static { slot: usize, n1: usize, n2: usize, inv2h: T },
    Frozen,
    Dirichlet(T),
}

impl<T> Role<T> {
    fn has_capacity(&self) -> bool {
        matches!(self, Role::Interior | Role::Dynamic { .. })
    }
}

pub(crate) struct System<'a, T> {
    pub scenario: &'a Scenario<T>,
    pub mesh: &'a Mesh<T>,
    pub m: usize,
    pub diffusion: Vec<Diffusion<T>>,
    pub roles: Vec<Vec<Role<T>>>,
    pub capacity: Vec<Vec<T>>,
    /// Face neighbours of node `k` with transmissibilities, at
    /// `adjacency[offsets[k]..offsets[k + 1]]`.
    adjacency: Vec<(usize, T)>,
    offsets: Vec<usize>,
    /// Whether any reaction term is nonzero, so node states must be gathered.
    reactive: bool,
    /// Bulk reaction per field, `None` when identically zero.
    bulk_source: Vec<Option<&'a ReactionTerm<T>>>,
    /// Boundary reaction per field and boundary slot, `None` when zero.
    surface_source: Vec<Vec<Option<&'a ReactionTerm<T>>>>,
    x: Vec<T>,
    cfl: T,
    tol: T,
    max_iter: usize,
}

impl<'a, T: Real> System<'a, T> {
    pub fn new(scenario: &'a Scenario<T>) -> Self {
        let mesh = &scenario.mesh;
        let m = scenario.field_count();
        let n = mesh.node_count();
        let coords = mesh.coords();
        let porosity: Vec<T> = coords.iter().map(|c| scenario.porosity.eval(c[0], c[1])).collect();
        let faces: Vec<(usize, usize, T)> = mesh
            .faces()
            .iter()
            .map(|f| (f.a, f.b, f.transmissibility * scenario.conductivity.eval(f.midpoint[0], f.midpoint[1])))
            .collect();
        let mut neighbors = vec![Vec::new(); n];
        for &(a, b, c) in &faces {
            neighbors[a].push((b, c));
            neighbors[b].push((a, c));
        }
        let mut offsets = Vec::with_capacity(n + 1);
        offsets.push(0);
        for list in &neighbors {
            offsets.push(offsets[offsets.len() - 1] + list.len());
        }
        let adjacency = neighbors.concat();
        let mut roles = vec![vec![Role::Interior; n]; m];
        let mut capacity = vec![vec![T::zero(); n]; m];
        for i in 0..m {
            for node in 0..n {
                capacity[i][node] = porosity[node] * mesh.bulk_weights()[node];
            }
            for (slot, b) in mesh.boundary().iter().enumerate() {
                let [x, y] = coords[b.node];
                let h = mesh.spacing()[b.normal_side.axis()];
                let inv2h = T::one() / (T::lit(2.0) * h);
                let n1 = mesh.inward_neighbor(b.node, b.normal_side, 1);
                let n2 = mesh.inward_neighbor(b.node, b.normal_side, 2);
                let kind = scenario.fields[i].boundary.on(b.part);
                let role = match kind {
                    BoundaryKind::Dirichlet(v) => Role::Dirichlet(*v),
                    BoundaryKind::Static { .. } => Role::Static { slot, n1, n2, inv2h },
                    BoundaryKind::Dynamic { coupling: Coupling::Frozen, .. } => Role::Frozen,
                    BoundaryKind::Dynamic { h2, .. } => {
                        let w = kind.weight_at(x, y).unwrap_or_else(T::zero);
                        let h2 = h2.eval(x, y);
                        if w > T::zero() {
                            capacity[i][b.node] += w * b.surface_weight;
                            Role::Dynamic { slot, surface: b.surface_weight, h2 }
                        } else {
                            let k = scenario.conductivity.eval(x, y);
                            Role::Algebraic { slot, n1, n2, inv2h, k, h2 }
                        }
                    }
                };
                if !role.has_capacity() {
                    capacity[i][b.node] = T::zero();
                }
                roles[i][b.node] = role;
            }
        }
        let nonzero = |r: &'a ReactionTerm<T>| (!r.is_zero()).then_some(r);
        let bulk_source: Vec<_> = scenario.fields.iter().map(|f| nonzero(&f.f)).collect();
        let surface_source = scenario
            .fields
            .iter()
            .map(|f| {
                mesh.boundary()
                    .iter()
                    .map(|b| match f.boundary.on(b.part) {
                        BoundaryKind::Dynamic { g, .. } => nonzero(g),
                        BoundaryKind::Static { h } => nonzero(h),
                        BoundaryKind::Dirichlet(_) => None,
                    })
                    .collect()
            })
            .collect::<Vec<Vec<_>>>();
        let reactive = bulk_source.iter().any(Option::is_some)
            || surface_source.iter().flatten().any(Option::is_some);
        Self {
            scenario,
            mesh,
            m,
            bulk_source,
            surface_source,
            diffusion: scenario.diffusions(),
            roles,
            capacity,
            adjacency,
            offsets,
            reactive,
            x: coords.iter().map(|c| c[0]).collect(),
            cfl: scenario.solver.cfl,
            tol: scenario.solver.newton_tol,
            max_iter: scenario.solver.newton_max_iter,
        }
    }

    fn neighbors(&self, node: usize) -> &[(usize, T)] {
        &self.adjacency[self.offsets[node]..self.offsets[node + 1]]
    }

    fn gather(&self, u: &[Vec<T>], node: usize, buf: &mut Vec<T>) {
        buf.clear();
        buf.extend(u.iter().map(|f| f[node]));
    }

    fn boundary_term(&self, i: usize, slot: usize) -> &ReactionTerm<T> {
        let part = self.mesh.boundary()[slot].part;
        match self.scenario.fields[i].boundary.on(part) {
            BoundaryKind::Dynamic { g, .. } => g,
            BoundaryKind::Static { h } => h,
            BoundaryKind::Dirichlet(_) => unreachable!("Dirichlet nodes carry no reaction"),
        }
    }

    fn primitives(&self, u: &[Vec<T>]) -> Vec<Vec<T>> {
        u.iter()
            .zip(&self.diffusion)
            .map(|(f, d)| {
                let mut out = vec![T::zero(); f.len()];
                d.primitive_into(f, &mut out);
                out
            })
            .collect()
    }

    #[inline]
    fn flux(&self, node: usize, prim: &[T]) -> T {
        let mut r = T::zero();
        let here = prim[node];
        for &(nb, c) in self.neighbors(node) {
            r += c * (prim[nb] - here);
        }
        r
    }

    /// Net source of field `i` at `node` (flux in, minus reactions, plus `h₂`).
    fn balance(&self, i: usize, node: usize, prim: &[T], s: &[T], t: T) -> T {
        self.add_sources(i, node, self.flux(node, prim), s, t)
    }

    fn add_sources(&self, i: usize, node: usize, flux: T, s: &[T], t: T) -> T {
        let mut r = flux;
        let w = self.mesh.bulk_weights()[node];
        let x = self.x[node];
        if let Some(f) = self.bulk_source[i] {
            r -= w * f.value(x, t, s);
        }
        if let Role::Dynamic { slot, surface, h2 } = &self.roles[i][node] {
            let gv = self.surface_source[i][*slot].map_or(T::zero(), |g| g.value(x, t, s));
            r += *surface * (*h2 - gv);
        }
        r
    }

    /// `du/dt` at every unknown with capacity; zero elsewhere.
    pub fn rates(&self, u: &[Vec<T>], t: T) -> Vec<Vec<T>> {
        let n = self.mesh.node_count();
        let mut prim = vec![T::zero(); n];
        let mut out = vec![vec![T::zero(); n]; self.m];
        let mut s = Vec::with_capacity(self.m);
        for (i, out_i) in out.iter_mut().enumerate() {
            self.diffusion[i].primitive_into(&u[i], &mut prim);
            let sourced = self.bulk_source[i].is_some();
            let (roles, capacity) = (&self.roles[i][..n], &self.capacity[i][..n]);
            for node in 0..n {
                let mut r = match roles[node] {
                    Role::Interior | Role::Dynamic { .. } => self.flux(node, &prim),
                    _ => continue,
                };
                if sourced || !matches!(roles[node], Role::Interior) {
                    if self.reactive {
                        self.gather(u, node, &mut s);
                    }
                    r = self.add_sources(i, node, r, &s, t);
                }
                out_i[node] = r / capacity[node];
            }
        }
        out
    }

    /// Largest stable explicit step for the current state.
    pub fn stable_dt(&self, u: &[Vec<T>]) -> T {
        let two = T::lit(2.0);
        let mut dt = T::infinity();
        let mut s = Vec::with_capacity(self.m);
        let n = self.mesh.node_count();
        let mut a = vec![T::zero(); n];
        for i in 0..self.m {
            self.diffusion[i].a_into(&u[i], &mut a);
            let (roles, capacity) = (&self.roles[i][..n], &self.capacity[i][..n]);
            for node in 0..n {
                if !roles[node].has_capacity() {
                    continue;
                }
                let here = a[node];
                let mut d = T::zero();
                for &(nb, c) in self.neighbors(node) {
                    d += c * here.max(a[nb]);
                }
                if d > T::zero() {
                    dt = dt.min(two * self.cfl * capacity[node] / d);
                }
            }
        }
        if !self.reactive {
            return dt;
        }
        for node in 0..n {
            self.gather(u, node, &mut s);
            for i in 0..self.m {
                let role = &self.roles[i][node];
                if !role.has_capacity() {
                    continue;
                }
                let cap = self.capacity[i][node];
                let w = self.mesh.bulk_weights()[node];
                let mut rate = T::zero();
                if let Some(f) = self.bulk_source[i] {
                    rate += (0..self.m).map(|j| f.partial(j, &s).abs()).sum::<T>() * w;
                }
                if let Role::Dynamic { slot, surface, .. } = role {
                    if let Some(g) = self.surface_source[i][*slot] {
                        rate += *surface * (0..self.m).map(|j| g.partial(j, &s).abs()).sum::<T>();
                    }
                }
                if rate > T::zero() {
                    dt = dt.min(self.cfl * cap / rate);
                }
            }
        }
        dt
    }

    /// Re-imposes static and algebraic boundary relations by local Newton
    /// solves, sweeping until the constrained values settle.
    pub fn enforce(&self, u: &mut [Vec<T>], t: T) -> Result<(), String> {
        let mut s = Vec::with_capacity(self.m);
        for _sweep in 0..6 {
            let mut change = T::zero();
            let mut any = false;
            for i in 0..self.m {
                for b in self.mesh.boundary() {
                    let node = b.node;
                    match self.roles[i][node] {
                        Role::Static { .. } | Role::Algebraic { .. } => {}
                        _ => continue,
                    }
                    any = true;
                    let old = u[i][node];
                    let new = self.solve_constraint(u, i, node, t, &mut s)?;
                    change = change.max((new - old).abs() / (T::one() + old.abs()));
                    u[i][node] = new;
                }
            }
            if !any || change <= self.tol {
                return Ok(());
            }
        }
        Ok(())
    }

    fn constraint(&self, u: &[Vec<T>], i: usize, node: usize, v: T, t: T, s: &mut Vec<T>) -> (T, T) {
        self.gather(u, node, s);
        s[i] = v;
        let x = self.x[node];
        let three = T::lit(3.0);
        match &self.roles[i][node] {
            Role::Static { slot, n1, n2, inv2h } => {
                let (u1, u2) = (u[i][*n1], u[i][*n2]);
                let h = self.boundary_term(i, *slot);
                let f = *inv2h * (three * (v - u1) - (u1 - u2)) + h.value(x, t, s);
                (f, three * *inv2h + h.partial(i, s))
            }
            Role::Algebraic { slot, n1, n2, inv2h, k, h2 } => {
                let d = &self.diffusion[i];
                let (a1, a2) = (d.primitive(u[i][*n1]), d.primitive(u[i][*n2]));
                let g = self.boundary_term(i, *slot);
                let f = *k * *inv2h * (three * (d.primitive(v) - a1) - (a1 - a2)) + g.value(x, t, s) - *h2;
                (f, three * *k * *inv2h * d.a(v) + g.partial(i, s))
            }
            _ => (T::zero(), T::one()),
        }
    }

    fn solve_constraint(&self, u: &[Vec<T>], i: usize, node: usize, t: T, s: &mut Vec<T>) -> Result<T, String> {
        let mut v = u[i][node];
        for _ in 0..self.max_iter {
            let (f, df) = self.constraint(u, i, node, v, t, s);
            if f == T::zero() {
                return Ok(v);
            }
            if df == T::zero() || !df.is_finite() {
                return Err(format!("singular boundary relation at node {node}"));
            }
            let delta = -f / df;
            let mut lambda = T::one();
            let mut next = v + delta;
            for _ in 0..30 {
                let (fn_, _) = self.constraint(u, i, node, next, t, s);
                if (fn_.is_finite() && fn_.abs() < f.abs()) || lambda < T::lit(1e-6) {
                    break;
                }
                lambda /= T::lit(2.0);
                next = v + lambda * delta;
            }
            v = next;
            if delta.abs() <= self.tol * (T::one() + v.abs()) {
                return Ok(v);
            }
        }
        Err(format!("boundary Newton solve did not converge at node {node}"))
    }

    /// One Heun step.
    pub fn heun(&self, u: &[Vec<T>], t: T, dt: T) -> Result<Vec<Vec<T>>, String> {
        let half = T::lit(0.5);
        let k1 = self.rates(u, t);
        let mut mid: Vec<Vec<T>> = u.iter().zip(&k1).map(|(f, k)| f.iter().zip(k).map(|(&a, &b)| a + dt * b).collect()).collect();
        self.enforce(&mut mid, t + dt)?;
        let k2 = self.rates(&mid, t + dt);
        let mut out: Vec<Vec<T>> = (0..self.m)
            .map(|i| (0..u[i].len()).map(|k| u[i][k] + dt * half * (k1[i][k] + k2[i][k])).collect())
            .collect();
        self.enforce(&mut out, t + dt)?;
        Ok(out)
    }

    fn index(&self, node: usize, i: usize) -> usize {
        node * self.m + i
    }

    fn bandwidth(&self) -> usize {
        let stride = if self.mesh.dimension() == 1 { 1 } else { self.mesh.cells()[0] + 1 };
        2 * stride * self.m + self.m - 1
    }

    /// Residual and Jacobian of the backward Euler system at `u`.
    fn newton_system(&self, u: &[Vec<T>], old: &[Vec<T>], t: T, dt: T) -> (Vec<T>, BandMatrix<T>) {
        let n = self.mesh.node_count();
        let m = self.m;
        let bw = self.bandwidth();
        let mut jac = BandMatrix::zeros(n * m, bw, bw);
        let mut res = vec![T::zero(); n * m];
        let prim = self.primitives(u);
        let a: Vec<Vec<T>> = u.iter().zip(&self.diffusion).map(|(f, d)| f.iter().map(|&v| d.a(v)).collect()).collect();
        let mut s = Vec::with_capacity(m);
        let three = T::lit(3.0);
        let four = T::lit(4.0);
        for node in 0..n {
            self.gather(u, node, &mut s);
            let x = self.x[node];
            for i in 0..m {
                let row = self.index(node, i);
                match &self.roles[i][node] {
                    Role::Interior | Role::Dynamic { .. } => {
                        let cap = self.capacity[i][node];
                        res[row] = cap * (u[i][node] - old[i][node]) - dt * self.balance(i, node, &prim[i], &s, t);
                        let mut diag = cap;
                        for &(nb, c) in self.neighbors(node) {
                            diag += dt * c * a[i][node];
                            jac.add(row, self.index(nb, i), -dt * c * a[i][nb]);
                        }
                        jac.add(row, row, diag);
                        let w = self.mesh.bulk_weights()[node];
                        let f = &self.scenario.fields[i].f;
                        for j in 0..m {
                            let mut d = w * f.partial(j, &s);
                            if let Role::Dynamic { slot, surface, .. } = &self.roles[i][node] {
                                d += *surface * self.boundary_term(i, *slot).partial(j, &s);
                            }
                            jac.add(row, self.index(node, j), dt * d);
                        }
                    }
                    Role::Static { slot, n1, n2, inv2h } => {
                        let (u0, u1, u2) = (u[i][node], u[i][*n1], u[i][*n2]);
                        let h = self.boundary_term(i, *slot);
                        res[row] = *inv2h * (three * (u0 - u1) - (u1 - u2)) + h.value(x, t, &s);
                        jac.add(row, self.index(*n1, i), -four * *inv2h);
                        jac.add(row, self.index(*n2, i), *inv2h);
                        jac.add(row, row, three * *inv2h);
                        for j in 0..m {
                            jac.add(row, self.index(node, j), h.partial(j, &s));
                        }
                    }
                    Role::Algebraic { slot, n1, n2, inv2h, k, h2 } => {
                        let (p0, p1, p2) = (prim[i][node], prim[i][*n1], prim[i][*n2]);
                        let g = self.boundary_term(i, *slot);
                        res[row] = *k * *inv2h * (three * (p0 - p1) - (p1 - p2)) + g.value(x, t, &s) - *h2;
                        jac.add(row, self.index(*n1, i), -four * *k * *inv2h * a[i][*n1]);
                        jac.add(row, self.index(*n2, i), *k * *inv2h * a[i][*n2]);
                        jac.add(row, row, three * *k * *inv2h * a[i][node]);
                        for j in 0..m {
                            jac.add(row, self.index(node, j), g.partial(j, &s));
                        }
                    }
                    Role::Frozen => {
                        res[row] = u[i][node] - old[i][node];
                        jac.add(row, row, T::one());
                    }
                    Role::Dirichlet(v) => {
                        res[row] = u[i][node] - *v;
                        jac.add(row, row, T::one());
                    }
                }
            }
        }
        (res, jac)
    }

    /// One backward Euler step solved by damped Newton.
    pub fn backward_euler(&self, old: &[Vec<T>], t_new: T, dt: T) -> Result<Vec<Vec<T>>, String> {
        let n = self.mesh.node_count();
        let m = self.m;
        let norm = |r: &[T]| r.iter().fold(T::zero(), |acc, v| acc.max(v.abs()));
        let mut u = old.to_vec();
        for _ in 0..self.max_iter {
            let (res, jac) = self.newton_system(&u, old, t_new, dt);
            let r0 = norm(&res);
            if !r0.is_finite() {
                return Err("non-finite residual in implicit step".into());
            }
            let rhs: Vec<T> = res.iter().map(|v| -*v).collect();
            let delta = jac.solve(&rhs).ok_or_else(|| "singular Jacobian in implicit step".to_string())?;
            let unorm = u.iter().flatten().fold(T::zero(), |acc, v| acc.max(v.abs()));
            let dnorm = norm(&delta);
            let mut lambda = T::one();
            let mut trial;
            loop {
                trial = u.clone();
                for node in 0..n {
                    for i in 0..m {
                        trial[i][node] += lambda * delta[node * m + i];
                    }
                }
                let (r1, _) = self.newton_system(&trial, old, t_new, dt);
                let r1n = norm(&r1);
                if (r1n.is_finite() && r1n <= (T::one() - T::lit(1e-4) * lambda) * r0) || lambda < T::lit(1e-3) {
                    break;
                }
                lambda /= T::lit(2.0);
            }
            u = trial;
            if dnorm <= self.tol * (T::one() + unorm) {
                return Ok(u);
            }
        }
        Err("implicit Newton iteration did not converge".into())
    }

    /// β weights per boundary slot used for mass accounting of field `i`.
    pub fn mass_beta(&self, i: usize) -> Vec<T> {
        self.mesh
            .boundary()
            .iter()
            .map(|b| {
                let [x, y] = self.mesh.coords()[b.node];
                let kind = self.scenario.fields[i].boundary.on(b.part);
                match kind {
                    BoundaryKind::Dynamic { .. } => kind.weight_at(x, y).unwrap_or_else(T::zero),
                    _ => T::zero(),
                }
            })
            .collect()
    }

    /// Boundary weight used in product-space norms: the uniform `δᵢ`, or 1.
    pub fn norm_delta(&self, i: usize) -> T {
        match &self.scenario.fields[i].boundary.gamma1 {
            BoundaryKind::Dynamic { weight: crate::model::DynamicWeight::Uniform(d), .. } => *d,
            _ => T::one(),
        }
    }

    pub fn porosity(&self) -> Vec<T> {
        self.mesh.coords().iter().map(|c| self.scenario.porosity.eval(c[0], c[1])).collect()
    }
}
