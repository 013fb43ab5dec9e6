//! Rectilinear grids on boxes in R^m (m = 1, 2, 3) with second-order
//! diagonal-norm summation-by-parts operators.
//!
//! The difference matrix `D`, quadrature matrix `H` and boundary matrix `B`
//! of each axis satisfy `H*D + D^T*H = B` exactly in floating point, so the
//! discrete integration-by-parts formula mirrors the continuous
//! interior/boundary pairing without any truncation term. Everything else in
//! the crate leans on that identity.
//!
//! Node ordering is row major with axis 0 slowest: the flat index of the
//! node with per-axis indices `(i0, i1, i2)` is `(i0*n1 + i1)*n2 + i2`.
//! Boundary nodes are listed once each, in increasing flat-index order;
//! corner and edge nodes carry the sum of the tensorized face weights of
//! every face they belong to.

use crate::{Error, Result};

/// Largest supported spatial dimension.
pub const MAX_DIM: usize = 3;

/// One boundary node with its face data.
///
/// `normal[a]` is -1 / +1 when the node lies on the low / high face of axis
/// `a` and 0 otherwise, so corners carry one nonzero entry per face they
/// belong to. `face_weights[a]` is the tensorized quadrature weight the node
/// carries on that face (zero off the face) and `weight` is their sum: the
/// single quadrature weight of the node in the discrete boundary measure.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundaryNode {
    pub node: usize,
    pub normal: [i8; MAX_DIM],
    pub face_weights: [f64; MAX_DIM],
    pub weight: f64,
}

/// A rectilinear grid over a box, together with its boundary bookkeeping.
#[derive(Debug, Clone)]
pub struct Grid {
    dim: usize,
    extents: [(f64, f64); MAX_DIM],
    nodes: [usize; MAX_DIM],
    spacing: [f64; MAX_DIM],
    /// 1D quadrature weights per axis (trailing axes hold `[1.0]`).
    axis_weights: [Vec<f64>; MAX_DIM],
    /// Tensorized H diagonal per node.
    node_weight: Vec<f64>,
    boundary: Vec<BoundaryNode>,
    /// node index -> position in `boundary`, or `u32::MAX` for interior nodes.
    boundary_lookup: Vec<u32>,
}

impl Grid {
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Total number of nodes.
    pub fn len(&self) -> usize {
        self.node_weight.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Node count along `axis` (1 for axes beyond `dim`).
    pub fn nodes(&self, axis: usize) -> usize {
        self.nodes[axis]
    }

    pub fn extent(&self, axis: usize) -> (f64, f64) {
        self.extents[axis]
    }

    /// Grid spacing along `axis`.
    pub fn spacing(&self, axis: usize) -> f64 {
        self.spacing[axis]
    }

    /// Largest spacing over all axes.
    pub fn max_spacing(&self) -> f64 {
        self.spacing[..self.dim].iter().cloned().fold(0.0, f64::max)
    }

    /// Tensorized interior quadrature weight of a node.
    pub fn node_weight(&self, node: usize) -> f64 {
        self.node_weight[node]
    }

    /// 1D quadrature weights of one axis.
    pub fn axis_weights(&self, axis: usize) -> &[f64] {
        &self.axis_weights[axis]
    }

    /// Boundary nodes in increasing flat-index order.
    pub fn boundary(&self) -> &[BoundaryNode] {
        &self.boundary
    }

    /// Position of `node` in the boundary list, if it is a boundary node.
    pub fn boundary_position(&self, node: usize) -> Option<usize> {
        let p = self.boundary_lookup[node];
        (p != u32::MAX).then_some(p as usize)
    }

    /// Flat index of a node from its per-axis indices.
    pub fn index(&self, idx: [usize; MAX_DIM]) -> usize {
        (idx[0] * self.nodes[1] + idx[1]) * self.nodes[2] + idx[2]
    }

    /// Per-axis indices of a flat node index.
    pub fn multi_index(&self, node: usize) -> [usize; MAX_DIM] {
        let i2 = node % self.nodes[2];
        let rest = node / self.nodes[2];
        let i1 = rest % self.nodes[1];
        let i0 = rest / self.nodes[1];
        [i0, i1, i2]
    }

    /// Physical coordinates of a node (trailing axes report the interval
    /// start).
    pub fn coords(&self, node: usize) -> [f64; MAX_DIM] {
        let idx = self.multi_index(node);
        let mut x = [0.0; MAX_DIM];
        for a in 0..MAX_DIM {
            x[a] = self.extents[a].0 + idx[a] as f64 * self.spacing[a];
        }
        x
    }

    fn check_field(&self, f: &ScalarField) -> Result<()> {
        if f.len() == self.len() {
            Ok(())
        } else {
            Err(Error::ShapeMismatch(format!(
                "field has {} values, grid has {} nodes",
                f.len(),
                self.len()
            )))
        }
    }

    fn check_boundary_field(&self, g: &BoundaryField) -> Result<()> {
        if g.len() == self.boundary.len() {
            Ok(())
        } else {
            Err(Error::ShapeMismatch(format!(
                "boundary field has {} values, grid has {} boundary nodes",
                g.len(),
                self.boundary.len()
            )))
        }
    }
}

/// Nodal values of a scalar field, flat and row major over the grid.
#[derive(Debug, Clone, PartialEq)]
pub struct ScalarField {
    pub values: Vec<f64>,
}

impl ScalarField {
    pub fn zeros(grid: &Grid) -> Self {
        Self {
            values: vec![0.0; grid.len()],
        }
    }

    pub fn constant(grid: &Grid, c: f64) -> Self {
        Self {
            values: vec![c; grid.len()],
        }
    }

    /// Sample a function of the node coordinates.
    pub fn from_fn(grid: &Grid, f: impl Fn(&[f64; MAX_DIM]) -> f64) -> Self {
        Self {
            values: (0..grid.len()).map(|i| f(&grid.coords(i))).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn norm_inf(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| v.abs().max(m))
    }

    pub fn is_finite(&self) -> bool {
        self.values.iter().all(|v| v.is_finite())
    }

    /// self += s * other
    pub fn add_scaled(&mut self, s: f64, other: &ScalarField) {
        for (a, b) in self.values.iter_mut().zip(&other.values) {
            *a += s * b;
        }
    }

    /// (self + other) / 2, used for midpoint states.
    pub fn average(&self, other: &ScalarField) -> ScalarField {
        ScalarField {
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(a, b)| 0.5 * (a + b))
                .collect(),
        }
    }
}

/// Values attached to the boundary nodes, ordered as [`Grid::boundary`].
#[derive(Debug, Clone, PartialEq)]
pub struct BoundaryField {
    pub values: Vec<f64>,
}

impl BoundaryField {
    pub fn zeros(grid: &Grid) -> Self {
        Self {
            values: vec![0.0; grid.boundary().len()],
        }
    }

    pub fn constant(grid: &Grid, c: f64) -> Self {
        Self {
            values: vec![c; grid.boundary().len()],
        }
    }

    /// Sample a function of the boundary-node coordinates.
    pub fn from_fn(grid: &Grid, f: impl Fn(&[f64; MAX_DIM]) -> f64) -> Self {
        Self {
            values: grid
                .boundary()
                .iter()
                .map(|b| f(&grid.coords(b.node)))
                .collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn norm_inf(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| v.abs().max(m))
    }

    pub fn is_finite(&self) -> bool {
        self.values.iter().all(|v| v.is_finite())
    }

    pub fn add_scaled(&mut self, s: f64, other: &BoundaryField) {
        for (a, b) in self.values.iter_mut().zip(&other.values) {
            *a += s * b;
        }
    }

    pub fn average(&self, other: &BoundaryField) -> BoundaryField {
        BoundaryField {
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(a, b)| 0.5 * (a + b))
                .collect(),
        }
    }
}

/// Build a grid over `extents` with `nodes[a] >= 3` nodes per axis.
pub fn make_grid(dim: usize, extents: &[(f64, f64)], nodes: &[usize]) -> Result<Grid> {
    if dim == 0 || dim > MAX_DIM {
        return Err(Error::InvalidParameter(format!(
            "dimension {dim} not in 1..=3"
        )));
    }
    if extents.len() != dim || nodes.len() != dim {
        return Err(Error::InvalidParameter(format!(
            "expected {dim} extents and node counts, got {} and {}",
            extents.len(),
            nodes.len()
        )));
    }
    let mut ext = [(0.0, 1.0); MAX_DIM];
    let mut n = [1usize; MAX_DIM];
    let mut h = [1.0; MAX_DIM];
    for a in 0..dim {
        let (lo, hi) = extents[a];
        if !(hi > lo) || !lo.is_finite() || !hi.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "degenerate interval [{lo}, {hi}] on axis {a}"
            )));
        }
        if nodes[a] < 3 {
            return Err(Error::InvalidParameter(format!(
                "axis {a} has {} nodes; SBP operators need at least 3",
                nodes[a]
            )));
        }
        ext[a] = (lo, hi);
        n[a] = nodes[a];
        h[a] = (hi - lo) / (nodes[a] - 1) as f64;
    }

    // Second-order diagonal norm: h * (1/2, 1, ..., 1, 1/2).
    let mut axis_weights: [Vec<f64>; MAX_DIM] = [vec![1.0], vec![1.0], vec![1.0]];
    for a in 0..dim {
        let mut w = vec![h[a]; n[a]];
        w[0] = 0.5 * h[a];
        w[n[a] - 1] = 0.5 * h[a];
        axis_weights[a] = w;
    }

    let total: usize = n.iter().product();
    let mut node_weight = vec![0.0; total];
    let mut boundary = Vec::new();
    let mut boundary_lookup = vec![u32::MAX; total];

    for node in 0..total {
        let i2 = node % n[2];
        let rest = node / n[2];
        let i1 = rest % n[1];
        let i0 = rest / n[1];
        let idx = [i0, i1, i2];

        let mut hw = 1.0;
        for a in 0..dim {
            hw *= axis_weights[a][idx[a]];
        }
        node_weight[node] = hw;

        let mut normal = [0i8; MAX_DIM];
        let mut face_weights = [0.0; MAX_DIM];
        let mut on_boundary = false;
        for a in 0..dim {
            let side = if idx[a] == 0 {
                -1
            } else if idx[a] == n[a] - 1 {
                1
            } else {
                0
            };
            if side != 0 {
                on_boundary = true;
                normal[a] = side;
                // Face weight: tensorized 1D quadrature over the other axes
                // (the empty product in 1D, i.e. the counting measure).
                let mut fw = 1.0;
                for b in 0..dim {
                    if b != a {
                        fw *= axis_weights[b][idx[b]];
                    }
                }
                face_weights[a] = fw;
            }
        }
        if on_boundary {
            boundary_lookup[node] = boundary.len() as u32;
            boundary.push(BoundaryNode {
                node,
                normal,
                face_weights,
                weight: face_weights.iter().sum(),
            });
        }
    }

    Ok(Grid {
        dim,
        extents: ext,
        nodes: n,
        spacing: h,
        axis_weights,
        node_weight,
        boundary,
        boundary_lookup,
    })
}

/// Second-order diagonal-norm SBP operators attached to a grid.
///
/// `D` per axis is the first derivative (one-sided two-point rows at the
/// ends, central in the interior), `H` the diagonal norm held by the grid,
/// and `B = diag(-1, 0, ..., 0, 1)` per axis. `H*D + D^T*H = B` holds
/// entrywise in exact floating point.
#[derive(Debug, Clone)]
pub struct SbpOperators {
    dim: usize,
    nodes: [usize; MAX_DIM],
    spacing: [f64; MAX_DIM],
    order: usize,
}

/// Construct the SBP operator family for `grid`. Only `order == 2` exists.
pub fn sbp_operators(grid: &Grid, order: usize) -> Result<SbpOperators> {
    if order != 2 {
        return Err(Error::UnsupportedOrder(order));
    }
    Ok(SbpOperators {
        dim: grid.dim,
        nodes: grid.nodes,
        spacing: grid.spacing,
        order,
    })
}

impl SbpOperators {
    pub fn order(&self) -> usize {
        self.order
    }

    /// Apply the difference operator of one axis to a field.
    pub fn apply_diff(&self, axis: usize, f: &ScalarField) -> ScalarField {
        let n = self.nodes[axis];
        let inv_h = 1.0 / self.spacing[axis];
        let mut out = vec![0.0; f.len()];
        // Stride of the axis and number of (outer, inner) line offsets.
        let inner: usize = self.nodes[axis + 1..].iter().product();
        let outer: usize = self.nodes[..axis].iter().product();
        let block = n * inner;
        for o in 0..outer {
            for i in 0..inner {
                let base = o * block + i;
                let at = |k: usize| f.values[base + k * inner];
                out[base] = (at(1) - at(0)) * inv_h;
                for k in 1..n - 1 {
                    out[base + k * inner] = 0.5 * (at(k + 1) - at(k - 1)) * inv_h;
                }
                out[base + (n - 1) * inner] = (at(n - 1) - at(n - 2)) * inv_h;
            }
        }
        ScalarField { values: out }
    }

    /// Dense matrix of the 1D difference operator of one axis (test and
    /// oracle sized grids only).
    pub fn dense_diff_1d(&self, axis: usize) -> Vec<Vec<f64>> {
        let n = self.nodes[axis];
        let inv_h = 1.0 / self.spacing[axis];
        let mut d = vec![vec![0.0; n]; n];
        d[0][0] = -inv_h;
        d[0][1] = inv_h;
        for k in 1..n - 1 {
            d[k][k - 1] = -0.5 * inv_h;
            d[k][k + 1] = 0.5 * inv_h;
        }
        d[n - 1][n - 2] = -inv_h;
        d[n - 1][n - 1] = inv_h;
        d
    }

    /// Entries of the 1D boundary matrix `B` of one axis.
    pub fn boundary_matrix_1d(&self, axis: usize) -> Vec<f64> {
        let n = self.nodes[axis];
        let mut b = vec![0.0; n];
        b[0] = -1.0;
        b[n - 1] = 1.0;
        b
    }

    pub fn dim(&self) -> usize {
        self.dim
    }
}

/// Interior quadrature: sum of `H_ii * f_i`, the discrete integral over the
/// box.
pub fn quadrature(grid: &Grid, f: &ScalarField) -> Result<f64> {
    grid.check_field(f)?;
    Ok(grid
        .node_weight
        .iter()
        .zip(&f.values)
        .map(|(w, v)| w * v)
        .sum())
}

/// Boundary quadrature: sum of the boundary weights times the values, the
/// discrete integral over the boundary.
pub fn boundary_quadrature(grid: &Grid, g: &BoundaryField) -> Result<f64> {
    grid.check_boundary_field(g)?;
    Ok(grid
        .boundary
        .iter()
        .zip(&g.values)
        .map(|(b, v)| b.weight * v)
        .sum())
}

/// Per-axis difference of a scalar field (the discrete gradient).
pub fn gradient(grid: &Grid, ops: &SbpOperators, f: &ScalarField) -> Result<Vec<ScalarField>> {
    grid.check_field(f)?;
    Ok((0..grid.dim).map(|a| ops.apply_diff(a, f)).collect())
}

/// Sum of the per-axis differences of the components (the discrete
/// divergence).
pub fn divergence(grid: &Grid, ops: &SbpOperators, w: &[ScalarField]) -> Result<ScalarField> {
    if w.len() != grid.dim {
        return Err(Error::ShapeMismatch(format!(
            "divergence of {} components on a {}-dimensional grid",
            w.len(),
            grid.dim
        )));
    }
    let mut out = ScalarField::zeros(grid);
    for (a, comp) in w.iter().enumerate() {
        grid.check_field(comp)?;
        out.add_scaled(1.0, &ops.apply_diff(a, comp));
    }
    Ok(out)
}

/// Restriction of a field to the boundary nodes.
pub fn trace(grid: &Grid, f: &ScalarField) -> Result<BoundaryField> {
    grid.check_field(f)?;
    Ok(BoundaryField {
        values: grid.boundary.iter().map(|b| f.values[b.node]).collect(),
    })
}

/// Outward normal component of a vector field at the boundary.
///
/// At a corner the faces meeting there disagree about the normal; the value
/// is the face-weight average of `w . n` over those faces, the unique choice
/// for which discrete integration by parts is exact.
pub fn normal_component(grid: &Grid, w: &[ScalarField]) -> Result<BoundaryField> {
    if w.len() != grid.dim {
        return Err(Error::ShapeMismatch(format!(
            "normal component of {} components on a {}-dimensional grid",
            w.len(),
            grid.dim
        )));
    }
    for comp in w {
        grid.check_field(comp)?;
    }
    Ok(BoundaryField {
        values: grid
            .boundary
            .iter()
            .map(|b| {
                let mut s = 0.0;
                for a in 0..grid.dim {
                    s += b.face_weights[a] * b.normal[a] as f64 * w[a].values[b.node];
                }
                s / b.weight
            })
            .collect(),
    })
}
