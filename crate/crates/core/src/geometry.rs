//! Node-centred Cartesian grid, control volumes and the summation-by-parts
//! difference operators built on it.
//!
//! Nodes are numbered `0..=N` along each axis. Node `i` owns the control
//! volume `(x_{i-1/2}, x_{i+1/2}]`, with the boundary convention
//! `x_{-1/2} = x_0` and `x_{N+1/2} = x_N`, so boundary volumes are half as
//! wide as interior ones.
//!
//! Grid functions are stored flat, row-major with `k` fastest:
//! `index(i, j, k) = (i * (Ny + 1) + j) * (Nz + 1) + k`.
//!
//! An axis built with `N = 0` is degenerate: it has a single node whose
//! control volume spans the whole extent and carries no faces. This is how
//! 1D and 2D problems are posed.

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Axis {
    X,
    Y,
    Z,
}

impl Axis {
    pub const ALL: [Axis; 3] = [Axis::X, Axis::Y, Axis::Z];

    #[inline]
    pub fn index(self) -> usize {
        match self {
            Axis::X => 0,
            Axis::Y => 1,
            Axis::Z => 2,
        }
    }
}

#[derive(Debug, Clone)]
pub struct Grid {
    n: [usize; 3],
    extent: [f64; 3],
    spacing: [f64; 3],
    nodes: [Vec<f64>; 3],
    half: [Vec<f64>; 3],
    dual: [Vec<f64>; 3],
    volumes: Vec<f64>,
}

/// Grids are equal when their intervals and extents are; everything else
/// is derived from those.
impl PartialEq for Grid {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.extent == other.extent
    }
}

impl Grid {
    /// Uniform node-centred grid with `n[a]` intervals along axis `a`.
    ///
    /// Every active axis needs `n >= 2`. Trailing axes may be degenerate
    /// (`n = 0`); the x axis must always be active.
    pub fn new(n: [usize; 3], extent: [f64; 3]) -> Result<Self> {
        for a in 0..3 {
            if !(extent[a].is_finite() && extent[a] > 0.0) {
                return Err(Error::Grid(format!(
                    "extent along axis {a} must be positive, got {}",
                    extent[a]
                )));
            }
            if n[a] == 1 || (a == 0 && n[a] < 2) {
                return Err(Error::Grid(format!(
                    "axis {a} needs at least 2 intervals, got {}",
                    n[a]
                )));
            }
        }
        if n[1] == 0 && n[2] != 0 {
            return Err(Error::Grid(
                "only trailing axes may be degenerate (y is degenerate but z is not)".into(),
            ));
        }

        let mut spacing = [0.0; 3];
        let mut nodes: [Vec<f64>; 3] = Default::default();
        let mut half: [Vec<f64>; 3] = Default::default();
        let mut dual: [Vec<f64>; 3] = Default::default();
        for a in 0..3 {
            let na = n[a];
            let len = extent[a];
            if na == 0 {
                spacing[a] = len;
                nodes[a] = vec![0.5 * len];
                half[a] = vec![0.0, len];
                dual[a] = vec![len];
                continue;
            }
            let h = len / na as f64;
            spacing[a] = h;
            nodes[a] = (0..=na).map(|i| if i == na { len } else { i as f64 * h }).collect();
            // x_{-1/2} = x_0, x_{i+1/2} = (i + 1/2) h, x_{N+1/2} = x_N
            let mut hc = Vec::with_capacity(na + 2);
            hc.push(0.0);
            hc.extend((0..na).map(|i| (i as f64 + 0.5) * h));
            hc.push(len);
            half[a] = hc;
            dual[a] = (0..=na).map(|i| if i == 0 || i == na { 0.5 * h } else { h }).collect();
        }

        let mut volumes = Vec::with_capacity((n[0] + 1) * (n[1] + 1) * (n[2] + 1));
        for i in 0..=n[0] {
            for j in 0..=n[1] {
                for k in 0..=n[2] {
                    volumes.push(dual[0][i] * (dual[1][j] * dual[2][k]));
                }
            }
        }

        Ok(Self {
            n,
            extent,
            spacing,
            nodes,
            half,
            dual,
            volumes,
        })
    }

    /// Cube `[0, extent]^3` with `n` intervals per axis.
    pub fn cube(n: usize, extent: f64) -> Result<Self> {
        Self::new([n; 3], [extent; 3])
    }

    /// 1D slice along x; y and z are degenerate with unit extent.
    pub fn line(n: usize, extent: f64) -> Result<Self> {
        Self::new([n, 0, 0], [extent, 1.0, 1.0])
    }

    #[inline]
    pub fn n(&self) -> [usize; 3] {
        self.n
    }

    #[inline]
    pub fn n_axis(&self, axis: Axis) -> usize {
        self.n[axis.index()]
    }

    #[inline]
    pub fn extent(&self) -> [f64; 3] {
        self.extent
    }

    #[inline]
    pub fn is_active(&self, axis: Axis) -> bool {
        self.n[axis.index()] > 0
    }

    pub fn active_axes(&self) -> impl Iterator<Item = Axis> + '_ {
        Axis::ALL.into_iter().filter(|&a| self.is_active(a))
    }

    pub fn dim(&self) -> usize {
        self.active_axes().count()
    }

    /// Node spacing `h` along an axis (the extent itself for a degenerate axis).
    #[inline]
    pub fn spacing(&self, axis: Axis) -> f64 {
        self.spacing[axis.index()]
    }

    pub fn h_max(&self) -> f64 {
        self.active_axes().map(|a| self.spacing(a)).fold(0.0, f64::max)
    }

    pub fn h_min(&self) -> f64 {
        self.active_axes()
            .map(|a| self.spacing(a))
            .fold(f64::INFINITY, f64::min)
    }

    pub fn node_coords(&self, axis: Axis) -> &[f64] {
        &self.nodes[axis.index()]
    }

    /// Face coordinates `x_{-1/2}, x_{1/2}, ..., x_{N+1/2}` (length `N + 2`).
    pub fn half_coords(&self, axis: Axis) -> &[f64] {
        &self.half[axis.index()]
    }

    /// Control-volume widths `x_{i+1/2} - x_{i-1/2}` (length `N + 1`).
    pub fn dual_widths(&self, axis: Axis) -> &[f64] {
        &self.dual[axis.index()]
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.volumes.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.volumes.is_empty()
    }

    #[inline]
    pub fn index(&self, i: usize, j: usize, k: usize) -> usize {
        (i * (self.n[1] + 1) + j) * (self.n[2] + 1) + k
    }

    #[inline]
    pub fn coords_of(&self, idx: usize) -> [usize; 3] {
        let nz = self.n[2] + 1;
        let ny = self.n[1] + 1;
        let k = idx % nz;
        let j = (idx / nz) % ny;
        let i = idx / (nz * ny);
        [i, j, k]
    }

    /// Flat-index offset between neighbours along `axis`.
    #[inline]
    pub fn stride(&self, axis: Axis) -> usize {
        match axis {
            Axis::X => (self.n[1] + 1) * (self.n[2] + 1),
            Axis::Y => self.n[2] + 1,
            Axis::Z => 1,
        }
    }

    pub fn position(&self, idx: usize) -> [f64; 3] {
        let c = self.coords_of(idx);
        [self.nodes[0][c[0]], self.nodes[1][c[1]], self.nodes[2][c[2]]]
    }

    #[inline]
    pub fn volume(&self, idx: usize) -> f64 {
        self.volumes[idx]
    }

    pub fn volumes(&self) -> &[f64] {
        &self.volumes
    }

    /// Width of the control volume of node `idx` along `axis`.
    #[inline]
    pub fn dual_width(&self, idx: usize, axis: Axis) -> f64 {
        let c = self.coords_of(idx);
        self.dual[axis.index()][c[axis.index()]]
    }

    /// Area of the control-volume faces normal to `axis` at node `idx`
    /// (`S^x_{jk}` etc.).
    #[inline]
    pub fn face_area(&self, idx: usize, axis: Axis) -> f64 {
        let c = self.coords_of(idx);
        match axis {
            Axis::X => self.dual[1][c[1]] * self.dual[2][c[2]],
            Axis::Y => self.dual[0][c[0]] * self.dual[2][c[2]],
            Axis::Z => self.dual[0][c[0]] * self.dual[1][c[1]],
        }
    }

    /// True when the node lies on a wall of an active axis.
    #[inline]
    pub fn is_boundary(&self, idx: usize) -> bool {
        let c = self.coords_of(idx);
        (0..3).any(|a| self.n[a] > 0 && (c[a] == 0 || c[a] == self.n[a]))
    }

    pub fn boundary_count(&self) -> usize {
        (0..self.len()).filter(|&i| self.is_boundary(i)).count()
    }

    pub fn box_volume(&self) -> f64 {
        self.extent.iter().product()
    }

    /// Number of interior faces `i + 1/2, i = 0..N-1` normal to `axis`.
    pub fn face_count(&self, axis: Axis) -> usize {
        let a = axis.index();
        (0..3).map(|b| if b == a { self.n[b] } else { self.n[b] + 1 }).product()
    }

    /// Interior faces normal to `axis` as `(left, right)` node indices, in
    /// left-node row-major order. Empty for a degenerate axis.
    pub fn faces(&self, axis: Axis) -> Faces<'_> {
        Faces {
            grid: self,
            axis,
            next: 0,
            count: self.face_count(axis),
        }
    }

    /// Left node of face number `f` normal to `axis`.
    #[inline]
    pub fn face_left(&self, axis: Axis, f: usize) -> usize {
        let a = axis.index();
        let dims: [usize; 3] = std::array::from_fn(|b| if b == a { self.n[b] } else { self.n[b] + 1 });
        let k = f % dims[2];
        let j = (f / dims[2]) % dims[1];
        let i = f / (dims[2] * dims[1]);
        self.index(i, j, k)
    }

    /// Face number of the face whose left node is `idx`, if any.
    #[inline]
    pub fn face_of_left(&self, axis: Axis, idx: usize) -> Option<usize> {
        let a = axis.index();
        let c = self.coords_of(idx);
        if c[a] >= self.n[a] {
            return None;
        }
        let dims: [usize; 3] = std::array::from_fn(|b| if b == a { self.n[b] } else { self.n[b] + 1 });
        Some((c[0] * dims[1] + c[1]) * dims[2] + c[2])
    }
}

pub struct Faces<'g> {
    grid: &'g Grid,
    axis: Axis,
    next: usize,
    count: usize,
}

impl Iterator for Faces<'_> {
    type Item = (usize, usize);

    fn next(&mut self) -> Option<Self::Item> {
        if self.next >= self.count {
            return None;
        }
        let left = self.grid.face_left(self.axis, self.next);
        self.next += 1;
        Some((left, left + self.grid.stride(self.axis)))
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let rem = self.count - self.next;
        (rem, Some(rem))
    }
}

impl ExactSizeIterator for Faces<'_> {}

/// `D_+ a_i = (a_{i+1} - a_i) / h` on the interior faces normal to `axis`,
/// ordered as [`Grid::faces`].
pub fn diff_plus(grid: &Grid, a: &[f64], axis: Axis) -> Vec<f64> {
    debug_assert_eq!(a.len(), grid.len());
    let h = grid.spacing(axis);
    grid.faces(axis).map(|(l, r)| (a[r] - a[l]) / h).collect()
}

/// `D_- a_i = (a_i - a_{i-1}) / h` at every node, with `D_- a_0 = 0`.
pub fn diff_minus(grid: &Grid, a: &[f64], axis: Axis) -> Vec<f64> {
    debug_assert_eq!(a.len(), grid.len());
    let mut out = vec![0.0; grid.len()];
    if !grid.is_active(axis) {
        return out;
    }
    let h = grid.spacing(axis);
    for (l, r) in grid.faces(axis) {
        out[r] = (a[r] - a[l]) / h;
    }
    out
}

/// Divergence of a face quantity: `(b_{i+1/2} - b_{i-1/2}) / (x_{i+1/2} - x_{i-1/2})`
/// at every node. `interior` is ordered as [`Grid::faces`]; the wall values
/// `b_{-1/2}` and `b_{N+1/2}` are taken from `wall`, which maps a boundary
/// node to its outward wall value (`(lower, upper)`).
pub fn flux_divergence(grid: &Grid, interior: &[f64], axis: Axis, wall: impl Fn(usize) -> (f64, f64)) -> Vec<f64> {
    let mut out = vec![0.0; grid.len()];
    if !grid.is_active(axis) {
        return out;
    }
    let a = axis.index();
    let n = grid.n()[a];
    for idx in 0..grid.len() {
        let c = grid.coords_of(idx);
        let lower = if c[a] == 0 {
            wall(idx).0
        } else {
            interior[grid.face_of_left(axis, idx - grid.stride(axis)).unwrap()]
        };
        let upper = if c[a] == n {
            wall(idx).1
        } else {
            interior[grid.face_of_left(axis, idx).unwrap()]
        };
        out[idx] = (upper - lower) / grid.dual_width(idx, axis);
    }
    out
}

/// Residual of the one-dimensional summation-by-parts identity
/// `sum_i a_i (b_{i+1/2} - b_{i-1/2}) = -a_0 b_{-1/2} + a_N b_{N+1/2} - sum_i (a_{i+1} - a_i) b_{i+1/2}`.
///
/// `a` holds the `N + 1` nodal values; `b` the `N + 2` face values
/// `b_{-1/2} ..= b_{N+1/2}`.
pub fn sbp_residual_1d(a: &[f64], b: &[f64]) -> f64 {
    assert!(a.len() >= 2 && b.len() == a.len() + 1);
    let n = a.len() - 1;
    let lhs: f64 = (0..=n).map(|i| a[i] * (b[i + 1] - b[i])).sum();
    let interior: f64 = (0..n).map(|i| (a[i + 1] - a[i]) * b[i + 1]).sum();
    let rhs = -a[0] * b[0] + a[n] * b[n + 1] - interior;
    (lhs - rhs).abs()
}

/// SBP residual applied along every grid line of `axis`; returns the largest
/// line residual. `b_face` holds the `N + 2` face values per line, laid out as
/// a grid function with `N + 2` entries along `axis`.
pub fn sbp_residual(grid: &Grid, a: &[f64], b_face: &[f64], axis: Axis) -> f64 {
    let ax = axis.index();
    let n = grid.n();
    let na = n[ax];
    if na == 0 {
        return 0.0;
    }
    let mut dims = [n[0] + 1, n[1] + 1, n[2] + 1];
    dims[ax] = na + 2;
    assert_eq!(b_face.len(), dims.iter().product::<usize>());
    let face_idx = |c: [usize; 3]| (c[0] * dims[1] + c[1]) * dims[2] + c[2];

    let mut worst: f64 = 0.0;
    let others: Vec<usize> = (0..3).filter(|&b| b != ax).collect();
    for p in 0..=n[others[0]] {
        for q in 0..=n[others[1]] {
            let mut c = [0usize; 3];
            c[others[0]] = p;
            c[others[1]] = q;
            let line_a: Vec<f64> = (0..=na)
                .map(|i| {
                    c[ax] = i;
                    a[grid.index(c[0], c[1], c[2])]
                })
                .collect();
            let line_b: Vec<f64> = (0..na + 2)
                .map(|i| {
                    c[ax] = i;
                    b_face[face_idx(c)]
                })
                .collect();
            worst = worst.max(sbp_residual_1d(&line_a, &line_b));
        }
    }
    worst
}

/// Volume-weighted discrete `L^p` norm; `p = f64::INFINITY` gives the max norm.
pub fn discrete_norm(grid: &Grid, a: &[f64], p: f64) -> f64 {
    assert!(p >= 1.0, "norm exponent must be >= 1");
    if p.is_infinite() {
        return a.iter().fold(0.0, |m, v| m.max(v.abs()));
    }
    let s: f64 = a.iter().zip(grid.volumes()).map(|(v, vol)| vol * v.abs().powf(p)).sum();
    s.powf(1.0 / p)
}

/// `||D_+^x a||^2 = sum V_{ijk} (D_+^x a_{ijk})^2` over `i = 0..N-1`.
pub fn gradient_norm_sq(grid: &Grid, a: &[f64], axis: Axis) -> f64 {
    let h = grid.spacing(axis);
    grid.faces(axis)
        .map(|(l, r)| {
            let d = (a[r] - a[l]) / h;
            grid.volume(l) * d * d
        })
        .sum()
}

/// Discrete `H^1`-seminorm: square root of the sum of the directional pieces.
pub fn gradient_norm_l2(grid: &Grid, a: &[f64]) -> f64 {
    grid.active_axes()
        .map(|ax| gradient_norm_sq(grid, a, ax))
        .sum::<f64>()
        .sqrt()
}
