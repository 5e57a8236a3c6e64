//! Uniform space-time grids on boxes, parabolic cylinders, and
//! parabolic-boundary classification.
//!
//! The spatial domain is the box `[-half_width, half_width]^n`; balls are
//! predicates over box nodes, with the lateral tolerance `h/2` classifying
//! the discrete sphere. All index arithmetic is exact; coordinates are
//! derived on demand as `x_i = -half_width + i*h`.

use crate::error::{Error, Result};

/// Absolute tolerance for geometric comparisons of derived coordinates.
pub const GEOM_TOL: f64 = 1e-12;

/// Relative tolerance for the step-commensurability checks.
const COMMENSURATE_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub struct Grid {
    n: usize,
    half_width: f64,
    h: f64,
    dt: f64,
    t_begin: f64,
    t_end: f64,
    nodes_per_axis: usize,
    levels: usize,
}

impl Grid {
    pub fn new(
        n: usize,
        half_width: f64,
        h: f64,
        dt: f64,
        t_begin: f64,
        t_end: f64,
    ) -> Result<Grid> {
        if !(1..=3).contains(&n) {
            return Err(Error::Config(format!("dimension n = {n} not in 1..=3")));
        }
        if !(h > 0.0) || !(dt > 0.0) {
            return Err(Error::Config(format!("steps must be positive: h = {h}, dt = {dt}")));
        }
        if !(t_begin < t_end) {
            return Err(Error::Config(format!(
                "time interval empty: t_begin = {t_begin}, t_end = {t_end}"
            )));
        }
        let cells = 2.0 * half_width / h;
        if (cells - cells.round()).abs() > COMMENSURATE_TOL * cells.max(1.0) {
            return Err(Error::Config(format!(
                "2*half_width/h = {cells} is not an integer"
            )));
        }
        let steps = (t_end - t_begin) / dt;
        if (steps - steps.round()).abs() > COMMENSURATE_TOL * steps.max(1.0) {
            return Err(Error::Config(format!(
                "(t_end - t_begin)/dt = {steps} is not an integer"
            )));
        }
        Ok(Grid {
            n,
            half_width,
            h,
            dt,
            t_begin,
            t_end,
            nodes_per_axis: cells.round() as usize + 1,
            levels: steps.round() as usize + 1,
        })
    }

    pub fn dim(&self) -> usize {
        self.n
    }
    pub fn half_width(&self) -> f64 {
        self.half_width
    }
    pub fn h(&self) -> f64 {
        self.h
    }
    pub fn dt(&self) -> f64 {
        self.dt
    }
    pub fn t_begin(&self) -> f64 {
        self.t_begin
    }
    pub fn t_end(&self) -> f64 {
        self.t_end
    }
    pub fn nodes_per_axis(&self) -> usize {
        self.nodes_per_axis
    }
    pub fn levels(&self) -> usize {
        self.levels
    }

    /// Spatial nodes per time level.
    pub fn node_count(&self) -> usize {
        self.nodes_per_axis.pow(self.n as u32)
    }

    pub fn coord(&self, i: usize) -> f64 {
        -self.half_width + i as f64 * self.h
    }

    pub fn time(&self, level: usize) -> f64 {
        self.t_begin + level as f64 * self.dt
    }

    /// Spatial point of a node index; unused components are zero.
    pub fn point(&self, idx: [usize; 3]) -> [f64; 3] {
        let mut x = [0.0; 3];
        for ax in 0..self.n {
            x[ax] = self.coord(idx[ax]);
        }
        x
    }

    /// Lexicographic flat index (axis 0 slowest).
    pub fn flat(&self, idx: [usize; 3]) -> usize {
        let mut f = 0;
        for ax in 0..self.n {
            f = f * self.nodes_per_axis + idx[ax];
        }
        f
    }

    pub fn unflat(&self, mut flat: usize) -> [usize; 3] {
        let mut idx = [0usize; 3];
        for ax in (0..self.n).rev() {
            idx[ax] = flat % self.nodes_per_axis;
            flat /= self.nodes_per_axis;
        }
        idx
    }

    /// Stride of axis `ax` in the flat index.
    pub fn stride(&self, ax: usize) -> usize {
        self.nodes_per_axis.pow((self.n - 1 - ax) as u32)
    }

    /// Nodes in deterministic lexicographic order.
    pub fn iter_nodes(&self) -> impl Iterator<Item = [usize; 3]> + '_ {
        (0..self.node_count()).map(move |f| self.unflat(f))
    }

    /// Nearest level to time `t`, if within half a step of one.
    pub fn level_of_time(&self, t: f64) -> Option<usize> {
        let raw = (t - self.t_begin) / self.dt;
        let level = raw.round();
        if (raw - level).abs() <= 0.5 + GEOM_TOL && level >= 0.0 && (level as usize) < self.levels {
            Some(level as usize)
        } else {
            None
        }
    }

    /// Euclidean distance between a node and a spatial point (first `n` components).
    pub fn dist(&self, idx: [usize; 3], x0: &[f64; 3]) -> f64 {
        let x = self.point(idx);
        let mut s = 0.0;
        for ax in 0..self.n {
            let d = x[ax] - x0[ax];
            s += d * d;
        }
        s.sqrt()
    }
}

/// `Q_r(x0, t0) = B_r(x0) x (t0 - r^2, t0]` with its parabolic boundary.
#[derive(Debug, Clone, PartialEq)]
pub struct ParabolicCylinder {
    pub center: [f64; 3],
    pub top_time: f64,
    pub radius: f64,
}

impl ParabolicCylinder {
    pub fn new(center: [f64; 3], top_time: f64, radius: f64) -> ParabolicCylinder {
        ParabolicCylinder { center, top_time, radius }
    }

    /// `Q_r(0, t_end)` for a given grid: the standard unit-style cylinder.
    pub fn centered(grid: &Grid, radius: f64) -> ParabolicCylinder {
        ParabolicCylinder::new([0.0; 3], grid.t_end(), radius)
    }

    pub fn bottom_time(&self) -> f64 {
        self.top_time - self.radius * self.radius
    }

    /// Open membership: `|x - x0| < r` and `t0 - r^2 < t <= t0`.
    pub fn contains(&self, grid: &Grid, idx: [usize; 3], level: usize) -> bool {
        let t = grid.time(level);
        grid.dist(idx, &self.center) < self.radius - GEOM_TOL
            && t > self.bottom_time() + GEOM_TOL
            && t <= self.top_time + GEOM_TOL
    }

    /// Closure membership: `|x - x0| <= r`, `t0 - r^2 <= t <= t0`, with the
    /// bottom level admitted within `dt/2`.
    pub fn closure_contains(&self, grid: &Grid, idx: [usize; 3], level: usize) -> bool {
        let t = grid.time(level);
        grid.dist(idx, &self.center) <= self.radius + GEOM_TOL
            && t >= self.bottom_time() - 0.5 * grid.dt()
            && t <= self.top_time + GEOM_TOL
    }
}

/// Partition class of a node within a cylinder's closure.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NodeClass {
    Interior,
    Lateral,
    Bottom,
}

/// Closure nodes of a cylinder, partitioned. Node lists are in
/// (level, lexicographic node) order.
#[derive(Debug, Clone, Default)]
pub struct CylinderNodes {
    pub interior: Vec<([usize; 3], usize)>,
    pub lateral: Vec<([usize; 3], usize)>,
    pub bottom: Vec<([usize; 3], usize)>,
}

impl CylinderNodes {
    pub fn total(&self) -> usize {
        self.interior.len() + self.lateral.len() + self.bottom.len()
    }

    pub fn iter_all(&self) -> impl Iterator<Item = &([usize; 3], usize)> {
        self.bottom.iter().chain(self.lateral.iter()).chain(self.interior.iter())
    }
}

/// Classify one closure node. Bottom wins over lateral: the bottom slice of
/// the parabolic boundary covers all of `B_r x {t = t0 - r^2}`.
pub fn classify_node(
    grid: &Grid,
    cyl: &ParabolicCylinder,
    idx: [usize; 3],
    level: usize,
) -> Option<NodeClass> {
    if !cyl.closure_contains(grid, idx, level) {
        return None;
    }
    let t = grid.time(level);
    if (t - cyl.bottom_time()).abs() <= 0.5 * grid.dt() {
        return Some(NodeClass::Bottom);
    }
    let lateral_shell = (grid.dist(idx, &cyl.center) - cyl.radius).abs() <= 0.5 * grid.h() + GEOM_TOL;
    if lateral_shell && t < cyl.top_time - GEOM_TOL {
        return Some(NodeClass::Lateral);
    }
    Some(NodeClass::Interior)
}

/// Enumerate and partition all closure nodes of `cyl`. An empty intersection
/// yields empty partitions, not an error.
pub fn cylinder_nodes(grid: &Grid, cyl: &ParabolicCylinder) -> CylinderNodes {
    let mut out = CylinderNodes::default();
    for level in 0..grid.levels() {
        let t = grid.time(level);
        if t < cyl.bottom_time() - 0.5 * grid.dt() || t > cyl.top_time + GEOM_TOL {
            continue;
        }
        for idx in grid.iter_nodes() {
            match classify_node(grid, cyl, idx, level) {
                Some(NodeClass::Interior) => out.interior.push((idx, level)),
                Some(NodeClass::Lateral) => out.lateral.push((idx, level)),
                Some(NodeClass::Bottom) => out.bottom.push((idx, level)),
                None => {}
            }
        }
    }
    out
}

/// `osc_Q u = sup_Q u - inf_Q u` over the closure nodes of the cylinder.
pub fn oscillation(field: &crate::calculus::SpaceTimeField, cyl: &ParabolicCylinder) -> Result<f64> {
    let grid = field.grid();
    let mut max = f64::NEG_INFINITY;
    let mut min = f64::INFINITY;
    let mut seen = false;
    for level in 0..grid.levels() {
        let t = grid.time(level);
        if t < cyl.bottom_time() - 0.5 * grid.dt() || t > cyl.top_time + GEOM_TOL {
            continue;
        }
        for idx in grid.iter_nodes() {
            if cyl.closure_contains(grid, idx, level) {
                let v = field.value(idx, level);
                max = max.max(v);
                min = min.min(v);
                seen = true;
            }
        }
    }
    if !seen {
        return Err(Error::EmptyCylinder);
    }
    Ok(max - min)
}
