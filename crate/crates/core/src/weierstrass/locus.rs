//! Marching squares for the singular set `|g| = 1`.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float;

use super::WeierstrassData;
use crate::surface::Domain;
use crate::{Error, Result, C64};

/// Vertices of a refined isocontour satisfy `||g| - 1| <= LOCUS_TOL`.
pub const LOCUS_TOL: f64 = 1e-6;

/// Polyline in the `z`-plane; closed ones repeat their first vertex.
pub type Polyline = Vec<C64>;

/// Rectangular grid of `nx x ny` nodes.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Grid {
    pub re_min: f64,
    pub re_max: f64,
    pub im_min: f64,
    pub im_max: f64,
    pub nx: usize,
    pub ny: usize,
}

impl Grid {
    pub fn new(re_min: f64, re_max: f64, im_min: f64, im_max: f64, nx: usize, ny: usize) -> Result<Self> {
        if nx < 2 || ny < 2 || !(re_max > re_min) || !(im_max > im_min) {
            return Err(Error::InvalidInput("empty grid"));
        }
        Ok(Grid { re_min, re_max, im_min, im_max, nx, ny })
    }

    /// `[-half, half]^2` with `n x n` nodes.
    pub fn square(half: f64, n: usize) -> Result<Self> {
        Self::new(-half, half, -half, half, n, n)
    }

    pub fn step(&self) -> f64 {
        let dx = (self.re_max - self.re_min) / (self.nx - 1) as f64;
        let dy = (self.im_max - self.im_min) / (self.ny - 1) as f64;
        dx.max(dy)
    }

    pub fn node(&self, i: usize, j: usize) -> C64 {
        let x = self.re_min + (self.re_max - self.re_min) * i as f64 / (self.nx - 1) as f64;
        let y = self.im_min + (self.im_max - self.im_min) * j as f64 / (self.ny - 1) as f64;
        C64::new(x, y)
    }

    pub fn contains(&self, z: C64) -> bool {
        z.re >= self.re_min && z.re <= self.re_max && z.im >= self.im_min && z.im <= self.im_max
    }
}

/// `ln|g|` on the principal sheet. For `g = b(z) w` both sheets agree.
fn log_abs_g(data: &WeierstrassData, z: C64) -> f64 {
    let w = match data.domain() {
        Domain::RootCurve { f, .. } => Some(f.eval_unchecked(z).sqrt()),
        Domain::PuncturedPlane { .. } => None,
    };
    let v = data.g().eval_unchecked(z, w).norm().ln();
    if v.is_finite() {
        v
    } else {
        f64::NAN
    }
}

/// Crossing of `ln|g| = 0` on the segment between `a` and `b` by bisection.
fn refine(data: &WeierstrassData, mut a: C64, mut va: f64, mut b: C64) -> Option<C64> {
    for _ in 0..200 {
        let m = 0.5 * (a + b);
        let vm = log_abs_g(data, m);
        if !vm.is_finite() {
            return None;
        }
        if vm.abs() <= 0.5 * LOCUS_TOL {
            return Some(m);
        }
        if (vm > 0.0) == (va > 0.0) {
            a = m;
            va = vm;
        } else {
            b = m;
        }
        if (b - a).norm() <= 1e-15 * (1.0 + a.norm()) {
            break;
        }
    }
    None
}

/// Edge identifier: `(horizontal, i, j)` is the edge leaving node `(i, j)`
/// in the `+x` (horizontal) or `+y` direction.
type EdgeKey = (bool, usize, usize);

/// Isocontour `|g| = 1` over the grid, joined into polylines.
pub fn singular_locus(data: &WeierstrassData, grid: &Grid) -> Result<Vec<Polyline>> {
    let grid = Grid::new(grid.re_min, grid.re_max, grid.im_min, grid.im_max, grid.nx, grid.ny)?;
    let (nx, ny) = (grid.nx, grid.ny);
    let mut vals = alloc::vec![0.0; nx * ny];
    for j in 0..ny {
        for i in 0..nx {
            vals[j * nx + i] = log_abs_g(data, grid.node(i, j));
        }
    }
    let v = |i: usize, j: usize| vals[j * nx + i];
    let pos = |x: f64| x > 0.0;
    let mut crossings: BTreeMap<EdgeKey, C64> = BTreeMap::new();
    let mut crossing = |key: EdgeKey| -> Option<C64> {
        if let Some(z) = crossings.get(&key) {
            return Some(*z);
        }
        let (h, i, j) = key;
        let (i2, j2) = if h { (i + 1, j) } else { (i, j + 1) };
        let z = refine(data, grid.node(i, j), v(i, j), grid.node(i2, j2))?;
        crossings.insert(key, z);
        Some(z)
    };
    let mut segments: Vec<(EdgeKey, EdgeKey)> = Vec::new();
    for j in 0..ny - 1 {
        for i in 0..nx - 1 {
            let c = [v(i, j), v(i + 1, j), v(i + 1, j + 1), v(i, j + 1)];
            if c.iter().any(|x| !x.is_finite()) {
                continue;
            }
            // edges: bottom, right, top, left
            let edges: [EdgeKey; 4] = [(true, i, j), (false, i + 1, j), (true, i, j + 1), (false, i, j)];
            let cut: Vec<usize> = (0..4).filter(|&k| pos(c[k]) != pos(c[(k + 1) % 4])).collect();
            let pairs: Vec<(usize, usize)> = match cut.len() {
                2 => alloc::vec![(cut[0], cut[1])],
                4 => {
                    let center = log_abs_g(data, 0.5 * (grid.node(i, j) + grid.node(i + 1, j + 1)));
                    if pos(center) == pos(c[0]) {
                        alloc::vec![(0, 1), (2, 3)]
                    } else {
                        alloc::vec![(0, 3), (1, 2)]
                    }
                }
                _ => Vec::new(),
            };
            for (a, b) in pairs {
                let (ka, kb) = (edges[a], edges[b]);
                if crossing(ka).is_some() && crossing(kb).is_some() {
                    segments.push((ka, kb));
                }
            }
        }
    }
    Ok(join(&segments, &crossings))
}

fn join(segments: &[(EdgeKey, EdgeKey)], points: &BTreeMap<EdgeKey, C64>) -> Vec<Polyline> {
    let mut adj: BTreeMap<EdgeKey, Vec<usize>> = BTreeMap::new();
    for (k, (a, b)) in segments.iter().enumerate() {
        adj.entry(*a).or_default().push(k);
        adj.entry(*b).or_default().push(k);
    }
    let mut used = alloc::vec![false; segments.len()];
    let mut out = Vec::new();
    let walk = |start: EdgeKey, used: &mut Vec<bool>| -> Option<Polyline> {
        let mut line = alloc::vec![points[&start]];
        let mut cur = start;
        loop {
            let next = adj[&cur].iter().copied().find(|&s| !used[s]);
            let Some(s) = next else { break };
            used[s] = true;
            let (a, b) = segments[s];
            cur = if a == cur { b } else { a };
            line.push(points[&cur]);
        }
        if line.len() > 1 {
            Some(line)
        } else {
            None
        }
    };
    // open chains start at nodes of degree one
    let ends: Vec<EdgeKey> = adj.iter().filter(|(_, v)| v.len() == 1).map(|(k, _)| *k).collect();
    for k in ends {
        if let Some(l) = walk(k, &mut used) {
            out.push(l);
        }
    }
    let keys: Vec<EdgeKey> = adj.keys().copied().collect();
    for k in keys {
        if let Some(l) = walk(k, &mut used) {
            out.push(l);
        }
    }
    out
}
