use alloc::string::String;
use alloc::vec::Vec;
use core::f64::consts::TAU;

#[allow(unused_imports)]
use num_traits::Float;

use super::{add, path_integral, same_sheet, ImmersionEngine, Position, LIFT_TOL};
use crate::surface::{lift_path, PathSpec, Segment, SurfacePoint};
use crate::weierstrass::{conformal_factor, singular_locus, Grid};
use crate::{Error, Result, C64};

/// Log-polar grid `log|z| = u_i`, `arg z = 2 pi (j + 1/2)/n_angular`, on every
/// sheet.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MeshSpec {
    pub n_radial: usize,
    pub n_angular: usize,
    pub log_rmin: f64,
    pub log_rmax: f64,
    /// Attach the singular set `|g| = 1`.
    pub singular: bool,
}

impl Default for MeshSpec {
    fn default() -> Self {
        MeshSpec { n_radial: 64, n_angular: 64, log_rmin: -2.5, log_rmax: 2.5, singular: false }
    }
}

impl MeshSpec {
    pub fn validate(&self) -> Result<()> {
        if self.n_radial < 2 || self.n_angular < 3 {
            return Err(Error::InvalidInput("mesh needs at least 2 x 3 nodes"));
        }
        if !(self.log_rmin < self.log_rmax) || !self.log_rmin.is_finite() || !self.log_rmax.is_finite() {
            return Err(Error::InvalidInput("mesh radii must be finite and increasing"));
        }
        Ok(())
    }

    pub fn du(&self) -> f64 {
        (self.log_rmax - self.log_rmin) / (self.n_radial - 1) as f64
    }

    pub fn dtheta(&self) -> f64 {
        TAU / self.n_angular as f64
    }

    pub fn radius(&self, i: usize) -> f64 {
        (self.log_rmin + self.du() * i as f64).exp()
    }

    pub fn angle(&self, j: usize) -> f64 {
        self.dtheta() * (j as f64 + 0.5)
    }

    pub fn node(&self, i: usize, j: usize) -> C64 {
        C64::from_polar(self.radius(i), self.angle(j))
    }

    /// Whether `z -> -1/conj z` maps grid nodes to grid nodes.
    pub fn antipodal_symmetric(&self) -> bool {
        self.n_angular % 2 == 0 && (self.log_rmin + self.log_rmax).abs() <= 1e-12
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MeshVertex {
    pub point: SurfacePoint,
    pub sheet: usize,
    pub i: usize,
    pub j: usize,
    pub position: Position,
    pub conformal_factor: f64,
    pub abs_g: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SurfaceMesh {
    pub label: String,
    pub spec: MeshSpec,
    pub sheets: usize,
    pub vertices: Vec<MeshVertex>,
    /// Quads, counterclockwise in `(log|z|, arg z)`.
    pub faces: Vec<[usize; 4]>,
    /// `|g| = 1` in the domain, one entry per lift.
    pub singular_domain: Vec<Vec<SurfacePoint>>,
    pub singular_polylines: Vec<Vec<Position>>,
    /// Vertex pairs identified by the involution.
    pub involution_pairs: Vec<(usize, usize)>,
}

impl SurfaceMesh {
    pub fn index(&self, sheet: usize, i: usize, j: usize) -> usize {
        (sheet * self.spec.n_radial + i) * self.spec.n_angular + j
    }

    /// Vertex over node `(i, j)` on the sheet continuing `w` best.
    pub fn matching(&self, i: usize, j: usize, w: Option<C64>) -> usize {
        let mut best = self.index(0, i, j);
        for s in 1..self.sheets {
            let k = self.index(s, i, j);
            if let (Some(w), Some(a), Some(b)) = (w, self.vertices[k].point.w, self.vertices[best].point.w) {
                if (a - w).norm() < (b - w).norm() {
                    best = k;
                }
            }
        }
        best
    }

    /// Largest distance between involution-paired positions.
    pub fn involution_defect(&self) -> f64 {
        self.involution_pairs
            .iter()
            .fold(0.0f64, |m, (a, b)| m.max(super::distance(self.vertices[*a].position, self.vertices[*b].position)))
    }

    pub fn all_finite(&self) -> bool {
        self.vertices.iter().all(|v| v.position.iter().all(|x| x.is_finite()))
            && self.singular_polylines.iter().flatten().all(|p| p.iter().all(|x| x.is_finite()))
    }
}

struct Step {
    z: C64,
    w: Option<C64>,
    x: Position,
}

fn advance(engine: &ImmersionEngine, from: &Step, seg: Segment) -> Result<Step> {
    let spec = PathSpec::single(seg, from.w);
    let path = lift_path(engine.data().domain(), &spec, LIFT_TOL)?;
    let d = path_integral(engine.data(), &path, &engine.config().quadrature)?;
    Ok(Step { z: path.end_z(), w: path.end_w(), x: add(from.x, d) })
}

/// Samples the surface on the log-polar grid of `spec`.
///
/// Positions come from a path tree: ccw arcs at the basepoint radius to each
/// column, then radial steps node to node, each reusing its prefix.
pub fn sample_mesh(engine: &ImmersionEngine, spec: &MeshSpec) -> Result<SurfaceMesh> {
    spec.validate()?;
    let data = engine.data();
    let domain = data.domain();
    let clearance = domain.default_clearance().max(1e-9);
    for i in 0..spec.n_radial {
        for j in 0..spec.n_angular {
            if domain.obstacle_distance(spec.node(i, j)) < clearance {
                return Err(Error::InvalidInput("mesh node touches a branch point or puncture"));
            }
        }
    }
    let starts = engine.starts();
    let (n_r, n_a) = (spec.n_radial, spec.n_angular);
    let mut slots: Vec<Option<MeshVertex>> = alloc::vec![None; starts.len() * n_r * n_a];
    for (sheet, (b, x0)) in starts.iter().enumerate() {
        let (rho, a0) = b.z.to_polar();
        let mut order: Vec<usize> = (0..n_a).collect();
        let rel = |j: usize| (spec.angle(j) - a0).rem_euclid(TAU);
        order.sort_by(|x, y| rel(*x).total_cmp(&rel(*y)));
        let mut at = Step { z: b.z, w: b.w, x: *x0 };
        let mut angle = a0;
        for j in order {
            let target = a0 + rel(j);
            if target > angle {
                let arc = Segment::Arc { center: C64::new(0.0, 0.0), radius: rho, start: angle, sweep: target - angle };
                at = advance(engine, &at, arc)?;
                angle = target;
            }
            let up: Vec<usize> = (0..n_r).filter(|&i| spec.radius(i) >= rho).collect();
            let down: Vec<usize> = (0..n_r).rev().filter(|&i| spec.radius(i) < rho).collect();
            for chain in [up, down] {
                let mut cur = Step { z: at.z, w: at.w, x: at.x };
                for i in chain {
                    let to = spec.node(i, j);
                    if (to - cur.z).norm() > 0.0 {
                        cur = advance(engine, &cur, Segment::Line { from: cur.z, to })?;
                    }
                    let point = SurfacePoint { z: to, w: cur.w };
                    let conformal_factor = conformal_factor(data, &point)?;
                    let abs_g = data.g().eval(to, cur.w)?.norm();
                    slots[(sheet * n_r + i) * n_a + j] =
                        Some(MeshVertex { point, sheet, i, j, position: cur.x, conformal_factor, abs_g });
                }
            }
        }
    }
    let vertices: Vec<MeshVertex> = slots.into_iter().collect::<Option<Vec<_>>>().ok_or(Error::Unreachable)?;
    let mut mesh = SurfaceMesh {
        label: String::from(data.label()),
        spec: *spec,
        sheets: starts.len(),
        vertices,
        faces: Vec::new(),
        singular_domain: Vec::new(),
        singular_polylines: Vec::new(),
        involution_pairs: Vec::new(),
    };
    for s in 0..mesh.sheets {
        for i in 0..n_r - 1 {
            for j in 0..n_a {
                let a = mesh.index(s, i, j);
                let wa = mesh.vertices[a].point.w;
                let b = mesh.matching(i + 1, j, wa);
                let d = mesh.matching(i, (j + 1) % n_a, wa);
                let c = mesh.matching(i + 1, (j + 1) % n_a, mesh.vertices[b].point.w);
                mesh.faces.push([a, b, c, d]);
            }
        }
    }
    if let Some(inv) = data.involution() {
        if spec.antipodal_symmetric() && inv.zmap() == crate::surface::ZMap::NegInvConj {
            for a in 0..mesh.vertices.len() {
                let v = mesh.vertices[a];
                let w = v.point.w.map(|w| inv.map_w(w));
                let b = mesh.matching(n_r - 1 - v.i, (v.j + n_a / 2) % n_a, w);
                if a < b {
                    mesh.involution_pairs.push((a, b));
                }
            }
        }
    }
    if spec.singular {
        attach_singular_set(engine, &mut mesh)?;
    }
    Ok(mesh)
}

/// Traces `|g| = 1` inside the mesh annulus and maps it through `X`, walking
/// each polyline incrementally from its first vertex.
fn attach_singular_set(engine: &ImmersionEngine, mesh: &mut SurfaceMesh) -> Result<()> {
    let spec = mesh.spec;
    let (lo, hi) = (spec.log_rmin.exp(), spec.log_rmax.exp());
    let n = 8 * spec.n_radial.max(spec.n_angular);
    let lines = singular_locus(engine.data(), &Grid::square(hi, n)?)?;
    let domain = engine.data().domain();
    let clearance = 2.0 * domain.default_clearance();
    let inside = |z: C64| z.norm() >= lo && z.norm() <= hi && domain.obstacle_distance(z) >= clearance;
    let mut pieces: Vec<Vec<C64>> = Vec::new();
    for line in lines {
        let mut cur = Vec::new();
        for z in line {
            if inside(z) {
                cur.push(z);
            } else if !cur.is_empty() {
                pieces.push(core::mem::take(&mut cur));
            }
        }
        if cur.len() > 1 {
            pieces.push(cur);
        }
    }
    for piece in pieces.into_iter().filter(|p| p.len() > 1) {
        let first = domain.principal_point(piece[0]);
        let mut lifts = alloc::vec![first];
        if let Some(w) = first.w {
            lifts.push(SurfacePoint { z: first.z, w: Some(-w) });
        }
        for start in lifts {
            let mut zs = alloc::vec![start];
            let mut xs = alloc::vec![engine.evaluate(&start)?];
            let mut at = Step { z: start.z, w: start.w, x: xs[0] };
            for z in &piece[1..] {
                let next = match advance(engine, &at, Segment::Line { from: at.z, to: *z }) {
                    Ok(s) => s,
                    Err(_) => {
                        let p = SurfacePoint { z: *z, w: domain.sheets(*z).map(|[a, b]| {
                            if same_sheet(at.w, Some(a)) { a } else { b }
                        }) };
                        Step { z: *z, w: p.w, x: engine.evaluate(&p)? }
                    }
                };
                zs.push(SurfacePoint { z: next.z, w: next.w });
                xs.push(next.x);
                at = next;
            }
            mesh.singular_domain.push(zs);
            mesh.singular_polylines.push(xs);
        }
    }
    Ok(())
}

/// Parameters of the per-node checks.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LocalCheckSpec {
    /// Stencil step in `(log|z|, arg z)`.
    pub delta: f64,
    /// Skip nodes closer to a branch point or puncture than this many mesh
    /// steps, where `z` stops being a coordinate of the surface.
    pub clearance_steps: f64,
    /// Conformality is compared only where `||g| - 1| >= margin`.
    pub margin: f64,
}

impl LocalCheckSpec {
    /// A stencil a fortieth of the radial mesh step.
    pub fn for_mesh(spec: &MeshSpec) -> Self {
        LocalCheckSpec { delta: spec.du() / 40.0, clearance_steps: 4.0, margin: 0.1 }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HarmonicityReport {
    /// Largest `|D_uu x + D_tt x|` relative to `max_c (|D_uu x_c| + |D_tt x_c|)`.
    pub max_ratio: f64,
    pub nodes: usize,
    pub skipped: usize,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ConformalityReport {
    /// Largest `|E - lambda|`, `|G - lambda|`, `|F|` relative to `lambda`.
    pub max_relative: f64,
    pub nodes: usize,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LocalChecks {
    pub harmonicity: HarmonicityReport,
    pub conformality: ConformalityReport,
}

/// Five-point stencil in the conformal coordinates `(u, t) = (log|z|, arg z)`
/// at every interior mesh node, from short integrals starting at the node.
///
/// Harmonicity compares the discrete Laplacian of each coordinate with the
/// size of its two second differences; conformality compares the Lorentzian
/// first fundamental form from central differences with the conformal factor
/// times `|z|^2`.
pub fn local_checks(engine: &ImmersionEngine, mesh: &SurfaceMesh, check: &LocalCheckSpec) -> Result<LocalChecks> {
    let spec = mesh.spec;
    let d = check.delta;
    if !(d > 0.0) {
        return Err(Error::InvalidInput("stencil step must be positive"));
    }
    let domain = engine.data().domain();
    let step = spec.du().max(spec.dtheta());
    let lorentz = |a: Position, b: Position| a[0] * b[0] + a[1] * b[1] - a[2] * b[2];
    // the origin is the centre of the log-polar chart, not an obstacle for it
    let obstacles: Vec<C64> = domain.obstacles().into_iter().filter(|q| q.norm() > 0.0).collect();
    let mut h = HarmonicityReport { max_ratio: 0.0, nodes: 0, skipped: 0 };
    let mut c = ConformalityReport { max_relative: 0.0, nodes: 0 };
    for v in &mesh.vertices {
        if v.i == 0 || v.i + 1 == spec.n_radial {
            continue;
        }
        let z = v.point.z;
        let clear = obstacles.iter().fold(f64::INFINITY, |m, q| m.min((z - q).norm()));
        if clear < check.clearance_steps * step * z.norm() {
            h.skipped += 1;
            continue;
        }
        let (r, a) = z.to_polar();
        let at = Step { z, w: v.point.w, x: v.position };
        let origin = C64::new(0.0, 0.0);
        let radial = |s: f64| Segment::Line { from: z, to: z * s.exp() };
        let arc = |s: f64| Segment::Arc { center: origin, radius: r, start: a, sweep: s };
        let up = advance(engine, &at, radial(d))?.x;
        let dn = advance(engine, &at, radial(-d))?.x;
        let lf = advance(engine, &at, arc(-d))?.x;
        let rt = advance(engine, &at, arc(d))?.x;
        let x0 = v.position;
        let duu: Position = core::array::from_fn(|k| (up[k] - 2.0 * x0[k] + dn[k]) / (d * d));
        let dtt: Position = core::array::from_fn(|k| (rt[k] - 2.0 * x0[k] + lf[k]) / (d * d));
        let scale = (0..3).fold(0.0f64, |m, k| m.max(duu[k].abs() + dtt[k].abs()));
        if scale > 0.0 {
            for k in 0..3 {
                h.max_ratio = h.max_ratio.max((duu[k] + dtt[k]).abs() / scale);
            }
        }
        h.nodes += 1;
        if (v.abs_g - 1.0).abs() < check.margin {
            continue;
        }
        let xu: Position = core::array::from_fn(|k| (up[k] - dn[k]) / (2.0 * d));
        let xt: Position = core::array::from_fn(|k| (rt[k] - lf[k]) / (2.0 * d));
        // |dz|^2 = |z|^2 (du^2 + dt^2)
        let lambda = v.conformal_factor * z.norm_sqr();
        let (e, g, f) = (lorentz(xu, xu), lorentz(xt, xt), lorentz(xu, xt));
        let rel = (e - lambda).abs().max((g - lambda).abs()).max(f.abs()) / lambda;
        c.max_relative = c.max_relative.max(rel);
        c.nodes += 1;
    }
    Ok(LocalChecks { harmonicity: h, conformality: c })
}
