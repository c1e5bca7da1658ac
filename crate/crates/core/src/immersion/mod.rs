//! Evaluation of `X = Re int (phi1, phi2, phi3)` from a basepoint, meshes and
//! symmetry checks.

mod mesh;

use alloc::vec::Vec;
use core::f64::consts::{PI, TAU};

#[allow(unused_imports)]
use num_traits::Float;

use crate::algebra::Chart;
use crate::periods::{data_loops, period_report, PeriodReport, Verdict};
use crate::quadrature::{CVec, QuadratureConfig};
use crate::surface::{apply_involution, lift_path, Domain, LiftedPath, PathSpec, Segment, SurfacePoint};
use crate::weierstrass::{default_regularity_samples, regularity_scan, WeierstrassData};
use crate::{Error, Result, C64};

pub use mesh::{
    local_checks, sample_mesh, ConformalityReport, HarmonicityReport, LocalCheckSpec, LocalChecks, MeshSpec,
    MeshVertex, SurfaceMesh,
};

const LIFT_TOL: f64 = 1e-10;
/// Angular detour used when the direct route runs into a branch point.
const DETOUR: f64 = 0.15;

pub type Position = [f64; 3];

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EngineConfig {
    pub quadrature: QuadratureConfig,
    /// Build even for obstructed or branched data.
    pub demo: bool,
}

impl Default for EngineConfig {
    fn default() -> Self {
        EngineConfig { quadrature: QuadratureConfig::default(), demo: false }
    }
}

#[derive(Clone, Debug)]
pub struct ImmersionEngine {
    data: WeierstrassData,
    basepoint: SurfacePoint,
    /// Basepoint over the same `z` on the other sheet, with its position.
    switched: Option<(SurfacePoint, Position)>,
    report: PeriodReport,
    branched: bool,
    cfg: EngineConfig,
}

fn same_sheet(a: Option<C64>, b: Option<C64>) -> bool {
    match (a, b) {
        (Some(a), Some(b)) => (a - b).norm() <= (a + b).norm(),
        _ => true,
    }
}

fn add(x: Position, d: CVec<3>) -> Position {
    [x[0] + d.0[0].re, x[1] + d.0[1].re, x[2] + d.0[2].re]
}

/// `int (phi1, phi2, phi3)` along a lifted path.
pub(crate) fn path_integral(data: &WeierstrassData, path: &LiftedPath, cfg: &QuadratureConfig) -> Result<CVec<3>> {
    let v = path.integrate(
        |z, w, dz| {
            let [a, b, c] = data.phi_at(&SurfacePoint { z, w });
            CVec([a * dz, b * dz, c * dz])
        },
        cfg,
    )?;
    Ok(v.value)
}

/// `z = 2` (principal sheet on curves), or a rotated copy when that is too
/// close to a branch point or puncture.
pub fn default_basepoint(domain: &Domain) -> Result<SurfacePoint> {
    let gap = 0.05 * domain.spread();
    for k in [0.0, 1.0, -1.0, 2.0, -2.0] {
        let z = C64::from_polar(2.0, k * PI / 5.0);
        if domain.obstacle_distance(z) >= gap {
            return Ok(domain.principal_point(z));
        }
    }
    Err(Error::InvalidInput("no admissible default basepoint"))
}

fn wrap(a: f64) -> f64 {
    let mut a = a % TAU;
    if a > PI {
        a -= TAU;
    }
    if a <= -PI {
        a += TAU;
    }
    a
}

/// Arc about the origin at the radius of `from`, then radially to `to`, with
/// an optional angular detour and the long way round.
fn route(from: C64, to: C64, detour: f64, long: bool) -> Vec<Segment> {
    let (r0, a0) = from.to_polar();
    let (r1, a1) = to.to_polar();
    let mut sweep = wrap(a1 + detour - a0);
    if long {
        sweep -= TAU * if sweep >= 0.0 { 1.0 } else { -1.0 };
    }
    let mut segs = Vec::new();
    if sweep != 0.0 {
        segs.push(Segment::Arc { center: C64::new(0.0, 0.0), radius: r0, start: a0, sweep });
    }
    let turn = C64::from_polar(1.0, a1 + detour);
    if (r1 - r0).abs() > 1e-14 * r0 {
        segs.push(Segment::Line { from: turn * r0, to: turn * r1 });
    }
    if detour != 0.0 {
        segs.push(Segment::Arc { center: C64::new(0.0, 0.0), radius: r1, start: a1 + detour, sweep: -detour });
    }
    segs
}

/// Closed path from `z0` around the branch point `c` once.
fn sheet_switch_path(z0: C64, c: C64, others: &[C64]) -> Vec<Segment> {
    let rho = (z0 - c).norm();
    let start = (z0 - c).arg();
    let nearest = others.iter().fold(f64::INFINITY, |m, q| m.min((q - c).norm()));
    if nearest > 1.05 * rho {
        return alloc::vec![Segment::Arc { center: c, radius: rho, start, sweep: TAU }];
    }
    let eps = 0.4 * nearest;
    let near = c + C64::from_polar(eps, start);
    alloc::vec![
        Segment::Line { from: z0, to: near },
        Segment::Arc { center: c, radius: eps, start, sweep: TAU },
        Segment::Line { from: near, to: z0 },
    ]
}

impl ImmersionEngine {
    /// Checks the period problem and regularity, then prepares evaluation
    /// from `basepoint` (default from [`default_basepoint`]).
    pub fn build(data: WeierstrassData, basepoint: Option<SurfacePoint>, cfg: EngineConfig) -> Result<Self> {
        let loops = data_loops(&data)?;
        let report = period_report(&data, &loops, &cfg.quadrature)?;
        if let (Verdict::Obstructed, false) = (report.verdict, cfg.demo) {
            return Err(Error::Obstructed { loop_index: report.first_obstructed().unwrap_or(0) });
        }
        let scan = regularity_scan(&data, &default_regularity_samples(&data)?);
        if !scan.is_regular() && !cfg.demo {
            return Err(Error::Branched { zeros: scan.offending.len() });
        }
        let basepoint = match basepoint {
            Some(p) => p,
            None => default_basepoint(data.domain())?,
        };
        data.domain().check_point(&basepoint)?;
        if data.domain().obstacle_distance(basepoint.z) < data.domain().default_clearance() {
            return Err(Error::Unreachable);
        }
        let mut engine =
            ImmersionEngine { data, basepoint, switched: None, report, branched: !scan.is_regular(), cfg };
        if engine.data.domain().is_curve() {
            engine.switched = Some(engine.switch_sheet()?);
        }
        Ok(engine)
    }

    pub fn data(&self) -> &WeierstrassData {
        &self.data
    }

    pub fn basepoint(&self) -> SurfacePoint {
        self.basepoint
    }

    pub fn report(&self) -> &PeriodReport {
        &self.report
    }

    pub fn is_branched(&self) -> bool {
        self.branched
    }

    pub fn config(&self) -> &EngineConfig {
        &self.cfg
    }

    /// Starting points of integration: the basepoint and, on curves, the
    /// basepoint on the other sheet.
    pub(crate) fn starts(&self) -> Vec<(SurfacePoint, Position)> {
        let mut out = alloc::vec![(self.basepoint, [0.0; 3])];
        if let Some(s) = self.switched {
            out.push(s);
        }
        out
    }

    fn switch_sheet(&self) -> Result<(SurfacePoint, Position)> {
        let domain = self.data.domain();
        let branch_points = match domain {
            Domain::RootCurve { branch_points, .. } => branch_points.clone(),
            Domain::PuncturedPlane { .. } => return Err(Error::Unreachable),
        };
        let ends: Vec<C64> = self
            .data
            .ends()
            .iter()
            .filter_map(|e| match e.chart {
                Chart::Finite(z) => Some(z),
                Chart::Infinity => None,
            })
            .collect();
        let z0 = self.basepoint.z;
        let mut candidates: Vec<C64> =
            branch_points.into_iter().filter(|c| !ends.iter().any(|e| (e - c).norm() <= 1e-12)).collect();
        candidates.sort_by(|a, b| (a - z0).norm().total_cmp(&(b - z0).norm()));
        let obstacles = domain.obstacles();
        for c in candidates {
            let others: Vec<C64> = obstacles.iter().copied().filter(|q| (q - c).norm() > 1e-12).collect();
            let spec = PathSpec { segments: sheet_switch_path(z0, c, &others), start_w: self.basepoint.w };
            let Ok(path) = lift_path(domain, &spec, LIFT_TOL) else { continue };
            if same_sheet(path.end_w(), self.basepoint.w) {
                continue;
            }
            let d = path_integral(&self.data, &path, &self.cfg.quadrature)?;
            let p = SurfacePoint { z: z0, w: self.basepoint.w.map(|w| -w) };
            return Ok((p, add([0.0; 3], d)));
        }
        Err(Error::Unreachable)
    }

    /// `X(p)`, integrating along an arc-plus-radial route from the basepoint.
    pub fn evaluate(&self, p: &SurfacePoint) -> Result<Position> {
        let domain = self.data.domain();
        domain.check_point(p)?;
        for (start, x0) in self.starts() {
            if start.z == p.z && same_sheet(start.w, p.w) {
                return Ok(x0);
            }
        }
        for long in [false, true] {
            for detour in [0.0, DETOUR, -DETOUR] {
                for (start, x0) in self.starts() {
                    let segs = route(start.z, p.z, detour, long);
                    if segs.is_empty() {
                        continue;
                    }
                    let spec = PathSpec { segments: segs, start_w: start.w };
                    let Ok(path) = lift_path(domain, &spec, LIFT_TOL) else { continue };
                    if !same_sheet(path.end_w(), p.w) {
                        continue;
                    }
                    return Ok(add(x0, path_integral(&self.data, &path, &self.cfg.quadrature)?));
                }
            }
        }
        Err(Error::Unreachable)
    }

    /// `X` at the end of an explicit path starting at the basepoint on the
    /// sheet the path specifies.
    pub fn evaluate_along(&self, path: &PathSpec) -> Result<(SurfacePoint, Position)> {
        let (start, x0) = self
            .starts()
            .into_iter()
            .find(|(s, _)| (s.z - path.start()).norm() <= 1e-12 * (1.0 + s.z.norm()) && same_sheet(s.w, path.start_w))
            .ok_or(Error::InvalidInput("path must start at the basepoint"))?;
        let spec = PathSpec { segments: path.segments.clone(), start_w: start.w };
        let lifted = lift_path(self.data.domain(), &spec, LIFT_TOL)?;
        let x = add(x0, path_integral(&self.data, &lifted, &self.cfg.quadrature)?);
        Ok((SurfacePoint { z: lifted.end_z(), w: lifted.end_w() }, x))
    }

    /// Largest `|X(I p) - X(p)|` over the points.
    pub fn involution_defect(&self, points: &[SurfacePoint]) -> Result<f64> {
        let spec = self.data.involution().ok_or(Error::InvalidInput("data has no involution"))?;
        let mut worst = 0.0f64;
        for p in points {
            let q = apply_involution(spec, self.data.domain(), p)?;
            worst = worst.max(distance(self.evaluate(p)?, self.evaluate(&q)?));
        }
        Ok(worst)
    }
}

pub fn distance(a: Position, b: Position) -> f64 {
    ((a[0] - b[0]).powi(2) + (a[1] - b[1]).powi(2) + (a[2] - b[2]).powi(2)).sqrt()
}

/// Deck and reflection maps of the square-root curves.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Transform {
    /// `(z, w) -> (z, -w)`
    T0,
    /// `(z, w) -> (conj z, conj w)`
    T1,
    /// `T1 o T0`
    T2,
}

impl Transform {
    pub fn apply(self, domain: &Domain, p: &SurfacePoint) -> Result<SurfacePoint> {
        let q = match (self, p.w) {
            (Transform::T0, Some(w)) => SurfacePoint { z: p.z, w: Some(-w) },
            (Transform::T1, w) => SurfacePoint { z: p.z.conj(), w: w.map(|w| w.conj()) },
            (Transform::T2, Some(w)) => SurfacePoint { z: p.z.conj(), w: Some(-w.conj()) },
            _ => return Err(Error::InvalidInput("transform needs a curve")),
        };
        domain.check_point(&q)?;
        Ok(q)
    }

    /// Axis (0, 1, 2 for `x1, x2, x3`) of the induced half-turn.
    pub fn axis(self) -> usize {
        match self {
            Transform::T0 => 2,
            Transform::T1 => 0,
            Transform::T2 => 1,
        }
    }

    /// The half-turn about [`Transform::axis`], a Lorentzian isometry.
    pub fn rotate(self, x: Position) -> Position {
        let mut out = [-x[0], -x[1], -x[2]];
        out[self.axis()] = x[self.axis()];
        out
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SymmetryCheck {
    pub transform: Transform,
    pub axis: usize,
    pub angle: f64,
    /// Fitted `c` in `X o T = rho X + c`.
    pub translation: Position,
    pub max_deviation: f64,
    pub samples: usize,
}

impl SymmetryCheck {
    pub fn passes(&self, tol: f64) -> bool {
        self.max_deviation <= tol
    }
}

/// Fits `X(T p) = rho(X(p)) + c` over the samples and reports the largest
/// deviation.
pub fn symmetry_check(engine: &ImmersionEngine, transform: Transform, samples: &[SurfacePoint]) -> Result<SymmetryCheck> {
    if samples.is_empty() {
        return Err(Error::InvalidInput("no samples"));
    }
    let mut diffs = Vec::with_capacity(samples.len());
    for p in samples {
        let q = transform.apply(engine.data().domain(), p)?;
        let a = transform.rotate(engine.evaluate(p)?);
        let b = engine.evaluate(&q)?;
        diffs.push([b[0] - a[0], b[1] - a[1], b[2] - a[2]]);
    }
    let n = diffs.len() as f64;
    let mut c = [0.0; 3];
    for d in &diffs {
        for k in 0..3 {
            c[k] += d[k] / n;
        }
    }
    let max_deviation = diffs.iter().fold(0.0f64, |m, d| m.max(distance(*d, c)));
    Ok(SymmetryCheck {
        transform,
        axis: transform.axis(),
        angle: PI,
        translation: c,
        max_deviation,
        samples: samples.len(),
    })
}

/// `n` check points inside the annulus `e^-L <= |z| <= e^L` (both sheets on
/// curves), away from obstacles and special points.
pub fn check_points(data: &WeierstrassData, n: usize, log_radius: f64) -> Vec<SurfacePoint> {
    let (lo, hi) = ((-log_radius).exp(), log_radius.exp());
    let mut out: Vec<SurfacePoint> =
        data.sample_points(4 * n).into_iter().filter(|p| p.z.norm() >= lo && p.z.norm() <= hi).collect();
    out.truncate(n);
    out
}

#[cfg(test)]
mod tests;
