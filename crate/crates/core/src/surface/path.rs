use alloc::boxed::Box;
use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float;

use super::{Domain, ZMap};
use crate::quadrature::{integrate, Estimate, QuadValue, QuadratureConfig};
use crate::{Error, Result, C64};

const INITIAL_SAMPLES: usize = 32;
/// Consecutive samples must satisfy `|dw| <= JUMP_RATIO |w_k + w_k+1|`.
const JUMP_RATIO: f64 = 0.3;
/// Step bound relative to the distance to the nearest obstacle.
const STEP_RATIO: f64 = 0.5;

/// A piece of a path in the `z`-plane, parametrized by `t` in `[0, 1]`.
#[derive(Clone, Debug, PartialEq)]
pub enum Segment {
    Line { from: C64, to: C64 },
    /// `center + radius e^{i (start + sweep t)}`
    Arc { center: C64, radius: f64, start: f64, sweep: f64 },
    /// `center + a cos(theta) + i b sin(theta)`, `theta = start + sweep t`
    Ellipse { center: C64, a: f64, b: f64, start: f64, sweep: f64 },
    /// Image of a segment under a map of the plane.
    Mapped { inner: Box<Segment>, map: ZMap },
    /// The segment run backwards.
    Reversed(Box<Segment>),
}

impl Segment {
    pub fn point(&self, t: f64) -> C64 {
        match self {
            Segment::Line { from, to } => from + (to - from) * t,
            Segment::Arc { center, radius, start, sweep } => center + C64::from_polar(*radius, start + sweep * t),
            Segment::Ellipse { center, a, b, start, sweep } => {
                let th = start + sweep * t;
                center + C64::new(a * th.cos(), b * th.sin())
            }
            Segment::Mapped { inner, map } => map.apply(inner.point(t)),
            Segment::Reversed(inner) => inner.point(1.0 - t),
        }
    }

    /// `dz/dt`
    pub fn velocity(&self, t: f64) -> C64 {
        match self {
            Segment::Line { from, to } => to - from,
            Segment::Arc { radius, start, sweep, .. } => {
                C64::new(0.0, *sweep) * C64::from_polar(*radius, start + sweep * t)
            }
            Segment::Ellipse { a, b, start, sweep, .. } => {
                let th = start + sweep * t;
                C64::new(-a * th.sin(), b * th.cos()) * *sweep
            }
            Segment::Mapped { inner, map } => map.push_velocity(inner.point(t), inner.velocity(t)),
            Segment::Reversed(inner) => -inner.velocity(1.0 - t),
        }
    }

    pub fn mapped(&self, map: ZMap) -> Segment {
        if map == ZMap::Identity {
            return self.clone();
        }
        Segment::Mapped { inner: Box::new(self.clone()), map }
    }

    pub fn reversed(&self) -> Segment {
        match self {
            Segment::Reversed(inner) => (**inner).clone(),
            s => Segment::Reversed(Box::new(s.clone())),
        }
    }
}

/// A chain of segments with an explicit starting sheet.
#[derive(Clone, Debug, PartialEq)]
pub struct PathSpec {
    pub segments: Vec<Segment>,
    /// Value of `w` at the start (ignored on punctured planes).
    pub start_w: Option<C64>,
}

impl PathSpec {
    pub fn new(start_w: Option<C64>) -> Self {
        PathSpec { segments: Vec::new(), start_w }
    }

    pub fn single(seg: Segment, start_w: Option<C64>) -> Self {
        PathSpec { segments: alloc::vec![seg], start_w }
    }

    pub fn then(mut self, seg: Segment) -> Self {
        self.segments.push(seg);
        self
    }

    pub fn start(&self) -> C64 {
        self.segments.first().map(|s| s.point(0.0)).unwrap_or(C64::new(0.0, 0.0))
    }

    pub fn end(&self) -> C64 {
        self.segments.last().map(|s| s.point(1.0)).unwrap_or(C64::new(0.0, 0.0))
    }

    pub fn is_closed(&self) -> bool {
        (self.start() - self.end()).norm() <= 1e-12 * (1.0 + self.start().norm())
    }

    /// Image of the path under a plane map, starting on the sheet `start_w`.
    pub fn mapped(&self, map: ZMap, start_w: Option<C64>) -> PathSpec {
        PathSpec { segments: self.segments.iter().map(|s| s.mapped(map)).collect(), start_w }
    }
}

/// A lifted sample: global parameter `s` (segment index plus local `t`).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LiftSample {
    pub s: f64,
    pub z: C64,
    pub w: Option<C64>,
}

#[derive(Clone, Debug)]
pub struct LiftedPath {
    pub spec: PathSpec,
    pub samples: Vec<LiftSample>,
    f: Option<crate::algebra::ComplexRational>,
}

fn nearest_root(f: &crate::algebra::ComplexRational, z: C64, near: C64) -> C64 {
    let w = f.eval_unchecked(z).sqrt();
    if (w - near).norm() <= (w + near).norm() {
        w
    } else {
        -w
    }
}

/// Lifts `path` with the default clearance of the domain.
pub fn lift_path(domain: &Domain, path: &PathSpec, tol: f64) -> Result<LiftedPath> {
    lift_path_with_clearance(domain, path, tol, domain.default_clearance())
}

/// Lifts `path` to the domain by continuation of `w` from `path.start_w`.
///
/// Steps are at most half the distance to the nearest obstacle and small
/// enough that the branch choice is unambiguous.
pub fn lift_path_with_clearance(domain: &Domain, path: &PathSpec, tol: f64, clearance: f64) -> Result<LiftedPath> {
    if path.segments.is_empty() {
        return Err(Error::InvalidInput("empty path"));
    }
    if !(tol > 0.0) {
        return Err(Error::InvalidInput("lift tolerance must be positive"));
    }
    let obstacles = domain.obstacles();
    let dist = |z: C64| obstacles.iter().fold(f64::INFINITY, |m, q| m.min((z - q).norm()));
    let f = domain.curve_rhs().cloned();
    let z0 = path.start();
    let mut w = match &f {
        Some(f) => {
            let w = path.start_w.ok_or(Error::InvalidInput("start sheet required on a curve"))?;
            let fz = f.eval_unchecked(z0);
            if (w * w - fz).norm() > tol.max(super::CURVE_RESIDUAL_TOL) * (1.0 + fz.norm()) {
                return Err(Error::NotOnDomain);
            }
            Some(w)
        }
        None => None,
    };
    let d0 = dist(z0);
    if d0 < clearance {
        return Err(Error::Clearance { segment: 0, param: 0.0, distance: d0 });
    }
    let mut samples = alloc::vec![LiftSample { s: 0.0, z: z0, w }];
    let mut prev_end = z0;
    for (k, seg) in path.segments.iter().enumerate() {
        if (seg.point(0.0) - prev_end).norm() > 1e-9 * (1.0 + prev_end.norm()) {
            return Err(Error::InvalidInput("path segments are not contiguous"));
        }
        let mut t_prev = 0.0;
        let mut z_prev = seg.point(0.0);
        let mut d_prev = dist(z_prev);
        for j in 1..=INITIAL_SAMPLES {
            let target = j as f64 / INITIAL_SAMPLES as f64;
            while t_prev < target {
                let mut t = target;
                loop {
                    if t - t_prev < 1e-13 {
                        return Err(Error::Clearance { segment: k, param: t, distance: dist(seg.point(t)) });
                    }
                    let z = seg.point(t);
                    if (z - z_prev).norm() > STEP_RATIO * d_prev {
                        t = 0.5 * (t_prev + t);
                        continue;
                    }
                    let w_next = match (&f, w) {
                        (Some(f), Some(wp)) => {
                            let wn = nearest_root(f, z, wp);
                            if (wn - wp).norm() > JUMP_RATIO * (wn + wp).norm() {
                                t = 0.5 * (t_prev + t);
                                continue;
                            }
                            Some(wn)
                        }
                        _ => None,
                    };
                    let d = dist(z);
                    if d < clearance {
                        return Err(Error::Clearance { segment: k, param: t, distance: d });
                    }
                    t_prev = t;
                    z_prev = z;
                    d_prev = d;
                    w = w_next;
                    samples.push(LiftSample { s: k as f64 + t, z, w });
                    break;
                }
            }
        }
        prev_end = seg.point(1.0);
    }
    Ok(LiftedPath { spec: path.clone(), samples, f })
}

impl LiftedPath {
    pub fn start_w(&self) -> Option<C64> {
        self.samples[0].w
    }

    pub fn end_w(&self) -> Option<C64> {
        self.samples.last().and_then(|s| s.w)
    }

    pub fn end_z(&self) -> C64 {
        self.samples.last().map(|s| s.z).unwrap_or(C64::new(0.0, 0.0))
    }

    /// Number of segments, i.e. the range of the global parameter.
    pub fn span(&self) -> f64 {
        self.spec.segments.len() as f64
    }

    /// Whether the lift returns to its starting point on the same sheet.
    pub fn closes_up(&self) -> bool {
        if !self.spec.is_closed() {
            return false;
        }
        match (self.start_w(), self.end_w()) {
            (Some(a), Some(b)) => (a - b).norm() <= (a + b).norm(),
            _ => true,
        }
    }

    /// Length of the polyline through the samples.
    pub fn length(&self) -> f64 {
        self.samples.windows(2).map(|p| (p[1].z - p[0].z).norm()).sum()
    }

    /// `(z, dz/ds, w)` at global parameter `s`.
    pub fn point_at(&self, s: f64) -> (C64, C64, Option<C64>) {
        let n = self.spec.segments.len();
        let k = (s.floor() as usize).min(n - 1);
        let t = s - k as f64;
        let seg = &self.spec.segments[k];
        let z = seg.point(t);
        let dz = seg.velocity(t);
        let w = self.f.as_ref().map(|f| {
            let i = self.samples.partition_point(|x| x.s <= s).clamp(1, self.samples.len() - 1);
            let (a, b) = (&self.samples[i - 1], &self.samples[i]);
            let (wa, wb) = (a.w.unwrap_or_default(), b.w.unwrap_or_default());
            let frac = if b.s > a.s { ((s - a.s) / (b.s - a.s)).clamp(0.0, 1.0) } else { 0.0 };
            nearest_root(f, z, wa + (wb - wa) * frac)
        });
        (z, dz, w)
    }

    /// `int integrand(z, w, dz/ds) ds` over the whole path, with panels
    /// starting at the lift samples.
    pub fn integrate<V, F>(&self, mut integrand: F, cfg: &QuadratureConfig) -> Result<Estimate<V>>
    where
        V: QuadValue,
        F: FnMut(C64, Option<C64>, C64) -> V,
    {
        let breaks: Vec<f64> = self.samples.iter().map(|x| x.s).collect();
        integrate(
            |s| {
                let (z, dz, w) = self.point_at(s);
                integrand(z, w, dz)
            },
            &breaks,
            cfg,
        )
    }

    /// Largest value of `|integrand|` over the samples.
    pub fn max_magnitude<F: FnMut(C64, Option<C64>) -> f64>(&self, mut mag: F) -> f64 {
        self.samples.iter().fold(0.0f64, |m, x| m.max(mag(x.z, x.w)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::surface::tests::klein_curve;
    use crate::{c, re};
    use core::f64::consts::{PI, TAU};

    fn circle(center: C64, radius: f64) -> Segment {
        Segment::Arc { center, radius, start: 0.0, sweep: TAU }
    }

    #[test]
    fn loop_around_one_branch_point_flips_sheet() {
        let d = klein_curve(0.5);
        let z0 = re(0.3);
        let w0 = d.principal_point(z0).w.unwrap();
        let p = PathSpec::single(circle(re(0.0), 0.3), Some(w0));
        let l = lift_path(&d, &p, 1e-10).unwrap();
        assert!((l.end_w().unwrap() + w0).norm() < 1e-12);
        assert!(!l.closes_up());
    }

    #[test]
    fn loop_around_two_branch_points_closes() {
        let d = klein_curve(0.5);
        let seg = Segment::Ellipse { center: re(-0.25), a: 0.35, b: 0.2, start: 0.0, sweep: TAU };
        let z0 = seg.point(0.0);
        let w0 = d.principal_point(z0).w.unwrap();
        let l = lift_path(&d, &PathSpec::single(seg, Some(w0)), 1e-10).unwrap();
        assert!((l.end_w().unwrap() - w0).norm() < 1e-12);
        assert!(l.closes_up());
    }

    #[test]
    fn segment_in_free_disk_is_continuous() {
        let d = klein_curve(0.5);
        let seg = Segment::Line { from: c(3.0, 1.0), to: c(4.0, -1.0) };
        let w0 = d.principal_point(c(3.0, 1.0)).w.unwrap();
        let l = lift_path(&d, &PathSpec::single(seg, Some(w0)), 1e-10).unwrap();
        let f = d.curve_rhs().unwrap();
        for s in &l.samples {
            let w = s.w.unwrap();
            let fz = f.eval(s.z).unwrap();
            assert!((w * w - fz).norm() <= 1e-10 * (1.0 + fz.norm()));
        }
        for p in l.samples.windows(2) {
            let (a, b) = (p[0].w.unwrap(), p[1].w.unwrap());
            assert!((b - a).norm() < (b + a).norm());
        }
    }

    #[test]
    fn clearance_violation_reports_parameter() {
        let d = klein_curve(0.5);
        let seg = Segment::Line { from: c(-1.0, 0.0), to: c(1.0, 0.0) };
        let w0 = d.principal_point(c(-1.0, 0.0)).w.unwrap();
        match lift_path(&d, &PathSpec::single(seg, Some(w0)), 1e-10) {
            Err(Error::Clearance { segment: 0, param, .. }) => assert!(param > 0.0 && param < 1.0),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn mapped_and_reversed_segments() {
        let seg = Segment::Arc { center: re(0.0), radius: 2.0, start: 0.0, sweep: PI };
        let m = seg.mapped(ZMap::NegInvConj);
        assert!((m.point(0.0) - re(-0.5)).norm() < 1e-15);
        let r = seg.reversed();
        assert!((r.point(0.0) - re(-2.0)).norm() < 1e-14);
        let h = 1e-6;
        let fd = (r.point(0.3 + h) - r.point(0.3 - h)) / (2.0 * h);
        assert!((r.velocity(0.3) - fd).norm() < 1e-7);
    }

    #[test]
    fn integrate_dz_over_z() {
        let d = Domain::punctured_plane(alloc::vec![re(0.0)]);
        let l = lift_path(&d, &PathSpec::single(circle(re(0.0), 1.0), None), 1e-10).unwrap();
        let e = l.integrate(|z, _, dz| dz / z, &QuadratureConfig::default()).unwrap();
        assert!((e.value - c(0.0, TAU)).norm() < 1e-12);
    }
}
