//! Contour integrals of forms, residues, and the period conditions
//! `int g phi3 + conj int phi3/g = 0`, `Re int phi3 = 0`.

use alloc::vec::Vec;
use core::f64::consts::{PI, TAU};

#[allow(unused_imports)]
use num_traits::Float;

use crate::algebra::{form_order_at, special_loci, Chart, CurveFunction, MeromorphicForm, PointLocus};
use crate::quadrature::{integrate_sqrt_endpoints, Estimate};
use crate::surface::{
    canonical_loops, lift_path, lift_path_with_clearance, Domain, LiftedPath, LoopId, PathSpec,
    Segment,
};
use crate::weierstrass::WeierstrassData;
use crate::{Error, Result, C64, I};

pub use crate::quadrature::QuadratureConfig;

const LIFT_TOL: f64 = 1e-10;
/// Scale-aware well-definedness threshold, relative to `1 + L max |F|`.
pub const PERIOD_TOL: f64 = 1e-8;

/// `int F dz` along a lifted path.
pub fn integrate_form(form: &MeromorphicForm, path: &LiftedPath, cfg: &QuadratureConfig) -> Result<Estimate<C64>> {
    path.integrate(|z, w, dz| form.coeff.eval_unchecked(z, w) * dz, cfg)
}

fn domain_of(coeff: &CurveFunction) -> Result<Domain> {
    match coeff.curve_rhs() {
        Some(f) => Domain::root_curve(f.clone(), Vec::new()),
        None => Ok(Domain::punctured_plane(Vec::new())),
    }
}

/// Residue of the form at `p`: a small loop integral divided by `2 pi i`.
///
/// The loop is a circle in `z` of a quarter of the distance to the nearest
/// other special point, run twice around branch points; at infinity it is a
/// large circle taken with the opposite orientation.
pub fn residue_at(form: &MeromorphicForm, p: &PointLocus, cfg: &QuadratureConfig) -> Result<C64> {
    let coeff = &form.coeff;
    let domain = domain_of(coeff)?;
    let curve = coeff.curve_rhs();
    let branched = match curve {
        Some(f) => crate::algebra::is_branch_point(f, p.chart)?,
        None => false,
    };
    let mut finite: Vec<C64> = Vec::new();
    for q in special_loci(coeff)? {
        if let Chart::Finite(z) = q.chart {
            if !finite.iter().any(|x| (x - z).norm() <= 1e-12) {
                finite.push(z);
            }
        }
    }
    let turns = if branched { 2.0 } else { 1.0 };
    let (center, radius, orientation) = match p.chart {
        Chart::Finite(z0) => {
            let d = finite
                .iter()
                .filter(|z| (*z - z0).norm() > 1e-9 * (1.0 + z0.norm()))
                .fold(f64::INFINITY, |m, z| m.min((z - z0).norm()));
            let radius = if d.is_finite() { 0.25 * d } else { 1.0 };
            (z0, radius, 1.0)
        }
        Chart::Infinity => {
            let big = finite.iter().fold(0.0f64, |m, z| m.max(z.norm()));
            (C64::new(0.0, 0.0), 4.0 * big + 1.0, -1.0)
        }
    };
    if !(radius > 1e-12 * (1.0 + center.norm())) {
        return Err(Error::NoIsolationDisk);
    }
    let start = center + radius;
    let start_w = match curve {
        None => None,
        Some(f) => {
            let w = f.eval_unchecked(start).sqrt();
            let guess = match (p.sheet, p.chart) {
                (Some(s), Chart::Finite(_)) if !branched => Some(s),
                (Some(lead), Chart::Infinity) if !branched => {
                    let v = f.order_at_infinity()? / 2;
                    Some(lead * radius.powi(-v))
                }
                _ => None,
            };
            match guess {
                Some(g) if (w + g).norm() < (w - g).norm() => Some(-w),
                Some(_) => Some(w),
                None if branched => Some(w),
                None => return Err(Error::InvalidInput("sheet of the point is required")),
            }
        }
    };
    let seg = Segment::Arc { center, radius, start: 0.0, sweep: turns * TAU };
    let clearance = domain.default_clearance().min(0.5 * radius);
    let path = match lift_path_with_clearance(&domain, &PathSpec::single(seg, start_w), LIFT_TOL, clearance) {
        Err(Error::Clearance { .. }) => return Err(Error::NoIsolationDisk),
        other => other?,
    };
    let v = integrate_form(form, &path, &cfg.tightened(1e-2))?.value;
    Ok(orientation * v / (TAU * I))
}

/// Poles of the form, in the order of its divisor.
pub fn poles_of(form: &MeromorphicForm) -> Result<Vec<(PointLocus, i32)>> {
    Ok(crate::algebra::form_divisor_of(form)?.entries.into_iter().filter(|(_, k)| *k < 0).collect())
}

/// Sum of residues over every pole on the compactified domain.
pub fn residue_sum(form: &MeromorphicForm, cfg: &QuadratureConfig) -> Result<C64> {
    let mut total = C64::new(0.0, 0.0);
    for (p, _) in poles_of(form)? {
        total += residue_at(form, &p, cfg)?;
    }
    Ok(total)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    WellDefined,
    Obstructed,
}

#[derive(Clone, Debug, PartialEq)]
pub struct LoopPeriod {
    pub id: LoopId,
    /// `int g phi3 + conj int phi3/g`
    pub horizontal_value: C64,
    /// `Re int phi3`
    pub vertical_value: f64,
    pub tolerance: f64,
    pub well_defined: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct PeriodReport {
    pub loops: Vec<LoopPeriod>,
    pub verdict: Verdict,
}

impl PeriodReport {
    /// Index of the first loop with a nonvanishing period.
    pub fn first_obstructed(&self) -> Option<usize> {
        self.loops.iter().position(|l| !l.well_defined)
    }

    pub fn max_residual(&self) -> f64 {
        self.loops.iter().fold(0.0f64, |m, l| m.max(l.horizontal_value.norm()).max(l.vertical_value.abs()))
    }
}

/// Homology loops of the data's domain.
pub fn data_loops(data: &WeierstrassData) -> Result<Vec<(LoopId, LiftedPath)>> {
    canonical_loops(data.domain())
}

/// Both period conditions over each loop.
pub fn period_report(data: &WeierstrassData, loops: &[(LoopId, LiftedPath)], cfg: &QuadratureConfig) -> Result<PeriodReport> {
    let d = data.derived();
    let mut out = Vec::with_capacity(loops.len());
    for (id, path) in loops {
        let a = integrate_form(&d.g_phi3, path, cfg)?.value;
        let b = integrate_form(&d.phi3_over_g, path, cfg)?.value;
        let c = integrate_form(data.phi3(), path, cfg)?.value;
        let horizontal_value = a + b.conj();
        let vertical_value = c.re;
        let peak = path.max_magnitude(|z, w| {
            [&d.g_phi3, &d.phi3_over_g, data.phi3()]
                .iter()
                .fold(0.0f64, |m, f| m.max(f.coeff.eval_unchecked(z, w).norm()))
        });
        let tolerance = PERIOD_TOL * (1.0 + path.length() * peak);
        let well_defined = horizontal_value.norm() <= tolerance && vertical_value.abs() <= tolerance;
        out.push(LoopPeriod { id: *id, horizontal_value, vertical_value, tolerance, well_defined });
    }
    let verdict = if out.iter().all(|l| l.well_defined) { Verdict::WellDefined } else { Verdict::Obstructed };
    Ok(PeriodReport { loops: out, verdict })
}

/// Quadrature of `(int g phi3 + conj int phi3/g, (1/2 pi) int phi3)` over the
/// counterclockwise unit circle for the three-parameter Moebius family.
pub fn moebius_family_periods(r: f64, s: C64, t: C64, cfg: &QuadratureConfig) -> Result<(C64, C64)> {
    let data = crate::families::moebius_family(r, s, t)?;
    let d = data.derived();
    let circle = Segment::Arc { center: C64::new(0.0, 0.0), radius: 1.0, start: 0.0, sweep: TAU };
    let path = lift_path(data.domain(), &PathSpec::single(circle, None), LIFT_TOL)?;
    let a = integrate_form(&d.g_phi3, &path, cfg)?.value;
    let b = integrate_form(&d.phi3_over_g, &path, cfg)?.value;
    let c = integrate_form(data.phi3(), &path, cfg)?.value;
    Ok((a + b.conj(), c / TAU))
}

/// Closed forms of [`moebius_family_periods`] for the counterclockwise loop.
///
/// The second value is the negative of
/// `(r^2-1)((|s|^2-1)(|t|^2-1) - s conj t - conj s t) - r((|s|^2-1)(t + conj t) + (|t|^2-1)(s + conj s))`.
pub fn moebius_family_closed_forms(r: f64, s: C64, t: C64) -> (C64, C64) {
    let first = -4.0 * PI * (r * r + s * s + t * t + 4.0 * r * s + 4.0 * s * t + 4.0 * t * r);
    let (ss, tt) = (s.norm_sqr() - 1.0, t.norm_sqr() - 1.0);
    let expr = (r * r - 1.0) * (ss * tt - s * t.conj() - s.conj() * t) - r * (ss * (t + t.conj()) + tt * (s + s.conj()));
    (first, -expr)
}

/// `int phi3` over a counterclockwise loop around `0` for the branch-order-two
/// Moebius data.
pub fn moebius_b2_phi3_period(r: f64) -> f64 {
    -TAU * (r * r - 1.0)
}

/// `int g phi3 + conj int phi3/g` around `0` for the genus-one degree-two data.
pub fn genus1_obstruction(r: f64, s: f64) -> f64 {
    -4.0 * PI * s * r * r
}

/// `oint (form + d correction)` over a loop hugging a real interval `[a, b]`
/// between two branch points, collapsed onto the interval.
///
/// With `form + d correction = (A + B w) dz`, the loop integral equals
/// `-2 int_a^b B(x) w_up(x) dx` for a counterclockwise loop, where `w_up` is
/// the boundary value of `w` on the upper side, continued from the loop. `A`
/// must have no pole inside the loop and the corrected form must be
/// holomorphic at both endpoints.
pub fn regularized_interval_integral(
    form: &MeromorphicForm,
    correction: &CurveFunction,
    loop_path: &LiftedPath,
    interval: (f64, f64),
    cfg: &QuadratureConfig,
) -> Result<C64> {
    let f = form.coeff.curve_rhs().ok_or(Error::InvalidInput("the form must live on a curve"))?.clone();
    let (a, b) = interval;
    if !(b > a) {
        return Err(Error::InvalidInput("empty interval"));
    }
    let total = form.add(&MeromorphicForm::new(correction.derivative().lifted_to(&f)?))?;
    for x in [a, b] {
        let p = PointLocus::finite(C64::new(x, 0.0));
        if !crate::algebra::is_branch_point(&f, p.chart)? {
            return Err(Error::InvalidInput("interval endpoints must be branch points"));
        }
        let k = form_order_at(&total, &p)?;
        if k < 0 {
            return Err(Error::Pole { order: (-k) as u32 });
        }
    }
    for (z, _) in total.coeff.a().denominator().distinct_roots() {
        if z.im.abs() <= 1e-9 && z.re > a - 1e-9 && z.re < b + 1e-9 {
            return Err(Error::InvalidInput("rational part has a pole on the interval"));
        }
    }
    let samples = &loop_path.samples;
    let top = samples.iter().max_by(|x, y| x.z.im.total_cmp(&y.z.im)).ok_or(Error::Unreachable)?;
    let mid = C64::new(0.5 * (a + b), 0.0);
    let down = PathSpec::single(Segment::Line { from: top.z, to: mid }, top.w);
    let domain = Domain::root_curve(f.clone(), Vec::new())?;
    let lifted = lift_path(&domain, &down, LIFT_TOL)?;
    let w_mid = lifted.end_w().ok_or(Error::Unreachable)?;
    let kappa = w_mid / f.eval(mid)?.norm().sqrt();
    let area: f64 = samples.windows(2).map(|p| (p[0].z.conj() * p[1].z).im).sum();
    let orientation = if area > 0.0 { 1.0 } else { -1.0 };
    let bpart = total.coeff.b().clone();
    let weight = |x: f64| {
        let z = C64::new(x, 0.0);
        bpart.eval_unchecked(z) * f.eval_unchecked(z).norm().sqrt()
    };
    let re_part = integrate_sqrt_endpoints(|x| weight(x).re, a, b, cfg)?.value;
    let im_part = integrate_sqrt_endpoints(|x| weight(x).im, a, b, cfg)?.value;
    Ok(-2.0 * orientation * kappa * C64::new(re_part, im_part))
}

#[cfg(test)]
mod tests;
