//! The period function `h(r)` of the Klein bottle family on
//! `w^2 = z (rz - 1)/(z + r)` and its two roots.

use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float;

use crate::algebra::{ComplexRational, CurveFunction, MeromorphicForm};
use crate::periods::integrate_form;
use crate::poly::Poly;
use crate::quadrature::{integrate_sqrt_endpoints, QuadratureConfig};
use crate::surface::{canonical_loops, LiftedPath, LoopId};
use crate::{re, Error, Result, I};

/// `|w_r(z)| = sqrt|z (rz - 1)/(z + r)|`
pub fn abs_w(r: f64, z: f64) -> f64 {
    (z * (r * z - 1.0) / (z + r)).abs().sqrt()
}

fn check_r(r: f64) -> Result<()> {
    if r == 0.0 || !r.is_finite() {
        return Err(Error::InvalidInput("r must be a nonzero real"));
    }
    Ok(())
}

/// Signed integral over `[0, 1/r]` with the endpoint singularities removed.
fn over_interval<F: FnMut(f64) -> f64>(r: f64, f: F, cfg: &QuadratureConfig) -> Result<f64> {
    Ok(integrate_sqrt_endpoints(f, 0.0, 1.0 / r, cfg)?.value)
}

/// `h(r) = int_0^(1/r) -2 |w| (-1 + z + r(2 - 3z + r(-4 + 4r + 3z)))/(r + z) dz`
pub fn h(r: f64, cfg: &QuadratureConfig) -> Result<f64> {
    check_r(r)?;
    over_interval(r, |z| -2.0 * abs_w(r, z) * (-1.0 + z + r * (2.0 - 3.0 * z + r * (-4.0 + 4.0 * r + 3.0 * z))) / (r + z), cfg)
}

/// `h'(r)` from the integrand `-2 |w| (-r + 4r^2 - z + 3rz)/(r (r + z))`.
pub fn h_prime(r: f64, cfg: &QuadratureConfig) -> Result<f64> {
    check_r(r)?;
    over_interval(r, |z| -2.0 * abs_w(r, z) * (-r + 4.0 * r * r - z + 3.0 * r * z) / (r * (r + z)), cfg)
}

/// `A1(r) = int_0^(1/r) |w| dz`, for `r > 0`.
pub fn a1(r: f64, cfg: &QuadratureConfig) -> Result<f64> {
    if !(r > 0.0) || !r.is_finite() {
        return Err(Error::InvalidInput("A1 needs r > 0"));
    }
    over_interval(r, |z| abs_w(r, z), cfg)
}

/// `A2(r) = int_0^(1/r) |w| / (z + r) dz`, for `r > 0`.
pub fn a2(r: f64, cfg: &QuadratureConfig) -> Result<f64> {
    if !(r > 0.0) || !r.is_finite() {
        return Err(Error::InvalidInput("A2 needs r > 0"));
    }
    over_interval(r, |z| abs_w(r, z) / (z + r), cfg)
}

/// `q(r) = 2 (r^3 - 3r^2 + 4r - 1) / (r (r - 1)(r^2 + 1))`
pub fn q(r: f64) -> f64 {
    2.0 * (((r - 3.0) * r + 4.0) * r - 1.0) / (r * (r - 1.0) * (r * r + 1.0))
}

/// The real root of `r^3 - 3r^2 + 4r - 1` by Cardano's formula.
pub fn q_root() -> f64 {
    let d = 93.0f64.sqrt() - 9.0;
    1.0 - (2.0 / (3.0 * d)).cbrt() + (d / 18.0).cbrt()
}

/// The curve `M_r` with its data, used for the contour forms below.
fn curve_rhs(r: f64) -> ComplexRational {
    ComplexRational::from_roots(re(r), &[re(0.0), re(1.0 / r)], &[re(-r)])
}

fn w_times(b: ComplexRational, r: f64) -> CurveFunction {
    CurveFunction::on_curve(ComplexRational::zero(), b, curve_rhs(r))
}

/// `w (z + 1)^2 / z^2 dz`; its loop integral around `[0, 1/r]` is `-2i h(r)`.
pub fn period_form(r: f64) -> MeromorphicForm {
    let b = ComplexRational::from_roots(re(1.0), &[re(-1.0), re(-1.0)], &[re(0.0), re(0.0)]);
    MeromorphicForm::new(w_times(b, r))
}

/// `d/dr` of [`period_form`]: `w (z+1)^2 (z^2+1) / (2 z^2 (z+r)(rz-1)) dz`.
pub fn period_form_dr(r: f64) -> MeromorphicForm {
    let b = ComplexRational::from_roots(
        re(0.5 / r),
        &[re(-1.0), re(-1.0), I, -I],
        &[re(0.0), re(0.0), re(-r), re(1.0 / r)],
    );
    MeromorphicForm::new(w_times(b, r))
}

/// `F = 2 w (z - 2r^3 z^2 + r^2 z (1 + 2z) - r(-1 + 2z + z^2)) / (r z)`; adding
/// `dF` to [`period_form`] makes it integrable at the ends of `[0, 1/r]`.
pub fn correction_f(r: f64) -> CurveFunction {
    let p = Poly::from_real(&[r, 1.0 - 2.0 * r + r * r, -2.0 * r * r * r + 2.0 * r * r - r]);
    let b = ComplexRational::new(p.scale(re(2.0 / r)), Poly::monomial(re(1.0), 1)).expect("nonzero denominator");
    w_times(b, r)
}

/// `H = -w (r + 2z - 2rz - rz^2 + 4r^2 z^2) / (r^2 z)`, the by-parts
/// correction of [`period_form_dr`].
pub fn correction_h(r: f64) -> CurveFunction {
    let p = Poly::from_real(&[r, 2.0 - 2.0 * r, 4.0 * r * r - r]);
    let b = ComplexRational::new(p.scale(re(-1.0 / (r * r))), Poly::monomial(re(1.0), 1)).expect("nonzero denominator");
    w_times(b, r)
}

/// The loop around the interval `[0, 1/r]`.
pub fn interval_loop(r: f64) -> Result<LiftedPath> {
    check_r(r)?;
    let domain = crate::families::klein_domain(r)?;
    canonical_loops(&domain)?
        .into_iter()
        .find(|(id, _)| *id == LoopId::Gamma2)
        .map(|(_, l)| l)
        .ok_or(Error::Unreachable)
}

/// `h'(r)` as `(i/2) oint d/dr (w (z+1)^2/z^2) dz`, for `r > 0`.
pub fn h_prime_contour(r: f64, cfg: &QuadratureConfig) -> Result<f64> {
    if !(r > 0.0) {
        return Err(Error::InvalidInput("contour form needs r > 0"));
    }
    let v = integrate_form(&period_form_dr(r), &interval_loop(r)?, cfg)?.value;
    Ok((I * 0.5 * v).re)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PeriodFunctionSample {
    pub r: f64,
    pub h: f64,
    pub h_prime: f64,
    /// Quadrature tolerance used for both values.
    pub tol: f64,
}

pub fn sample(r: f64, cfg: &QuadratureConfig) -> Result<PeriodFunctionSample> {
    Ok(PeriodFunctionSample { r, h: h(r, cfg)?, h_prime: h_prime(r, cfg)?, tol: cfg.abs_tol })
}

#[derive(Clone, Debug, PartialEq)]
pub struct RootResult {
    pub roots: Vec<f64>,
    pub brackets: Vec<(f64, f64)>,
    /// Brent iterations summed over the roots.
    pub iterations: usize,
    pub tol: f64,
    /// `h` at each root.
    pub residuals: Vec<f64>,
    /// The scan over the interior interval as `(r, h)`.
    pub scan: Vec<(f64, f64)>,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SolveConfig {
    /// Required `|h(root)|`.
    pub tol: f64,
    pub grid: usize,
    pub interior: (f64, f64),
    pub exterior: [(f64, f64); 2],
    pub quadrature: QuadratureConfig,
}

impl Default for SolveConfig {
    fn default() -> Self {
        Self::with_tol(1e-10)
    }
}

impl SolveConfig {
    pub fn with_tol(tol: f64) -> Self {
        let quadrature = QuadratureConfig { abs_tol: (1e-2 * tol).min(1e-12), rel_tol: 1e-12, max_depth: 50 };
        SolveConfig { tol, grid: 200, interior: (0.01, 0.99), exterior: [(-50.0, -0.02), (1.01, 50.0)], quadrature }
    }
}

fn grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    (0..n).map(|k| lo + (hi - lo) * k as f64 / (n - 1) as f64).collect()
}

/// Brent's method on a bracket with `fa * fb < 0`. Returns the root and the
/// iteration count.
pub fn brent<F: FnMut(f64) -> Result<f64>>(mut f: F, mut a: f64, mut b: f64, tol: f64) -> Result<(f64, usize)> {
    let mut fa = f(a)?;
    let mut fb = f(b)?;
    if fa * fb > 0.0 {
        return Err(Error::InvalidInput("root is not bracketed"));
    }
    if fa.abs() < fb.abs() {
        core::mem::swap(&mut a, &mut b);
        core::mem::swap(&mut fa, &mut fb);
    }
    let (mut c, mut fc) = (a, fa);
    let mut d = b - a;
    let mut bisected = true;
    for it in 1..=200 {
        if fb.abs() <= tol || (b - a).abs() <= 4.0 * f64::EPSILON * b.abs() {
            return Ok((b, it));
        }
        let s = if fa != fc && fb != fc {
            a * fb * fc / ((fa - fb) * (fa - fc)) + b * fa * fc / ((fb - fa) * (fb - fc)) + c * fa * fb / ((fc - fa) * (fc - fb))
        } else {
            b - fb * (b - a) / (fb - fa)
        };
        let mid = 0.25 * (3.0 * a + b);
        let outside = !((s > mid.min(b)) && (s < mid.max(b)));
        let small = 2.0 * f64::EPSILON * b.abs();
        let slow = if bisected { (s - b).abs() >= 0.5 * (b - c).abs() || (b - c).abs() < small } else { (s - b).abs() >= 0.5 * (c - d).abs() || (c - d).abs() < small };
        let s = if outside || slow {
            bisected = true;
            0.5 * (a + b)
        } else {
            bisected = false;
            s
        };
        let fs = f(s)?;
        d = c;
        c = b;
        fc = fb;
        if fa * fs < 0.0 {
            b = s;
            fb = fs;
        } else {
            a = s;
            fa = fs;
        }
        if fa.abs() < fb.abs() {
            core::mem::swap(&mut a, &mut b);
            core::mem::swap(&mut fa, &mut fb);
        }
    }
    Err(Error::IllConditioned)
}

/// Sign changes of `h` over a uniform grid.
fn brackets(lo: f64, hi: f64, n: usize, cfg: &QuadratureConfig) -> Result<(Vec<(f64, f64)>, Vec<(f64, f64)>)> {
    let mut scan = Vec::with_capacity(n);
    for r in grid(lo, hi, n) {
        scan.push((r, h(r, cfg)?));
    }
    let out = scan.windows(2).filter(|p| p[0].1 * p[1].1 <= 0.0 && p[0].1 != p[1].1).map(|p| (p[0].0, p[1].0)).collect();
    Ok((out, scan))
}

/// Brackets and refines the roots of `h` in the interior interval, and checks
/// that `h` keeps its sign on the exterior ones. Exactly two roots are
/// expected.
pub fn solve(cfg: &SolveConfig) -> Result<RootResult> {
    let (br, scan) = brackets(cfg.interior.0, cfg.interior.1, cfg.grid, &cfg.quadrature)?;
    let mut roots = Vec::new();
    let mut residuals = Vec::new();
    let mut iterations = 0;
    for &(a, b) in &br {
        let (x, it) = brent(|r| h(r, &cfg.quadrature), a, b, cfg.tol)?;
        let v = h(x, &cfg.quadrature)?;
        if v.abs() > cfg.tol {
            return Err(Error::IllConditioned);
        }
        iterations += it;
        roots.push(x);
        residuals.push(v);
    }
    let mut outside = 0;
    for (lo, hi) in cfg.exterior {
        outside += brackets(lo, hi, cfg.grid, &cfg.quadrature)?.0.len();
    }
    if roots.len() != 2 || outside != 0 {
        return Err(Error::RootCount { found: roots.len() + outside });
    }
    Ok(RootResult { roots, brackets: br, iterations, tol: cfg.tol, residuals, scan })
}

#[cfg(test)]
mod tests;
