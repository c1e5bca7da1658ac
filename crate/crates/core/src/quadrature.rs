//! Globally adaptive 15-point Gauss-Kronrod quadrature over a real parameter.
//!
//! Integrands may be scalar, complex or small arrays of complex values; the
//! error estimate is taken in the max-norm over components.

use alloc::collections::BinaryHeap;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::ops::{Add, Sub};

#[allow(unused_imports)]
use num_traits::Float;

use crate::{Error, Result, C64};

const XGK: [f64; 8] = [
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
];
const WGK: [f64; 8] = [
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
];
const WG: [f64; 4] = [
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
];

const MAX_PANELS: usize = 200_000;

/// Values that can be integrated.
pub trait QuadValue: Copy + Add<Output = Self> + Sub<Output = Self> {
    fn zero() -> Self;
    fn scale(self, s: f64) -> Self;
    fn size(&self) -> f64;
}

impl QuadValue for f64 {
    fn zero() -> Self {
        0.0
    }
    fn scale(self, s: f64) -> Self {
        self * s
    }
    fn size(&self) -> f64 {
        self.abs()
    }
}

impl QuadValue for C64 {
    fn zero() -> Self {
        C64::new(0.0, 0.0)
    }
    fn scale(self, s: f64) -> Self {
        self * s
    }
    fn size(&self) -> f64 {
        self.norm()
    }
}

/// Fixed-size bundle of complex integrands.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CVec<const N: usize>(pub [C64; N]);

impl<const N: usize> Add for CVec<N> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        let mut out = self.0;
        for (o, r) in out.iter_mut().zip(rhs.0.iter()) {
            *o += r;
        }
        CVec(out)
    }
}

impl<const N: usize> Sub for CVec<N> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        let mut out = self.0;
        for (o, r) in out.iter_mut().zip(rhs.0.iter()) {
            *o -= r;
        }
        CVec(out)
    }
}

impl<const N: usize> QuadValue for CVec<N> {
    fn zero() -> Self {
        CVec([C64::new(0.0, 0.0); N])
    }
    fn scale(self, s: f64) -> Self {
        let mut out = self.0;
        for o in out.iter_mut() {
            *o *= s;
        }
        CVec(out)
    }
    fn size(&self) -> f64 {
        self.0.iter().fold(0.0, |m, x| m.max(x.norm()))
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QuadratureConfig {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_depth: u32,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        QuadratureConfig { abs_tol: 1e-12, rel_tol: 1e-10, max_depth: 40 }
    }
}

impl QuadratureConfig {
    pub fn new(abs_tol: f64, rel_tol: f64, max_depth: u32) -> Result<Self> {
        if !(abs_tol > 0.0) || !(rel_tol > 0.0) {
            return Err(Error::InvalidInput("quadrature tolerances must be positive"));
        }
        if max_depth < 10 {
            return Err(Error::InvalidInput("quadrature max_depth must be at least 10"));
        }
        Ok(QuadratureConfig { abs_tol, rel_tol, max_depth })
    }

    pub fn tightened(&self, factor: f64) -> Self {
        QuadratureConfig { abs_tol: self.abs_tol * factor, rel_tol: self.rel_tol * factor, ..*self }
    }
}

#[derive(Clone, Copy, Debug)]
pub struct Estimate<V> {
    pub value: V,
    pub error: f64,
    pub evaluations: usize,
}

struct Panel<V> {
    lo: f64,
    hi: f64,
    depth: u32,
    value: V,
    error: f64,
    magnitude: f64,
}

impl<V> PartialEq for Panel<V> {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}
impl<V> Eq for Panel<V> {}
impl<V> PartialOrd for Panel<V> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl<V> Ord for Panel<V> {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error
            .total_cmp(&other.error)
            .then_with(|| other.lo.total_cmp(&self.lo))
    }
}

fn kronrod<V: QuadValue, F: FnMut(f64) -> V>(f: &mut F, lo: f64, hi: f64) -> Result<Panel<V>> {
    let center = 0.5 * (lo + hi);
    let half = 0.5 * (hi - lo);
    let fc = f(center);
    let check = |v: &V, t: f64| -> Result<()> {
        if v.size().is_finite() {
            Ok(())
        } else {
            Err(Error::NonFinite { param: t })
        }
    };
    check(&fc, center)?;
    let mut resk = fc.scale(WGK[7]);
    let mut resg = fc.scale(WG[3]);
    let mut resabs = fc.size() * WGK[7];
    let mut f1 = [V::zero(); 7];
    let mut f2 = [V::zero(); 7];
    for j in 0..7 {
        let dx = half * XGK[j];
        let (t1, t2) = (center - dx, center + dx);
        let (a, b) = (f(t1), f(t2));
        check(&a, t1)?;
        check(&b, t2)?;
        f1[j] = a;
        f2[j] = b;
        resk = resk + (a + b).scale(WGK[j]);
        resabs += WGK[j] * (a.size() + b.size());
        if j % 2 == 1 {
            resg = resg + (a + b).scale(WG[j / 2]);
        }
    }
    let mean = resk.scale(0.5);
    let mut resasc = WGK[7] * (fc - mean).size();
    for j in 0..7 {
        resasc += WGK[j] * ((f1[j] - mean).size() + (f2[j] - mean).size());
    }
    let ah = half.abs();
    let mut err = (resk - resg).size() * ah;
    resasc *= ah;
    resabs *= ah;
    if resasc != 0.0 && err != 0.0 {
        err = resasc * 1.0f64.min((200.0 * err / resasc).powf(1.5));
    }
    err = err.max(50.0 * f64::EPSILON * resabs);
    Ok(Panel { lo, hi, depth: 0, value: resk.scale(half), error: err, magnitude: resabs })
}

/// Integrates `f` over `[breaks[0], breaks[last]]`, starting from the given
/// panels. The break points may be decreasing (orientation is kept).
pub fn integrate<V, F>(mut f: F, breaks: &[f64], cfg: &QuadratureConfig) -> Result<Estimate<V>>
where
    V: QuadValue,
    F: FnMut(f64) -> V,
{
    if breaks.len() < 2 {
        return Ok(Estimate { value: V::zero(), error: 0.0, evaluations: 0 });
    }
    let mut heap = BinaryHeap::new();
    let mut evaluations = 0usize;
    for w in breaks.windows(2) {
        if w[0] == w[1] {
            continue;
        }
        heap.push(kronrod(&mut f, w[0], w[1])?);
        evaluations += 15;
    }
    loop {
        let mut total = V::zero();
        let mut err = 0.0;
        let mut floor = 0.0;
        // fixed summation order: sort by position for bitwise reproducibility
        let mut panels: Vec<&Panel<V>> = heap.iter().collect();
        panels.sort_by(|a, b| a.lo.total_cmp(&b.lo));
        for p in &panels {
            total = total + p.value;
            err += p.error;
            floor += 50.0 * f64::EPSILON * p.magnitude;
        }
        let tol = cfg.abs_tol.max(cfg.rel_tol * total.size()).max(floor);
        if err <= tol {
            return Ok(Estimate { value: total, error: err, evaluations });
        }
        let worst = heap.pop().expect("at least one panel");
        if worst.depth >= cfg.max_depth || heap.len() >= MAX_PANELS {
            return Err(Error::Quadrature { lo: worst.lo, hi: worst.hi, error: worst.error });
        }
        let mid = 0.5 * (worst.lo + worst.hi);
        let mut left = kronrod(&mut f, worst.lo, mid)?;
        let mut right = kronrod(&mut f, mid, worst.hi)?;
        evaluations += 30;
        left.depth = worst.depth + 1;
        right.depth = worst.depth + 1;
        heap.push(left);
        heap.push(right);
    }
}

/// Real integral over `[a, b]` with square-root endpoint singularities removed
/// by `z = a + (m - a) u^2` and `z = b - (b - m) v^2` about the midpoint `m`.
pub fn integrate_sqrt_endpoints<F>(mut f: F, a: f64, b: f64, cfg: &QuadratureConfig) -> Result<Estimate<f64>>
where
    F: FnMut(f64) -> f64,
{
    let m = 0.5 * (a + b);
    let left = integrate(
        |u: f64| {
            let z = a + (m - a) * u * u;
            f(z) * 2.0 * (m - a) * u
        },
        &[0.0, 0.5, 1.0],
        cfg,
    )?;
    let right = integrate(
        |v: f64| {
            let z = b - (b - m) * v * v;
            f(z) * 2.0 * (b - m) * v
        },
        &[0.0, 0.5, 1.0],
        cfg,
    )?;
    // with the sign of dz/dv flipped the right piece is the integral over [m, b]
    Ok(Estimate {
        value: left.value + right.value,
        error: left.error + right.error,
        evaluations: left.evaluations + right.evaluations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use core::f64::consts::PI;

    #[test]
    fn polynomial_is_exact() {
        let e = integrate(|x: f64| x.powi(5) - 3.0 * x, &[0.0, 2.0], &QuadratureConfig::default()).unwrap();
        assert!((e.value - (64.0 / 6.0 - 6.0)).abs() < 1e-13);
    }

    #[test]
    fn peaked_integrand_converges() {
        // int_{-1}^{1} 1/(x^2 + 1e-4) dx = 2 * 100 * atan(100)
        let e = integrate(|x: f64| 1.0 / (x * x + 1e-4), &[-1.0, 1.0], &QuadratureConfig::default()).unwrap();
        let exact = 200.0 * (100.0f64).atan();
        assert!((e.value - exact).abs() < 1e-9 * exact);
    }

    #[test]
    fn sqrt_endpoint_substitution() {
        // int_0^1 sqrt(x (1 - x)) dx = pi / 8
        let e = integrate_sqrt_endpoints(|x| (x * (1.0 - x)).abs().sqrt(), 0.0, 1.0, &QuadratureConfig::default())
            .unwrap();
        assert!((e.value - PI / 8.0).abs() < 1e-13);
        let back = integrate_sqrt_endpoints(|x| (x * (1.0 - x)).abs().sqrt(), 1.0, 0.0, &QuadratureConfig::default())
            .unwrap();
        assert!((back.value + PI / 8.0).abs() < 1e-13);
    }

    #[test]
    fn nonfinite_reports_parameter() {
        let r = integrate(|x: f64| if x > 0.5 { f64::NAN } else { 1.0 }, &[0.0, 1.0], &QuadratureConfig::default());
        assert!(matches!(r, Err(Error::NonFinite { .. })));
    }

    #[test]
    fn config_validation() {
        assert!(QuadratureConfig::new(0.0, 1e-10, 20).is_err());
        assert!(QuadratureConfig::new(1e-12, 1e-10, 5).is_err());
        assert!(QuadratureConfig::new(1e-12, 1e-10, 10).is_ok());
    }
}
