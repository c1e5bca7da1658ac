//! Deterministic quasi-random sample points.

use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float;

use crate::C64;

/// Radical inverse of `i` in base `b`.
pub fn halton(mut i: u64, b: u64) -> f64 {
    let mut f = 1.0;
    let mut r = 0.0;
    let inv = 1.0 / b as f64;
    while i > 0 {
        f *= inv;
        r += f * (i % b) as f64;
        i /= b;
    }
    r
}

/// `n` points in the annulus `rmin <= |z| <= rmax`, uniform in `log|z|` and
/// angle.
pub fn annulus(n: usize, rmin: f64, rmax: f64) -> Vec<C64> {
    let (a, b) = (rmin.ln(), rmax.ln());
    (1..=n as u64)
        .map(|i| {
            let s = a + (b - a) * halton(i, 2);
            let t = core::f64::consts::TAU * halton(i, 3);
            C64::from_polar(s.exp(), t)
        })
        .collect()
}

/// `n` points in the square `|re|, |im| <= half`.
pub fn square(n: usize, half: f64) -> Vec<C64> {
    (1..=n as u64)
        .map(|i| C64::new(half * (2.0 * halton(i, 2) - 1.0), half * (2.0 * halton(i, 3) - 1.0)))
        .collect()
}

/// Keeps points at distance at least `gap` from every point of `avoid`.
pub fn avoiding(points: Vec<C64>, avoid: &[C64], gap: f64) -> Vec<C64> {
    points
        .into_iter()
        .filter(|z| avoid.iter().all(|a| (z - a).norm() >= gap))
        .collect()
}
