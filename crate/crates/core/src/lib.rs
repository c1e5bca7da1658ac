//! Numerical machinery for complete maximal surfaces (maxfaces) in
//! Lorentz-Minkowski space built from Weierstrass data `(M, I, g, phi3)`.
//!
//! The crate is `no_std` (it needs `alloc`) and covers:
//!
//! * [`algebra`]: complex rational functions, functions `a + b w` on square-root
//!   curves `w^2 = f(z)`, Laurent expansions, divisor orders and degrees.
//! * [`surface`]: punctured planes and square-root curves, antiholomorphic
//!   involutions, lifted paths with branch tracking and homology loops.
//! * [`weierstrass`]: the derived forms `phi1`, `phi2`, metric and singular set,
//!   end analysis and the Jorge-Meeks / parity checks.
//! * [`periods`]: adaptive contour quadrature, residues and period verdicts.
//! * [`kleinsolver`]: the period function `h(r)` of the one-ended Klein bottle
//!   family and its two roots.
//! * [`immersion`]: evaluation of `X = Re int (phi1, phi2, phi3)`, meshes and
//!   symmetry checks.
//!
//! IO, file formats and the command line live in the companion `maxface` crate.
#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod algebra;
mod error;
pub mod families;
pub mod immersion;
pub mod kleinsolver;
pub mod periods;
mod poly;
pub mod quadrature;
pub mod sampling;
pub mod surface;
pub mod weierstrass;

pub use error::{Error, Result};
pub use poly::Poly;

/// Complex scalar used throughout the crate.
pub type C64 = num_complex::Complex<f64>;

pub(crate) const I: C64 = C64::new(0.0, 1.0);

#[inline]
pub(crate) fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

#[inline]
pub(crate) fn re(x: f64) -> C64 {
    C64::new(x, 0.0)
}
