//! Rational functions, functions on square-root curves, and their divisors.

mod curve;
mod divisor;
mod rational;
pub(crate) mod series;

pub use curve::{CurveFunction, MeromorphicForm};
pub use divisor::{
    degree_of, divisor_of, form_divisor_of, form_order_at, is_branch_point, order_at,
    series_residue, Chart, Divisor, PointLocus,
};
pub(crate) use divisor::{function_series, local_chart, special_loci};
pub use rational::ComplexRational;

/// Evaluates a rational function; poles come back as [`crate::Error::Pole`].
pub fn eval_rational(r: &ComplexRational, z: crate::C64) -> crate::Result<crate::C64> {
    r.eval(z)
}

/// Product of two curve functions reduced by the curve relation.
pub fn curve_multiply(f: &CurveFunction, g: &CurveFunction) -> crate::Result<CurveFunction> {
    f.mul(g)
}
