#[allow(unused_imports)]
use num_traits::Float;

use crate::algebra::{function_series, local_chart, special_loci, Chart, CurveFunction};
use crate::poly::Poly;
use crate::{Error, Result, C64};

const RETRIES: usize = 10;

/// Preimages of `c` on the plane, or `None` when `c` is not a regular value.
fn plane_preimages(g: &CurveFunction, c: C64) -> Option<usize> {
    let (n, d) = (g.a().numerator(), g.a().denominator());
    let p = n - &d.scale(c);
    if p.is_zero() || p.degree() < n.degree().max(d.degree()) {
        // c is the value at infinity
        return None;
    }
    let roots = p.distinct_roots();
    if roots.iter().any(|(_, m)| *m != 1) {
        return None;
    }
    Some(roots.len())
}

/// Preimages of `c` on `w^2 = f`: roots of `(c - A)^2 = B^2 f` after clearing
/// denominators, each giving the sheet `w = (c - A)/B`.
fn curve_preimages(g: &CurveFunction, f: &crate::algebra::ComplexRational, c: C64) -> Option<usize> {
    let (an, ad) = (g.a().numerator(), g.a().denominator());
    let (bn, bd) = (g.b().numerator(), g.b().denominator());
    let (fnum, fden) = (f.numerator(), f.denominator());
    // (c ad - an)^2 bd^2 fden - bn^2 fnum ad^2
    let lhs = &(&ad.scale(c) - an);
    let lhs = &(&(lhs * lhs) * &(bd * bd)) * fden;
    let rhs = &(&(bn * bn) * fnum) * &(ad * ad);
    let p = &lhs - &rhs;
    if p.is_zero() {
        return None;
    }
    let roots = p.distinct_roots();
    let mut count = 0;
    for (z, m) in roots {
        if m != 1 {
            return None;
        }
        let scale = 1.0 + z.norm();
        let bad = |q: &Poly| q.eval(z).norm() <= 1e-8 * q.max_abs_coeff() * scale.powi(q.degree() as i32);
        if bad(ad) || bad(bd) || bad(bn) || bad(fnum) || bad(fden) {
            return None;
        }
        let w = (c - g.a().eval_unchecked(z)) / g.b().eval_unchecked(z);
        let fz = f.eval_unchecked(z);
        if (w * w - fz).norm() > 1e-6 * (1.0 + fz.norm()) {
            return None;
        }
        count += 1;
    }
    // preimages over infinity are not roots of p, so c must avoid g(infinity)
    for p in special_loci(g).ok()? {
        if p.chart != Chart::Infinity {
            continue;
        }
        let chart = local_chart(g.curve_rhs(), &p).ok()?;
        let s = function_series(g, &chart).ok()?;
        if s.val == 0 && (s.coeff(0) - c).norm() <= 1e-6 * (1.0 + c.norm()) {
            return None;
        }
    }
    Some(count)
}

/// Number of solutions of `g = c`, retrying with deterministic perturbations
/// of `c` when it is not a regular value.
pub fn gauss_degree_numeric(g: &CurveFunction, c: C64) -> Result<usize> {
    if g.is_zero() {
        return Err(Error::IdenticallyZero);
    }
    for k in 0..RETRIES {
        let ck = if k == 0 { c } else { c + C64::from_polar(0.1 * k as f64, 2.4 * k as f64) * (1.0 + c.norm()) };
        let n = match g.curve_rhs() {
            None => plane_preimages(g, ck),
            Some(_) if g.b().is_zero() => plane_preimages(&CurveFunction::rational(g.a().clone()), ck).map(|n| 2 * n),
            Some(f) => curve_preimages(g, f, ck),
        };
        if let Some(n) = n {
            return Ok(n);
        }
    }
    Err(Error::NoRegularValue)
}
