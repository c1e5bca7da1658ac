//! Weierstrass data for the named examples.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::algebra::{ComplexRational, CurveFunction, MeromorphicForm, PointLocus};
use crate::poly::Poly;
use crate::surface::{Domain, InvolutionSpec};
use crate::weierstrass::WeierstrassData;
use crate::{c, re, Error, Result, C64, I};

fn plane_ends() -> Vec<PointLocus> {
    vec![PointLocus::finite(re(0.0)), PointLocus::infinity()]
}

fn rational(lead: C64, zeros: &[C64], poles: &[C64]) -> CurveFunction {
    CurveFunction::rational(ComplexRational::from_roots(lead, zeros, poles))
}

fn plane(g: CurveFunction, phi3: CurveFunction, inv: Option<InvolutionSpec>, label: &str) -> Result<WeierstrassData> {
    WeierstrassData::new(Domain::punctured_plane(vec![re(0.0)]), g, MeromorphicForm::new(phi3), inv, plane_ends(), label)
}

/// `a z + b`
fn lin(a: C64, b: C64) -> Poly {
    Poly::linear(b, a)
}

/// `i(z^2 - 1)/z^2 dz`, shared by several examples.
fn phi3_standard() -> CurveFunction {
    rational(I, &[re(1.0), re(-1.0)], &[re(0.0), re(0.0)])
}

/// Lorentzian catenoid: `g = z`, `phi3 = dz/z`.
pub fn catenoid() -> Result<WeierstrassData> {
    plane(rational(re(1.0), &[re(0.0)], &[]), rational(re(1.0), &[], &[re(0.0)]), None, "catenoid")
}

/// `g = z^3 (rz - 1)/(z + r)`, `phi3 = i(rz - 1)(z + r)/z^2 dz`.
pub fn moebius_b2(r: f64) -> Result<WeierstrassData> {
    if !(r > 0.0) {
        return Err(Error::InvalidInput("r must be positive"));
    }
    let z0 = re(0.0);
    let g = rational(re(r), &[z0, z0, z0, re(1.0 / r)], &[re(-r)]);
    let phi3 = rational(I * r, &[re(1.0 / r), re(-r)], &[z0, z0]);
    plane(g, phi3, Some(InvolutionSpec::PlaneAntipodal), &format!("moebius-b2(r={r})"))
}

/// `g = z^(2k+1) (z + 1)/(z - 1)`, `phi3 = i(z^2 - 1)/z^2 dz`.
pub fn moebius_k(k: u32) -> Result<WeierstrassData> {
    if k == 0 {
        return Err(Error::InvalidInput("k must be at least 1"));
    }
    let mut zeros = vec![re(0.0); 2 * k as usize + 1];
    zeros.push(re(-1.0));
    let g = rational(re(1.0), &zeros, &[re(1.0)]);
    plane(g, phi3_standard(), Some(InvolutionSpec::PlaneAntipodal), &format!("moebius-k(k={k})"))
}

/// Three-parameter family without branching at the ends:
/// `g = z (rz-1)(sz-1)(tz-1)/((z+r)(z+conj s)(z+conj t))`.
pub fn moebius_family(r: f64, s: C64, t: C64) -> Result<WeierstrassData> {
    if !(r > 0.0) || s.norm() == 0.0 || t.norm() == 0.0 {
        return Err(Error::InvalidInput("need r > 0 and s, t nonzero"));
    }
    let g = &(&(&Poly::monomial(re(1.0), 1) * &lin(re(r), re(-1.0))) * &lin(s, re(-1.0))) * &lin(t, re(-1.0));
    let den = &(&lin(re(1.0), re(r)) * &lin(re(1.0), s.conj())) * &lin(re(1.0), t.conj());
    let g = CurveFunction::rational(ComplexRational::new(g, den.clone())?);
    let num = &(&(&lin(re(r), re(-1.0)) * &lin(s, re(-1.0))) * &lin(t, re(-1.0))) * &den;
    let phi3 = CurveFunction::rational(ComplexRational::new(num.scale(I), Poly::monomial(re(1.0), 4))?);
    plane(g, phi3, Some(InvolutionSpec::PlaneAntipodal), &format!("moebius-family(r={r}, s={s}, t={t})"))
}

/// The symmetric member `r = 1`, `s = e^(2 pi i/3)`, `t = conj s`.
pub fn moebius_sym() -> Result<WeierstrassData> {
    let s = C64::from_polar(1.0, 2.0 * core::f64::consts::PI / 3.0);
    let mut d = moebius_family(1.0, s, s.conj())?;
    d.set_label("moebius-sym");
    Ok(d)
}

/// Henneberg-type data `g = z^2`, `phi3 = i(z^2 - 1)/z^2 dz`; branched at `z = +-1`.
pub fn henneberg() -> Result<WeierstrassData> {
    let g = rational(re(1.0), &[re(0.0), re(0.0)], &[]);
    plane(g, phi3_standard(), Some(InvolutionSpec::PlaneAntipodal), "henneberg-max")
}

/// The curve `w^2 = z (rz - 1)/(z + r)` with `(0,0)` and `infinity` removed.
pub fn klein_domain(r: f64) -> Result<Domain> {
    if r == 0.0 || !r.is_finite() {
        return Err(Error::InvalidInput("r must be a nonzero real"));
    }
    let f = ComplexRational::from_roots(re(r), &[re(0.0), re(1.0 / r)], &[re(-r)]);
    Domain::root_curve(f, klein_ends())
}

pub fn klein_ends() -> Vec<PointLocus> {
    vec![PointLocus::on_sheet(re(0.0), re(0.0)), PointLocus::infinity()]
}

/// `g = w (z + 1)/(z - 1)`, `phi3 = i(z^2 - 1)/z^2 dz` on the curve.
pub fn klein(r: f64) -> Result<WeierstrassData> {
    let domain = klein_domain(r)?;
    let f = domain.curve_rhs().cloned().ok_or(Error::Unreachable)?;
    let b = ComplexRational::from_roots(re(1.0), &[re(-1.0)], &[re(1.0)]);
    let g = CurveFunction::on_curve(ComplexRational::zero(), b, f);
    WeierstrassData::new(
        domain,
        g,
        MeromorphicForm::new(phi3_standard()),
        Some(InvolutionSpec::CurveAntipodal),
        klein_ends(),
        format!("klein(r={r})"),
    )
}

/// Genus-one quotient with degree-two Gauss map:
/// `g = z (z - r)/(rz + 1)`, `phi3 = i s (rz + 1)(z - r)/z^2 dz`.
pub fn counter_genus1_deg2(r: f64, s: f64) -> Result<WeierstrassData> {
    if r == 0.0 || s == 0.0 {
        return Err(Error::InvalidInput("need r, s nonzero"));
    }
    let g = CurveFunction::rational(ComplexRational::new(
        &Poly::monomial(re(1.0), 1) * &lin(re(1.0), re(-r)),
        lin(re(r), re(1.0)),
    )?);
    let num = (&lin(re(r), re(1.0)) * &lin(re(1.0), re(-r))).scale(c(0.0, s));
    let phi3 = CurveFunction::rational(ComplexRational::new(num, Poly::monomial(re(1.0), 2))?);
    plane(g, phi3, Some(InvolutionSpec::PlaneAntipodal), &format!("counter-genus1-deg2(r={r}, s={s})"))
}

/// Branch order one at the ends:
/// `g = z^2 (rz-1)(sz-1)/((z + conj r)(z + conj s))`.
pub fn counter_moebius_b1(r: C64, s: C64) -> Result<WeierstrassData> {
    if r.norm() == 0.0 || s.norm() == 0.0 {
        return Err(Error::InvalidInput("need r, s nonzero"));
    }
    let tops = &lin(r, re(-1.0)) * &lin(s, re(-1.0));
    let den = &lin(re(1.0), r.conj()) * &lin(re(1.0), s.conj());
    let g = CurveFunction::rational(ComplexRational::new(&Poly::monomial(re(1.0), 2) * &tops, den.clone())?);
    let phi3 = CurveFunction::rational(ComplexRational::new((&tops * &den).scale(I), Poly::monomial(re(1.0), 3))?);
    plane(g, phi3, Some(InvolutionSpec::PlaneAntipodal), &format!("counter-moebius-b1(r={r}, s={s})"))
}
