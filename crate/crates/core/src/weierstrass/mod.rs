//! Weierstrass data `(M, I, g, phi3)`, the derived forms and the metric.

mod degree;
mod ends;
mod locus;

use alloc::string::String;
use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float;

use crate::algebra::{form_divisor_of, Chart, CurveFunction, MeromorphicForm, PointLocus};
use crate::sampling;
use crate::surface::{apply_involution, Domain, InvolutionSpec, SurfacePoint};
use crate::{Error, Result, C64, I};

pub use degree::gauss_degree_numeric;
pub use ends::{end_analysis, topology_check, EndData, ParityFlags, TopologyReport};
pub use locus::{singular_locus, Grid, Polyline, LOCUS_TOL};

/// `phi1`, `phi2` and the two combinations entering the period conditions.
#[derive(Clone, Debug, PartialEq)]
pub struct DerivedForms {
    pub phi1: MeromorphicForm,
    pub phi2: MeromorphicForm,
    pub g_phi3: MeromorphicForm,
    pub phi3_over_g: MeromorphicForm,
}

#[derive(Clone, Debug, PartialEq)]
pub struct WeierstrassData {
    domain: Domain,
    g: CurveFunction,
    phi3: MeromorphicForm,
    involution: Option<InvolutionSpec>,
    ends: Vec<PointLocus>,
    label: String,
    derived: DerivedForms,
}

pub(crate) fn same_chart(a: &PointLocus, b: &PointLocus) -> bool {
    let chart = match (a.chart, b.chart) {
        (Chart::Infinity, Chart::Infinity) => true,
        (Chart::Finite(x), Chart::Finite(y)) => (x - y).norm() <= 1e-8 * (1.0 + x.norm()),
        _ => false,
    };
    let sheet = match (a.sheet, b.sheet) {
        (Some(x), Some(y)) => (x - y).norm() <= (x + y).norm(),
        _ => true,
    };
    chart && sheet
}

/// `phi1 = (i/2)(1/g - g) phi3`, `phi2 = (1/2)(1/g + g) phi3`.
pub fn derive_phi12(g: &CurveFunction, phi3: &MeromorphicForm) -> Result<(MeromorphicForm, MeromorphicForm)> {
    let d = derive_all(g, phi3)?;
    Ok((d.phi1, d.phi2))
}

fn derive_all(g: &CurveFunction, phi3: &MeromorphicForm) -> Result<DerivedForms> {
    if g.is_zero() || phi3.coeff.is_zero() {
        return Err(Error::IdenticallyZero);
    }
    let g_phi3 = phi3.times(g)?;
    let phi3_over_g = phi3.over(g)?;
    let diff = phi3_over_g.add(&g_phi3.scale(C64::new(-1.0, 0.0)))?;
    let sum = phi3_over_g.add(&g_phi3)?;
    Ok(DerivedForms { phi1: diff.scale(I * 0.5), phi2: sum.scale(C64::new(0.5, 0.0)), g_phi3, phi3_over_g })
}

impl WeierstrassData {
    /// Bundles the data after checking that `g` and `phi3` live on the domain
    /// and that `phi1, phi2, phi3` have poles only at the declared ends.
    pub fn new(
        domain: Domain,
        g: CurveFunction,
        phi3: MeromorphicForm,
        involution: Option<InvolutionSpec>,
        ends: Vec<PointLocus>,
        label: impl Into<String>,
    ) -> Result<Self> {
        let (g, phi3) = match domain.curve_rhs() {
            Some(f) => (g.lifted_to(f)?, MeromorphicForm::new(phi3.coeff.lifted_to(f)?)),
            None if g.curve_rhs().is_some() || phi3.coeff.curve_rhs().is_some() => return Err(Error::CurveMismatch),
            None => (g, phi3),
        };
        let derived = derive_all(&g, &phi3)?;
        for form in [&derived.phi1, &derived.phi2, &phi3] {
            let div = form_divisor_of(form)?;
            for (p, k) in div.entries {
                if k < 0 && !ends.iter().any(|e| same_chart(e, &p)) {
                    return Err(Error::InvalidInput("Weierstrass forms have a pole away from the ends"));
                }
            }
        }
        Ok(WeierstrassData { domain, g, phi3, involution, ends, label: label.into(), derived })
    }

    pub fn domain(&self) -> &Domain {
        &self.domain
    }
    pub fn g(&self) -> &CurveFunction {
        &self.g
    }
    pub fn phi3(&self) -> &MeromorphicForm {
        &self.phi3
    }
    pub fn involution(&self) -> Option<InvolutionSpec> {
        self.involution
    }
    pub fn ends(&self) -> &[PointLocus] {
        &self.ends
    }
    pub fn label(&self) -> &str {
        &self.label
    }
    pub fn derived(&self) -> &DerivedForms {
        &self.derived
    }
    pub fn set_label(&mut self, label: impl Into<String>) {
        self.label = label.into();
    }

    /// `(phi1, phi2, phi3)` coefficients of `dz` at `p`, without pole checks.
    pub fn phi_at(&self, p: &SurfacePoint) -> [C64; 3] {
        [
            self.derived.phi1.coeff.eval_unchecked(p.z, p.w),
            self.derived.phi2.coeff.eval_unchecked(p.z, p.w),
            self.phi3.coeff.eval_unchecked(p.z, p.w),
        ]
    }

    /// Finite zeros and poles of `g` and zeros of `phi3` that are not ends.
    pub fn special_points(&self) -> Result<Vec<SurfacePoint>> {
        let mut out = Vec::new();
        let mut add = |div: crate::algebra::Divisor, zeros_only: bool| {
            for (p, k) in div.entries {
                if zeros_only && k < 0 {
                    continue;
                }
                if self.ends.iter().any(|e| same_chart(e, &p)) {
                    continue;
                }
                if let Chart::Finite(z) = p.chart {
                    let w = match (p.sheet, self.domain.sheets(z)) {
                        (Some(s), Some([a, b])) => Some(if (a - s).norm() <= (b - s).norm() { a } else { b }),
                        (None, Some([a, _])) => Some(a),
                        _ => None,
                    };
                    out.push(SurfacePoint { z, w });
                }
            }
        };
        add(crate::algebra::divisor_of(&self.g)?, false);
        add(form_divisor_of(&self.phi3)?, true);
        Ok(out)
    }

    /// `n` quasi-random points (both sheets on curves) in `0.05 <= |z| <= 20`,
    /// at least `1e-2` away from the ends, from every branch point or
    /// puncture, and from the special points.
    pub fn sample_points(&self, n: usize) -> Vec<SurfacePoint> {
        let mut avoid = self.domain.obstacles();
        for e in &self.ends {
            if let Chart::Finite(z) = e.chart {
                avoid.push(z);
            }
        }
        avoid.extend(self.special_points().unwrap_or_default().iter().map(|p| p.z));
        let per = if self.domain.is_curve() { n.div_ceil(2) } else { n };
        let zs = sampling::avoiding(sampling::annulus(per * 2, 0.05, 20.0), &avoid, 1e-2);
        let mut out = Vec::with_capacity(n);
        for z in zs {
            match self.domain.sheets(z) {
                Some([a, b]) => {
                    out.push(SurfacePoint::on_curve(z, a));
                    out.push(SurfacePoint::on_curve(z, b));
                }
                None => out.push(SurfacePoint::plane(z)),
            }
            if out.len() >= n {
                break;
            }
        }
        out.truncate(n);
        out
    }
}

/// `((|phi3|/2)(1/|g| - |g|))^2`, evaluated as `((|phi3/g| - |g phi3|)/2)^2`.
pub fn conformal_factor(data: &WeierstrassData, p: &SurfacePoint) -> Result<f64> {
    let a = data.derived.phi3_over_g.coeff.eval(p.z, p.w)?.norm();
    let b = data.derived.g_phi3.coeff.eval(p.z, p.w)?.norm();
    Ok((0.5 * (a - b)).powi(2))
}

/// The lifted metric `((|phi3|/2)(1/|g| + |g|))^2`; zero exactly at branch
/// points. Poles of `g` not compensated by `phi3` give `+inf`.
pub fn regularity_value(data: &WeierstrassData, p: &SurfacePoint) -> f64 {
    let part = |f: &MeromorphicForm| match f.coeff.eval(p.z, p.w) {
        Ok(v) => v.norm(),
        Err(_) => f64::INFINITY,
    };
    (0.5 * (part(&data.derived.phi3_over_g) + part(&data.derived.g_phi3))).powi(2)
}

#[derive(Clone, Debug, PartialEq)]
pub struct RegularityScan {
    pub min_value: f64,
    pub argmin: Option<SurfacePoint>,
    /// Points where the lifted metric vanishes (branch points).
    pub offending: Vec<SurfacePoint>,
}

impl RegularityScan {
    pub fn is_regular(&self) -> bool {
        self.offending.is_empty()
    }
}

/// Lifted metric over a sample set; values below `1e-20` count as zeros.
pub fn regularity_scan(data: &WeierstrassData, samples: &[SurfacePoint]) -> RegularityScan {
    let mut scan = RegularityScan { min_value: f64::INFINITY, argmin: None, offending: Vec::new() };
    for p in samples {
        let v = regularity_value(data, p);
        if v < scan.min_value {
            scan.min_value = v;
            scan.argmin = Some(*p);
        }
        if v <= 1e-20 {
            scan.offending.push(*p);
        }
    }
    scan
}

/// Default regularity sample set: 1000 quasi-random points plus the zeros
/// and poles of `g` and the zeros of `phi3`.
pub fn default_regularity_samples(data: &WeierstrassData) -> Result<Vec<SurfacePoint>> {
    let mut s = data.sample_points(1000);
    s.extend(data.special_points()?);
    Ok(s)
}

/// `|phi1^2 + phi2^2 - phi3^2|` relative to `|phi1|^2 + |phi2|^2 + |phi3|^2`.
pub fn conformality_residual(data: &WeierstrassData, p: &SurfacePoint) -> f64 {
    let [a, b, c] = data.phi_at(p);
    let scale = a.norm_sqr() + b.norm_sqr() + c.norm_sqr();
    (a * a + b * b - c * c).norm() / scale.max(f64::MIN_POSITIVE)
}

/// Largest relative residuals of `g(I p) conj(g(p)) = 1` and
/// `I^* phi3 = conj(phi3)` over the samples.
pub fn compatibility_residuals(data: &WeierstrassData, samples: &[SurfacePoint]) -> Result<(f64, f64)> {
    let spec = data.involution.ok_or(Error::InvalidInput("data has no involution"))?;
    let (mut rg, mut rp) = (0.0f64, 0.0f64);
    for p in samples {
        let q = apply_involution(spec, &data.domain, p)?;
        let gp = data.g.eval_unchecked(p.z, p.w);
        let gq = data.g.eval_unchecked(q.z, q.w);
        rg = rg.max((gq * gp.conj() - 1.0).norm());
        let fp = data.phi3.coeff.eval_unchecked(p.z, p.w);
        let fq = data.phi3.coeff.eval_unchecked(q.z, q.w);
        let pulled = fq * spec.zmap().push_velocity(p.z, C64::new(1.0, 0.0));
        rp = rp.max((pulled - fp.conj()).norm() / (1.0 + fp.norm()));
    }
    Ok((rg, rp))
}
