use alloc::vec::Vec;


use super::series::{Laurent, Substitution};
use super::{ComplexRational, CurveFunction, MeromorphicForm};
use crate::{Error, Result, C64};

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Chart {
    Finite(C64),
    Infinity,
}

/// A point of the compact model: the base point `z` (possibly infinity) and,
/// over an unbranched `z` on a curve, the sheet.
///
/// `sheet` is matched against the leading coefficient of the local expansion
/// of `w`; at ordinary points that is just the value `w(p)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PointLocus {
    pub chart: Chart,
    pub sheet: Option<C64>,
}

impl PointLocus {
    pub fn finite(z: C64) -> Self {
        PointLocus { chart: Chart::Finite(z), sheet: None }
    }

    pub fn infinity() -> Self {
        PointLocus { chart: Chart::Infinity, sheet: None }
    }

    pub fn on_sheet(z: C64, w: C64) -> Self {
        PointLocus { chart: Chart::Finite(z), sheet: Some(w) }
    }
}

/// Local coordinate data at a point: `z(t)`, `dz/dt` and `w(t)`.
#[derive(Clone, Debug)]
pub(crate) struct LocalChart {
    pub sub: Substitution,
    pub dz_dt: Laurent,
    pub w: Option<Laurent>,
}

pub(crate) fn rational_series(r: &ComplexRational, sub: Substitution) -> Result<Laurent> {
    let n = Laurent::of_poly(r.numerator(), sub);
    let d = Laurent::of_poly(r.denominator(), sub);
    n.div(&d)
}

/// Order of `f` at the base point of the chart, in the coordinate `z - z0`
/// or `1/z`.
fn base_order(f: &ComplexRational, chart: Chart) -> Result<i32> {
    match chart {
        Chart::Finite(z0) => f.order_at(z0),
        Chart::Infinity => f.order_at_infinity(),
    }
}

/// Whether `z` is branched at the point on the curve `w^2 = f`.
pub fn is_branch_point(f: &ComplexRational, chart: Chart) -> Result<bool> {
    Ok(base_order(f, chart)? % 2 != 0)
}

pub(crate) fn local_chart(curve: Option<&ComplexRational>, p: &PointLocus) -> Result<LocalChart> {
    let step = match curve {
        Some(f) if is_branch_point(f, p.chart)? => 2,
        _ => 1,
    };
    let one = C64::new(1.0, 0.0);
    let (sub, dz_dt) = match p.chart {
        Chart::Finite(z0) => {
            let sub = Substitution::Finite { z0, step };
            let dz = if step == 1 {
                Laurent::constant(one)
            } else {
                Laurent::from_raw(1, alloc::vec![C64::new(2.0, 0.0)])
            };
            (sub, dz)
        }
        Chart::Infinity => {
            let sub = Substitution::Infinity { step };
            let dz = Laurent::from_raw(-(step as i32) - 1, alloc::vec![C64::new(-(step as f64), 0.0)]);
            (sub, dz)
        }
    };
    let w = match curve {
        Some(f) => Some(rational_series(f, sub)?.sqrt(p.sheet)?),
        None => None,
    };
    Ok(LocalChart { sub, dz_dt, w })
}

pub(crate) fn function_series(g: &CurveFunction, chart: &LocalChart) -> Result<Laurent> {
    let a = if g.a().is_zero() { Laurent::zero() } else { rational_series(g.a(), chart.sub)? };
    if g.b().is_zero() {
        return Ok(a);
    }
    let w = chart.w.as_ref().ok_or(Error::CurveMismatch)?;
    let bw = rational_series(g.b(), chart.sub)?.mul(w);
    Ok(a.add(&bw))
}

pub(crate) fn form_series(form: &MeromorphicForm, chart: &LocalChart) -> Result<Laurent> {
    Ok(function_series(&form.coeff, chart)?.mul(&chart.dz_dt))
}

/// Vanishing order of `g` at `p` in the local parameter (negative for poles).
pub fn order_at(g: &CurveFunction, p: &PointLocus) -> Result<i32> {
    if g.is_zero() {
        return Err(Error::IdenticallyZero);
    }
    let chart = local_chart(g.curve_rhs(), p)?;
    let s = function_series(g, &chart)?;
    if s.is_zero() {
        return Err(Error::IdenticallyZero);
    }
    Ok(s.val)
}

/// Vanishing order of the form `F dz` at `p` in the local parameter.
pub fn form_order_at(form: &MeromorphicForm, p: &PointLocus) -> Result<i32> {
    if form.coeff.is_zero() {
        return Err(Error::IdenticallyZero);
    }
    let chart = local_chart(form.coeff.curve_rhs(), p)?;
    let s = form_series(form, &chart)?;
    if s.is_zero() {
        return Err(Error::IdenticallyZero);
    }
    Ok(s.val)
}

/// Residue of the form at `p` from its Laurent expansion.
pub fn series_residue(form: &MeromorphicForm, p: &PointLocus) -> Result<C64> {
    let chart = local_chart(form.coeff.curve_rhs(), p)?;
    Ok(form_series(form, &chart)?.coeff(-1))
}

/// Formal sum of points with integer orders.
#[derive(Clone, Debug, PartialEq)]
pub struct Divisor {
    pub entries: Vec<(PointLocus, i32)>,
}

impl Divisor {
    pub fn degree(&self) -> i32 {
        self.entries.iter().map(|(_, k)| k).sum()
    }

    /// Total pole order.
    pub fn pole_count(&self) -> usize {
        self.entries.iter().filter(|(_, k)| *k < 0).map(|(_, k)| (-k) as usize).sum()
    }
}

fn push_unique(list: &mut Vec<C64>, z: C64) {
    if !list.iter().any(|q| (q - z).norm() <= 1e-8 * (1.0 + z.norm())) {
        list.push(z);
    }
}

fn roots_into(list: &mut Vec<C64>, r: &ComplexRational) {
    for (z, _) in r.numerator().distinct_roots() {
        push_unique(list, z);
    }
    for (z, _) in r.denominator().distinct_roots() {
        push_unique(list, z);
    }
}

/// Every point over which `g` (or a form with coefficient `g`) can have a
/// zero or pole, together with all branch points.
pub(crate) fn special_loci(g: &CurveFunction) -> Result<Vec<PointLocus>> {
    let mut zs = Vec::new();
    roots_into(&mut zs, g.a());
    roots_into(&mut zs, g.b());
    if let Some(f) = g.curve_rhs() {
        roots_into(&mut zs, f);
        if !g.is_zero() {
            roots_into(&mut zs, &g.norm());
        }
    }
    let mut out = Vec::new();
    let mut push_over = |chart: Chart| -> Result<()> {
        match g.curve_rhs() {
            Some(f) if !is_branch_point(f, chart)? => {
                let probe = local_chart(Some(f), &PointLocus { chart, sheet: None })?;
                let lead = probe.w.as_ref().map(|w| w.coeffs[0]).unwrap_or(C64::new(1.0, 0.0));
                out.push(PointLocus { chart, sheet: Some(lead) });
                out.push(PointLocus { chart, sheet: Some(-lead) });
            }
            _ => out.push(PointLocus { chart, sheet: None }),
        }
        Ok(())
    };
    for z in zs {
        push_over(Chart::Finite(z))?;
    }
    push_over(Chart::Infinity)?;
    Ok(out)
}

pub fn divisor_of(g: &CurveFunction) -> Result<Divisor> {
    let mut entries = Vec::new();
    for p in special_loci(g)? {
        let k = order_at(g, &p)?;
        if k != 0 {
            entries.push((p, k));
        }
    }
    Ok(Divisor { entries })
}

pub fn form_divisor_of(form: &MeromorphicForm) -> Result<Divisor> {
    let mut entries = Vec::new();
    for p in special_loci(&form.coeff)? {
        let k = form_order_at(form, &p)?;
        if k != 0 {
            entries.push((p, k));
        }
    }
    Ok(Divisor { entries })
}

/// Mapping degree onto the sphere: the total pole order.
pub fn degree_of(g: &CurveFunction) -> Result<usize> {
    if g.is_zero() {
        return Err(Error::IdenticallyZero);
    }
    if g.curve_rhs().is_none() {
        return g.a().degree();
    }
    Ok(divisor_of(g)?.pole_count())
}
