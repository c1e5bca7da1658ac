use alloc::vec::Vec;
use core::f64::consts::TAU;

#[allow(unused_imports)]
use num_traits::Float;

use super::path::lift_path;
use super::{Domain, InvolutionSpec, LiftedPath, PathSpec, Segment};
use crate::algebra::MeromorphicForm;
use crate::quadrature::QuadratureConfig;
use crate::{Error, Result, C64};

const LIFT_TOL: f64 = 1e-10;
const INTEGER_TOL: f64 = 1e-6;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LoopId {
    /// Encircles the interval ending at the pole of `f`.
    Gamma1,
    /// Encircles the other interval.
    Gamma2,
    /// Small circle around the given puncture index.
    Puncture(usize),
}

/// Ellipse around `[lo, hi]` reaching `margin_lo` and `margin_hi` beyond its
/// ends; margins are 10% of the length, capped at half the gap to the next
/// branch point on that side.
fn ellipse_around(lo: f64, hi: f64, gap_lo: f64, gap_hi: f64) -> Segment {
    let len = hi - lo;
    let left = lo - (0.1 * len).min(0.5 * gap_lo);
    let right = hi + (0.1 * len).min(0.5 * gap_hi);
    let a = 0.5 * (right - left);
    Segment::Ellipse { center: C64::new(0.5 * (left + right), 0.0), a, b: 0.5 * a, start: 0.0, sweep: TAU }
}

/// Homology loops, counterclockwise, starting at their rightmost point on the
/// principal sheet, already lifted.
///
/// On a curve with three real finite branch points `b0 < b1 < b2`, the loops
/// encircle `[b0, b1]` and `[b1, b2]`; `Gamma1` is the one whose interval ends
/// at a pole of `f` (for `w^2 = z (r z - 1)/(z + r)` that is `[-r, 0]`).
pub fn canonical_loops(domain: &Domain) -> Result<Vec<(LoopId, LiftedPath)>> {
    let mut out = Vec::new();
    match domain {
        Domain::PuncturedPlane { punctures } => {
            for (i, p) in punctures.iter().enumerate() {
                let nearest = punctures
                    .iter()
                    .enumerate()
                    .filter(|(j, _)| *j != i)
                    .fold(f64::INFINITY, |m, (_, q)| m.min((p - q).norm()));
                let radius = 1.0f64.min(0.5 * nearest);
                let seg = Segment::Arc { center: *p, radius, start: 0.0, sweep: TAU };
                let path = lift_path(domain, &PathSpec::single(seg, None), LIFT_TOL)?;
                out.push((LoopId::Puncture(i), path));
            }
        }
        Domain::RootCurve { f, branch_points, .. } => {
            let mut real: Vec<f64> = Vec::new();
            for b in branch_points {
                if b.im.abs() > 1e-12 * (1.0 + b.norm()) {
                    return Err(Error::InvalidInput("canonical loops need real branch points"));
                }
                real.push(b.re);
            }
            if real.len() != 3 {
                return Err(Error::InvalidInput("canonical loops need three finite branch points"));
            }
            real.sort_by(|a, b| a.total_cmp(b));
            let is_pole = |x: f64| f.denominator().valuation_at(C64::new(x, 0.0)) > 0;
            let left = ellipse_around(real[0], real[1], f64::INFINITY, real[2] - real[1]);
            let right = ellipse_around(real[1], real[2], real[1] - real[0], f64::INFINITY);
            let (g1, g2) = if is_pole(real[2]) && !is_pole(real[0]) { (right, left) } else { (left, right) };
            for (id, seg) in [(LoopId::Gamma1, g1), (LoopId::Gamma2, g2)] {
                let start = domain.principal_point(seg.point(0.0));
                let path = lift_path(domain, &PathSpec::single(seg, start.w), LIFT_TOL)?;
                if !path.closes_up() {
                    return Err(Error::InvalidInput("canonical loop does not close on the curve"));
                }
                out.push((id, path));
            }
        }
    }
    Ok(out)
}

/// Loop integrals of a form, in loop order.
pub fn periods_over(form: &MeromorphicForm, loops: &[LiftedPath], cfg: &QuadratureConfig) -> Result<Vec<C64>> {
    loops
        .iter()
        .map(|l| Ok(l.integrate(|z, w, dz| form.coeff.eval_unchecked(z, w) * dz, cfg)?.value))
        .collect()
}

/// Image of a lifted loop under the involution, lifted again.
pub(crate) fn image_loop(domain: &Domain, spec: InvolutionSpec, path: &LiftedPath) -> Result<LiftedPath> {
    let w0 = path.start_w().map(|w| spec.map_w(w));
    lift_path(domain, &path.spec.mapped(spec.zmap(), w0), LIFT_TOL)
}

/// Solves the least-squares system `A x = b` (`A` is `rows x n`) through the
/// normal equations; fails when they are ill-conditioned.
fn least_squares(a: &[Vec<f64>], b: &[f64], n: usize) -> Result<Vec<f64>> {
    let mut m = alloc::vec![alloc::vec![0.0; n + 1]; n];
    for (row, rhs) in a.iter().zip(b) {
        for i in 0..n {
            for j in 0..n {
                m[i][j] += row[i] * row[j];
            }
            m[i][n] += row[i] * rhs;
        }
    }
    let scale = m.iter().enumerate().fold(0.0f64, |s, (i, r)| s.max(r[i].abs()));
    for col in 0..n {
        let piv = (col..n).max_by(|&x, &y| m[x][col].abs().total_cmp(&m[y][col].abs())).unwrap_or(col);
        m.swap(col, piv);
        if m[col][col].abs() <= 1e-12 * scale {
            return Err(Error::IllConditioned);
        }
        for r in 0..n {
            if r != col {
                let k = m[r][col] / m[col][col];
                for c in col..=n {
                    m[r][c] -= k * m[col][c];
                }
            }
        }
    }
    Ok((0..n).map(|i| m[i][n] / m[i][i]).collect())
}

/// Integer matrix `M` with `I_*(gamma_j) = sum_k M[j][k] gamma_k`, detected from
/// the periods of holomorphic test forms.
pub fn involution_on_homology(
    domain: &Domain,
    spec: InvolutionSpec,
    loops: &[LiftedPath],
    test_forms: &[MeromorphicForm],
    cfg: &QuadratureConfig,
) -> Result<Vec<Vec<i32>>> {
    let n = loops.len();
    let mut a: Vec<Vec<f64>> = Vec::new();
    for form in test_forms {
        let p = periods_over(form, loops, cfg)?;
        a.push(p.iter().map(|v| v.re).collect());
        a.push(p.iter().map(|v| v.im).collect());
    }
    let mut out = Vec::with_capacity(n);
    for l in loops {
        let image = image_loop(domain, spec, l)?;
        let mut b = Vec::new();
        for form in test_forms {
            let q = periods_over(form, core::slice::from_ref(&image), cfg)?[0];
            b.push(q.re);
            b.push(q.im);
        }
        let x = least_squares(&a, &b, n)?;
        let mut row = Vec::with_capacity(n);
        for v in x {
            let k = v.round();
            if (v - k).abs() > INTEGER_TOL {
                return Err(Error::IllConditioned);
            }
            row.push(k as i32);
        }
        out.push(row);
    }
    Ok(out)
}
