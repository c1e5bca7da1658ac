//! Dense complex polynomials with coefficients in ascending powers.

use alloc::vec;
use alloc::vec::Vec;
use core::ops::{Add, Mul, Neg, Sub};

#[allow(unused_imports)]
use num_traits::Float;

use crate::C64;

/// Relative size below which a Taylor coefficient counts as zero.
pub(crate) const VANISH_TOL: f64 = 1e-9;
/// Distinct roots closer than this (relative) are treated as one.
pub(crate) const ROOT_MATCH_TOL: f64 = 1e-10;

const ABERTH_MAX_ITER: usize = 800;
const CLUSTER_TOL: f64 = 2e-3;

#[derive(Clone, Debug, PartialEq)]
pub struct Poly {
    coeffs: Vec<C64>,
}

impl Poly {
    pub fn new(mut coeffs: Vec<C64>) -> Self {
        trim(&mut coeffs);
        Poly { coeffs }
    }

    pub fn from_real(coeffs: &[f64]) -> Self {
        Self::new(coeffs.iter().map(|&x| C64::new(x, 0.0)).collect())
    }

    pub fn zero() -> Self {
        Poly { coeffs: vec![C64::new(0.0, 0.0)] }
    }

    pub fn one() -> Self {
        Self::constant(C64::new(1.0, 0.0))
    }

    pub fn constant(c: C64) -> Self {
        Self::new(vec![c])
    }

    /// `c * z^k`
    pub fn monomial(c: C64, k: usize) -> Self {
        let mut v = vec![C64::new(0.0, 0.0); k + 1];
        v[k] = c;
        Self::new(v)
    }

    /// `c0 + c1 z`
    pub fn linear(c0: C64, c1: C64) -> Self {
        Self::new(vec![c0, c1])
    }

    /// `lead * prod (z - root)`
    pub fn from_roots(lead: C64, roots: &[C64]) -> Self {
        let mut p = Self::constant(lead);
        for &r in roots {
            p = &p * &Self::linear(-r, C64::new(1.0, 0.0));
        }
        p
    }

    pub fn coeffs(&self) -> &[C64] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| *c == C64::new(0.0, 0.0))
    }

    /// Degree; the zero polynomial reports 0.
    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn leading(&self) -> C64 {
        *self.coeffs.last().unwrap()
    }

    pub fn eval(&self, z: C64) -> C64 {
        self.coeffs.iter().rev().fold(C64::new(0.0, 0.0), |acc, &c| acc * z + c)
    }

    pub fn derivative(&self) -> Self {
        if self.coeffs.len() <= 1 {
            return Self::zero();
        }
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, &c)| c * k as f64)
                .collect(),
        )
    }

    pub fn scale(&self, s: C64) -> Self {
        Self::new(self.coeffs.iter().map(|&c| c * s).collect())
    }

    pub fn max_abs_coeff(&self) -> f64 {
        self.coeffs.iter().fold(0.0, |m, c| m.max(c.norm()))
    }

    /// Coefficients of `p(z0 + t)` in ascending powers of `t`.
    pub fn taylor_at(&self, z0: C64) -> Vec<C64> {
        let mut work = self.coeffs.clone();
        let n = work.len();
        let mut out = Vec::with_capacity(n);
        for k in 0..n {
            // one synthetic division by (z - z0) over the remaining high part
            for j in (k..n - 1).rev() {
                let hi = work[j + 1];
                work[j] += hi * z0;
            }
            out.push(work[k]);
        }
        out
    }

    /// Vanishing order of the polynomial at `z0`.
    pub fn valuation_at(&self, z0: C64) -> usize {
        if self.is_zero() {
            return usize::MAX;
        }
        let t = self.taylor_at(z0);
        leading_zero_count(&t, 1.0f64.max(z0.norm()))
    }

    /// Exact division by `(z - root)`, discarding the remainder.
    pub fn deflate(&self, root: C64) -> Self {
        let n = self.coeffs.len();
        if n <= 1 {
            return Self::zero();
        }
        let mut q = vec![C64::new(0.0, 0.0); n - 1];
        if root.norm() <= 1.0 {
            let mut acc = C64::new(0.0, 0.0);
            for k in (1..n).rev() {
                acc = acc * root + self.coeffs[k];
                q[k - 1] = acc;
            }
        } else {
            // divide upward from the constant term, which is stable for |root| > 1
            q[0] = -self.coeffs[0] / root;
            for k in 1..n - 1 {
                q[k] = (q[k - 1] - self.coeffs[k]) / root;
            }
        }
        Self::new(q)
    }

    /// Coefficients of `z^n p(1/z)` for `n = degree`.
    pub fn reversed(&self) -> Vec<C64> {
        let mut v = self.coeffs.clone();
        v.reverse();
        v
    }

    /// Roots with multiplicity, each cluster of a multiple root reported once.
    pub fn distinct_roots(&self) -> Vec<(C64, usize)> {
        if self.is_zero() || self.degree() == 0 {
            return Vec::new();
        }
        let mut out = Vec::new();
        let m0 = leading_zero_count(&self.coeffs, 1.0);
        let rest = Poly::new(self.coeffs[m0..].to_vec());
        if m0 > 0 {
            out.push((C64::new(0.0, 0.0), m0));
        }
        if rest.degree() == 0 {
            return out;
        }
        let approx = rest.aberth();
        let clusters = cluster(&approx);
        for members in clusters {
            let m = members.len();
            let mean = members.iter().fold(C64::new(0.0, 0.0), |a, &b| a + b) / m as f64;
            let center = rest.polish_multiple(mean, m);
            if m > 1 && rest.valuation_at(center) < m {
                for z in members {
                    out.push((rest.polish_multiple(z, 1), 1));
                }
            } else {
                out.push((center, m));
            }
        }
        out
    }

    /// All roots with repetition.
    pub fn roots(&self) -> Vec<C64> {
        let mut out = Vec::new();
        for (z, m) in self.distinct_roots() {
            for _ in 0..m {
                out.push(z);
            }
        }
        out
    }

    fn aberth(&self) -> Vec<C64> {
        let n = self.degree();
        let lead = self.leading();
        let monic: Vec<C64> = self.coeffs.iter().map(|&c| c / lead).collect();
        let p = Poly { coeffs: monic };
        let dp = p.derivative();
        // Fujiwara-type bound for the initial circle
        let mut radius: f64 = 0.0;
        for k in 0..n {
            let c = p.coeffs[k].norm();
            radius = radius.max(c.powf(1.0 / (n - k) as f64));
        }
        radius = 2.0 * radius.max(1e-3);
        let mut z: Vec<C64> = (0..n)
            .map(|k| {
                let th = 0.4 + core::f64::consts::TAU * k as f64 / n as f64;
                C64::from_polar(radius * 0.5, th)
            })
            .collect();
        for _ in 0..ABERTH_MAX_ITER {
            let mut max_step: f64 = 0.0;
            for k in 0..n {
                let pv = p.eval(z[k]);
                if pv == C64::new(0.0, 0.0) {
                    continue;
                }
                let ratio = pv / dp.eval(z[k]);
                let mut s = C64::new(0.0, 0.0);
                for j in 0..n {
                    if j != k {
                        s += C64::new(1.0, 0.0) / (z[k] - z[j]);
                    }
                }
                let step = ratio / (C64::new(1.0, 0.0) - ratio * s);
                if step.is_finite() {
                    z[k] -= step;
                    max_step = max_step.max(step.norm() / (1.0 + z[k].norm()));
                }
            }
            if max_step < 1e-16 {
                break;
            }
        }
        z
    }

    /// Newton iteration on the `(m-1)`-th derivative, where a root of
    /// multiplicity `m` is simple.
    fn polish_multiple(&self, z0: C64, m: usize) -> C64 {
        let mut d = self.clone();
        for _ in 1..m {
            d = d.derivative();
        }
        let dd = d.derivative();
        let mut z = z0;
        for _ in 0..20 {
            let v = d.eval(z);
            let dv = dd.eval(z);
            if dv == C64::new(0.0, 0.0) {
                break;
            }
            let step = v / dv;
            if !step.is_finite() {
                break;
            }
            z -= step;
            if step.norm() <= 1e-17 * (1.0 + z.norm()) {
                break;
            }
        }
        if (z - z0).norm() > 1e-2 * (1.0 + z0.norm()) {
            z0
        } else {
            z
        }
    }
}

fn trim(v: &mut Vec<C64>) {
    if v.is_empty() {
        v.push(C64::new(0.0, 0.0));
        return;
    }
    let scale = v.iter().fold(0.0f64, |m, c| m.max(c.norm()));
    while v.len() > 1 {
        let last = v[v.len() - 1].norm();
        if last == 0.0 || last <= 1e-14 * scale {
            v.pop();
        } else {
            break;
        }
    }
}

/// Number of coefficients at the start of `c` that vanish relative to the
/// largest weighted coefficient `|c_k| rho^k`.
pub(crate) fn leading_zero_count(c: &[C64], rho: f64) -> usize {
    let mut w = 1.0;
    let mut weighted = Vec::with_capacity(c.len());
    for x in c {
        weighted.push(x.norm() * w);
        w *= rho;
    }
    let scale = weighted.iter().fold(0.0f64, |m, &x| m.max(x));
    if scale == 0.0 {
        return c.len();
    }
    weighted.iter().take_while(|&&x| x <= VANISH_TOL * scale).count()
}

fn cluster(z: &[C64]) -> Vec<Vec<C64>> {
    let n = z.len();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], i: usize) -> usize {
        let mut i = i;
        while p[i] != i {
            p[i] = p[p[i]];
            i = p[i];
        }
        i
    }
    for i in 0..n {
        for j in i + 1..n {
            let tol = CLUSTER_TOL * (1.0 + z[i].norm().max(z[j].norm()));
            if (z[i] - z[j]).norm() <= tol {
                let a = find(&mut parent, i);
                let b = find(&mut parent, j);
                parent[a] = b;
            }
        }
    }
    let mut groups: Vec<(usize, Vec<C64>)> = Vec::new();
    for i in 0..n {
        let r = find(&mut parent, i);
        match groups.iter_mut().find(|(k, _)| *k == r) {
            Some((_, g)) => g.push(z[i]),
            None => groups.push((r, vec![z[i]])),
        }
    }
    groups.into_iter().map(|(_, g)| g).collect()
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let mut v = vec![C64::new(0.0, 0.0); n];
        for (k, c) in self.coeffs.iter().enumerate() {
            v[k] += c;
        }
        for (k, c) in rhs.coeffs.iter().enumerate() {
            v[k] += c;
        }
        Poly::new(v)
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        self + &(-rhs)
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly { coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        let mut v = vec![C64::new(0.0, 0.0); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in rhs.coeffs.iter().enumerate() {
                v[i + j] += a * b;
            }
        }
        Poly::new(v)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{c, re};

    #[test]
    fn taylor_shift_matches_binomial_expansion() {
        // (z+1)^2 at z0 = 1  ->  (t+2)^2 = 4 + 4t + t^2
        let p = Poly::from_real(&[1.0, 2.0, 1.0]);
        let t = p.taylor_at(re(1.0));
        assert!((t[0] - re(4.0)).norm() < 1e-15);
        assert!((t[1] - re(4.0)).norm() < 1e-15);
        assert!((t[2] - re(1.0)).norm() < 1e-15);
    }

    #[test]
    fn multiple_roots_are_clustered() {
        let p = Poly::from_roots(c(2.0, 1.0), &[re(0.5), re(0.5), re(0.5), c(-1.0, 2.0), re(0.0), re(0.0)]);
        let mut roots = p.distinct_roots();
        roots.sort_by(|a, b| a.0.re.partial_cmp(&b.0.re).unwrap());
        assert_eq!(roots.len(), 3);
        assert_eq!(roots[0].1, 1);
        assert_eq!(roots[1].1, 2);
        assert_eq!(roots[2].1, 3);
        assert!((roots[2].0 - re(0.5)).norm() < 1e-10);
        assert!((roots[0].0 - c(-1.0, 2.0)).norm() < 1e-12);
    }

    #[test]
    fn deflate_removes_linear_factor() {
        let p = Poly::from_roots(re(1.0), &[re(2.0), c(0.0, 1.0)]);
        let q = p.deflate(re(2.0));
        assert_eq!(q.degree(), 1);
        assert!(q.eval(c(0.0, 1.0)).norm() < 1e-14);
    }

    #[test]
    fn valuation_detects_root_order() {
        let r = 0.171369891850665;
        let p = Poly::from_real(&[-1.0, r]); // r z - 1
        let sq = &p * &p;
        assert_eq!(sq.valuation_at(re(1.0 / r)), 2);
        assert_eq!(sq.valuation_at(re(1.0)), 0);
    }
}
