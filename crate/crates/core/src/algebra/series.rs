//! Truncated Laurent series in a local parameter `t`.

use alloc::vec;
use alloc::vec::Vec;


use crate::poly::{leading_zero_count, Poly, VANISH_TOL};
use crate::{Error, Result, C64};

pub(crate) const TERMS: usize = 28;

const ZERO: C64 = C64::new(0.0, 0.0);

/// `sum_k coeffs[k] t^(val + k)`; `coeffs[0]` is nonzero unless the series is
/// zero to working precision (`coeffs` empty).
#[derive(Clone, Debug)]
pub(crate) struct Laurent {
    pub val: i32,
    pub coeffs: Vec<C64>,
}

/// How `z` depends on the local parameter `t`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub(crate) enum Substitution {
    /// `z = z0 + t^step`
    Finite { z0: C64, step: u32 },
    /// `z = t^-step`
    Infinity { step: u32 },
}

impl Laurent {
    pub fn zero() -> Self {
        Laurent { val: 0, coeffs: Vec::new() }
    }

    pub fn constant(c: C64) -> Self {
        Self::from_raw(0, vec![c])
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub(crate) fn from_raw(val: i32, mut coeffs: Vec<C64>) -> Self {
        let lead = coeffs.iter().take_while(|c| **c == ZERO).count();
        if lead == coeffs.len() {
            return Self::zero();
        }
        coeffs.drain(..lead);
        // inputs are exact beyond their length
        coeffs.resize(TERMS, ZERO);
        Laurent { val: val + lead as i32, coeffs }
    }

    /// Expansion of a polynomial under the substitution.
    pub fn of_poly(p: &Poly, sub: Substitution) -> Self {
        match sub {
            Substitution::Finite { z0, step } => {
                let mut t = p.taylor_at(z0);
                let zeros = leading_zero_count(&t, 1.0f64.max(z0.norm()));
                for x in t.iter_mut().take(zeros) {
                    *x = ZERO;
                }
                let mut v = vec![ZERO; (t.len() - 1) * step as usize + 1];
                for (j, c) in t.iter().enumerate() {
                    v[j * step as usize] = *c;
                }
                Self::from_raw(0, v)
            }
            Substitution::Infinity { step } => {
                let rev = p.reversed();
                let n = p.degree();
                let mut v = vec![ZERO; n * step as usize + 1];
                for (j, c) in rev.iter().enumerate() {
                    v[j * step as usize] = *c;
                }
                Self::from_raw(-((n * step as usize) as i32), v)
            }
        }
    }

    pub fn mul(&self, rhs: &Laurent) -> Laurent {
        if self.is_zero() || rhs.is_zero() {
            return Self::zero();
        }
        let n = self.coeffs.len().min(rhs.coeffs.len());
        let mut v = vec![ZERO; n];
        for (i, a) in self.coeffs.iter().enumerate().take(n) {
            for (j, b) in rhs.coeffs.iter().enumerate().take(n - i) {
                v[i + j] += a * b;
            }
        }
        Self::from_raw(self.val + rhs.val, v)
    }

    pub fn inv(&self) -> Result<Laurent> {
        if self.is_zero() {
            return Err(Error::IdenticallyZero);
        }
        let n = self.coeffs.len();
        let a0 = self.coeffs[0];
        let mut b = vec![ZERO; n];
        b[0] = C64::new(1.0, 0.0) / a0;
        for k in 1..n {
            let mut s = ZERO;
            for j in 1..=k {
                s += self.coeffs[j] * b[k - j];
            }
            b[k] = -s / a0;
        }
        Ok(Self::from_raw(-self.val, b))
    }

    pub fn div(&self, rhs: &Laurent) -> Result<Laurent> {
        Ok(self.mul(&rhs.inv()?))
    }

    /// Sum with cancellation detection relative to the addends.
    pub fn add(&self, rhs: &Laurent) -> Laurent {
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        let lo = self.val.min(rhs.val);
        let hi = (self.val + self.coeffs.len() as i32).min(rhs.val + rhs.coeffs.len() as i32);
        if hi <= lo {
            return Self::zero();
        }
        let at = |s: &Laurent, e: i32| -> C64 {
            let k = e - s.val;
            if k >= 0 && (k as usize) < s.coeffs.len() {
                s.coeffs[k as usize]
            } else {
                ZERO
            }
        };
        let mut v = Vec::with_capacity((hi - lo) as usize);
        let mut leading = true;
        for e in lo..hi {
            let (a, b) = (at(self, e), at(rhs, e));
            let s = a + b;
            if leading && s.norm() <= VANISH_TOL * (a.norm() + b.norm()) {
                v.push(ZERO);
            } else {
                leading = false;
                v.push(s);
            }
        }
        Self::from_raw(lo, v)
    }

    /// Square root with leading coefficient closest to `hint`.
    pub fn sqrt(&self, hint: Option<C64>) -> Result<Laurent> {
        if self.is_zero() {
            return Ok(Self::zero());
        }
        if self.val % 2 != 0 {
            return Err(Error::InvalidInput("square root of odd-order series"));
        }
        let n = self.coeffs.len();
        let mut s = vec![ZERO; n];
        let mut s0 = self.coeffs[0].sqrt();
        if let Some(h) = hint {
            if (h + s0).norm() < (h - s0).norm() {
                s0 = -s0;
            }
        }
        s[0] = s0;
        for k in 1..n {
            let mut acc = self.coeffs[k];
            for j in 1..k {
                acc -= s[j] * s[k - j];
            }
            s[k] = acc / (s0 * 2.0);
        }
        Ok(Self::from_raw(self.val / 2, s))
    }

    /// Coefficient of `t^e`.
    pub fn coeff(&self, e: i32) -> C64 {
        let k = e - self.val;
        if k >= 0 && (k as usize) < self.coeffs.len() {
            self.coeffs[k as usize]
        } else {
            ZERO
        }
    }
}
