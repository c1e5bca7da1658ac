use alloc::vec;
use alloc::vec::Vec;
use core::ops::{Add, Div, Mul, Neg, Sub};

#[allow(unused_imports)]
use num_traits::Float;

use crate::poly::{leading_zero_count, Poly, ROOT_MATCH_TOL};
use crate::{Error, Result, C64};

/// A ratio of complex polynomials, kept reduced: numerator and denominator
/// share no root and the denominator is monic.
#[derive(Clone, Debug, PartialEq)]
pub struct ComplexRational {
    num: Poly,
    den: Poly,
}

impl ComplexRational {
    /// Builds and reduces `num / den`.
    pub fn new(num: Poly, den: Poly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::InvalidInput("zero denominator"));
        }
        Ok(Self::reduce(num, den))
    }

    pub fn from_poly(p: Poly) -> Self {
        ComplexRational { num: p, den: Poly::one() }
    }

    pub fn constant(c: C64) -> Self {
        Self::from_poly(Poly::constant(c))
    }

    pub fn zero() -> Self {
        Self::from_poly(Poly::zero())
    }

    pub fn one() -> Self {
        Self::from_poly(Poly::one())
    }

    /// The coordinate function `z`.
    pub fn z() -> Self {
        Self::from_poly(Poly::monomial(C64::new(1.0, 0.0), 1))
    }

    /// `lead * prod (z - zeros) / prod (z - poles)`
    pub fn from_roots(lead: C64, zeros: &[C64], poles: &[C64]) -> Self {
        Self::reduce(Poly::from_roots(lead, zeros), Poly::from_roots(C64::new(1.0, 0.0), poles))
    }

    pub fn numerator(&self) -> &Poly {
        &self.num
    }

    pub fn denominator(&self) -> &Poly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    fn reduce(num: Poly, den: Poly) -> Self {
        if num.is_zero() {
            return ComplexRational { num, den: Poly::one() };
        }
        // powers of z are split off exactly so deflation cannot smear them
        let vn = leading_zero_count(num.coeffs(), 1.0);
        let vd = leading_zero_count(den.coeffs(), 1.0);
        let mut num = Poly::new(num.coeffs()[vn..].to_vec());
        let mut den = Poly::new(den.coeffs()[vd..].to_vec());
        for (root, mult) in den.clone().distinct_roots() {
            let shared = mult.min(num.valuation_at(root));
            for _ in 0..shared {
                num = num.deflate(root);
                den = den.deflate(root);
            }
        }
        let k = vn.min(vd);
        let shift = |p: Poly, m: usize| {
            let mut c = vec![C64::new(0.0, 0.0); m];
            c.extend_from_slice(p.coeffs());
            Poly::new(c)
        };
        let num = shift(num, vn - k);
        let den = shift(den, vd - k);
        let lead = den.leading();
        ComplexRational {
            num: num.scale(C64::new(1.0, 0.0) / lead),
            den: den.scale(C64::new(1.0, 0.0) / lead),
        }
    }

    /// Value at `z`; a pole reports its order.
    pub fn eval(&self, z: C64) -> Result<C64> {
        let d = self.den.eval(z);
        let scale = self.den.max_abs_coeff() * (1.0 + z.norm()).powi(self.den.degree() as i32);
        if d.norm() <= ROOT_MATCH_TOL * scale {
            let order = self.den.valuation_at(z) as i64 - self.num.valuation_at(z) as i64;
            if order > 0 {
                return Err(Error::Pole { order: order as u32 });
            }
        }
        Ok(self.num.eval(z) / d)
    }

    /// Value at `z` without pole detection (may be infinite).
    pub fn eval_unchecked(&self, z: C64) -> C64 {
        self.num.eval(z) / self.den.eval(z)
    }

    /// Vanishing order at a finite point (negative for poles).
    pub fn order_at(&self, z0: C64) -> Result<i32> {
        if self.is_zero() {
            return Err(Error::IdenticallyZero);
        }
        Ok(self.num.valuation_at(z0) as i32 - self.den.valuation_at(z0) as i32)
    }

    /// Vanishing order at infinity in the chart `zeta = 1 / z`.
    pub fn order_at_infinity(&self) -> Result<i32> {
        if self.is_zero() {
            return Err(Error::IdenticallyZero);
        }
        Ok(self.den.degree() as i32 - self.num.degree() as i32)
    }

    /// Mapping degree onto the Riemann sphere.
    pub fn degree(&self) -> Result<usize> {
        if self.is_zero() {
            return Err(Error::IdenticallyZero);
        }
        Ok(self.num.degree().max(self.den.degree()))
    }

    /// Zeros and poles with orders, `None` standing for infinity.
    pub fn divisor(&self) -> Result<Vec<(Option<C64>, i32)>> {
        if self.is_zero() {
            return Err(Error::IdenticallyZero);
        }
        let mut out: Vec<(Option<C64>, i32)> = Vec::new();
        for (z, m) in self.num.distinct_roots() {
            out.push((Some(z), m as i32));
        }
        for (z, m) in self.den.distinct_roots() {
            out.push((Some(z), -(m as i32)));
        }
        let inf = self.order_at_infinity()?;
        if inf != 0 {
            out.push((None, inf));
        }
        Ok(out)
    }

    pub fn derivative(&self) -> Self {
        // (n' d - n d') / d^2
        let n1 = &self.num.derivative() * &self.den;
        let n2 = &self.num * &self.den.derivative();
        Self::reduce(&n1 - &n2, &self.den * &self.den)
    }

    pub fn scale(&self, s: C64) -> Self {
        ComplexRational { num: self.num.scale(s), den: self.den.clone() }
    }

    pub fn inverse(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::IdenticallyZero);
        }
        Ok(Self::reduce(self.den.clone(), self.num.clone()))
    }

    pub fn powi(&self, k: u32) -> Self {
        let mut out = Self::one();
        for _ in 0..k {
            out = &out * self;
        }
        out
    }
}

impl Add for &ComplexRational {
    type Output = ComplexRational;
    fn add(self, rhs: &ComplexRational) -> ComplexRational {
        if self.den == rhs.den {
            return ComplexRational::reduce(&self.num + &rhs.num, self.den.clone());
        }
        let n = &(&self.num * &rhs.den) + &(&rhs.num * &self.den);
        ComplexRational::reduce(n, &self.den * &rhs.den)
    }
}

impl Sub for &ComplexRational {
    type Output = ComplexRational;
    fn sub(self, rhs: &ComplexRational) -> ComplexRational {
        self + &(-rhs)
    }
}

impl Neg for &ComplexRational {
    type Output = ComplexRational;
    fn neg(self) -> ComplexRational {
        ComplexRational { num: -&self.num, den: self.den.clone() }
    }
}

impl Mul for &ComplexRational {
    type Output = ComplexRational;
    fn mul(self, rhs: &ComplexRational) -> ComplexRational {
        ComplexRational::reduce(&self.num * &rhs.num, &self.den * &rhs.den)
    }
}

impl Div for &ComplexRational {
    type Output = Result<ComplexRational>;
    fn div(self, rhs: &ComplexRational) -> Result<ComplexRational> {
        if rhs.is_zero() {
            return Err(Error::IdenticallyZero);
        }
        Ok(ComplexRational::reduce(&self.num * &rhs.den, &self.den * &rhs.num))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{c, re};

    fn sample() -> ComplexRational {
        // z^3 (z - 1) / (z + 1)
        ComplexRational::from_roots(re(1.0), &[re(0.0), re(0.0), re(0.0), re(1.0)], &[re(-1.0)])
    }

    #[test]
    fn eval_at_numerator_root() {
        assert_eq!(sample().eval(re(0.0)).unwrap(), re(0.0));
    }

    #[test]
    fn eval_at_denominator_root_signals_pole() {
        assert_eq!(sample().eval(re(-1.0)), Err(Error::Pole { order: 1 }));
    }

    #[test]
    fn eval_at_two() {
        let v = sample().eval(re(2.0)).unwrap();
        assert!((v - re(8.0 / 3.0)).norm() < 1e-14);
    }

    #[test]
    fn degree_examples() {
        assert_eq!(sample().degree().unwrap(), 4);
        let z2 = ComplexRational::from_poly(Poly::monomial(re(1.0), 2));
        assert_eq!(z2.degree().unwrap(), 2);
    }

    #[test]
    fn product_cancels_common_factors() {
        // z^3 (rz-1)/(z+r) * i (rz-1)(z+r)/z^2 = i z (rz-1)^2
        let r = 0.7;
        let g = ComplexRational::from_roots(re(r), &[re(0.0), re(0.0), re(0.0), re(1.0 / r)], &[re(-r)]);
        let phi = ComplexRational::from_roots(c(0.0, r), &[re(1.0 / r), re(-r)], &[re(0.0), re(0.0)]);
        let prod = &g * &phi;
        assert_eq!(prod.denominator().degree(), 0);
        assert_eq!(prod.numerator().degree(), 3);
        let z = c(0.3, -0.8);
        let direct = c(0.0, 1.0) * z * (z * r - 1.0) * (z * r - 1.0);
        assert!((prod.eval(z).unwrap() - direct).norm() < 1e-13);
    }

    #[test]
    fn zero_function_has_no_order() {
        assert_eq!(ComplexRational::zero().order_at(re(1.0)), Err(Error::IdenticallyZero));
    }

    #[test]
    fn divisor_orders_sum_to_zero() {
        let f = ComplexRational::from_roots(c(1.0, 2.0), &[re(0.5), re(0.5), c(0.0, 3.0)], &[re(-2.0)]);
        let total: i32 = f.divisor().unwrap().iter().map(|(_, k)| k).sum();
        assert_eq!(total, 0);
    }
}
