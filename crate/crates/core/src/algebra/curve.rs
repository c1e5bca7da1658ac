
use super::ComplexRational;
use crate::{Error, Result, C64};

/// `a(z) + b(z) w` on the curve `w^2 = f(z)`, or a plain rational function
/// of `z` when no curve is attached.
#[derive(Clone, Debug, PartialEq)]
pub struct CurveFunction {
    a: ComplexRational,
    b: ComplexRational,
    curve: Option<ComplexRational>,
}

impl CurveFunction {
    pub fn rational(a: ComplexRational) -> Self {
        CurveFunction { a, b: ComplexRational::zero(), curve: None }
    }

    pub fn on_curve(a: ComplexRational, b: ComplexRational, f: ComplexRational) -> Self {
        CurveFunction { a, b, curve: Some(f) }
    }

    /// The same function regarded on the curve `w^2 = f`.
    pub fn lifted_to(&self, f: &ComplexRational) -> Result<Self> {
        match &self.curve {
            Some(g) if g != f => Err(Error::CurveMismatch),
            _ => Ok(CurveFunction { a: self.a.clone(), b: self.b.clone(), curve: Some(f.clone()) }),
        }
    }

    /// The coordinate `w` itself.
    pub fn w(f: ComplexRational) -> Self {
        Self::on_curve(ComplexRational::zero(), ComplexRational::one(), f)
    }

    pub fn a(&self) -> &ComplexRational {
        &self.a
    }

    pub fn b(&self) -> &ComplexRational {
        &self.b
    }

    pub fn curve_rhs(&self) -> Option<&ComplexRational> {
        self.curve.as_ref()
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    fn joint_curve(&self, rhs: &CurveFunction) -> Result<Option<ComplexRational>> {
        match (&self.curve, &rhs.curve) {
            (Some(f), Some(g)) if f != g => Err(Error::CurveMismatch),
            (Some(f), _) | (None, Some(f)) => Ok(Some(f.clone())),
            (None, None) => Ok(None),
        }
    }

    fn with(a: ComplexRational, b: ComplexRational, curve: Option<ComplexRational>) -> Self {
        match curve {
            Some(_) => CurveFunction { a, b, curve },
            None => CurveFunction { a, b: ComplexRational::zero(), curve: None },
        }
    }

    /// Value at `(z, w)`. `w` is required when `b` is nonzero.
    pub fn eval(&self, z: C64, w: Option<C64>) -> Result<C64> {
        let a = self.a.eval(z)?;
        if self.b.is_zero() {
            return Ok(a);
        }
        let w = w.ok_or(Error::NotOnDomain)?;
        Ok(a + self.b.eval(z)? * w)
    }

    /// `(A(z), B(z))` with the value `A + B w`, skipping pole detection.
    pub fn parts_unchecked(&self, z: C64) -> (C64, C64) {
        let a = if self.a.is_zero() { C64::new(0.0, 0.0) } else { self.a.eval_unchecked(z) };
        let b = if self.b.is_zero() { C64::new(0.0, 0.0) } else { self.b.eval_unchecked(z) };
        (a, b)
    }

    pub fn eval_unchecked(&self, z: C64, w: Option<C64>) -> C64 {
        let (a, b) = self.parts_unchecked(z);
        match w {
            Some(w) => a + b * w,
            None => a,
        }
    }

    /// Product reduced by `w^2 -> f`.
    pub fn mul(&self, rhs: &CurveFunction) -> Result<Self> {
        let curve = self.joint_curve(rhs)?;
        let mut a = &self.a * &rhs.a;
        let b = &(&self.a * &rhs.b) + &(&self.b * &rhs.a);
        if let Some(f) = &curve {
            let bb = &(&self.b * &rhs.b) * f;
            a = &a + &bb;
        }
        Ok(Self::with(a, b, curve))
    }

    pub fn add(&self, rhs: &CurveFunction) -> Result<Self> {
        let curve = self.joint_curve(rhs)?;
        Ok(Self::with(&self.a + &rhs.a, &self.b + &rhs.b, curve))
    }

    pub fn sub(&self, rhs: &CurveFunction) -> Result<Self> {
        self.add(&rhs.scale(C64::new(-1.0, 0.0)))
    }

    pub fn scale(&self, s: C64) -> Self {
        CurveFunction { a: self.a.scale(s), b: self.b.scale(s), curve: self.curve.clone() }
    }

    /// The image under the sheet swap `w -> -w`.
    pub fn sheet_swapped(&self) -> Self {
        CurveFunction { a: self.a.clone(), b: -&self.b, curve: self.curve.clone() }
    }

    /// `F * F(w -> -w) = a^2 - b^2 f`, a rational function of `z`.
    pub fn norm(&self) -> ComplexRational {
        let aa = &self.a * &self.a;
        match &self.curve {
            Some(f) => &aa - &(&(&self.b * &self.b) * f),
            None => aa,
        }
    }

    /// `1 / (a + b w) = (a - b w) / (a^2 - b^2 f)`
    pub fn inverse(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::IdenticallyZero);
        }
        let n = self.norm().inverse()?;
        Ok(Self::with(&self.a * &n, &(-&self.b) * &n, self.curve.clone()))
    }

    pub fn div(&self, rhs: &CurveFunction) -> Result<Self> {
        self.mul(&rhs.inverse()?)
    }

    /// `d/dz` using `dw/dz = f' w / (2 f)`.
    pub fn derivative(&self) -> Self {
        let da = self.a.derivative();
        match &self.curve {
            None => Self::rational(da),
            Some(f) => {
                let half_log = (&f.derivative() / &f.scale(C64::new(2.0, 0.0)))
                    .unwrap_or_else(|_| ComplexRational::zero());
                let db = &self.b.derivative() + &(&self.b * &half_log);
                Self::on_curve(da, db, f.clone())
            }
        }
    }
}

/// A meromorphic one-form `F dz`.
#[derive(Clone, Debug, PartialEq)]
pub struct MeromorphicForm {
    pub coeff: CurveFunction,
}

impl MeromorphicForm {
    pub fn new(coeff: CurveFunction) -> Self {
        MeromorphicForm { coeff }
    }

    /// The exact form `dF`.
    pub fn exact(potential: &CurveFunction) -> Self {
        MeromorphicForm { coeff: potential.derivative() }
    }

    /// Multiplies the coefficient by a function.
    pub fn times(&self, g: &CurveFunction) -> Result<Self> {
        Ok(MeromorphicForm { coeff: self.coeff.mul(g)? })
    }

    pub fn over(&self, g: &CurveFunction) -> Result<Self> {
        Ok(MeromorphicForm { coeff: self.coeff.div(g)? })
    }

    pub fn add(&self, rhs: &MeromorphicForm) -> Result<Self> {
        Ok(MeromorphicForm { coeff: self.coeff.add(&rhs.coeff)? })
    }

    pub fn scale(&self, s: C64) -> Self {
        MeromorphicForm { coeff: self.coeff.scale(s) }
    }

    pub fn eval(&self, z: C64, w: Option<C64>) -> Result<C64> {
        self.coeff.eval(z, w)
    }

    pub fn magnitude(&self, z: C64, w: Option<C64>) -> f64 {
        self.coeff.eval_unchecked(z, w).norm()
    }
}
