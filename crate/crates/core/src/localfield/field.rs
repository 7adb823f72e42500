use std::fmt::Debug;

use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::padic::PadicNumber;
use crate::error::{Error, Result};

/// A real scalar guaranteed finite.
#[derive(Clone, Copy, Debug, PartialEq, PartialOrd, serde::Serialize)]
pub struct RealScalar(f64);

impl RealScalar {
    pub fn new(x: f64) -> Result<Self> {
        if x.is_finite() {
            Ok(Self(x))
        } else {
            Err(Error::InvalidArgument(format!("non-finite real {x}")))
        }
    }

    pub fn get(self) -> f64 {
        self.0
    }

    pub fn norm(self) -> f64 {
        self.0.abs()
    }
}

/// Scalar arithmetic for one place, so linear algebra can be written once.
///
/// `norm` is only used to choose pivots; `is_zero` decides what counts as zero
/// (exact for ℚ, tolerance-based for floats, "no known digits" for ℚ_p).
pub trait Field {
    type Elem: Clone + Debug;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn from_rational(&self, r: &BigRational) -> Result<Self::Elem>;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn inv(&self, a: &Self::Elem) -> Result<Self::Elem>;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    fn norm(&self, a: &Self::Elem) -> f64;

    fn div(&self, a: &Self::Elem, b: &Self::Elem) -> Result<Self::Elem> {
        Ok(self.mul(a, &self.inv(b)?))
    }
}

#[derive(Clone, Copy, Debug, Default)]
pub struct RationalField;

impl Field for RationalField {
    type Elem = BigRational;

    fn zero(&self) -> BigRational {
        BigRational::zero()
    }
    fn one(&self) -> BigRational {
        BigRational::one()
    }
    fn from_rational(&self, r: &BigRational) -> Result<BigRational> {
        Ok(r.clone())
    }
    fn add(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a + b
    }
    fn sub(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a - b
    }
    fn mul(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a * b
    }
    fn neg(&self, a: &BigRational) -> BigRational {
        -a
    }
    fn inv(&self, a: &BigRational) -> Result<BigRational> {
        if a.is_zero() {
            Err(Error::DivisionByZero)
        } else {
            Ok(a.recip())
        }
    }
    fn is_zero(&self, a: &BigRational) -> bool {
        a.is_zero()
    }
    fn norm(&self, a: &BigRational) -> f64 {
        a.abs().to_f64().unwrap_or(f64::INFINITY)
    }
}

/// Floating-point reals; values below `eps` in magnitude count as zero.
#[derive(Clone, Copy, Debug)]
pub struct RealField {
    pub eps: f64,
}

impl Default for RealField {
    fn default() -> Self {
        Self { eps: 1e-12 }
    }
}

impl Field for RealField {
    type Elem = f64;

    fn zero(&self) -> f64 {
        0.0
    }
    fn one(&self) -> f64 {
        1.0
    }
    fn from_rational(&self, r: &BigRational) -> Result<f64> {
        r.to_f64().ok_or_else(|| Error::InvalidArgument(format!("{r} not representable")))
    }
    fn add(&self, a: &f64, b: &f64) -> f64 {
        a + b
    }
    fn sub(&self, a: &f64, b: &f64) -> f64 {
        a - b
    }
    fn mul(&self, a: &f64, b: &f64) -> f64 {
        a * b
    }
    fn neg(&self, a: &f64) -> f64 {
        -a
    }
    fn inv(&self, a: &f64) -> Result<f64> {
        if self.is_zero(a) {
            Err(Error::DivisionByZero)
        } else {
            Ok(1.0 / a)
        }
    }
    fn is_zero(&self, a: &f64) -> bool {
        a.abs() <= self.eps
    }
    fn norm(&self, a: &f64) -> f64 {
        a.abs()
    }
}

#[derive(Clone, Copy, Debug)]
pub struct ComplexField {
    pub eps: f64,
}

impl Default for ComplexField {
    fn default() -> Self {
        Self { eps: 1e-12 }
    }
}

impl Field for ComplexField {
    type Elem = Complex64;

    fn zero(&self) -> Complex64 {
        Complex64::zero()
    }
    fn one(&self) -> Complex64 {
        Complex64::one()
    }
    fn from_rational(&self, r: &BigRational) -> Result<Complex64> {
        Ok(Complex64::new(RealField::default().from_rational(r)?, 0.0))
    }
    fn add(&self, a: &Complex64, b: &Complex64) -> Complex64 {
        a + b
    }
    fn sub(&self, a: &Complex64, b: &Complex64) -> Complex64 {
        a - b
    }
    fn mul(&self, a: &Complex64, b: &Complex64) -> Complex64 {
        a * b
    }
    fn neg(&self, a: &Complex64) -> Complex64 {
        -a
    }
    fn inv(&self, a: &Complex64) -> Result<Complex64> {
        if self.is_zero(a) {
            Err(Error::DivisionByZero)
        } else {
            Ok(a.inv())
        }
    }
    fn is_zero(&self, a: &Complex64) -> bool {
        a.norm() <= self.eps
    }
    fn norm(&self, a: &Complex64) -> f64 {
        a.norm()
    }
}

/// ℚ_p with a fixed significant-digit window.
#[derive(Clone, Copy, Debug)]
pub struct PadicField {
    pub p: u64,
    pub precision: u32,
}

impl PadicField {
    pub fn new(p: u64, precision: u32) -> Result<Self> {
        crate::arith::check_prime(p)?;
        Ok(Self { p, precision })
    }
}

impl Field for PadicField {
    type Elem = PadicNumber;

    fn zero(&self) -> PadicNumber {
        PadicNumber::zero(self.p)
    }
    fn one(&self) -> PadicNumber {
        PadicNumber::one(self.p, self.precision)
    }
    fn from_rational(&self, r: &BigRational) -> Result<PadicNumber> {
        PadicNumber::from_ratio(r, self.p, self.precision)
    }
    fn add(&self, a: &PadicNumber, b: &PadicNumber) -> PadicNumber {
        a + b
    }
    fn sub(&self, a: &PadicNumber, b: &PadicNumber) -> PadicNumber {
        a - b
    }
    fn mul(&self, a: &PadicNumber, b: &PadicNumber) -> PadicNumber {
        a * b
    }
    fn neg(&self, a: &PadicNumber) -> PadicNumber {
        -a
    }
    fn inv(&self, a: &PadicNumber) -> Result<PadicNumber> {
        a.inv()
    }
    fn is_zero(&self, a: &PadicNumber) -> bool {
        a.is_zero()
    }
    fn norm(&self, a: &PadicNumber) -> f64 {
        a.norm()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn real_scalar_rejects_nan() {
        assert!(RealScalar::new(f64::NAN).is_err());
        assert!(RealScalar::new(f64::INFINITY).is_err());
        assert_eq!(RealScalar::new(-2.5).unwrap().norm(), 2.5);
    }

    #[test]
    fn padic_field_roundtrip() {
        let f = PadicField::new(5, 16).unwrap();
        let a = f.from_rational(&crate::arith::rat(3, 10)).unwrap();
        let b = f.inv(&a).unwrap();
        let one = f.mul(&a, &b);
        assert!(f.is_zero(&f.sub(&one, &f.one())));
        assert_eq!(a.valuation(), Some(-1));
    }
}
