use num_bigint::BigUint;
use num_complex::Complex64;
use num_traits::{ToPrimitive, Zero};
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::arith::pow_big;

/// A point of `Q/Z` with p-power denominator: the phase `r / p^n` of the Tate
/// character, denoting `exp(2πi r / p^n)`. Always stored reduced, in `[0, 1)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CharacterPhase {
    p: u64,
    exponent: u32,
    numerator: BigUint,
}

impl CharacterPhase {
    pub fn zero(p: u64) -> Self {
        Self { p, exponent: 0, numerator: BigUint::zero() }
    }

    /// `r / p^n` reduced into `[0, 1)` and lowest terms.
    pub fn new(p: u64, n: u32, r: BigUint) -> Self {
        let mut s = Self { p, exponent: n, numerator: r % pow_big(p, n) };
        s.reduce();
        s
    }

    fn reduce(&mut self) {
        let pb = BigUint::from(self.p);
        if self.numerator.is_zero() {
            self.exponent = 0;
            return;
        }
        while self.exponent > 0 && (&self.numerator % &pb).is_zero() {
            self.numerator /= &pb;
            self.exponent -= 1;
        }
    }

    pub fn is_zero(&self) -> bool {
        self.numerator.is_zero()
    }

    pub fn exponent(&self) -> u32 {
        self.exponent
    }

    /// `(r, p^n)`.
    pub fn as_ratio(&self) -> (BigUint, BigUint) {
        (self.numerator.clone(), pow_big(self.p, self.exponent))
    }

    /// Sum modulo 1.
    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.p, other.p);
        let n = self.exponent.max(other.exponent);
        let a = &self.numerator * pow_big(self.p, n - self.exponent);
        let b = &other.numerator * pow_big(self.p, n - other.exponent);
        Self::new(self.p, n, a + b)
    }

    /// `-phase` modulo 1 (complex conjugate of the character value).
    pub fn neg(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let m = pow_big(self.p, self.exponent);
        Self::new(self.p, self.exponent, &m - &self.numerator)
    }

    /// Numerator of the phase written over `p^depth` (`None` if the denominator is larger
    /// or the value does not fit).
    pub fn index_at_depth(&self, depth: u32) -> Option<u64> {
        if self.exponent > depth {
            return None;
        }
        (&self.numerator * pow_big(self.p, depth - self.exponent)).to_u64()
    }

    pub fn as_f64(&self) -> f64 {
        if self.is_zero() {
            return 0.0;
        }
        // Keep only the leading digits; f64 cannot resolve more anyway.
        let extra = self.exponent.saturating_sub(30);
        let num = (&self.numerator / pow_big(self.p, extra)).to_f64().unwrap();
        let den = pow_big(self.p, self.exponent - extra).to_f64().unwrap();
        num / den
    }

    pub fn value(&self) -> Complex64 {
        Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * self.as_f64())
    }
}

/// `{p, n, r}` with `r` as a decimal string.
impl Serialize for CharacterPhase {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("CharacterPhase", 3)?;
        st.serialize_field("p", &self.p)?;
        st.serialize_field("n", &self.exponent)?;
        st.serialize_field("r", &self.numerator.to_string())?;
        st.end()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reduction_and_arithmetic() {
        let a = CharacterPhase::new(3, 2, 3u32.into());
        assert_eq!(a, CharacterPhase::new(3, 1, 1u32.into()));
        let b = CharacterPhase::new(3, 1, 2u32.into());
        assert!(a.add(&b).is_zero());
        assert_eq!(a.neg(), b);
        assert_eq!(a.index_at_depth(3), Some(9));
        assert_eq!(CharacterPhase::new(5, 3, 125u32.into()), CharacterPhase::zero(5));
    }
}
