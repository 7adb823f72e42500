use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use super::character::CharacterPhase;
use crate::arith::{self, check_prime, inv_mod_big, mod_big, pow_big, split_valuation};
use crate::error::{Error, Result};

/// Default number of significant base-p digits carried by a [`PadicNumber`].
pub const DEFAULT_PRECISION: u32 = 64;

/// A p-adic number with a finite window of significant digits.
///
/// Nonzero values are `p^v * u` with `u` a unit known modulo `p^precision`.
/// Exact zero is a distinguished state. When a subtraction cancels every known
/// digit the result is a *vanishing* value: known only to lie in `p^abs Z_p`.
/// Anything that needs digits beyond what is known reports
/// [`Error::PrecisionExhausted`] instead of guessing.
#[derive(Clone, PartialEq, Eq)]
pub struct PadicNumber {
    p: u64,
    repr: Repr,
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Repr {
    Zero,
    Vanishing { abs: i64 },
    Unit { valuation: i64, unit: BigUint, precision: u32 },
}

impl PadicNumber {
    /// Expansion of `a/b` with `precision` significant digits.
    pub fn from_rational(a: &BigInt, b: &BigInt, p: u64, precision: u32) -> Result<Self> {
        check_prime(p)?;
        if b.is_zero() {
            return Err(Error::ZeroDenominator);
        }
        if precision == 0 {
            return Err(Error::InvalidArgument("precision must be positive".into()));
        }
        if a.is_zero() {
            return Ok(Self::zero(p));
        }
        let (va, ua) = split_valuation(a, p);
        let (vb, ub) = split_valuation(b, p);
        let modulus = pow_big(p, precision);
        let ub = mod_big(&ub, &modulus);
        let inv = inv_mod_big(&ub, &modulus).expect("unit is invertible");
        let unit = (mod_big(&ua, &modulus) * inv) % &modulus;
        Ok(Self {
            p,
            repr: Repr::Unit { valuation: va - vb, unit, precision },
        })
    }

    pub fn from_ratio(r: &BigRational, p: u64, precision: u32) -> Result<Self> {
        Self::from_rational(r.numer(), r.denom(), p, precision)
    }

    pub fn from_i64(a: i64, b: i64, p: u64, precision: u32) -> Result<Self> {
        Self::from_rational(&BigInt::from(a), &BigInt::from(b), p, precision)
    }

    /// `p^valuation * unit` where `unit` is an integer prime to `p`.
    pub fn from_parts(p: u64, valuation: i64, unit: &BigInt, precision: u32) -> Result<Self> {
        let x = Self::from_rational(unit, &BigInt::one(), p, precision)?;
        if x.valuation() != Some(0) {
            return Err(Error::InvalidArgument(format!("{unit} is not a {p}-adic unit")));
        }
        Ok(x.shift(valuation))
    }

    pub fn zero(p: u64) -> Self {
        Self { p, repr: Repr::Zero }
    }

    pub fn one(p: u64, precision: u32) -> Self {
        Self {
            p,
            repr: Repr::Unit { valuation: 0, unit: BigUint::one(), precision },
        }
    }

    pub fn prime(&self) -> u64 {
        self.p
    }

    /// Valuation of a value known to be nonzero; `None` for zero or vanishing values.
    pub fn valuation(&self) -> Option<i64> {
        match &self.repr {
            Repr::Unit { valuation, .. } => Some(*valuation),
            _ => None,
        }
    }

    /// Significant digits carried (0 for zero and vanishing values).
    pub fn precision(&self) -> u32 {
        match &self.repr {
            Repr::Unit { precision, .. } => *precision,
            _ => 0,
        }
    }

    /// Exponent up to which the value is known (`None` means exact zero).
    pub fn absolute_precision(&self) -> Option<i64> {
        match &self.repr {
            Repr::Zero => None,
            Repr::Vanishing { abs } => Some(*abs),
            Repr::Unit { valuation, precision, .. } => Some(valuation + *precision as i64),
        }
    }

    pub fn is_exact_zero(&self) -> bool {
        matches!(self.repr, Repr::Zero)
    }

    /// True when every known digit cancelled.
    pub fn is_vanishing(&self) -> bool {
        matches!(self.repr, Repr::Vanishing { .. })
    }

    /// Zero or vanishing.
    pub fn is_zero(&self) -> bool {
        !matches!(self.repr, Repr::Unit { .. })
    }

    /// The unit part as an integer in `[0, p^precision)`.
    pub fn unit(&self) -> Option<&BigUint> {
        match &self.repr {
            Repr::Unit { unit, .. } => Some(unit),
            _ => None,
        }
    }

    /// Base-p digits `d_0 .. d_{N-1}` of the unit part.
    pub fn digits(&self) -> Vec<u32> {
        match &self.repr {
            Repr::Unit { unit, precision, .. } => {
                let mut out = Vec::with_capacity(*precision as usize);
                let pb = BigUint::from(self.p);
                let mut u = unit.clone();
                for _ in 0..*precision {
                    let (q, r) = u.div_rem(&pb);
                    out.push(r.to_u32().unwrap());
                    u = q;
                }
                out
            }
            _ => Vec::new(),
        }
    }

    /// Unit part reduced modulo `p^k`, as `u64`.
    pub fn unit_residue(&self, k: u32) -> Result<u64> {
        let Repr::Unit { unit, precision, .. } = &self.repr else {
            return Err(Error::InvalidArgument("zero has no unit part".into()));
        };
        if k > *precision {
            return Err(Error::PrecisionExhausted(format!(
                "need {k} unit digits, only {precision} known"
            )));
        }
        let m = arith::checked_pow(self.p, k)
            .ok_or_else(|| Error::InvalidArgument(format!("{}^{k} overflows u64", self.p)))?;
        Ok((unit % BigUint::from(m)).to_u64().unwrap())
    }

    /// `‖x‖ = p^{-v}`; zero (and vanishing values) have norm 0.
    pub fn norm(&self) -> f64 {
        match self.valuation() {
            Some(v) => (self.p as f64).powi(-(v as i32)),
            None => 0.0,
        }
    }

    /// Multiplication by `p^k`.
    pub fn shift(&self, k: i64) -> Self {
        let repr = match &self.repr {
            Repr::Zero => Repr::Zero,
            Repr::Vanishing { abs } => Repr::Vanishing { abs: abs + k },
            Repr::Unit { valuation, unit, precision } => Repr::Unit {
                valuation: valuation + k,
                unit: unit.clone(),
                precision: *precision,
            },
        };
        Self { p: self.p, repr }
    }

    /// The finite digit series `p^v * u` as a rational (what is actually stored).
    pub fn truncated_value(&self) -> BigRational {
        match &self.repr {
            Repr::Unit { valuation, unit, .. } => {
                let u = BigRational::from_integer(BigInt::from_biguint(Sign::Plus, unit.clone()));
                let pk = BigRational::from_integer(BigInt::from_biguint(
                    Sign::Plus,
                    pow_big(self.p, valuation.unsigned_abs() as u32),
                ));
                if *valuation >= 0 {
                    u * pk
                } else {
                    u / pk
                }
            }
            _ => BigRational::zero(),
        }
    }

    pub fn inv(&self) -> Result<Self> {
        match &self.repr {
            Repr::Zero => Err(Error::DivisionByZero),
            Repr::Vanishing { abs } => Err(Error::PrecisionExhausted(format!(
                "inverting a value known only modulo {}^{abs}",
                self.p
            ))),
            Repr::Unit { valuation, unit, precision } => {
                let m = pow_big(self.p, *precision);
                let unit = inv_mod_big(unit, &m).expect("unit");
                Ok(Self {
                    p: self.p,
                    repr: Repr::Unit { valuation: -valuation, unit, precision: *precision },
                })
            }
        }
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        Ok(self * &other.inv()?)
    }

    /// Integer power (negative exponents invert).
    pub fn pow(&self, e: i64) -> Result<Self> {
        let base = if e < 0 { self.inv()? } else { self.clone() };
        let mut acc = Self::one(self.p, self.precision().max(1));
        for _ in 0..e.unsigned_abs() {
            acc = &acc * &base;
        }
        Ok(acc)
    }

    /// The Tate character phase `r_x / p^{n_x}` of this value.
    pub fn tate_character(&self) -> Result<CharacterPhase> {
        match &self.repr {
            Repr::Zero => Ok(CharacterPhase::zero(self.p)),
            Repr::Vanishing { abs } if *abs >= 0 => Ok(CharacterPhase::zero(self.p)),
            Repr::Vanishing { abs } => Err(Error::PrecisionExhausted(format!(
                "value known only modulo {}^{abs}; its fractional part is undetermined",
                self.p
            ))),
            Repr::Unit { valuation, unit, precision } => {
                if *valuation >= 0 {
                    return Ok(CharacterPhase::zero(self.p));
                }
                let n = valuation.unsigned_abs();
                if n > *precision as u64 {
                    return Err(Error::PrecisionExhausted(format!(
                        "fractional part needs {n} digits, only {precision} known"
                    )));
                }
                let n = n as u32;
                let r = unit % pow_big(self.p, n);
                Ok(CharacterPhase::new(self.p, n, r))
            }
        }
    }

    /// Coefficients `(b_{-m}, ..., b_0)` of the p-adic expansion.
    pub fn digit_truncation(&self, m: u32) -> Result<Vec<u32>> {
        let width = m as usize + 1;
        match &self.repr {
            Repr::Zero => Ok(vec![0; width]),
            Repr::Vanishing { abs } if *abs >= 1 => Ok(vec![0; width]),
            Repr::Vanishing { abs } => Err(Error::PrecisionExhausted(format!(
                "digits at exponents >= {abs} are unknown"
            ))),
            Repr::Unit { valuation, precision, .. } => {
                let top = valuation + *precision as i64;
                if *valuation <= 0 && top <= 0 {
                    return Err(Error::PrecisionExhausted(format!(
                        "digit window [-{m}, 0] extends past the known digits (< {top})"
                    )));
                }
                let digits = self.digits();
                let out = (-(m as i64)..=0)
                    .map(|j| {
                        let idx = j - valuation;
                        if idx < 0 || idx >= digits.len() as i64 {
                            0
                        } else {
                            digits[idx as usize]
                        }
                    })
                    .collect();
                Ok(out)
            }
        }
    }

    fn same_prime(&self, other: &Self) {
        assert_eq!(self.p, other.p, "mixing {}-adic and {}-adic numbers", self.p, other.p);
    }

    fn add_impl(&self, other: &Self) -> Self {
        self.same_prime(other);
        let p = self.p;
        let (va, ua, na) = match &self.repr {
            Repr::Zero => return other.clone(),
            Repr::Vanishing { abs } => return other.truncate_abs(*abs),
            Repr::Unit { valuation, unit, precision } => (*valuation, unit, *precision),
        };
        let (vb, ub, nb) = match &other.repr {
            Repr::Zero => return self.clone(),
            Repr::Vanishing { abs } => return self.truncate_abs(*abs),
            Repr::Unit { valuation, unit, precision } => (*valuation, unit, *precision),
        };
        let v = va.min(vb);
        let abs = (va + na as i64).min(vb + nb as i64);
        let width = (abs - v) as u32;
        let modulus = pow_big(p, width);
        let sum = (ua * pow_big(p, (va - v) as u32) + ub * pow_big(p, (vb - v) as u32)) % &modulus;
        Self::normalize(p, v, sum, width)
    }

    /// Builds `p^v * s` where `s` is known modulo `p^width`.
    fn normalize(p: u64, v: i64, mut s: BigUint, width: u32) -> Self {
        if s.is_zero() {
            return Self { p, repr: Repr::Vanishing { abs: v + width as i64 } };
        }
        let pb = BigUint::from(p);
        let mut shift = 0u32;
        loop {
            let (q, r) = s.div_rem(&pb);
            if !r.is_zero() {
                break;
            }
            s = q;
            shift += 1;
        }
        Self {
            p,
            repr: Repr::Unit { valuation: v + shift as i64, unit: s, precision: width - shift },
        }
    }

    /// Forgets everything at or above exponent `abs`.
    fn truncate_abs(&self, abs: i64) -> Self {
        match &self.repr {
            Repr::Zero => Self { p: self.p, repr: Repr::Vanishing { abs } },
            Repr::Vanishing { abs: a } => Self { p: self.p, repr: Repr::Vanishing { abs: abs.min(*a) } },
            Repr::Unit { valuation, unit, precision } => {
                let top = (valuation + *precision as i64).min(abs);
                if top <= *valuation {
                    return Self { p: self.p, repr: Repr::Vanishing { abs: top } };
                }
                let width = (top - valuation) as u32;
                Self {
                    p: self.p,
                    repr: Repr::Unit {
                        valuation: *valuation,
                        unit: unit % pow_big(self.p, width),
                        precision: width,
                    },
                }
            }
        }
    }

    fn mul_impl(&self, other: &Self) -> Self {
        self.same_prime(other);
        let p = self.p;
        match (&self.repr, &other.repr) {
            (Repr::Zero, _) | (_, Repr::Zero) => Self::zero(p),
            (Repr::Vanishing { abs }, Repr::Vanishing { abs: b }) => {
                Self { p, repr: Repr::Vanishing { abs: abs + b } }
            }
            (Repr::Vanishing { abs }, Repr::Unit { valuation, .. })
            | (Repr::Unit { valuation, .. }, Repr::Vanishing { abs }) => {
                Self { p, repr: Repr::Vanishing { abs: abs + valuation } }
            }
            (
                Repr::Unit { valuation: va, unit: ua, precision: na },
                Repr::Unit { valuation: vb, unit: ub, precision: nb },
            ) => {
                let precision = (*na).min(*nb);
                let unit = (ua * ub) % pow_big(p, precision);
                Self { p, repr: Repr::Unit { valuation: va + vb, unit, precision } }
            }
        }
    }

    fn neg_impl(&self) -> Self {
        match &self.repr {
            Repr::Unit { valuation, unit, precision } => {
                let m = pow_big(self.p, *precision);
                Self {
                    p: self.p,
                    repr: Repr::Unit {
                        valuation: *valuation,
                        unit: (&m - unit) % &m,
                        precision: *precision,
                    },
                }
            }
            _ => self.clone(),
        }
    }
}

impl Add for &PadicNumber {
    type Output = PadicNumber;
    fn add(self, rhs: Self) -> PadicNumber {
        self.add_impl(rhs)
    }
}

impl Sub for &PadicNumber {
    type Output = PadicNumber;
    fn sub(self, rhs: Self) -> PadicNumber {
        self.add_impl(&rhs.neg_impl())
    }
}

impl Mul for &PadicNumber {
    type Output = PadicNumber;
    fn mul(self, rhs: Self) -> PadicNumber {
        self.mul_impl(rhs)
    }
}

impl Neg for &PadicNumber {
    type Output = PadicNumber;
    fn neg(self) -> PadicNumber {
        self.neg_impl()
    }
}

/// `p^v * (d0 d1 d2 …)_p`
impl fmt::Display for PadicNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.repr {
            Repr::Zero => write!(f, "0"),
            Repr::Vanishing { abs } => write!(f, "O({}^{})", self.p, abs),
            Repr::Unit { valuation, .. } => {
                let digits = self.digits();
                let last = digits.iter().rposition(|&d| d != 0).unwrap_or(0);
                write!(f, "{}^{} * (", self.p, valuation)?;
                for (i, d) in digits[..=last].iter().enumerate() {
                    if i > 0 {
                        write!(f, " ")?;
                    }
                    write!(f, "{d}")?;
                }
                if last + 1 < digits.len() {
                    write!(f, " …")?;
                }
                write!(f, ")_{}", self.p)
            }
        }
    }
}

impl fmt::Debug for PadicNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl Serialize for PadicNumber {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("PadicNumber", 3)?;
        st.serialize_field("p", &self.p)?;
        st.serialize_field("v", &self.valuation())?;
        st.serialize_field("digits", &self.digits())?;
        st.end()
    }
}

/// Reduces `a/b` modulo `p^k` (for round-trip checks); `b` must be a p-adic unit times p^vb.
pub fn rational_mod_prime_power(r: &BigRational, p: u64, k: u32) -> Option<BigUint> {
    let m = pow_big(p, k);
    let d = mod_big(r.denom(), &m);
    let inv = inv_mod_big(&d, &m)?;
    let n = if r.numer().is_negative() {
        mod_big(r.numer(), &m)
    } else {
        r.numer().to_biguint().unwrap() % &m
    };
    Some((n * inv) % m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn q(a: i64, b: i64, p: u64) -> PadicNumber {
        PadicNumber::from_i64(a, b, p, DEFAULT_PRECISION).unwrap()
    }

    #[test]
    fn unit_one() {
        let x = q(1, 1, 3);
        assert_eq!(x.valuation(), Some(0));
        let d = x.digits();
        assert_eq!(d.len(), 64);
        assert_eq!(d[0], 1);
        assert!(d[1..].iter().all(|&d| d == 0));
    }

    #[test]
    fn uniformizer_inverse() {
        let x = q(1, 3, 3);
        assert_eq!(x.valuation(), Some(-1));
        assert_eq!(&x.digits()[..3], &[1, 0, 0]);
        assert_eq!(x.norm(), 3.0);
    }

    #[test]
    fn two_fifths_in_z3() {
        let x = q(2, 5, 3);
        assert_eq!(x.valuation(), Some(0));
        assert_eq!(x.digits()[0], 1);
        // 5 * x == 2 modulo 3^64
        let back = &x * &q(5, 1, 3);
        assert_eq!(back, q(2, 1, 3));
    }

    #[test]
    fn errors() {
        assert_eq!(PadicNumber::from_i64(1, 0, 3, 8), Err(Error::ZeroDenominator));
        assert_eq!(PadicNumber::from_i64(1, 2, 4, 8), Err(Error::NotPrime(4)));
        assert_eq!(PadicNumber::zero(5).inv(), Err(Error::DivisionByZero));
    }

    #[test]
    fn norms() {
        assert_eq!(PadicNumber::zero(3).norm(), 0.0);
        assert_eq!(q(1, 3, 3).norm(), 3.0);
        assert!((q(18, 1, 3).norm() - 1.0 / 9.0).abs() < 1e-15);
    }

    #[test]
    fn cancellation_is_flagged() {
        let x = q(7, 2, 5);
        let z = &x - &x;
        assert!(z.is_vanishing());
        assert_eq!(z.absolute_precision(), Some(64));
        assert!(matches!(z.inv(), Err(Error::PrecisionExhausted(_))));
        // 1/5^70 - (1/5^70 - 1) leaves nothing known at exponent 0 .. but still
        // decides the fractional part.
        let big = PadicNumber::from_parts(5, -70, &BigInt::from(1), 64).unwrap();
        let one = q(1, 1, 5);
        let diff = &big - &(&big - &one);
        assert!(diff.is_vanishing());
        assert!(matches!(diff.tate_character(), Err(Error::PrecisionExhausted(_))));
    }

    #[test]
    fn tate_character_examples() {
        assert!(q(7, 5, 3).tate_character().unwrap().is_zero());
        let h = q(1, 2, 2).tate_character().unwrap();
        assert_eq!(h.as_ratio(), (1u32.into(), 2u32.into()));
        let t = q(2, 5, 5).tate_character().unwrap();
        assert_eq!(t.as_ratio(), (2u32.into(), 5u32.into()));
        assert!((t.value().re - (2.0 * std::f64::consts::PI * 0.4).cos()).abs() < 1e-15);
    }

    #[test]
    fn digit_truncation_examples() {
        assert_eq!(q(3, 1, 3).digit_truncation(4).unwrap(), vec![0; 5]);
        assert_eq!(q(1, 9, 3).digit_truncation(2).unwrap(), vec![1, 0, 0]);
        assert_eq!(q(4, 1, 3).digit_truncation(1).unwrap(), vec![0, 1]);
        // -1/3 = 2*3^-1 + 2 + 2*3 + ...
        assert_eq!(q(-1, 3, 3).digit_truncation(2).unwrap(), vec![0, 2, 2]);
    }

    #[test]
    fn display_and_json() {
        assert_eq!(q(1, 3, 3).to_string(), "3^-1 * (1 …)_3");
        assert_eq!(q(10, 1, 3).to_string(), "3^0 * (1 0 1 …)_3");
        let j = serde_json::to_value(PadicNumber::from_i64(5, 1, 3, 4).unwrap()).unwrap();
        assert_eq!(j, serde_json::json!({"p": 3, "v": 0, "digits": [2, 1, 0, 0]}));
    }

    fn small_rational() -> impl Strategy<Value = (i64, i64)> {
        (-2000i64..2000, 1i64..2000)
    }

    proptest! {
        #[test]
        fn roundtrip_mod_prime_power((a, b) in small_rational(), pi in 0usize..4) {
            let p = [2u64, 3, 5, 7][pi];
            prop_assume!(b % (p as i64) != 0);
            let x = q(a, b, p);
            if a == 0 {
                prop_assert!(x.is_exact_zero());
            } else {
                let r = BigRational::new(a.into(), b.into());
                let k = 20;
                let lhs = rational_mod_prime_power(&x.truncated_value(), p, k).unwrap();
                let rhs = rational_mod_prime_power(&r, p, k).unwrap();
                prop_assert_eq!(lhs, rhs);
            }
        }

        #[test]
        fn norm_multiplicative_and_ultrametric(
            (a, b) in small_rational(), (c, d) in small_rational(), pi in 0usize..4
        ) {
            let p = [2u64, 3, 5, 7][pi];
            prop_assume!(a != 0 && c != 0);
            let x = q(a, b, p);
            let y = q(c, d, p);
            let prod = &x * &y;
            prop_assert!((prod.norm() - x.norm() * y.norm()).abs() <= 1e-12 * prod.norm());
            let s = &x + &y;
            let bound = x.norm().max(y.norm());
            if a * d + c * b == 0 {
                prop_assert!(s.is_vanishing());
            } else {
                prop_assert!(s.norm() <= bound * (1.0 + 1e-12));
                if x.norm() != y.norm() {
                    prop_assert!((s.norm() - bound).abs() <= 1e-12 * bound);
                }
            }
        }

        #[test]
        fn character_is_additive((a, b) in small_rational(), (c, d) in small_rational(), pi in 0usize..4) {
            let p = [2u64, 3, 5, 7][pi];
            let x = q(a, b, p);
            let y = q(c, d, p);
            let lhs = (&x + &y).tate_character().unwrap();
            let rhs = x.tate_character().unwrap().add(&y.tate_character().unwrap());
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn equal_truncations_separate_norms(
            (a, b) in small_rational(), (c, d) in small_rational(), m in 0u32..5, pi in 0usize..3
        ) {
            let p = [3u64, 5, 7][pi];
            let x = q(a, b, p);
            let y = q(c, d, p);
            if x.digit_truncation(m).unwrap() == y.digit_truncation(m).unwrap() {
                let diff = &x - &y;
                if let Some(v) = diff.valuation() {
                    prop_assert!(v >= 1 || v < -(m as i64), "v = {}", v);
                }
            }
        }

        #[test]
        fn truncation_is_additive_without_borrows(
            (a, b) in small_rational(), m in 0u32..5, pi in 0usize..3, k in 1i64..4
        ) {
            // Adding something in p Z_p never touches the window.
            let p = [3u64, 5, 7][pi];
            let x = q(a, b, p);
            let y = &x + &q(k * p as i64, 1, p);
            prop_assert_eq!(x.digit_truncation(m).unwrap(), y.digit_truncation(m).unwrap());
        }
    }
}
