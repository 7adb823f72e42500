//! Exact p-adic scalars, the Tate character, digit windows, and the per-place
//! scalar fields used by the linear algebra in [`crate::qform`].

mod character;
mod field;
mod padic;

pub use character::CharacterPhase;
pub use field::{ComplexField, Field, PadicField, RationalField, RealField, RealScalar};
pub use padic::{rational_mod_prime_power, PadicNumber, DEFAULT_PRECISION};

use crate::error::Result;

/// `a/b` as a p-adic number with `precision` significant digits.
pub fn padic_from_rational(a: i64, b: i64, p: u64, precision: u32) -> Result<PadicNumber> {
    PadicNumber::from_i64(a, b, p, precision)
}

pub fn tate_character(x: &PadicNumber) -> Result<CharacterPhase> {
    x.tate_character()
}

pub fn digit_truncation(x: &PadicNumber, m: u32) -> Result<Vec<u32>> {
    x.digit_truncation(m)
}
