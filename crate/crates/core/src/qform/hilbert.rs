use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::Serialize;

use super::place::Place;
use super::space::{diagonalize, QuadraticSpace};
use crate::arith::{legendre, split_valuation, squarefree_class};
use crate::error::{Error, Result};

/// `(α, u)` with `r = p^α · u`, `u` an integer prime to `p` in the same square class as `r`'s unit part.
fn split_rational(r: &BigRational, p: u64) -> (i64, BigInt) {
    // n/d and n·d differ by the square d²
    let (vn, un) = split_valuation(r.numer(), p);
    let (vd, ud) = split_valuation(r.denom(), p);
    (vn - vd, un * ud)
}

fn mod8(u: &BigInt) -> u64 {
    u.mod_floor(&BigInt::from(8)).to_u64().unwrap()
}

/// Hilbert symbol `(a, b)` at a local place: `+1` iff `z² = a x² + b y²` has a
/// nontrivial solution there.
pub fn hilbert_symbol(a: &BigRational, b: &BigRational, place: Place) -> Result<i8> {
    if a.is_zero() || b.is_zero() {
        return Err(Error::InvalidArgument("Hilbert symbol of zero".into()));
    }
    match place {
        Place::Global => Err(Error::GlobalPlace),
        Place::Complex => Ok(1),
        Place::Real => Ok(if a.is_negative() && b.is_negative() { -1 } else { 1 }),
        Place::Padic(2) => {
            let (al, u) = split_rational(a, 2);
            let (be, v) = split_rational(b, 2);
            let eps = |w: u64| ((w - 1) / 2) % 2;
            let omega = |w: u64| ((w * w - 1) / 8) % 2;
            let (u, v) = (mod8(&u), mod8(&v));
            let e = eps(u) * eps(v) + (al.rem_euclid(2) as u64) * omega(v) + (be.rem_euclid(2) as u64) * omega(u);
            Ok(if e % 2 == 0 { 1 } else { -1 })
        }
        Place::Padic(p) => {
            let (al, u) = split_rational(a, p);
            let (be, v) = split_rational(b, p);
            let mut s = 1i32;
            if (al * be).rem_euclid(2) == 1 && ((p - 1) / 2) % 2 == 1 {
                s = -s;
            }
            if be.rem_euclid(2) == 1 {
                s *= legendre(&u, p);
            }
            if al.rem_euclid(2) == 1 {
                s *= legendre(&v, p);
            }
            Ok(s as i8)
        }
    }
}

/// Whether `r ≠ 0` is a square in the completion at `place`.
pub fn is_square_at(r: &BigRational, place: Place) -> Result<bool> {
    if r.is_zero() {
        return Ok(true);
    }
    match place {
        Place::Global => Ok(crate::arith::rational_sqrt(r).is_some()),
        Place::Complex => Ok(true),
        Place::Real => Ok(r.is_positive()),
        Place::Padic(p) => {
            let (v, u) = split_rational(r, p);
            if v.rem_euclid(2) != 0 {
                return Ok(false);
            }
            Ok(if p == 2 { mod8(&u) == 1 } else { legendre(&u, p) == 1 })
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Isotropy {
    Isotropic,
    Anisotropic,
}

/// Local invariants of a form after congruence diagonalization.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FormInvariants {
    pub place: Place,
    pub n: usize,
    #[serde(serialize_with = "ser_rats")]
    pub diag: Vec<BigRational>,
    /// Squarefree integer representing the square class of `∏ aᵢ`.
    #[serde(serialize_with = "ser_int")]
    pub discriminant: BigInt,
    /// `∏_{i<j} (aᵢ, aⱼ)`; absent for the global place.
    pub hasse: Option<i8>,
    /// `(r, s)` counts of positive and negative coefficients, real place only.
    pub signature: Option<(usize, usize)>,
}

pub(crate) fn ser_rats<S: serde::Serializer>(v: &[BigRational], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(|r| r.to_string()))
}

fn ser_int<S: serde::Serializer>(v: &BigInt, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_str(v)
}

pub fn invariants(q: &QuadraticSpace) -> Result<FormInvariants> {
    let d = diagonalize(q)?;
    invariants_of_diagonal(q.place(), d.coeffs)
}

pub fn invariants_of_diagonal(place: Place, diag: Vec<BigRational>) -> Result<FormInvariants> {
    let prod = diag.iter().fold(BigRational::from_integer(1.into()), |a, b| a * b);
    if prod.is_zero() {
        return Err(Error::Degenerate);
    }
    let discriminant = squarefree_class(&prod)?;
    let hasse = match place {
        Place::Global => None,
        _ => {
            let mut e = 1i8;
            for i in 0..diag.len() {
                for j in i + 1..diag.len() {
                    e *= hilbert_symbol(&diag[i], &diag[j], place)?;
                }
            }
            Some(e)
        }
    };
    let signature = (place == Place::Real).then(|| {
        let r = diag.iter().filter(|a| a.is_positive()).count();
        (r, diag.len() - r)
    });
    Ok(FormInvariants { place, n: diag.len(), diag, discriminant, hasse, signature })
}

/// Isotropy verdict from the local invariants.
pub fn isotropy_classify(q: &QuadraticSpace) -> Result<Isotropy> {
    classify_invariants(&invariants(q)?)
}

pub fn classify_invariants(inv: &FormInvariants) -> Result<Isotropy> {
    let yes = |b: bool| if b { Isotropy::Isotropic } else { Isotropy::Anisotropic };
    let place = inv.place;
    match place {
        Place::Global => Err(Error::GlobalPlace),
        Place::Complex => Ok(Isotropy::Isotropic),
        Place::Real => {
            let (r, s) = inv.signature.expect("real signature");
            Ok(yes(r > 0 && s > 0))
        }
        Place::Padic(_) => {
            let d = BigRational::from_integer(inv.discriminant.clone());
            let eps = inv.hasse.expect("local Hasse invariant");
            let minus_one = BigRational::from_integer((-1).into());
            Ok(match inv.n {
                0 | 1 => Isotropy::Anisotropic,
                2 => yes(is_square_at(&-d, place)?),
                3 => yes(hilbert_symbol(&minus_one, &-d, place)? == eps),
                4 => yes(!is_square_at(&d, place)? || eps == hilbert_symbol(&minus_one, &minus_one, place)?),
                _ => Isotropy::Isotropic,
            })
        }
    }
}
