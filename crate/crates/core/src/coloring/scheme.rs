use num_bigint::BigUint;
use serde::{Serialize, Serializer};

use super::annulus::AnnulusRadii;
use super::sampler::Point;
use crate::arith::checked_pow;
use crate::error::{Error, Result};
use crate::localfield::PadicNumber;
use crate::qform::Place;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SchemeKind {
    RealBox,
    PadicDigit,
}

/// How the difference set was rescaled before coloring.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Dilation {
    /// `S ↦ λS`.
    Real { factor: f64 },
    /// `S ↦ p^{-j} S`, which multiplies norms by `p^j`.
    Padic { exponent: i64 },
}

fn ser_big<S: Serializer>(x: &BigUint, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&x.to_string())
}

/// A Borel coloring that is constant on boxes (ℝ) or digit cylinders (ℚ_p).
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ColoringScheme {
    pub kind: SchemeKind,
    pub n: usize,
    pub m: u32,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub q: Option<u64>,
    #[serde(serialize_with = "ser_big")]
    pub colors: BigUint,
    pub dilation: Dilation,
    /// Annulus of the undilated difference set.
    pub radii: AnnulusRadii,
    /// `(c₁, c₂)` after dilation.
    pub dilated_radii: (f64, f64),
}

/// `⌊x₁⌋ mod m, …` on the dilated set, with the smallest `m > c₂ + 2`.
pub fn build_box_coloring(radii: &AnnulusRadii, n: usize) -> Result<ColoringScheme> {
    if radii.place != Place::Real {
        return Err(Error::InvalidArgument(format!("box coloring needs the real place, got {}", radii.place)));
    }
    if n == 0 {
        return Err(Error::InvalidArgument("dimension must be positive".into()));
    }
    let factor = 1.0 / radii.c1;
    let c2 = radii.c2 * factor;
    let m = (c2 + 2.0).floor() as u32 + 1;
    Ok(ColoringScheme {
        kind: SchemeKind::RealBox,
        n,
        m,
        q: None,
        colors: BigUint::from(m).pow(n as u32),
        dilation: Dilation::Real { factor },
        radii: radii.clone(),
        dilated_radii: (1.0, c2),
    })
}

/// Digits `-m..=0` of each coordinate of the dilated point, with the annulus
/// moved to start at `p` and the smallest `m` with `p^m ≥ c₂`.
pub fn build_digit_coloring(radii: &AnnulusRadii, n: usize) -> Result<ColoringScheme> {
    let (Place::Padic(p), Some((k1, k2))) = (radii.place, radii.shells) else {
        return Err(Error::InvalidArgument(format!("digit coloring needs a p-adic place, got {}", radii.place)));
    };
    if n == 0 {
        return Err(Error::InvalidArgument("dimension must be positive".into()));
    }
    let j = 1 - k1;
    let m = (k2 + j) as u32;
    let pf = p as f64;
    Ok(ColoringScheme {
        kind: SchemeKind::PadicDigit,
        n,
        m,
        q: Some(p),
        colors: BigUint::from(p).pow((m + 1) * n as u32),
        dilation: Dilation::Padic { exponent: j },
        radii: radii.clone(),
        dilated_radii: (pf.powi((k1 + j) as i32), pf.powi((k2 + j) as i32)),
    })
}

/// Coefficient `b_j` of `p^j` in `x`, for `j` in `lo..=hi`.
fn digit_window(x: &PadicNumber, lo: i64, hi: i64) -> Result<Vec<u32>> {
    if x.is_exact_zero() {
        return Ok(vec![0; (hi - lo + 1) as usize]);
    }
    let Some(v) = x.valuation() else {
        return match x.absolute_precision() {
            Some(abs) if abs > hi => Ok(vec![0; (hi - lo + 1) as usize]),
            _ => Err(Error::PrecisionExhausted("digit window lies in cancelled digits".into())),
        };
    };
    let digits = x.digits();
    (lo..=hi)
        .map(|j| {
            let idx = j - v;
            if idx < 0 {
                Ok(0)
            } else if idx as usize >= digits.len() {
                Err(Error::PrecisionExhausted(format!("digit at p^{j} is beyond the known precision")))
            } else {
                Ok(digits[idx as usize])
            }
        })
        .collect()
}

impl ColoringScheme {
    /// Same scheme with a different modulus (for negative controls); `colors` is recomputed.
    pub fn with_modulus(&self, m: u32) -> Result<Self> {
        if m == 0 && self.kind == SchemeKind::RealBox {
            return Err(Error::InvalidArgument("modulus must be positive".into()));
        }
        let mut s = self.clone();
        s.m = m;
        s.colors = match self.kind {
            SchemeKind::RealBox => BigUint::from(m).pow(self.n as u32),
            SchemeKind::PadicDigit => BigUint::from(self.q.unwrap()).pow((m + 1) * self.n as u32),
        };
        Ok(s)
    }

    /// Does `m` satisfy the requirement that makes the coloring proper?
    pub fn has_valid_modulus(&self) -> bool {
        match self.kind {
            SchemeKind::RealBox => self.m as f64 > self.dilated_radii.1 + 2.0,
            SchemeKind::PadicDigit => (self.q.unwrap() as f64).powi(self.m as i32) >= self.dilated_radii.1 * (1.0 - 1e-12),
        }
    }

    /// A deliberately too small modulus: `⌈c₂⌉ − 1` (at least 1) for boxes, `m − 1` for digits.
    pub fn undersized(&self) -> Result<Self> {
        match self.kind {
            SchemeKind::RealBox => self.with_modulus(((self.dilated_radii.1.ceil() as u32).saturating_sub(1)).max(1)),
            SchemeKind::PadicDigit => {
                if self.m == 0 {
                    return Err(Error::InvalidArgument("modulus is already 0".into()));
                }
                self.with_modulus(self.m - 1)
            }
        }
    }

    pub fn color(&self, x: &Point) -> Result<Vec<u64>> {
        if x_len(x) != self.n {
            return Err(Error::InvalidArgument(format!("expected {} coordinates", self.n)));
        }
        match (self.kind, self.dilation, x) {
            (SchemeKind::RealBox, Dilation::Real { factor }, Point::Real(v)) => Ok(v
                .iter()
                .map(|&xi| ((xi * factor).floor() as i64).rem_euclid(self.m as i64) as u64)
                .collect()),
            (SchemeKind::PadicDigit, Dilation::Padic { exponent }, Point::Padic(v)) => {
                let p = self.q.unwrap();
                checked_pow(p, self.m + 1)
                    .ok_or_else(|| Error::InvalidArgument("color index does not fit in 64 bits".into()))?;
                v.iter()
                    .map(|xi| {
                        // window -m..=0 of p^{-j} x is window j-m..=j of x
                        let w = digit_window(xi, exponent - self.m as i64, exponent)?;
                        Ok(w.iter().rev().fold(0u64, |acc, &d| acc * p + d as u64))
                    })
                    .collect()
            }
            _ => Err(Error::InvalidArgument("point and scheme live at different places".into())),
        }
    }
}

fn x_len(x: &Point) -> usize {
    match x {
        Point::Real(v) => v.len(),
        Point::Padic(v) => v.len(),
    }
}
