use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::arith::{checked_pow, rational_valuation};
use crate::localfield::rational_mod_prime_power;
use crate::error::{Error, Result};
use crate::qform::{diagonalize, isotropy_classify, Isotropy, Place, QuadraticSpace};

/// Max-norm bounds for a difference set: `c₁ ≤ ‖x‖ ≤ c₂`.
///
/// At a p-adic place the bounds are exact shells `p^{k₁} ≤ ‖x‖ ≤ p^{k₂}`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AnnulusRadii {
    pub place: Place,
    pub c1: f64,
    pub c2: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub shells: Option<(i64, i64)>,
    /// The radii were computed for a diagonalization and carried back through
    /// the change of basis (so they can be loose).
    pub diagonalized: bool,
}

impl AnnulusRadii {
    pub fn real(c1: f64, c2: f64) -> Result<Self> {
        if !(c1 > 0.0 && c1 <= c2 && c2.is_finite()) {
            return Err(Error::InvalidArgument(format!("bad radii {c1}, {c2}")));
        }
        Ok(Self { place: Place::Real, c1, c2, shells: None, diagonalized: false })
    }

    pub fn padic(p: u64, k1: i64, k2: i64) -> Result<Self> {
        let place = Place::padic(p)?;
        if k1 > k2 {
            return Err(Error::InvalidArgument(format!("bad shells {k1}, {k2}")));
        }
        Ok(Self {
            place,
            c1: (p as f64).powi(k1 as i32),
            c2: (p as f64).powi(k2 as i32),
            shells: Some((k1, k2)),
            diagonalized: false,
        })
    }

    /// Real place: does a max-norm lie inside (with a relative slack of 1e-12)?
    pub fn contains_norm(&self, norm: f64) -> bool {
        norm >= self.c1 * (1.0 - 1e-12) && norm <= self.c2 * (1.0 + 1e-12)
    }

    /// p-adic place: is `p^k` inside?
    pub fn contains_shell(&self, k: i64) -> bool {
        self.shells.is_some_and(|(k1, k2)| k1 <= k && k <= k2)
    }
}

/// A form written as `Σ aᵢ wᵢ²` in coordinates `x = P w`.
#[derive(Clone, Debug)]
pub(crate) struct Frame {
    /// Row-major `P`; `None` for the identity.
    pub basis: Option<Vec<Vec<BigRational>>>,
    pub coeffs: Vec<BigRational>,
}

impl Frame {
    pub fn of(q: &QuadraticSpace) -> Result<Self> {
        if q.is_diagonal() {
            let coeffs = (0..q.dim()).map(|i| q.gram()[i][i].clone()).collect();
            return Ok(Self { basis: None, coeffs });
        }
        let d = diagonalize(q)?;
        Ok(Self { basis: Some(d.matrix()), coeffs: d.coeffs })
    }

    pub fn n(&self) -> usize {
        self.coeffs.len()
    }
}

pub(crate) fn invert(m: &[Vec<BigRational>]) -> Result<Vec<Vec<BigRational>>> {
    let n = m.len();
    let mut a: Vec<Vec<BigRational>> = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { BigRational::one() } else { BigRational::zero() }));
            r
        })
        .collect();
    for c in 0..n {
        let piv = (c..n).find(|&r| !a[r][c].is_zero()).ok_or(Error::Degenerate)?;
        a.swap(c, piv);
        let inv = a[c][c].recip();
        for x in a[c].iter_mut() {
            *x *= &inv;
        }
        for r in 0..n {
            if r != c && !a[r][c].is_zero() {
                let f = a[r][c].clone();
                for k in 0..2 * n {
                    let t = &f * &a[c][k];
                    a[r][k] -= t;
                }
            }
        }
    }
    Ok(a.into_iter().map(|r| r[n..].to_vec()).collect())
}

fn real_operator_norm(m: &[Vec<BigRational>]) -> f64 {
    m.iter()
        .map(|r| r.iter().map(|x| x.abs().to_f64().unwrap_or(f64::INFINITY)).sum::<f64>())
        .fold(0.0, f64::max)
}

fn min_valuation(m: &[Vec<BigRational>], p: u64) -> i64 {
    m.iter().flatten().filter(|x| !x.is_zero()).map(|x| rational_valuation(x, p)).min().unwrap_or(0)
}

/// `aᵢ = p^{2sᵢ + εᵢ} bᵢ` with `bᵢ` a unit and `εᵢ ∈ {0, 1}`.
#[derive(Clone, Debug)]
pub(crate) struct PadicDiag {
    pub p: u64,
    pub s: Vec<i64>,
    pub eps: Vec<u32>,
    pub units: Vec<BigRational>,
    /// Every primitive integral `u` has `v(Σ p^{εᵢ} bᵢ uᵢ²) ≤ e_max`.
    pub e_max: u32,
}

const RESIDUE_BUDGET: u128 = 200_000_000;

impl PadicDiag {
    pub fn new(coeffs: &[BigRational], p: u64) -> Result<Self> {
        let mut s = Vec::new();
        let mut eps = Vec::new();
        let mut units = Vec::new();
        for a in coeffs {
            let alpha = rational_valuation(a, p);
            s.push(alpha.div_euclid(2));
            eps.push(alpha.rem_euclid(2) as u32);
            let pa = BigRational::from_integer(BigInt::from(p));
            let scale = if alpha >= 0 {
                num_traits::pow(pa, alpha as usize)
            } else {
                num_traits::pow(pa, alpha.unsigned_abs() as usize).recip()
            };
            units.push(a / scale);
        }
        let mut d = Self { p, s, eps, units, e_max: 0 };
        d.e_max = d.max_primitive_valuation()?;
        Ok(d)
    }

    /// Smallest `k` with no primitive solution of `Σ p^{εᵢ} bᵢ uᵢ² ≡ 0 (mod p^k)`, minus one.
    fn max_primitive_valuation(&self) -> Result<u32> {
        let n = self.units.len();
        for k in 1u32.. {
            let m = checked_pow(self.p, k).ok_or_else(|| Error::SearchExhausted("residue modulus overflow".into()))?;
            if (m as u128) * (m as u128) * (n as u128) > RESIDUE_BUDGET {
                return Err(Error::SearchExhausted(format!(
                    "no bound on cancellation found below {}^{k}; is the form anisotropic?",
                    self.p
                )));
            }
            let coef: Vec<u64> = (0..n)
                .map(|i| {
                    let b = rational_mod_prime_power(&self.units[i], self.p, k).and_then(|b| b.to_u64()).expect("unit");
                    (b as u128 * checked_pow(self.p, self.eps[i]).unwrap() as u128 % m as u128) as u64
                })
                .collect();
            // bit 0: reachable by a non-primitive prefix, bit 1: by a primitive one
            let mut reach = vec![0u8; m as usize];
            reach[0] = 1;
            for &c in &coef {
                let mut terms: Vec<(u64, u8)> = (0..m)
                    .map(|x| (((c as u128 * x as u128 % m as u128) * x as u128 % m as u128) as u64, u8::from(x % self.p != 0)))
                    .collect();
                terms.sort_unstable();
                terms.dedup();
                let mut next = vec![0u8; m as usize];
                for (sum, &flags) in reach.iter().enumerate().filter(|(_, &f)| f != 0) {
                    for &(t, unit) in &terms {
                        let idx = ((sum as u64 + t) % m) as usize;
                        next[idx] |= if unit == 1 || flags & 2 != 0 { 2 } else { 1 };
                        if flags & 1 != 0 && unit == 0 {
                            next[idx] |= 1;
                        }
                    }
                }
                reach = next;
            }
            if reach[0] & 2 == 0 {
                return Ok(k - 1);
            }
        }
        unreachable!()
    }
}

/// Annulus containing `{Q = 1}` for an anisotropic form over ℝ or ℚ_p, checked
/// against `samples` sampled sphere points.
pub fn sphere_annulus_with(q: &QuadraticSpace, samples: usize, seed: u64) -> Result<AnnulusRadii> {
    let radii = sphere_annulus_unchecked(q)?;
    let sampler = super::sampler::Sampler::for_sphere(q)?;
    let bad = super::sampler::annulus_violations(&radii, &sampler, samples, seed)?;
    if bad > 0 {
        return Err(Error::Verification(format!("{bad} sampled sphere points fall outside the computed annulus")));
    }
    Ok(radii)
}

/// Validation sample count used by [`sphere_annulus`].
pub const ANNULUS_SAMPLES: usize = 100_000;

pub fn sphere_annulus(q: &QuadraticSpace) -> Result<AnnulusRadii> {
    sphere_annulus_with(q, ANNULUS_SAMPLES, 0)
}

pub(crate) fn sphere_annulus_unchecked(q: &QuadraticSpace) -> Result<AnnulusRadii> {
    match q.place() {
        Place::Real | Place::Padic(_) => {}
        other => {
            return Err(Error::InvalidArgument(format!("sphere annulus needs a real or p-adic place, got {other}")));
        }
    }
    if isotropy_classify(q)? == Isotropy::Isotropic {
        return Err(Error::Isotropic);
    }
    let frame = Frame::of(q)?;
    let n = frame.n();
    let mut radii = match q.place() {
        Place::Real => {
            if frame.coeffs.iter().all(|a| a.is_negative()) {
                return Err(Error::EmptySphere);
            }
            let a: Vec<f64> = frame.coeffs.iter().map(|x| x.to_f64().unwrap()).collect();
            let amin = a.iter().cloned().fold(f64::INFINITY, f64::min);
            let amax = a.iter().cloned().fold(0.0, f64::max);
            let (mut c1, mut c2) = (1.0 / (n as f64 * amax).sqrt(), 1.0 / amin.sqrt());
            if let Some(pm) = &frame.basis {
                c2 *= real_operator_norm(pm);
                c1 /= real_operator_norm(&invert(pm)?);
            }
            AnnulusRadii::real(c1, c2)?
        }
        Place::Padic(p) => {
            let mut with_minus_one = frame.coeffs.clone();
            with_minus_one.push(-BigRational::one());
            let probe = QuadraticSpace::diagonal(Place::Padic(p), &with_minus_one)?;
            if isotropy_classify(&probe)? == Isotropy::Anisotropic {
                return Err(Error::EmptySphere);
            }
            let d = PadicDiag::new(&frame.coeffs, p)?;
            let mut k1 = *d.s.iter().min().unwrap();
            let mut k2 = d.s.iter().max().unwrap() + (d.e_max / 2) as i64;
            if let Some(pm) = &frame.basis {
                k1 += min_valuation(&invert(pm)?, p);
                k2 -= min_valuation(pm, p);
            }
            AnnulusRadii::padic(p, k1, k2)?
        }
        _ => unreachable!(),
    };
    radii.diagonalized = frame.basis.is_some();
    Ok(radii)
}

/// Annulus of the chopped hyperbola `{(s, 1/s)}`: `1 ≤ ‖(s, 1/s)‖ ≤ e^T` (or `p^T`).
pub fn hyperbola_annulus(place: Place, t: f64) -> Result<AnnulusRadii> {
    if !(t.is_finite() && t > 0.0) {
        return Err(Error::InvalidArgument(format!("T must be positive, got {t}")));
    }
    match place {
        Place::Real => AnnulusRadii::real(1.0, t.exp()),
        Place::Padic(p) => {
            if t.fract() != 0.0 {
                return Err(Error::InvalidArgument("p-adic T must be an integer".into()));
            }
            AnnulusRadii::padic(p, 0, t as i64)
        }
        other => Err(Error::InvalidArgument(format!("no chopped hyperbola at {other}"))),
    }
}
