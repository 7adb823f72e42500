use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::Serialize;

use super::annulus::{AnnulusRadii, Frame, PadicDiag};
use crate::arith::sqrt_unit_mod;
use crate::error::{Error, Result};
use crate::localfield::PadicNumber;
use crate::qform::{Place, QuadraticSpace};

/// Digits carried by sampled p-adic coordinates.
pub const SAMPLE_PRECISION: u32 = 24;

const MAX_ATTEMPTS: usize = 10_000;

/// Work is split into fixed chunks, each with its own stream, so results do
/// not depend on the thread count.
pub(crate) const CHUNK: usize = 1024;

pub(crate) fn chunk_rng(seed: u64, chunk: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(chunk as u64);
    rng
}

/// The edge set of a Cayley graph: `x ~ y` iff `x - y` lies in it.
#[derive(Clone, Debug)]
pub enum DifferenceSet {
    /// `{Q = 1}`.
    Sphere(QuadraticSpace),
    /// `{(s, 1/s) : e^{-T} ≤ |s| ≤ e^T}` over ℝ, `{p^{-T} ≤ ‖s‖ ≤ p^T}` over ℚ_p.
    ChoppedHyperbola { place: Place, t: f64 },
}

impl DifferenceSet {
    pub fn place(&self) -> Place {
        match self {
            Self::Sphere(q) => q.place(),
            Self::ChoppedHyperbola { place, .. } => *place,
        }
    }

    pub fn dim(&self) -> usize {
        match self {
            Self::Sphere(q) => q.dim(),
            Self::ChoppedHyperbola { .. } => 2,
        }
    }

    pub fn describe(&self) -> String {
        match self {
            Self::Sphere(q) => {
                let rows: Vec<String> = q
                    .gram()
                    .iter()
                    .map(|r| format!("[{}]", r.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")))
                    .collect();
                format!("sphere Q=1 over {} with gram [{}]", q.place(), rows.join(","))
            }
            Self::ChoppedHyperbola { place, t } => format!("chopped hyperbola over {place} with T={t}"),
        }
    }

    pub fn annulus(&self) -> Result<AnnulusRadii> {
        match self {
            Self::Sphere(q) => super::annulus::sphere_annulus(q),
            Self::ChoppedHyperbola { place, t } => super::annulus::hyperbola_annulus(*place, *t),
        }
    }
}

/// A vector over ℝ or ℚ_p.
#[derive(Clone, Debug, PartialEq)]
pub enum Point {
    Real(Vec<f64>),
    Padic(Vec<PadicNumber>),
}

impl Point {
    pub fn add(&self, other: &Point) -> Result<Point> {
        match (self, other) {
            (Point::Real(a), Point::Real(b)) => Ok(Point::Real(a.iter().zip(b).map(|(x, y)| x + y).collect())),
            (Point::Padic(a), Point::Padic(b)) => Ok(Point::Padic(a.iter().zip(b).map(|(x, y)| x + y).collect())),
            _ => Err(Error::InvalidArgument("mixing real and p-adic points".into())),
        }
    }

    pub fn to_strings(&self) -> Vec<String> {
        match self {
            Point::Real(v) => v.iter().map(|x| x.to_string()).collect(),
            Point::Padic(v) => v.iter().map(|x| x.to_string()).collect(),
        }
    }
}

impl Serialize for Point {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_strings().serialize(s)
    }
}

/// Max norm: a float at the real place, the shell exponent `k` (`‖x‖ = p^k`) at a p-adic one.
pub(crate) enum Norm {
    Real(f64),
    Shell(i64),
}

pub(crate) fn norm(x: &Point) -> Result<Norm> {
    match x {
        Point::Real(v) => Ok(Norm::Real(v.iter().fold(0.0, |m, a| m.max(a.abs())))),
        Point::Padic(v) => v
            .iter()
            .filter(|a| !a.is_exact_zero())
            .map(|a| {
                a.valuation()
                    .map(|k| -k)
                    .ok_or_else(|| Error::PrecisionExhausted("coordinate cancelled to zero".into()))
            })
            .collect::<Result<Vec<_>>>()?
            .into_iter()
            .max()
            .map(Norm::Shell)
            .ok_or_else(|| Error::InvalidArgument("zero vector".into())),
    }
}

/// Uniform on `[0, p^k)`, digit by digit.
pub(crate) fn random_digits(rng: &mut impl Rng, p: u64, k: u32) -> BigUint {
    let mut acc = BigUint::zero();
    for _ in 0..k {
        acc = acc * p + rng.random_range(0..p);
    }
    acc
}

pub(crate) fn random_unit(rng: &mut impl Rng, p: u64, precision: u32) -> BigUint {
    let low = rng.random_range(1..p);
    random_digits(rng, p, precision - 1) * p + low
}

fn padic_from_unit(p: u64, v: i64, u: &BigUint, precision: u32) -> Result<PadicNumber> {
    PadicNumber::from_parts(p, v, &BigInt::from(u.clone()), precision)
}

fn padic_basis(m: &[Vec<BigRational>], p: u64) -> Result<Vec<Vec<PadicNumber>>> {
    m.iter()
        .map(|r| r.iter().map(|x| PadicNumber::from_ratio(x, p, SAMPLE_PRECISION + 8)).collect())
        .collect()
}

/// Draws points of a [`DifferenceSet`].
#[derive(Clone, Debug)]
pub(crate) enum Sampler {
    /// `x = P w`, `w = (u₁/√a₁, …)` with `u` uniform on the unit sphere.
    RealSphere { basis: Option<Vec<Vec<f64>>>, scales: Vec<f64> },
    /// A random primitive `u` rescaled onto the sphere when `Q(u)` is a square.
    PadicSphere { diag: PadicDiag, coeffs: Vec<PadicNumber>, basis: Option<Vec<Vec<PadicNumber>>> },
    /// `log|s|` uniform on `[-T, T]`, random sign.
    RealHyperbola { t: f64 },
    /// Shell uniform on `[-T, T]`, unit digits uniform.
    PadicHyperbola { p: u64, t: i64 },
}

impl Sampler {
    pub fn new(diffs: &DifferenceSet) -> Result<Self> {
        match diffs {
            DifferenceSet::Sphere(q) => Self::for_sphere(q),
            DifferenceSet::ChoppedHyperbola { place, t } => {
                super::annulus::hyperbola_annulus(*place, *t)?;
                Ok(match place {
                    Place::Padic(p) => Self::PadicHyperbola { p: *p, t: *t as i64 },
                    _ => Self::RealHyperbola { t: *t },
                })
            }
        }
    }

    /// Assumes (and for the sampler's own needs, checks) that the sphere is nonempty and anisotropic.
    pub fn for_sphere(q: &QuadraticSpace) -> Result<Self> {
        let frame = Frame::of(q)?;
        match q.place() {
            Place::Real => {
                let scales = frame
                    .coeffs
                    .iter()
                    .map(|a| {
                        let a = a.to_f64().unwrap();
                        if a > 0.0 {
                            Ok(1.0 / a.sqrt())
                        } else {
                            Err(Error::Precondition("real sphere sampling needs a positive definite form".into()))
                        }
                    })
                    .collect::<Result<_>>()?;
                let basis = frame
                    .basis
                    .map(|m| m.iter().map(|r| r.iter().map(|x| x.to_f64().unwrap()).collect()).collect());
                Ok(Self::RealSphere { basis, scales })
            }
            Place::Padic(p) => {
                let diag = PadicDiag::new(&frame.coeffs, p)?;
                let coeffs = diag
                    .units
                    .iter()
                    .zip(&diag.eps)
                    .map(|(b, &e)| Ok(PadicNumber::from_ratio(b, p, SAMPLE_PRECISION + 8)?.shift(e as i64)))
                    .collect::<Result<_>>()?;
                let basis = frame.basis.as_deref().map(|m| padic_basis(m, p)).transpose()?;
                Ok(Self::PadicSphere { diag, coeffs, basis })
            }
            other => Err(Error::InvalidArgument(format!("no sphere sampler at {other}"))),
        }
    }

    pub fn sample(&self, rng: &mut ChaCha8Rng) -> Result<Point> {
        match self {
            Self::RealSphere { basis, scales } => {
                let n = scales.len();
                let u = loop {
                    let g: Vec<f64> = (0..n).map(|_| rng.sample(StandardNormal)).collect();
                    let r = g.iter().map(|x| x * x).sum::<f64>().sqrt();
                    if r > 1e-300 {
                        break g.into_iter().map(|x| x / r).collect::<Vec<_>>();
                    }
                };
                let w: Vec<f64> = u.iter().zip(scales).map(|(x, s)| x * s).collect();
                Ok(Point::Real(match basis {
                    None => w,
                    Some(m) => m.iter().map(|r| r.iter().zip(&w).map(|(a, b)| a * b).sum()).collect(),
                }))
            }
            Self::PadicSphere { diag, coeffs, basis } => {
                let p = diag.p;
                let n = coeffs.len();
                for _ in 0..MAX_ATTEMPTS {
                    let raw: Vec<BigUint> = (0..n).map(|_| random_digits(rng, p, SAMPLE_PRECISION)).collect();
                    if raw.iter().all(|x| (x % p).is_zero()) {
                        continue;
                    }
                    let u: Vec<PadicNumber> = raw
                        .iter()
                        .map(|x| PadicNumber::from_rational(&BigInt::from(x.clone()), &BigInt::from(1), p, SAMPLE_PRECISION))
                        .collect::<Result<_>>()?;
                    let c = u.iter().zip(coeffs).fold(PadicNumber::zero(p), |acc, (x, a)| &acc + &(a * &(x * x)));
                    let (Some(e), Some(unit)) = (c.valuation(), c.unit()) else { continue };
                    if e.rem_euclid(2) != 0 {
                        continue;
                    }
                    let Some(root) = sqrt_unit_mod(unit, p, c.precision()) else { continue };
                    let root_prec = if p == 2 { c.precision() - 1 } else { c.precision() };
                    let scale = padic_from_unit(p, e / 2, &root, root_prec)?.inv()?;
                    let w: Vec<PadicNumber> =
                        u.iter().zip(&diag.s).map(|(x, &s)| (x * &scale).shift(-s)).collect();
                    return Ok(Point::Padic(match basis {
                        None => w,
                        Some(b) => b
                            .iter()
                            .map(|r| r.iter().zip(&w).fold(PadicNumber::zero(p), |acc, (a, x)| &acc + &(a * x)))
                            .collect(),
                    }));
                }
                Err(Error::SearchExhausted(format!("sphere sampler found no point in {MAX_ATTEMPTS} attempts")))
            }
            Self::RealHyperbola { t } => {
                let s = rng.random_range(-*t..=*t).exp();
                let s = if rng.random::<bool>() { s } else { -s };
                Ok(Point::Real(vec![s, 1.0 / s]))
            }
            Self::PadicHyperbola { p, t } => {
                let k = rng.random_range(-*t..=*t);
                let s = padic_from_unit(*p, -k, &random_unit(rng, *p, SAMPLE_PRECISION), SAMPLE_PRECISION)?;
                let inv = s.inv()?;
                Ok(Point::Padic(vec![s, inv]))
            }
        }
    }
}

/// Number of sampled points whose max norm falls outside `radii`.
pub(crate) fn annulus_violations(radii: &AnnulusRadii, sampler: &Sampler, samples: usize, seed: u64) -> Result<usize> {
    let chunks = samples.div_ceil(CHUNK);
    let counts: Vec<usize> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut rng = chunk_rng(seed, c);
            let len = CHUNK.min(samples - c * CHUNK);
            let mut bad = 0;
            for _ in 0..len {
                let ok = match norm(&sampler.sample(&mut rng)?)? {
                    Norm::Real(r) => radii.contains_norm(r),
                    Norm::Shell(k) => radii.contains_shell(k),
                };
                bad += usize::from(!ok);
            }
            Ok(bad)
        })
        .collect::<Result<_>>()?;
    Ok(counts.into_iter().sum())
}

/// Samples from a difference set (exposed for tests and the CLI).
pub fn sample_difference_set(diffs: &DifferenceSet, count: usize, seed: u64) -> Result<Vec<Point>> {
    let sampler = Sampler::new(diffs)?;
    let mut rng = chunk_rng(seed, 0);
    (0..count).map(|_| sampler.sample(&mut rng)).collect()
}
