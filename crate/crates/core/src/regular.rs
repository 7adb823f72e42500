//! The hyperbola graph inside the regular graph of `GL₂`: vertices are
//! invertible matrices, `A ~ B` when `det(A + B) = 0`.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

fn ser_rat<S: Serializer>(x: &BigRational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&x.to_string())
}

fn ser_mat<S: Serializer>(m: &[[BigRational; 2]; 2], s: S) -> std::result::Result<S::Ok, S::Error> {
    m.iter().map(|r| [r[0].to_string(), r[1].to_string()]).collect::<Vec<_>>().serialize(s)
}

/// An invertible 2×2 rational matrix.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RegularVertex {
    #[serde(serialize_with = "ser_mat")]
    m: [[BigRational; 2]; 2],
}

fn det2(m: &[[BigRational; 2]; 2]) -> BigRational {
    &m[0][0] * &m[1][1] - &m[0][1] * &m[1][0]
}

impl RegularVertex {
    pub fn new(m: [[BigRational; 2]; 2]) -> Result<Self> {
        if det2(&m).is_zero() {
            return Err(Error::Degenerate);
        }
        Ok(Self { m })
    }

    pub fn entries(&self) -> &[[BigRational; 2]; 2] {
        &self.m
    }

    pub fn det(&self) -> BigRational {
        det2(&self.m)
    }

    /// Membership in `{((a, b), (c, 1)) : a − bc = 1}`, the closed set containing the image of [`embed`].
    pub fn in_unipotent_image(&self) -> bool {
        let [[a, b], [c, d]] = &self.m;
        d.is_one() && (a - b * c).is_one()
    }
}

/// `a_{x,y} = ((1 − 4xy, −2x), (2y, 1))`, a product of unipotents (so `det = 1`).
pub fn embed(x: &BigRational, y: &BigRational) -> RegularVertex {
    let two = BigRational::from_integer(BigInt::from(2));
    let four = BigRational::from_integer(BigInt::from(4));
    let m = [[BigRational::one() - &four * x * y, -(&two * x)], [&two * y, BigRational::one()]];
    RegularVertex { m }
}

/// `det(a_{x₁,y₁} + a_{x₂,y₂})`, computed from the matrices and checked against `4 − 4(x₂−x₁)(y₂−y₁)`.
pub fn det_sum(x1: &BigRational, y1: &BigRational, x2: &BigRational, y2: &BigRational) -> Result<BigRational> {
    let (a, b) = (embed(x1, y1), embed(x2, y2));
    let s = [
        [&a.m[0][0] + &b.m[0][0], &a.m[0][1] + &b.m[0][1]],
        [&a.m[1][0] + &b.m[1][0], &a.m[1][1] + &b.m[1][1]],
    ];
    let direct = det2(&s);
    let four = BigRational::from_integer(BigInt::from(4));
    let closed = &four - &four * (x2 - x1) * (y2 - y1);
    if direct != closed {
        return Err(Error::Verification(format!("det(a1 + a2) = {direct} but the identity gives {closed}")));
    }
    Ok(direct)
}

/// Hyperbola-graph adjacency: `(x₂−x₁)(y₂−y₁) = 1`.
pub fn adjacency(x1: &BigRational, y1: &BigRational, x2: &BigRational, y2: &BigRational) -> bool {
    ((x2 - x1) * (y2 - y1)).is_one()
}

/// `C_n = Σ_{k=0}^{n} k! · C(n, k)²`.
pub fn compute_cn(n: u32) -> Result<BigUint> {
    if n == 0 {
        return Err(Error::InvalidArgument("n must be at least 1".into()));
    }
    let mut total = BigUint::zero();
    let mut fact = BigUint::one();
    let mut binom = BigUint::one();
    for k in 0..=n {
        if k > 0 {
            fact *= k;
            binom = binom * (n - k + 1) / k;
        }
        total += &fact * &binom * &binom;
    }
    Ok(total)
}

/// One checked quadruple.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DetSumRecord {
    #[serde(serialize_with = "ser_rat")]
    pub x1: BigRational,
    #[serde(serialize_with = "ser_rat")]
    pub y1: BigRational,
    #[serde(serialize_with = "ser_rat")]
    pub x2: BigRational,
    #[serde(serialize_with = "ser_rat")]
    pub y2: BigRational,
    #[serde(serialize_with = "ser_rat")]
    pub det: BigRational,
    pub adjacent: bool,
}

impl DetSumRecord {
    pub fn check(x1: BigRational, y1: BigRational, x2: BigRational, y2: BigRational) -> Result<Self> {
        let det = det_sum(&x1, &y1, &x2, &y2)?;
        let adjacent = adjacency(&x1, &y1, &x2, &y2);
        if adjacent != det.is_zero() {
            return Err(Error::Verification(format!(
                "adjacency {adjacent} disagrees with det(a1 + a2) = {det}"
            )));
        }
        Ok(Self { x1, y1, x2, y2, det, adjacent })
    }
}

fn small_rational(rng: &mut impl Rng) -> BigRational {
    BigRational::new(BigInt::from(rng.random_range(-30i64..=30)), BigInt::from(rng.random_range(1i64..=12)))
}

/// Random rational quadruples; about a quarter are forced onto an edge
/// (`y₂ = y₁ + 1/(x₂ − x₁)`) so both outcomes are exercised.
pub fn random_quadruples(samples: usize, seed: u64) -> Vec<[BigRational; 4]> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..samples)
        .map(|_| {
            let (x1, y1, x2) = (small_rational(&mut rng), small_rational(&mut rng), small_rational(&mut rng));
            let y2 = if rng.random_range(0..4) == 0 && x1 != x2 {
                &y1 + (&x2 - &x1).recip()
            } else {
                small_rational(&mut rng)
            };
            [x1, y1, x2, y2]
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RegularCheckReport {
    pub samples: usize,
    pub seed: u64,
    pub adjacent: usize,
    pub failures: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub first_failure: Option<String>,
}

/// The determinant identity and the adjacency correspondence on random quadruples.
pub fn regular_check(samples: usize, seed: u64) -> RegularCheckReport {
    let results: Vec<Result<DetSumRecord>> = random_quadruples(samples, seed)
        .into_par_iter()
        .map(|[x1, y1, x2, y2]| DetSumRecord::check(x1, y1, x2, y2))
        .collect();
    let adjacent = results.iter().filter(|r| matches!(r, Ok(d) if d.adjacent)).count();
    let failures = results.iter().filter(|r| r.is_err()).count();
    let first_failure = results.into_iter().find_map(|r| r.err().map(|e| e.to_string()));
    RegularCheckReport { samples, seed, adjacent, failures, first_failure }
}
