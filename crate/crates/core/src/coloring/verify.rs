use std::sync::atomic::{AtomicU64, Ordering};

use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::sampler::{chunk_rng, random_unit, DifferenceSet, Point, Sampler, CHUNK, SAMPLE_PRECISION};
use super::scheme::{ColoringScheme, Dilation, SchemeKind};
use crate::error::{Error, Result};
use crate::localfield::PadicNumber;
use num_bigint::BigInt;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Violation {
    pub sample: usize,
    pub base: Point,
    pub difference: Point,
    pub color: Vec<u64>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VerificationReport {
    pub scheme: SchemeKind,
    pub m: u32,
    pub difference_set: String,
    pub samples: usize,
    pub seed: u64,
    pub violations: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub first_violation: Option<Violation>,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.violations == 0
    }
}

fn base_point(scheme: &ColoringScheme, rng: &mut impl Rng) -> Result<Point> {
    match scheme.dilation {
        Dilation::Real { factor } => {
            // a few periods of the coloring in each direction
            let r = 2.0 * scheme.m as f64 / factor;
            Ok(Point::Real((0..scheme.n).map(|_| rng.random_range(-r..r)).collect()))
        }
        Dilation::Padic { exponent } => {
            let p = scheme.q.unwrap();
            let lo = exponent - scheme.m as i64 - 2;
            (0..scheme.n)
                .map(|_| {
                    let v = rng.random_range(lo..=exponent + 2);
                    let u = random_unit(rng, p, SAMPLE_PRECISION);
                    PadicNumber::from_parts(p, v, &BigInt::from(u), SAMPLE_PRECISION)
                })
                .collect::<Result<Vec<_>>>()
                .map(Point::Padic)
        }
    }
}

/// Draws `samples` pairs `(w, w + d)` with `d` in the difference set and counts
/// pairs that receive the same color. Deterministic in `seed`.
pub fn verify_proper(scheme: &ColoringScheme, diffs: &DifferenceSet, samples: usize, seed: u64) -> Result<VerificationReport> {
    if diffs.dim() != scheme.n {
        return Err(Error::InvalidArgument(format!(
            "scheme colors dimension {} but the difference set has dimension {}",
            scheme.n,
            diffs.dim()
        )));
    }
    let sampler = Sampler::new(diffs)?;
    let violations = AtomicU64::new(0);
    let chunks = samples.div_ceil(CHUNK);
    let firsts: Vec<Option<Violation>> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut rng = chunk_rng(seed, c);
            let mut first = None;
            for i in c * CHUNK..(c * CHUNK + CHUNK).min(samples) {
                let w = base_point(scheme, &mut rng)?;
                let d = sampler.sample(&mut rng)?;
                let cw = scheme.color(&w)?;
                if cw == scheme.color(&w.add(&d)?)? {
                    violations.fetch_add(1, Ordering::Relaxed);
                    if first.is_none() {
                        first = Some(Violation { sample: i, base: w, difference: d, color: cw });
                    }
                }
            }
            Ok(first)
        })
        .collect::<Result<_>>()?;
    Ok(VerificationReport {
        scheme: scheme.kind,
        m: scheme.m,
        difference_set: diffs.describe(),
        samples,
        seed,
        violations: violations.into_inner(),
        first_violation: firsts.into_iter().flatten().next(),
    })
}
