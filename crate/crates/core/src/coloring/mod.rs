//! Explicit finite colorings of graphs whose difference set avoids a
//! neighborhood of the origin, with sampled propriety checks, and cliques.

mod annulus;
mod clique;
mod sampler;
mod scheme;
mod verify;

use serde::Serialize;

pub use annulus::{hyperbola_annulus, sphere_annulus, sphere_annulus_with, AnnulusRadii, ANNULUS_SAMPLES};
pub use clique::{clique_upper, simplex_clique, CliqueCertificate, PairValue};
pub use sampler::{sample_difference_set, DifferenceSet, Point, SAMPLE_PRECISION};
pub use scheme::{build_box_coloring, build_digit_coloring, ColoringScheme, Dilation, SchemeKind};
pub use verify::{verify_proper, VerificationReport, Violation};

use crate::arith::{is_prime, rat};
use crate::error::Result;
use crate::qform::{Place, QuadraticSpace};

/// Box coloring at ℝ, digit coloring at ℚ_p.
pub fn build_coloring(radii: &AnnulusRadii, n: usize) -> Result<ColoringScheme> {
    match radii.place {
        Place::Padic(_) => build_digit_coloring(radii, n),
        _ => build_box_coloring(radii, n),
    }
}

/// Colors used for `x² + y²` over ℚ_p.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PTableRow {
    pub p: u64,
    pub m: u32,
    pub colors: String,
    /// `colors / p²`
    pub colors_over_p2: f64,
}

/// The digit-coloring color count for `x² + y²` at every prime `p ≡ 3 (mod 4)`
/// up to `max_p` (where the form is anisotropic).
pub fn p_table(max_p: u64, samples: usize, seed: u64) -> Result<Vec<PTableRow>> {
    (3..=max_p)
        .filter(|&p| p % 4 == 3 && is_prime(p))
        .map(|p| {
            let q = QuadraticSpace::diagonal(Place::Padic(p), &[rat(1, 1), rat(1, 1)])?;
            let s = build_digit_coloring(&sphere_annulus_with(&q, samples, seed)?, 2)?;
            let colors: f64 = s.colors.to_string().parse().unwrap_or(f64::INFINITY);
            Ok(PTableRow { p, m: s.m, colors: s.colors.to_string(), colors_over_p2: colors / (p * p) as f64 })
        })
        .collect()
}

pub const P_TABLE_HEADER: &str = "p,m,colors";

impl PTableRow {
    pub fn csv_row(&self) -> String {
        format!("{},{},{}", self.p, self.m, self.colors)
    }
}
