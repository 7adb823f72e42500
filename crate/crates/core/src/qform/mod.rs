//! Rational quadratic spaces over ℝ, ℂ, ℚ_p and ℚ: congruence
//! diagonalization, Hilbert symbols and local invariants, isotropy verdicts,
//! isotropic vectors, hyperbolic splittings, and the search for a place where
//! a rational form is anisotropic.

mod hilbert;
mod hyperbolic;
mod parse;
mod place;
mod space;
mod vector;
mod witness;

use serde::Serialize;

pub use hilbert::{
    classify_invariants, hilbert_symbol, invariants, invariants_of_diagonal, is_square_at, isotropy_classify,
    FormInvariants, Isotropy,
};
pub use hyperbolic::{hyperbolic_pair, hyperbolic_pair_over, HyperbolicPair, HyperbolicSplit};
pub use parse::parse_form;
pub use place::Place;
pub use space::{bilinear_over, determinant, diagonalize, diagonalize_over, Diagonalization, QuadraticSpace};
pub use vector::{find_isotropic_vector, find_isotropic_vector_with, hensel_depth, padic_eval, IsotropicVector, SearchOptions};
pub use witness::{diagonal_witness, global_anisotropy_witness, relevant_places, GlobalWitness};

use crate::error::Result;

/// Everything `classify` reports about a form.
#[derive(Clone, Debug, Serialize)]
pub struct ClassifyReport {
    pub place: Place,
    pub n: usize,
    #[serde(serialize_with = "hilbert::ser_rats")]
    pub diag: Vec<num_rational::BigRational>,
    pub d: String,
    pub hasse: Option<i8>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub signature: Option<(usize, usize)>,
    pub verdict: Isotropy,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness_vector: Option<IsotropicVector>,
    /// Global forms only: the local verdicts that decided the answer.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub global: Option<GlobalWitness>,
}

/// Invariants, verdict and (for isotropic local forms) an isotropic vector.
/// For the global place the verdict comes from the local scan.
pub fn classify(q: &QuadraticSpace) -> Result<ClassifyReport> {
    let inv = invariants(q)?;
    let (verdict, global) = if q.place() == Place::Global {
        let w = global_anisotropy_witness(q)?;
        let v = if w.witness.is_some() { Isotropy::Anisotropic } else { Isotropy::Isotropic };
        (v, Some(w))
    } else {
        (classify_invariants(&inv)?, None)
    };
    let witness_vector = match (verdict, q.place()) {
        (Isotropy::Isotropic, Place::Global) => find_isotropic_vector(q).ok(),
        (Isotropy::Isotropic, _) => Some(find_isotropic_vector(q)?),
        _ => None,
    };
    Ok(ClassifyReport {
        place: q.place(),
        n: q.dim(),
        diag: inv.diag,
        d: inv.discriminant.to_string(),
        hasse: inv.hasse,
        signature: inv.signature,
        verdict,
        witness_vector,
        global,
    })
}
