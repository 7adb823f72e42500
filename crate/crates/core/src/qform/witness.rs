use num_rational::BigRational;
use serde::Serialize;

use super::hilbert::{isotropy_classify, Isotropy};
use super::place::Place;
use super::space::{diagonalize, QuadraticSpace};
use crate::arith::prime_support;
use crate::error::Result;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GlobalWitness {
    /// Local verdicts in the order they were checked.
    pub checked: Vec<(Place, Isotropy)>,
    /// First place where the form is anisotropic, if any.
    pub witness: Option<Place>,
}

/// Places worth checking: ℝ, 2, and every prime dividing a numerator or
/// denominator of the determinant or of a diagonal coefficient. At any other
/// prime all diagonal coefficients are units, so the form is isotropic there.
pub fn relevant_places(q: &QuadraticSpace) -> Result<Vec<Place>> {
    let d = diagonalize(q)?;
    let mut primes = vec![2u64];
    primes.extend(prime_support(&q.det())?);
    for a in &d.coeffs {
        primes.extend(prime_support(a)?);
    }
    primes.sort_unstable();
    primes.dedup();
    let mut out = vec![Place::Real];
    out.extend(primes.into_iter().map(Place::Padic));
    Ok(out)
}

/// Scans the relevant places of a rational form for local anisotropy.
pub fn global_anisotropy_witness(q: &QuadraticSpace) -> Result<GlobalWitness> {
    let mut checked = Vec::new();
    let mut witness = None;
    for place in relevant_places(q)? {
        // n ≥ 5 is isotropic at every prime, nothing to compute
        if q.dim() >= 5 && place != Place::Real {
            break;
        }
        let verdict = isotropy_classify(&q.with_place(place))?;
        checked.push((place, verdict));
        if verdict == Isotropy::Anisotropic {
            witness = Some(place);
            break;
        }
    }
    Ok(GlobalWitness { checked, witness })
}

/// Convenience for diagonal inputs.
pub fn diagonal_witness(coeffs: &[BigRational]) -> Result<GlobalWitness> {
    global_anisotropy_witness(&QuadraticSpace::diagonal(Place::Global, coeffs)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat;

    fn rats(v: &[i64]) -> Vec<BigRational> {
        v.iter().map(|&x| rat(x, 1)).collect()
    }

    #[test]
    fn definite_witnessed_at_infinity() {
        assert_eq!(diagonal_witness(&rats(&[1, 1])).unwrap().witness, Some(Place::Real));
    }

    #[test]
    fn witness_at_three() {
        // anisotropic at both 2 and 3; 2 is scanned first
        let w = diagonal_witness(&rats(&[1, 1, -3, -3])).unwrap();
        assert_eq!(w.witness, Some(Place::Padic(2)));
        assert_eq!(w.checked[0], (Place::Real, Isotropy::Isotropic));
    }

    #[test]
    fn hidden_prime_in_coefficients() {
        // det = -2, yet 3x² + y²/3 + z² − 2w² is anisotropic over ℚ₃ (and isotropic at ℝ and 2)
        let c = vec![rat(3, 1), rat(1, 3), rat(1, 1), rat(-2, 1)];
        let w = diagonal_witness(&c).unwrap();
        assert_eq!(w.witness, Some(Place::Padic(3)));
    }

    #[test]
    fn isotropic_everywhere() {
        let w = diagonal_witness(&rats(&[1, -1, 5])).unwrap();
        assert_eq!(w.witness, None);
        let w = diagonal_witness(&rats(&[1, 1, 1, 1, -7])).unwrap();
        assert_eq!(w.witness, None);
        assert_eq!(w.checked, vec![(Place::Real, Isotropy::Isotropic)]);
        let w = diagonal_witness(&rats(&[1, 1, 1, 1, 7])).unwrap();
        assert_eq!(w.witness, Some(Place::Real));
    }
}
