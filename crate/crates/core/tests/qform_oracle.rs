mod support;

use num_rational::BigRational;
use qgraph_core::arith::rat;
use qgraph_core::qform::{isotropy_classify, Isotropy, Place, QuadraticSpace};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use support::isotropy::{padic_isotropic, real_isotropic, residue_depth, small_height_zero};

fn random_diag(rng: &mut ChaCha8Rng, p: i64) -> Vec<(i64, i64)> {
    let n = rng.random_range(2..=5);
    (0..n)
        .map(|_| {
            let mut a: i64 = rng.random_range(1..=12) * if rng.random_bool(0.5) { 1 } else { -1 };
            if p > 0 && rng.random_bool(0.3) {
                a *= p;
            }
            let b = if rng.random_bool(0.2) { [1, 2, 3, 4, 9][rng.random_range(0..5)] } else { 1 };
            (a, b)
        })
        .collect()
}

fn space(place: Place, d: &[(i64, i64)]) -> QuadraticSpace {
    let c: Vec<BigRational> = d.iter().map(|&(a, b)| rat(a, b)).collect();
    QuadraticSpace::diagonal(place, &c).unwrap()
}

#[test]
fn real_verdicts_match_sign_search() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..150 {
        let d = random_diag(&mut rng, 0);
        let got = isotropy_classify(&space(Place::Real, &d)).unwrap() == Isotropy::Isotropic;
        assert_eq!(got, real_isotropic(&d), "{d:?}");
    }
}

#[test]
fn padic_verdicts_match_residue_search() {
    for p in [2i64, 3, 5, 7] {
        let mut rng = ChaCha8Rng::seed_from_u64(100 + p as u64);
        let (mut iso, mut aniso) = (0, 0);
        for _ in 0..120 {
            let d = random_diag(&mut rng, p);
            let got = isotropy_classify(&space(Place::Padic(p as u64), &d)).unwrap() == Isotropy::Isotropic;
            assert_eq!(got, padic_isotropic(&d, p, residue_depth(p)), "p={p} {d:?}");
            if d.len() <= 3 {
                if let Some(x) = small_height_zero(&d, 12) {
                    assert!(got, "p={p} {d:?} has the rational zero {x:?}");
                }
            }
            if got {
                iso += 1
            } else {
                aniso += 1
            }
        }
        assert!(iso > 10 && aniso > 10, "p={p}: corpus too lopsided ({iso}/{aniso})");
    }
}

#[test]
fn sums_of_two_squares() {
    let d = [(1, 1), (1, 1)];
    assert!(!padic_isotropic(&d, 3, 3));
    assert!(padic_isotropic(&d, 5, 3));
    assert_eq!(isotropy_classify(&space(Place::Padic(3), &d)).unwrap(), Isotropy::Anisotropic);
    assert_eq!(isotropy_classify(&space(Place::Padic(5), &d)).unwrap(), Isotropy::Isotropic);
}
