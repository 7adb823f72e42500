use num_bigint::BigUint;
use qgraph_core::arith::rat;
use qgraph_core::coloring::*;
use qgraph_core::qform::{Place, QuadraticSpace};

const SAMPLES: usize = 100_000;

fn diag(place: Place, c: &[i64]) -> QuadraticSpace {
    QuadraticSpace::diagonal(place, &c.iter().map(|&a| rat(a, 1)).collect::<Vec<_>>()).unwrap()
}

fn forms() -> Vec<QuadraticSpace> {
    vec![
        diag(Place::Real, &[1, 1]),
        diag(Place::Real, &[1, 2, 3]),
        diag(Place::Real, &[1, 1, 1, 1]),
        diag(Place::Padic(3), &[1, 1]),
        diag(Place::Padic(3), &[1, 1, 3]),
        diag(Place::Padic(3), &[1, 1, 3, 3]),
        diag(Place::Padic(2), &[1, 1]),
        diag(Place::Padic(2), &[1, 1, 1]),
        diag(Place::Padic(2), &[1, 1, 1, 1]),
    ]
}

#[test]
fn schemes_are_proper_and_counts_match() {
    for q in forms() {
        let radii = sphere_annulus(&q).unwrap();
        let s = build_coloring(&radii, q.dim()).unwrap();
        let expected = match s.q {
            None => BigUint::from(s.m).pow(q.dim() as u32),
            Some(p) => BigUint::from(p).pow((s.m + 1) * q.dim() as u32),
        };
        assert_eq!(s.colors, expected);
        assert!(s.has_valid_modulus());
        let rep = verify_proper(&s, &DifferenceSet::Sphere(q.clone()), SAMPLES, 2024).unwrap();
        assert_eq!(rep.violations, 0, "{q:?}: {:?}", rep.first_violation);
    }
}

/// Over ℚ₃ every solution of x² + y² = 1 has max norm 1: check that no
/// primitive pair mod 3⁶ has x² + y² ≡ 0 mod 3 (which a point of larger norm
/// would need) and that all solutions mod 3⁶ have a unit coordinate.
#[test]
fn gaussian_sphere_over_q3_by_residues() {
    let m = 729u64;
    for x in 0..m {
        for y in 0..m {
            let s = (x * x + y * y) % m;
            if s == 1 {
                assert!(x % 3 != 0 || y % 3 != 0);
            }
            if (x % 3 != 0 || y % 3 != 0) && s % 3 == 0 {
                panic!("primitive zero mod 3 at ({x}, {y})");
            }
        }
    }
    let r = sphere_annulus(&diag(Place::Padic(3), &[1, 1])).unwrap();
    assert_eq!((r.c1, r.c2), (1.0, 1.0));
}

#[test]
fn cliques_are_sharp() {
    for n in 1..=10 {
        let c = simplex_clique(n).unwrap();
        assert_eq!(c.size(), clique_upper(n));
        for pv in &c.pairwise {
            let d: f64 = c.vertices[pv.i].iter().zip(&c.vertices[pv.j]).map(|(a, b)| (a - b).powi(2)).sum();
            assert!((d - 1.0).abs() <= 1e-9);
        }
    }
}
