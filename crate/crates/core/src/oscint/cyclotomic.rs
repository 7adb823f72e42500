use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::fmt;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

use crate::arith::checked_pow;

/// An exact element of `ℚ(ζ)`, `ζ = exp(2πi / p^depth)`: `Σ c_j ζ^j`.
///
/// Sums at different depths are compared by lifting `ζ_{p^d} = ζ_{p^D}^{p^{D-d}}`
/// and reducing to the power basis `1, ζ, …, ζ^{φ(p^D)-1}`.
#[derive(Clone, Debug)]
pub struct CyclotomicSum {
    p: u64,
    depth: u32,
    terms: BTreeMap<u64, BigRational>,
}

impl CyclotomicSum {
    pub fn zero(p: u64) -> Self {
        Self { p, depth: 0, terms: BTreeMap::new() }
    }

    pub fn rational(p: u64, c: BigRational) -> Self {
        let mut s = Self::zero(p);
        s.add_term(0, 0, c);
        s
    }

    pub fn prime(&self) -> u64 {
        self.p
    }

    pub fn depth(&self) -> u32 {
        self.depth
    }

    fn modulus(&self) -> u64 {
        checked_pow(self.p, self.depth).expect("cyclotomic depth overflows u64")
    }

    fn lift_to(&mut self, depth: u32) {
        if depth <= self.depth {
            return;
        }
        let f = checked_pow(self.p, depth - self.depth).expect("depth overflow");
        let terms = std::mem::take(&mut self.terms);
        self.terms = terms.into_iter().map(|(j, c)| (j * f, c)).collect();
        self.depth = depth;
    }

    /// Adds `c · exp(2πi j / p^depth)`.
    pub fn add_term(&mut self, j: u64, depth: u32, c: BigRational) {
        if c.is_zero() {
            return;
        }
        self.lift_to(depth);
        let m = self.modulus();
        let jj = (j % checked_pow(self.p, depth).unwrap()) * checked_pow(self.p, self.depth - depth).unwrap() % m;
        let e = self.terms.entry(jj).or_insert_with(BigRational::zero);
        *e += c;
        if e.is_zero() {
            self.terms.remove(&jj);
        }
    }

    /// Adds `weight · Σ_j counts[j] ζ^j` at the given depth.
    pub fn add_counts(&mut self, depth: u32, counts: &BTreeMap<u64, u64>, weight: &BigRational) {
        for (&j, &n) in counts {
            self.add_term(j, depth, weight * BigRational::from_integer(BigInt::from(n)));
        }
    }

    pub fn add(&mut self, other: &CyclotomicSum) {
        assert_eq!(self.p, other.p);
        for (&j, c) in &other.terms {
            self.add_term(j, other.depth, c.clone());
        }
    }

    pub fn scale(&mut self, c: &BigRational) {
        for v in self.terms.values_mut() {
            *v *= c;
        }
        self.terms.retain(|_, v| !v.is_zero());
    }

    /// Complex conjugate: `ζ^j ↦ ζ^{-j}`.
    pub fn conj(&self) -> Self {
        let m = self.modulus();
        let terms = self.terms.iter().map(|(&j, c)| ((m - j) % m, c.clone())).collect();
        Self { p: self.p, depth: self.depth, terms }
    }

    /// Coefficients in the power basis at `depth` (at least the current depth).
    pub fn canonical_at(&self, depth: u32) -> BTreeMap<u64, BigRational> {
        let mut s = self.clone();
        s.lift_to(depth);
        if s.depth == 0 {
            return s.terms;
        }
        let block = checked_pow(s.p, s.depth - 1).unwrap();
        let phi = (s.p - 1) * block;
        let mut out: BTreeMap<u64, BigRational> = BTreeMap::new();
        for (j, c) in s.terms {
            if j < phi {
                *out.entry(j).or_insert_with(BigRational::zero) += c;
            } else {
                // Φ_{p^D}(ζ) = 0 gives ζ^{φ+t} = -Σ_{i<p-1} ζ^{i p^{D-1} + t}
                let t = j - phi;
                for i in 0..s.p - 1 {
                    *out.entry(i * block + t).or_insert_with(BigRational::zero) -= &c;
                }
            }
        }
        out.retain(|_, v| !v.is_zero());
        out
    }

    /// Exact equality in `ℚ(ζ)`.
    pub fn exact_eq(&self, other: &Self) -> bool {
        assert_eq!(self.p, other.p);
        let d = self.depth.max(other.depth);
        self.canonical_at(d) == other.canonical_at(d)
    }

    pub fn is_real(&self) -> bool {
        self.exact_eq(&self.conj())
    }

    /// The rational value, when the sum reduces to a rational number.
    pub fn as_rational(&self) -> Option<BigRational> {
        let c = self.canonical_at(self.depth);
        match c.len() {
            0 => Some(BigRational::zero()),
            1 => c.get(&0).cloned(),
            _ => None,
        }
    }

    pub fn value(&self) -> Complex64 {
        let m = self.modulus() as f64;
        self.terms
            .iter()
            .map(|(&j, c)| {
                let a = 2.0 * PI * (j as f64) / m;
                Complex64::new(a.cos(), a.sin()) * c.to_f64().unwrap()
            })
            .sum()
    }

    pub fn terms(&self) -> impl Iterator<Item = (u64, &BigRational)> {
        self.terms.iter().map(|(&j, c)| (j, c))
    }
}

impl fmt::Display for CyclotomicSum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(j, c)| if *j == 0 { format!("{c}") } else { format!("{c}·ζ^{j}") })
            .collect();
        write!(f, "{} (ζ = e^(2πi/{}^{}))", parts.join(" + "), self.p, self.depth)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat;

    #[test]
    fn sum_of_roots_of_unity_vanishes() {
        for (p, d) in [(3u64, 1u32), (5, 2), (7, 1), (3, 3)] {
            let m = checked_pow(p, d).unwrap();
            let mut s = CyclotomicSum::zero(p);
            for j in 0..m {
                s.add_term(j, d, rat(1, 1));
            }
            assert!(s.exact_eq(&CyclotomicSum::zero(p)), "p={p} d={d}");
            assert_eq!(s.as_rational(), Some(rat(0, 1)));
        }
    }

    #[test]
    fn primitive_sum_is_mobius() {
        // Σ over primitive p^2-th roots = 0, over primitive p-th roots = -1
        let p = 5;
        let mut s = CyclotomicSum::zero(p);
        for j in 1..p {
            s.add_term(j, 1, rat(1, 1));
        }
        assert_eq!(s.as_rational(), Some(rat(-1, 1)));
        let mut s = CyclotomicSum::zero(p);
        for j in 0..25 {
            if j % 5 != 0 {
                s.add_term(j, 2, rat(1, 1));
            }
        }
        assert_eq!(s.as_rational(), Some(rat(0, 1)));
    }

    #[test]
    fn depth_lifting_and_conjugation() {
        let mut a = CyclotomicSum::zero(3);
        a.add_term(1, 1, rat(2, 3));
        let mut b = CyclotomicSum::zero(3);
        b.add_term(3, 2, rat(2, 3));
        assert!(a.exact_eq(&b));
        assert!(!a.is_real());
        let mut r = a.clone();
        r.add(&a.conj());
        assert!(r.is_real());
        assert_eq!(r.as_rational(), Some(rat(-2, 3)));
        assert!((r.value().re + 2.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn gauss_sum_square() {
        // quadratic Gauss sum over Z/5: g² = 5 for p ≡ 1 mod 4
        let p = 5u64;
        let mut g = CyclotomicSum::zero(p);
        for u in 0..p {
            g.add_term(u * u % p, 1, rat(1, 1));
        }
        let mut sq = CyclotomicSum::zero(p);
        for (j, c) in g.terms() {
            for (k, e) in g.terms() {
                sq.add_term(j + k, 1, c * e);
            }
        }
        assert_eq!(sq.as_rational(), Some(rat(5, 1)));
    }
}
