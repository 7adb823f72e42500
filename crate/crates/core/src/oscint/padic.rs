use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;

use super::cyclotomic::CyclotomicSum;
use crate::arith::{checked_pow, check_prime, inv_mod_u64, mul_mod};
use crate::error::{Error, Result};
use crate::localfield::PadicNumber;

fn p_pow(p: u64, e: i64) -> BigRational {
    let base = BigRational::from_integer(BigInt::from(p));
    if e >= 0 {
        num_traits::pow(base, e as usize)
    } else {
        num_traits::pow(base, e.unsigned_abs() as usize).recip()
    }
}

fn one_minus_inv(p: u64) -> BigRational {
    BigRational::one() - p_pow(p, -1)
}

pub(crate) fn require_odd(p: u64) -> Result<()> {
    check_prime(p)?;
    if p == 2 {
        return Err(Error::EvenPrime(p));
    }
    Ok(())
}

/// The T-chopped hyperbola measure on ℚ_p², normalized by `L = (4T+2)(1-1/p)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct PadicChoppedMeasure {
    p: u64,
    t: u32,
}

impl PadicChoppedMeasure {
    pub fn new(p: u64, t: u32) -> Result<Self> {
        require_odd(p)?;
        if t == 0 {
            return Err(Error::InvalidArgument("T must be a positive integer".into()));
        }
        Ok(Self { p, t })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn t(&self) -> u32 {
        self.t
    }

    pub fn normalizer(&self) -> BigRational {
        BigRational::from_integer(BigInt::from(4 * self.t as i64 + 2)) * one_minus_inv(self.p)
    }

    /// `∫_{p^-T ≤ ‖s‖ ≤ p^T} ds/‖s‖`, summed shell by shell from the Haar measure.
    pub fn annulus_mass(&self) -> BigRational {
        (-(self.t as i64)..=self.t as i64)
            .map(|k| ShellIndex(k).haar_measure(self.p) / p_pow(self.p, k))
            .sum()
    }
}

/// The shell `C_k = {s : ‖s‖_p = p^k}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct ShellIndex(pub i64);

impl ShellIndex {
    /// `|C_k| = p^k - p^{k-1}`.
    pub fn haar_measure(&self, p: u64) -> BigRational {
        p_pow(p, self.0) - p_pow(p, self.0 - 1)
    }
}

/// `v(a)` for a value known to be nonzero.
fn nonzero_valuation(a: &PadicNumber, what: &str) -> Result<i64> {
    if a.is_vanishing() {
        return Err(Error::PrecisionExhausted(format!("{what}: value cancelled to zero within its precision")));
    }
    a.valuation().ok_or_else(|| Error::InvalidArgument(format!("{what}: argument is zero")))
}

/// `∫_{p^k Z_p} ψ(a s) ds`: `p^{-k}` when `p^k a ∈ Z_p`, else 0.
pub fn ball_character_integral(a: &PadicNumber, k: i64) -> Result<BigRational> {
    let p = a.prime();
    let inside = if a.is_exact_zero() {
        true
    } else if a.is_vanishing() {
        let abs = a.absolute_precision().unwrap();
        if abs + k >= 0 {
            true
        } else {
            return Err(Error::PrecisionExhausted(format!(
                "value known only modulo {p}^{abs}; cannot decide p^{k} a ∈ Z_p"
            )));
        }
    } else {
        a.valuation().unwrap() + k >= 0
    };
    Ok(if inside { p_pow(p, -k) } else { BigRational::zero() })
}

/// `∫_{C_k} ψ(a s) ds/‖s‖`, as the difference of the two balls bounding `C_k`.
pub fn shell_character_integral(a: &PadicNumber, k: i64) -> Result<BigRational> {
    nonzero_valuation(a, "shell integral")?;
    let p = a.prime();
    let outer = ball_character_integral(a, -k)?;
    let inner = ball_character_integral(a, 1 - k)?;
    Ok((outer - inner) * p_pow(p, -k))
}

/// Unit `u` of `w = p^{-m} u` reduced mod `p^digits` (`digits ≤ precision`).
fn unit_mod(w: &PadicNumber, digits: u32) -> Result<u64> {
    if digits == 0 {
        return Ok(0);
    }
    w.unit_residue(digits)
}

/// `F(r, w) = ∫_{C_r} ψ(s) ψ(w/s) ds/‖s‖` as an exact character sum: with
/// `s = p^{-r} u`, `u` runs over the units mod `p^M`, each class weighing `p^{-M}`.
pub fn f_kernel_sum(r: u32, w: &PadicNumber) -> Result<CyclotomicSum> {
    let p = w.prime();
    require_odd(p)?;
    if r == 0 {
        return Err(Error::InvalidArgument("F(r, w) needs r ≥ 1".into()));
    }
    let m = -nonzero_valuation(w, "F kernel")?;
    // phase of w/s = p^{r-m} w0 / u lives at depth m - r
    let n2 = (m - r as i64).max(0) as u32;
    let depth = r.max(n2).max(1);
    let modulus = checked_pow(p, depth)
        .filter(|&q| q <= 1 << 32)
        .ok_or_else(|| Error::InvalidArgument(format!("F kernel needs residues mod {p}^{depth}")))?;
    let pr = checked_pow(p, r).unwrap();
    let pn2 = checked_pow(p, n2).unwrap();
    let w0 = unit_mod(w, n2)?;
    let (sh1, sh2) = (modulus / pr, modulus / pn2);
    let mut counts: BTreeMap<u64, u64> = BTreeMap::new();
    for u in 0..modulus {
        if u % p == 0 {
            continue;
        }
        let i1 = u % pr;
        let i2 = if n2 == 0 { 0 } else { mul_mod(w0, inv_mod_u64(u % pn2, pn2).unwrap(), pn2) };
        *counts.entry((i1 * sh1 + i2 * sh2) % modulus).or_default() += 1;
    }
    let mut out = CyclotomicSum::zero(p);
    out.add_counts(depth, &counts, &p_pow(p, -(depth as i64)));
    Ok(out)
}

/// Real value of `F(r, w)`; checks that it is exactly real and `|F| ≤ 1 - 1/p`.
pub fn f_kernel(r: u32, w: &PadicNumber) -> Result<f64> {
    let f = f_kernel_sum(r, w)?;
    if !f.is_real() {
        return Err(Error::Verification(format!("F({r}, w) is not real: {f}")));
    }
    let v = f.value().re;
    let cap = 1.0 - 1.0 / w.prime() as f64;
    if v.abs() > cap + 1e-12 {
        return Err(Error::BoundViolation(format!("|F({r}, w)| = {} > 1 - 1/p", v.abs())));
    }
    Ok(v)
}

fn check_pair(x: &PadicNumber, y: &PadicNumber, t: u32) -> Result<u64> {
    let p = x.prime();
    if y.prime() != p {
        return Err(Error::InvalidArgument(format!("mixed primes {p} and {}", y.prime())));
    }
    require_odd(p)?;
    if t == 0 {
        return Err(Error::InvalidArgument("T must be a positive integer".into()));
    }
    for v in [x, y] {
        if v.is_vanishing() {
            return Err(Error::PrecisionExhausted(
                "argument cancelled to zero within its precision; whether it is 0 is undetermined".into(),
            ));
        }
    }
    Ok(p)
}

/// `J₁(x, y, T) = ∫_{p^-T ≤ ‖s‖ ≤ p^T} ψ̄(x s + y/s) ds/‖s‖`, exactly, by the
/// shell decomposition: after `s ↦ s/y` only the shells with
/// `1/‖xy‖ < ‖s‖ < 1` carry both characters, and there the integral is
/// `F(k + m, xy)`, which vanishes unless `k = -m/2`.
pub fn j1_exact_sum(x: &PadicNumber, y: &PadicNumber, t: u32) -> Result<CyclotomicSum> {
    let p = check_pair(x, y, t)?;
    let t = t as i64;
    let mut acc = CyclotomicSum::zero(p);
    let mut rational = BigRational::zero();
    match (x.is_exact_zero(), y.is_exact_zero()) {
        (true, true) => {
            rational = BigRational::from_integer(BigInt::from(2 * t + 1)) * one_minus_inv(p);
        }
        (false, true) | (true, false) => {
            // ds/‖s‖ is inversion invariant, so J₁(0, y) = ∫ ψ̄(y s) ds/‖s‖
            let a = if y.is_exact_zero() { x } else { y };
            for k in -t..=t {
                rational += shell_character_integral(a, k)?;
            }
        }
        (false, false) => {
            let a = x * y;
            let n2 = -y.valuation().unwrap();
            let m = -a.valuation().unwrap();
            let one = PadicNumber::one(p, 1);
            let (l1, l2) = (-(t + n2), t - n2);
            for k in l1..=l2 {
                if k >= 0 {
                    // ‖1/s‖ ≤ 1
                    rational += shell_character_integral(&a, k)?;
                } else if k <= -m {
                    // ‖a s‖ ≤ 1; invert s
                    rational += shell_character_integral(&one, -k)?;
                } else if 2 * k == -m {
                    acc.add(&f_kernel_sum((k + m) as u32, &a)?.conj());
                }
                // other shells with 1/‖a‖ < ‖s‖ < 1 vanish identically in a
            }
        }
    }
    acc.add_term(0, 0, rational);
    Ok(acc)
}

/// `J₁` as a real number; checks `J₁ ≥ -2`.
pub fn j1_exact(x: &PadicNumber, y: &PadicNumber, t: u32) -> Result<f64> {
    let s = j1_exact_sum(x, y, t)?;
    let v = s.value().re;
    if v < -2.0 - 1e-12 {
        return Err(Error::BoundViolation(format!("J1 = {v} < -2")));
    }
    Ok(v)
}

/// `μ̂_T(x, y) = 2 J₁ / L`; checks `μ̂ ≥ -4/L`.
pub fn padic_mu_hat(x: &PadicNumber, y: &PadicNumber, t: u32) -> Result<f64> {
    let j = j1_exact(x, y, t)?;
    let l = PadicChoppedMeasure::new(x.prime(), t)?.normalizer().to_f64().unwrap();
    let mu = 2.0 * j / l;
    if mu < -4.0 / l - 1e-12 {
        return Err(Error::BoundViolation(format!("mu_hat = {mu} < -4/L = {}", -4.0 / l)));
    }
    Ok(mu)
}

/// Exact `μ̂_T` when `J₁` is rational (always the case unless `‖xy‖ = p^m`
/// with `m` even and the window reaches the shell `-m/2`).
pub fn padic_mu_hat_rational(x: &PadicNumber, y: &PadicNumber, t: u32) -> Result<Option<BigRational>> {
    let j = j1_exact_sum(x, y, t)?;
    let l = PadicChoppedMeasure::new(x.prime(), t)?.normalizer();
    Ok(j.as_rational().map(|j| BigRational::from_integer(2.into()) * j / l))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat;

    fn q(a: i64, b: i64, p: u64) -> PadicNumber {
        PadicNumber::from_i64(a, b, p, 32).unwrap()
    }

    #[test]
    fn ball_examples() {
        for p in [3u64, 5] {
            assert_eq!(ball_character_integral(&q(7, 1, p), 0).unwrap(), rat(1, 1));
            let a = q(1, (p * p) as i64, p);
            assert_eq!(ball_character_integral(&a, 1).unwrap(), rat(0, 1));
            assert_eq!(ball_character_integral(&a, 2).unwrap(), rat(1, (p * p) as i64));
        }
    }

    #[test]
    fn shell_three_cases() {
        for p in [3u64, 5, 7] {
            let pi = p as i64;
            for n in -3i64..=3 {
                let a = PadicNumber::from_parts(p, -n, &BigInt::from(2), 16).unwrap();
                for k in -6i64..=6 {
                    let want = if k <= -n {
                        rat(pi - 1, pi)
                    } else if k == 1 - n {
                        rat(-1, pi)
                    } else {
                        rat(0, 1)
                    };
                    assert_eq!(shell_character_integral(&a, k).unwrap(), want, "p={p} n={n} k={k}");
                }
            }
        }
        assert!(shell_character_integral(&PadicNumber::zero(3), 0).is_err());
    }

    #[test]
    fn shell_by_direct_character_sum() {
        // ∫_{C_k} ψ(a s) ds/‖s‖ = p^{-M} Σ_{u unit mod p^M} ψ(a p^{-k} u)
        let p = 5u64;
        for n in -2i64..=2 {
            for k in -3i64..=3 {
                let a = PadicNumber::from_parts(p, -n, &BigInt::from(3), 16).unwrap();
                let depth = (n + k).max(1) as u32;
                let modulus = checked_pow(p, depth).unwrap();
                let mut s = CyclotomicSum::zero(p);
                for u in (0..modulus).filter(|u| u % p != 0) {
                    let phase_depth = n + k;
                    if phase_depth <= 0 {
                        s.add_term(0, 0, p_pow(p, -(depth as i64)));
                    } else {
                        let pd = checked_pow(p, phase_depth as u32).unwrap();
                        s.add_term(3 * u % pd, phase_depth as u32, p_pow(p, -(depth as i64)));
                    }
                }
                assert_eq!(s.as_rational().unwrap(), shell_character_integral(&a, k).unwrap());
            }
        }
    }

    #[test]
    fn measure_normalization() {
        for p in [3u64, 5, 7] {
            for t in 1..=4 {
                let mu = PadicChoppedMeasure::new(p, t).unwrap();
                assert_eq!(mu.annulus_mass() * rat(2, 1), mu.normalizer());
            }
        }
        assert_eq!(PadicChoppedMeasure::new(2, 1), Err(Error::EvenPrime(2)));
        assert_eq!(ShellIndex(2).haar_measure(3), rat(6, 1));
    }

    #[test]
    fn worked_value() {
        let x = q(1, 1, 3);
        let z = PadicNumber::zero(3);
        let j = j1_exact_sum(&x, &z, 2).unwrap();
        assert_eq!(j.as_rational(), Some(rat(5, 3)));
        assert_eq!(padic_mu_hat_rational(&x, &z, 2).unwrap(), Some(rat(1, 2)));
        assert!((padic_mu_hat(&x, &z, 2).unwrap() - 0.5).abs() < 1e-15);
        assert_eq!(padic_mu_hat(&z, &z, 3).unwrap(), 1.0);
        let l2 = j1_exact_sum(&z, &z, 2).unwrap().as_rational().unwrap();
        assert_eq!(l2, rat(10, 3));
    }

    #[test]
    fn sally_regime() {
        for p in [3u64, 5] {
            for m in 2..=5i64 {
                let w = PadicNumber::from_parts(p, -m, &BigInt::from(1), 16).unwrap();
                for r in 1..m {
                    let f = f_kernel_sum(r as u32, &w).unwrap();
                    if m % 2 == 1 || 2 * r != m {
                        assert_eq!(f.as_rational(), Some(rat(0, 1)), "p={p} m={m} r={r}");
                    }
                    assert!(f.is_real());
                    assert!(f_kernel(r as u32, &w).unwrap().abs() <= 1.0 - 1.0 / p as f64 + 1e-12);
                }
            }
        }
    }

    #[test]
    fn even_prime_rejected() {
        let x = q(1, 1, 2);
        assert_eq!(j1_exact(&x, &x, 1), Err(Error::EvenPrime(2)));
        assert_eq!(f_kernel(1, &x), Err(Error::EvenPrime(2)));
    }
}
