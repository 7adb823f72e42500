use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;

use super::cyclotomic::CyclotomicSum;
use super::padic::require_odd;
use crate::arith::{checked_pow, inv_mod_u64, mul_mod};
use crate::error::{Error, Result};
use crate::localfield::PadicNumber;

/// Largest residue ring the oracle will enumerate per shell.
pub const DEFAULT_ORACLE_BUDGET: u64 = 20_000_000;

/// Phase data of `c · p^{-k}u` (or `c · p^{k}/u`): depth of its fractional
/// part and the unit of `c` modulo that depth.
struct Phase {
    depth: u32,
    unit: u64,
}

fn phase_of(c: &PadicNumber, depth: i64) -> Result<Option<Phase>> {
    if c.is_exact_zero() || depth <= 0 {
        return Ok(None);
    }
    let depth = depth as u32;
    Ok(Some(Phase { depth, unit: c.unit_residue(depth)? }))
}

/// Oracle cost `Σ_k p^{M_k}` of [`j1_bruteforce_sum`].
pub fn j1_bruteforce_cost(x: &PadicNumber, y: &PadicNumber, t: u32) -> Option<u64> {
    let p = x.prime();
    let mut total = 0u64;
    for k in -(t as i64)..=t as i64 {
        total = total.checked_add(checked_pow(p, shell_modulus_exponent(x, y, k))?)?;
    }
    Some(total)
}

fn shell_modulus_exponent(x: &PadicNumber, y: &PadicNumber, k: i64) -> u32 {
    let n1 = x.valuation().map_or(0, |v| k - v);
    let n2 = y.valuation().map_or(0, |v| -k - v);
    (1.max(n1).max(n2) + 1) as u32
}

/// `J₁(x, y, T)` by direct enumeration. On the shell `‖s‖ = p^k` put
/// `s = p^{-k}u`; both `ψ̄(x s)` and `ψ̄(y/s)` depend only on `u` mod `p^{M_k}`
/// with `M_k = max(1, k - v(x), -k - v(y)) + 1`, and each unit class carries
/// `ds/‖s‖`-mass `p^{-M_k}`.
pub fn j1_bruteforce_sum(x: &PadicNumber, y: &PadicNumber, t: u32, budget: u64) -> Result<CyclotomicSum> {
    let p = x.prime();
    if y.prime() != p {
        return Err(Error::InvalidArgument("mixed primes".into()));
    }
    require_odd(p)?;
    if x.is_vanishing() || y.is_vanishing() {
        return Err(Error::PrecisionExhausted("argument cancelled within its precision".into()));
    }
    let mut out = CyclotomicSum::zero(p);
    for k in -(t as i64)..=t as i64 {
        let mk = shell_modulus_exponent(x, y, k);
        let modulus = checked_pow(p, mk)
            .filter(|&m| m <= budget)
            .ok_or_else(|| Error::SearchExhausted(format!("oracle modulus {p}^{mk} exceeds the budget {budget}")))?;
        let px = phase_of(x, x.valuation().map_or(0, |v| k - v))?;
        let py = phase_of(y, y.valuation().map_or(0, |v| -k - v))?;
        let mut counts: BTreeMap<u64, u64> = BTreeMap::new();
        for u in 1..modulus {
            if u % p == 0 {
                continue;
            }
            let mut j = 0u64;
            if let Some(ph) = &px {
                let q = checked_pow(p, ph.depth).unwrap();
                let r = mul_mod(ph.unit, u % q, q);
                j += r * (modulus / q);
            }
            if let Some(ph) = &py {
                let q = checked_pow(p, ph.depth).unwrap();
                let r = mul_mod(ph.unit, inv_mod_u64(u % q, q).expect("unit"), q);
                j += r * (modulus / q);
            }
            // ψ̄: conjugate phase
            let j = (modulus - j % modulus) % modulus;
            *counts.entry(j).or_default() += 1;
        }
        let w = BigRational::new(BigInt::from(1), BigInt::from(modulus));
        out.add_counts(mk, &counts, &w);
    }
    Ok(out)
}

/// Real part of the oracle sum; the imaginary part is checked to vanish.
pub fn j1_bruteforce(x: &PadicNumber, y: &PadicNumber, t: u32) -> Result<f64> {
    let s = j1_bruteforce_sum(x, y, t, DEFAULT_ORACLE_BUDGET)?;
    let v = s.value();
    if v.im.abs() > 1e-12 {
        return Err(Error::Verification(format!("oracle sum has imaginary part {}", v.im)));
    }
    Ok(v.re)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat;
    use crate::oscint::padic::j1_exact_sum;

    #[test]
    fn worked_value_by_enumeration() {
        let x = PadicNumber::from_i64(1, 1, 3, 16).unwrap();
        let z = PadicNumber::zero(3);
        let s = j1_bruteforce_sum(&x, &z, 2, DEFAULT_ORACLE_BUDGET).unwrap();
        assert_eq!(s.as_rational(), Some(rat(5, 3)));
        assert!((j1_bruteforce(&x, &z, 2).unwrap() - 5.0 / 3.0).abs() < 1e-14);
    }

    #[test]
    fn agrees_with_decomposition_on_a_few_points() {
        let p = 5;
        for (vx, ux, vy, uy) in [(-2, 1, -2, 3), (-1, 2, -3, 4), (0, 1, 0, 1), (-3, 7, 1, 2), (2, 1, -4, 1)] {
            let x = PadicNumber::from_parts(p, vx, &BigInt::from(ux), 16).unwrap();
            let y = PadicNumber::from_parts(p, vy, &BigInt::from(uy), 16).unwrap();
            for t in 1..=3 {
                let a = j1_exact_sum(&x, &y, t).unwrap();
                let b = j1_bruteforce_sum(&x, &y, t, DEFAULT_ORACLE_BUDGET).unwrap();
                assert!(a.exact_eq(&b), "v=({vx},{vy}) T={t}: {a} vs {b}");
            }
        }
    }

    #[test]
    fn budget_enforced() {
        let x = PadicNumber::from_parts(3, -12, &BigInt::from(1), 16).unwrap();
        assert!(matches!(j1_bruteforce_sum(&x, &x, 1, 1000), Err(Error::SearchExhausted(_))));
    }
}
