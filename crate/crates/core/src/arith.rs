//! Small integer and rational number theory helpers shared by the modules.

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Deterministic primality test for `u64` (trial division; inputs here are small).
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n < 4 {
        return true;
    }
    if n % 2 == 0 {
        return false;
    }
    let mut d = 3u64;
    while d.saturating_mul(d) <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

pub fn check_prime(p: u64) -> Result<()> {
    if is_prime(p) {
        Ok(())
    } else {
        Err(Error::NotPrime(p))
    }
}

/// `p^k` as `u64`, or `None` on overflow.
pub fn checked_pow(p: u64, k: u32) -> Option<u64> {
    let mut acc = 1u64;
    for _ in 0..k {
        acc = acc.checked_mul(p)?;
    }
    Some(acc)
}

pub fn pow_big(p: u64, k: u32) -> BigUint {
    num_traits::pow(BigUint::from(p), k as usize)
}

/// Splits a nonzero integer as `p^v * rest` with `p ∤ rest`.
pub fn split_valuation(n: &BigInt, p: u64) -> (i64, BigInt) {
    assert!(!n.is_zero(), "valuation of zero");
    let pb = BigInt::from(p);
    let mut v = 0i64;
    let mut m = n.clone();
    loop {
        let (q, r) = m.div_rem(&pb);
        if !r.is_zero() {
            break;
        }
        m = q;
        v += 1;
    }
    (v, m)
}

/// p-adic valuation of a nonzero rational.
pub fn rational_valuation(r: &BigRational, p: u64) -> i64 {
    let (vn, _) = split_valuation(r.numer(), p);
    let (vd, _) = split_valuation(r.denom(), p);
    vn - vd
}

/// Residue of `n` modulo `m` in `[0, m)`.
pub fn mod_big(n: &BigInt, m: &BigUint) -> BigUint {
    let mb = BigInt::from_biguint(Sign::Plus, m.clone());
    n.mod_floor(&mb).to_biguint().expect("non-negative residue")
}

/// Modular inverse of `a` modulo `m` (`gcd(a, m) = 1` required).
pub fn inv_mod_big(a: &BigUint, m: &BigUint) -> Option<BigUint> {
    let a = BigInt::from_biguint(Sign::Plus, a % m);
    let mb = BigInt::from_biguint(Sign::Plus, m.clone());
    let e = a.extended_gcd(&mb);
    if !e.gcd.is_one() {
        return None;
    }
    Some(e.x.mod_floor(&mb).to_biguint().unwrap())
}

/// Modular inverse in `u64` arithmetic.
pub fn inv_mod_u64(a: u64, m: u64) -> Option<u64> {
    if m == 1 {
        return Some(0);
    }
    let (mut old_r, mut r) = (a as i128 % m as i128, m as i128);
    let (mut old_s, mut s) = (1i128, 0i128);
    while r != 0 {
        let q = old_r / r;
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
    }
    if old_r != 1 {
        return None;
    }
    Some(old_s.rem_euclid(m as i128) as u64)
}

pub fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Legendre symbol `(a / p)` for odd prime `p` and `p ∤ a`.
pub fn legendre(a: &BigInt, p: u64) -> i32 {
    let r = mod_big(a, &BigUint::from(p)).to_u64().unwrap();
    debug_assert!(r != 0);
    if pow_mod(r, (p - 1) / 2, p) == 1 {
        1
    } else {
        -1
    }
}

const TRIAL_LIMIT: u64 = 1_000_000;

/// Prime factorization by trial division. Fails when a cofactor above the
/// trial limit is not provably prime.
pub fn factorize(n: &BigUint) -> Result<Vec<(u64, u32)>> {
    let mut out = Vec::new();
    if n.is_zero() {
        return Err(Error::InvalidArgument("cannot factor 0".into()));
    }
    let mut m = n.clone();
    let mut d = 2u64;
    while d <= TRIAL_LIMIT {
        let db = BigUint::from(d);
        if &db * &db > m {
            break;
        }
        let mut e = 0u32;
        while (&m % &db).is_zero() {
            m /= &db;
            e += 1;
        }
        if e > 0 {
            out.push((d, e));
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if !m.is_one() {
        // Whatever is left has no factor ≤ min(d, TRIAL_LIMIT); it is prime if it is
        // below the square of that bound.
        let bound = BigUint::from(d) * BigUint::from(d);
        match m.to_u64() {
            Some(r) if m < bound => out.push((r, 1)),
            _ => return Err(Error::FactorizationLimit(m.to_string())),
        }
    }
    Ok(out)
}

/// Squarefree integer in the rational square class of `r ≠ 0`.
pub fn squarefree_class(r: &BigRational) -> Result<BigInt> {
    assert!(!r.is_zero());
    let n = r.numer() * r.denom();
    let sign = if n.is_negative() { -1 } else { 1 };
    let mut s = BigInt::from(sign);
    for (q, e) in factorize(n.magnitude())? {
        if e % 2 == 1 {
            s *= BigInt::from(q);
        }
    }
    Ok(s)
}

/// Writes `r = s * c^2` with `s` squarefree integer; returns `(s, c)`.
pub fn square_class_decompose(r: &BigRational) -> Result<(BigInt, BigRational)> {
    let s = squarefree_class(r)?;
    let c2 = r / BigRational::from_integer(s.clone());
    let c = rational_sqrt(&c2).ok_or_else(|| {
        Error::InvalidArgument(format!("square-class decomposition failed for {r}"))
    })?;
    Ok((s, c))
}

/// Exact square root of a non-negative rational, if it is a rational square.
pub fn rational_sqrt(r: &BigRational) -> Option<BigRational> {
    if r.is_negative() {
        return None;
    }
    let n = r.numer().to_biguint()?;
    let d = r.denom().to_biguint()?;
    let sn = n.sqrt();
    let sd = d.sqrt();
    if &sn * &sn == n && &sd * &sd == d {
        Some(BigRational::new(sn.into(), sd.into()))
    } else {
        None
    }
}

/// Distinct primes dividing numerator or denominator of `r`.
pub fn prime_support(r: &BigRational) -> Result<Vec<u64>> {
    let mut ps: Vec<u64> = factorize(r.numer().magnitude())?
        .into_iter()
        .chain(factorize(r.denom().magnitude())?)
        .map(|(q, _)| q)
        .collect();
    ps.sort_unstable();
    ps.dedup();
    Ok(ps)
}

pub fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// Parses `"a"` or `"a/b"` into a rational.
pub fn parse_rational(s: &str) -> Result<BigRational> {
    let s = s.trim();
    let bad = |m: &str| Error::Parse {
        position: 0,
        message: format!("{m}: {s:?}"),
    };
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let n: BigInt = n.parse().map_err(|_| bad("bad numerator"))?;
    let d: BigInt = d.parse().map_err(|_| bad("bad denominator"))?;
    if d.is_zero() {
        return Err(Error::ZeroDenominator);
    }
    Ok(BigRational::new(n, d))
}

/// A square root of the unit `c` modulo `p^k`, if `c` is a square in ℤ_p.
/// For `p = 2` the root is correct modulo `2^{k-1}`.
pub fn sqrt_unit_mod(c: &BigUint, p: u64, k: u32) -> Option<BigUint> {
    let m = pow_big(p, k);
    let c = c % &m;
    if p == 2 {
        if k < 3 {
            return (c.is_odd()).then(BigUint::one);
        }
        if (&c % 8u32) != BigUint::one() {
            return None;
        }
        let mut r = BigUint::one();
        for j in 3..k {
            let mj = pow_big(2, j + 1);
            let r2 = &r * &r;
            if (&r2 % &mj) != (&c % &mj) {
                r += pow_big(2, j - 1);
            }
        }
        return Some(r % &m);
    }
    let c0 = (&c % p).to_u64()?;
    let r0 = (1..p).find(|&r| mul_mod(r, r, p) == c0)?;
    let two_inv = inv_mod_big(&BigUint::from(2u32), &m)?;
    let mut r = BigUint::from(r0);
    let mut prec = 1u32;
    while prec < k {
        let inv = inv_mod_big(&r, &m)?;
        r = ((&r + &c * inv) * &two_inv) % &m;
        prec *= 2;
    }
    Some(r)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unit_square_roots() {
        for p in [2u64, 3, 5, 7, 11] {
            let k = 12;
            for c in (1..200u64).filter(|c| c % p != 0) {
                let c = BigUint::from(c);
                match sqrt_unit_mod(&c, p, k) {
                    Some(r) => {
                        let kk = if p == 2 { k - 1 } else { k };
                        let mk = pow_big(p, kk);
                        assert_eq!((&r * &r) % &mk, &c % &mk, "p={p} c={c}");
                    }
                    None => {
                        // no root even modulo p (or 8)
                        let small = if p == 2 { 8 } else { p };
                        let cs = (&c % small).to_u64().unwrap();
                        assert!((0..small).all(|r| (r * r) % small != cs), "p={p} c={c}");
                    }
                }
            }
        }
    }

    #[test]
    fn primes() {
        let ps: Vec<u64> = (0..30).filter(|&n| is_prime(n)).collect();
        assert_eq!(ps, vec![2, 3, 5, 7, 11, 13, 17, 19, 23, 29]);
    }

    #[test]
    fn inverses() {
        for m in [7u64, 9, 27, 125, 343] {
            for a in 1..m {
                match inv_mod_u64(a, m) {
                    Some(b) => assert_eq!(mul_mod(a, b, m), 1),
                    None => assert!(a.gcd(&m) > 1),
                }
            }
        }
    }

    #[test]
    fn square_classes() {
        assert_eq!(squarefree_class(&rat(18, 1)).unwrap(), BigInt::from(2));
        assert_eq!(squarefree_class(&rat(-1, 12)).unwrap(), BigInt::from(-3));
        let (s, c) = square_class_decompose(&rat(-27, 8)).unwrap();
        assert_eq!(s, BigInt::from(-6));
        assert_eq!(BigRational::from_integer(s) * &c * &c, rat(-27, 8));
    }

    #[test]
    fn parse() {
        assert_eq!(parse_rational("-3/6").unwrap(), rat(-1, 2));
        assert_eq!(parse_rational(" 5 ").unwrap(), rat(5, 1));
        assert_eq!(parse_rational("1/0"), Err(Error::ZeroDenominator));
        assert!(parse_rational("x").is_err());
    }

    #[test]
    fn factor() {
        assert_eq!(
            factorize(&BigUint::from(360u32)).unwrap(),
            vec![(2, 3), (3, 2), (5, 1)]
        );
        assert_eq!(factorize(&BigUint::from(1_000_003u64)).unwrap(), vec![(1_000_003, 1)]);
    }
}
