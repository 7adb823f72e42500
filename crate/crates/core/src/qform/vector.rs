use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Serialize, Serializer};

use super::hilbert::{isotropy_classify, Isotropy};
use super::place::Place;
use super::space::{diagonalize, QuadraticSpace};
use crate::arith::{checked_pow, rational_sqrt, square_class_decompose};
use crate::error::{Error, Result};
use crate::localfield::{PadicNumber, DEFAULT_PRECISION};

/// A nonzero vector with `Q(v) = 0` in the field of the form's place.
///
/// Rational vectors are exact zeros. Real and complex vectors are floating
/// zeros of forms with no small rational zero. p-adic vectors vanish to the
/// full precision window.
#[derive(Clone, Debug, PartialEq)]
pub enum IsotropicVector {
    Rational(Vec<BigRational>),
    Real(Vec<f64>),
    Complex(Vec<Complex64>),
    Padic(Vec<PadicNumber>),
}

impl IsotropicVector {
    pub fn len(&self) -> usize {
        match self {
            Self::Rational(v) => v.len(),
            Self::Real(v) => v.len(),
            Self::Complex(v) => v.len(),
            Self::Padic(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn as_rational(&self) -> Option<&[BigRational]> {
        match self {
            Self::Rational(v) => Some(v),
            _ => None,
        }
    }

    pub fn to_strings(&self) -> Vec<String> {
        match self {
            Self::Rational(v) => v.iter().map(|x| x.to_string()).collect(),
            Self::Real(v) => v.iter().map(|x| format!("{x:.17}")).collect(),
            Self::Complex(v) => v.iter().map(|z| format!("{}{:+}i", z.re, z.im)).collect(),
            Self::Padic(v) => v.iter().map(|x| x.to_string()).collect(),
        }
    }
}

impl Serialize for IsotropicVector {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_seq(self.to_strings())
    }
}

#[derive(Clone, Copy, Debug)]
pub struct SearchOptions {
    /// Coordinates in `[-height, height]` for the exact rational pre-search
    /// (reduced automatically in high dimension).
    pub height: u32,
    /// Residue depth `k` for the search mod `p^k`. `None` uses the depth that
    /// Hensel's lemma needs for squarefree coefficients (3 for odd p, 5 for p = 2).
    pub residue_depth: Option<u32>,
    /// Significant digits of the lifted p-adic vector.
    pub precision: u32,
}

impl Default for SearchOptions {
    fn default() -> Self {
        Self { height: 3, residue_depth: None, precision: DEFAULT_PRECISION }
    }
}

/// Finds a nonzero isotropic vector of an isotropic form.
pub fn find_isotropic_vector(q: &QuadraticSpace) -> Result<IsotropicVector> {
    find_isotropic_vector_with(q, &SearchOptions::default())
}

pub fn find_isotropic_vector_with(q: &QuadraticSpace, opts: &SearchOptions) -> Result<IsotropicVector> {
    if q.place() != Place::Global && isotropy_classify(q)? == Isotropy::Anisotropic {
        return Err(Error::Anisotropic);
    }
    if let Some(v) = small_rational_zero(q, opts.height) {
        return Ok(IsotropicVector::Rational(v));
    }
    match q.place() {
        Place::Global => Err(Error::SearchExhausted(format!(
            "no rational zero of height ≤ {}",
            opts.height
        ))),
        Place::Real => real_zero(q),
        Place::Complex => complex_zero(q),
        Place::Padic(p) => padic_zero(q, p, opts),
    }
}

/// Value order 1, -1, 0, 2, -2, 3, -3, ... so that small, positive-leading
/// vectors come first.
fn value_order(h: i64) -> Vec<i64> {
    let mut out = vec![1, -1, 0];
    for k in 2..=h {
        out.push(k);
        out.push(-k);
    }
    out
}

fn small_rational_zero(q: &QuadraticSpace, height: u32) -> Option<Vec<BigRational>> {
    let n = q.dim();
    let mut h = height.max(1) as i64;
    while h > 1 && ((2 * h + 1) as f64).powi(n as i32) > 2e5 {
        h -= 1;
    }
    let vals = value_order(h);
    let m = vals.len();
    let mut idx = vec![0usize; n];
    let g: Vec<Vec<BigRational>> = q.gram().to_vec();
    loop {
        let v: Vec<i64> = idx.iter().map(|&i| vals[i]).collect();
        let lead = v.iter().find(|&&x| x != 0);
        if matches!(lead, Some(&x) if x > 0) && v.iter().fold(0i64, |a, &b| a.gcd(&b)) == 1 {
            let mut acc = BigRational::zero();
            for i in 0..n {
                for j in 0..n {
                    if v[i] != 0 && v[j] != 0 {
                        acc += &g[i][j] * BigRational::from_integer(BigInt::from(v[i] * v[j]));
                    }
                }
            }
            if acc.is_zero() {
                return Some(v.into_iter().map(|x| BigRational::from_integer(x.into())).collect());
            }
        }
        // odometer, last coordinate fastest
        let mut k = n;
        loop {
            if k == 0 {
                return None;
            }
            k -= 1;
            idx[k] += 1;
            if idx[k] < m {
                break;
            }
            idx[k] = 0;
        }
    }
}

fn apply_basis_f64(basis: &[Vec<BigRational>], w: &[f64]) -> Vec<f64> {
    let n = basis.len();
    (0..n)
        .map(|i| (0..n).map(|j| basis[j][i].to_f64().unwrap() * w[j]).sum())
        .collect()
}

fn apply_basis(basis: &[Vec<BigRational>], w: &[BigRational]) -> Vec<BigRational> {
    let n = basis.len();
    (0..n)
        .map(|i| (0..n).fold(BigRational::zero(), |acc, j| acc + &basis[j][i] * &w[j]))
        .collect()
}

/// One positive and one negative axis of the diagonalized form.
fn real_zero(q: &QuadraticSpace) -> Result<IsotropicVector> {
    let d = diagonalize(q)?;
    let i = d.coeffs.iter().position(|a| a.is_positive()).ok_or(Error::Anisotropic)?;
    let j = d.coeffs.iter().position(|a| a.is_negative()).ok_or(Error::Anisotropic)?;
    let n = q.dim();
    let ratio = &d.coeffs[i] / d.coeffs[j].abs();
    if let Some(r) = rational_sqrt(&ratio) {
        let mut w = vec![BigRational::zero(); n];
        w[i] = BigRational::one();
        w[j] = r;
        return Ok(IsotropicVector::Rational(apply_basis(&d.basis, &w)));
    }
    let mut w = vec![0.0; n];
    w[i] = 1.0;
    w[j] = ratio.to_f64().unwrap().sqrt();
    Ok(IsotropicVector::Real(apply_basis_f64(&d.basis, &w)))
}

fn complex_zero(q: &QuadraticSpace) -> Result<IsotropicVector> {
    let d = diagonalize(q)?;
    let n = q.dim();
    let ratio = -&d.coeffs[0] / &d.coeffs[1];
    if let Some(r) = rational_sqrt(&ratio) {
        let mut w = vec![BigRational::zero(); n];
        w[0] = BigRational::one();
        w[1] = r;
        return Ok(IsotropicVector::Rational(apply_basis(&d.basis, &w)));
    }
    let root = Complex64::new(ratio.to_f64().unwrap(), 0.0).sqrt();
    let v = (0..n)
        .map(|i| {
            let b0 = d.basis[0][i].to_f64().unwrap();
            let b1 = d.basis[1][i].to_f64().unwrap();
            Complex64::new(b0, 0.0) + root * b1
        })
        .collect();
    Ok(IsotropicVector::Complex(v))
}

/// Integer form `Σ sᵢ yᵢ²` with `sᵢ` squarefree, reached from the diagonal
/// form by `wᵢ = yᵢ / cᵢ`.
struct SquarefreeDiagonal {
    s: Vec<BigInt>,
    c: Vec<BigRational>,
}

fn val_u64(mut x: u64, p: u64, cap: u32) -> u32 {
    if x == 0 {
        return cap;
    }
    let mut v = 0;
    while x % p == 0 && v < cap {
        x /= p;
        v += 1;
    }
    v
}

/// Searches residues mod `p^k` for a primitive `y` with `v(Σ sᵢyᵢ²) ≥ 2δ+1`,
/// `δ = min v(2sᵢyᵢ)`: exactly the condition under which Newton's method
/// converges to a true zero. Coordinates are normalized so that the last
/// unit coordinate equals 1, and the lexicographically smallest solution is
/// returned.
fn residue_search(s: &[BigInt], p: u64, k: u32) -> Option<Vec<u64>> {
    let n = s.len();
    let m = checked_pow(p, k)?;
    let ms = m as usize;
    let levels = k as usize + 1; // δ in 0..k, k meaning "≥ k"
    let sm: Vec<u64> = s.iter().map(|x| x.mod_floor(&BigInt::from(m)).to_u64().unwrap()).collect();
    let two_s_val: Vec<u32> = sm.iter().map(|&x| val_u64((2 * x as u128 % m as u128) as u64, p, k)).collect();
    let state = |sum: u64, d: usize| sum as usize * levels + d;

    let accepting = |sum: u64, d: usize| -> bool {
        let need = 2 * d as u32 + 1;
        need <= k && sum % checked_pow(p, need).unwrap() == 0
    };

    for unit_pos in (0..n).rev() {
        // allowed residues per coordinate
        let allowed = |i: usize| -> Vec<u64> {
            if i == unit_pos {
                vec![1]
            } else if i > unit_pos {
                (0..m).filter(|y| y % p == 0).collect()
            } else {
                (0..m).collect()
            }
        };
        let step = |i: usize, sum: u64, d: usize, y: u64| -> (u64, usize) {
            let term = ((sm[i] as u128 * y as u128 % m as u128) * y as u128 % m as u128) as u64;
            let dy = if y == 0 { k } else { (two_s_val[i] + val_u64(y, p, k)).min(k) };
            ((sum + term) % m, d.min(dy as usize))
        };
        // good[i][state]: the suffix i.. can be completed to an accepting state
        let mut good = vec![vec![false; ms * levels]; n + 1];
        for sum in 0..m {
            for d in 0..levels {
                good[n][state(sum, d)] = accepting(sum, d);
            }
        }
        let allowed_sets: Vec<Vec<u64>> = (0..n).map(allowed).collect();
        for i in (0..n).rev() {
            let (head, tail) = good.split_at_mut(i + 1);
            let next = &tail[0];
            let cur = &mut head[i];
            for sum in 0..m {
                for d in 0..levels {
                    cur[state(sum, d)] = allowed_sets[i].iter().any(|&y| {
                        let (s2, d2) = step(i, sum, d, y);
                        next[state(s2, d2)]
                    });
                }
            }
        }
        if !good[0][state(0, k as usize)] {
            continue;
        }
        let mut y = Vec::with_capacity(n);
        let (mut sum, mut d) = (0u64, k as usize);
        for i in 0..n {
            let pick = allowed_sets[i]
                .iter()
                .copied()
                .find(|&c| {
                    let (s2, d2) = step(i, sum, d, c);
                    good[i + 1][state(s2, d2)]
                })
                .expect("reachable");
            (sum, d) = step(i, sum, d, pick);
            y.push(pick);
        }
        return Some(y);
    }
    None
}

/// Hensel depth sufficient for squarefree integer coefficients.
pub fn hensel_depth(p: u64) -> u32 {
    if p == 2 {
        5
    } else {
        3
    }
}

fn padic_zero(q: &QuadraticSpace, p: u64, opts: &SearchOptions) -> Result<IsotropicVector> {
    let d = diagonalize(q)?;
    let mut sq = SquarefreeDiagonal { s: Vec::new(), c: Vec::new() };
    for a in &d.coeffs {
        let (s, c) = square_class_decompose(a)?;
        sq.s.push(s);
        sq.c.push(c);
    }
    let k = opts.residue_depth.unwrap_or_else(|| hensel_depth(p));
    match checked_pow(p, k) {
        Some(m) if (m as f64).powi(2) * (k as f64 + 1.0) * sq.s.len() as f64 <= 2e9 => {}
        _ => {
            return Err(Error::SearchExhausted(format!(
                "residue search mod {p}^{k} is beyond the search budget"
            )))
        }
    }
    let y = residue_search(&sq.s, p, k)
        .ok_or_else(|| Error::SearchExhausted(format!("no primitive zero mod {p}^{k}")))?;

    let prec = opts.precision.max(k + 2);
    let mut ys: Vec<PadicNumber> = y
        .iter()
        .map(|&r| {
            if r == 0 {
                Ok(PadicNumber::zero(p))
            } else {
                PadicNumber::from_i64(r as i64, 1, p, prec)
            }
        })
        .collect::<Result<_>>()?;
    let ss: Vec<PadicNumber> = sq
        .s
        .iter()
        .map(|s| PadicNumber::from_rational(s, &BigInt::one(), p, prec))
        .collect::<Result<_>>()?;
    let two = PadicNumber::from_i64(2, 1, p, prec)?;

    // Newton on the coordinate achieving the smallest v(2 sᵢ yᵢ)
    let lead = (0..ys.len())
        .filter(|&i| !ys[i].is_zero())
        .min_by_key(|&i| (&two * &(&ss[i] * &ys[i])).valuation().unwrap())
        .expect("primitive residue vector");
    let value = |ys: &[PadicNumber]| {
        ys.iter()
            .zip(&ss)
            .fold(PadicNumber::zero(p), |acc, (y, s)| &acc + &(s * &(y * y)))
    };
    let mut f = value(&ys);
    let mut iters = 0;
    while !f.is_zero() {
        iters += 1;
        if iters > 4 * prec {
            return Err(Error::PrecisionExhausted("Newton iteration did not converge".into()));
        }
        let deriv = &two * &(&ss[lead] * &ys[lead]);
        let corr = f.div(&deriv)?;
        ys[lead] = &ys[lead] - &corr;
        f = value(&ys);
    }

    let mut w = Vec::with_capacity(ys.len());
    for (y, c) in ys.iter().zip(&sq.c) {
        w.push(y.div(&PadicNumber::from_ratio(c, p, prec)?)?);
    }
    let n = q.dim();
    let mut v = Vec::with_capacity(n);
    for i in 0..n {
        let mut acc = PadicNumber::zero(p);
        for (j, wj) in w.iter().enumerate() {
            if d.basis[j][i].is_zero() || wj.is_exact_zero() {
                continue;
            }
            acc = &acc + &(&PadicNumber::from_ratio(&d.basis[j][i], p, prec)? * wj);
        }
        v.push(acc);
    }
    Ok(IsotropicVector::Padic(v))
}

/// `Q(v)` evaluated in ℚ_p.
pub fn padic_eval(q: &QuadraticSpace, v: &[PadicNumber], p: u64, precision: u32) -> Result<PadicNumber> {
    let n = q.dim();
    let mut acc = PadicNumber::zero(p);
    for i in 0..n {
        for j in 0..n {
            let g = &q.gram()[i][j];
            if g.is_zero() || v[i].is_exact_zero() || v[j].is_exact_zero() {
                continue;
            }
            let gp = PadicNumber::from_ratio(g, p, precision)?;
            acc = &acc + &(&gp * &(&v[i] * &v[j]));
        }
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat;

    fn diag(place: Place, c: &[i64]) -> QuadraticSpace {
        QuadraticSpace::diagonal(place, &c.iter().map(|&x| rat(x, 1)).collect::<Vec<_>>()).unwrap()
    }

    fn rats(v: &[i64]) -> Vec<BigRational> {
        v.iter().map(|&x| rat(x, 1)).collect()
    }

    #[test]
    fn difference_of_squares() {
        let v = find_isotropic_vector(&diag(Place::Real, &[1, -1])).unwrap();
        assert_eq!(v, IsotropicVector::Rational(rats(&[1, 1])));
    }

    #[test]
    fn product_form_everywhere() {
        let g = vec![rats(&[0, 0]), rats(&[0, 0])];
        let mut g = g;
        g[0][1] = rat(1, 2);
        g[1][0] = rat(1, 2);
        for place in [Place::Real, Place::Complex, Place::Padic(3), Place::Padic(2), Place::Global] {
            let q = QuadraticSpace::new(place, g.clone()).unwrap();
            assert_eq!(find_isotropic_vector(&q).unwrap(), IsotropicVector::Rational(rats(&[1, 0])));
        }
    }

    #[test]
    fn gaussian_form_over_q5() {
        let q = diag(Place::Padic(5), &[1, 1]);
        let IsotropicVector::Padic(v) = find_isotropic_vector(&q).unwrap() else {
            panic!("x²+y² has no rational zero");
        };
        assert_eq!(v[0].unit_residue(1).unwrap(), 2);
        assert_eq!(v[0].valuation(), Some(0));
        assert_eq!(v[1].unit_residue(1).unwrap(), 1);
        assert_eq!(v[1].valuation(), Some(0));
        let val = padic_eval(&q, &v, 5, DEFAULT_PRECISION).unwrap();
        assert!(val.is_vanishing());
        assert!(val.absolute_precision().unwrap() >= DEFAULT_PRECISION as i64 - 1);
    }

    #[test]
    fn irrational_real_zero() {
        let q = diag(Place::Real, &[1, -2]);
        let v = find_isotropic_vector(&q).unwrap();
        let IsotropicVector::Real(v) = v else { panic!("expected a real vector") };
        assert!((v[0] * v[0] - 2.0 * v[1] * v[1]).abs() < 1e-12);
    }

    #[test]
    fn complex_zero_of_definite_form() {
        let IsotropicVector::Complex(v) = find_isotropic_vector(&diag(Place::Complex, &[1, 2])).unwrap() else {
            panic!()
        };
        assert!((v[0] * v[0] + v[1] * v[1] * 2.0).norm() < 1e-12);
    }

    #[test]
    fn anisotropic_rejected() {
        assert_eq!(find_isotropic_vector(&diag(Place::Padic(3), &[1, 1])), Err(Error::Anisotropic));
        assert_eq!(find_isotropic_vector(&diag(Place::Real, &[1, 3])), Err(Error::Anisotropic));
    }

    #[test]
    fn padic_zeros_vanish() {
        let cases: &[(u64, &[i64])] = &[
            (2, &[1, 1, 1, 1, 1]),
            (2, &[1, 1, -6]),
            (3, &[1, 1, 3, 3, 3]),
            (3, &[1, 1, 1]),
            (7, &[3, 5, 7]),
            (5, &[5, 10, 2]),
            (2, &[2, 6, 3, 1]),
        ];
        for (p, c) in cases {
            let q = diag(Place::Padic(*p), c);
            if isotropy_classify(&q).unwrap() == Isotropy::Anisotropic {
                continue;
            }
            match find_isotropic_vector(&q).unwrap() {
                IsotropicVector::Rational(v) => assert!(q.eval(&v).is_zero()),
                IsotropicVector::Padic(v) => {
                    assert!(v.iter().any(|x| !x.is_zero()));
                    assert!(padic_eval(&q, &v, *p, 64).unwrap().is_zero(), "{p} {c:?}");
                }
                other => panic!("unexpected {other:?}"),
            }
        }
    }

    #[test]
    fn non_diagonal_padic() {
        // Gram [[1, 1/2], [1/2, 2]] → x² + xy + 2y², discriminant -7 ⇒ isotropic over ℚ₂ and ℚ₇... check ℚ₂
        let g = vec![vec![rat(1, 1), rat(1, 2)], vec![rat(1, 2), rat(2, 1)]];
        let q = QuadraticSpace::new(Place::Padic(2), g).unwrap();
        assert_eq!(isotropy_classify(&q).unwrap(), Isotropy::Isotropic);
        let IsotropicVector::Padic(v) = find_isotropic_vector(&q).unwrap() else { panic!() };
        assert!(padic_eval(&q, &v, 2, 64).unwrap().is_zero());
    }
}
