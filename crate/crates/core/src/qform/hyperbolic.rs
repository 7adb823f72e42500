use num_complex::Complex64;
use num_rational::BigRational;

use super::space::{bilinear_over, diagonalize_over, mat_vec, QuadraticSpace};
use super::vector::IsotropicVector;
use crate::error::{Error, Result};
use crate::localfield::{ComplexField, Field, PadicField, PadicNumber, RationalField, RealField, DEFAULT_PRECISION};

/// `V = H ⊥ W` with `H = span(e₁, e₂)` a hyperbolic plane on which
/// `Q(x₁e₁ + x₂e₂) = x₁x₂`, and `W` diagonalized.
#[derive(Clone, Debug, PartialEq)]
pub struct HyperbolicPair<E> {
    pub e1: Vec<E>,
    pub e2: Vec<E>,
    pub residual_basis: Vec<Vec<E>>,
    pub residual_diag: Vec<E>,
}

#[derive(Clone, Debug, PartialEq)]
pub enum HyperbolicSplit {
    Rational(HyperbolicPair<BigRational>),
    Real(HyperbolicPair<f64>),
    Complex(HyperbolicPair<Complex64>),
    Padic(HyperbolicPair<PadicNumber>),
}

impl HyperbolicSplit {
    pub fn residual_rank(&self) -> usize {
        match self {
            Self::Rational(h) => h.residual_diag.len(),
            Self::Real(h) => h.residual_diag.len(),
            Self::Complex(h) => h.residual_diag.len(),
            Self::Padic(h) => h.residual_diag.len(),
        }
    }
}

/// Splits off the hyperbolic plane through the isotropic vector `v`, in
/// whatever field `v` lives in.
pub fn hyperbolic_pair(q: &QuadraticSpace, v: &IsotropicVector) -> Result<HyperbolicSplit> {
    if v.len() != q.dim() {
        return Err(Error::InvalidArgument(format!("vector has length {}, form has dimension {}", v.len(), q.dim())));
    }
    Ok(match v {
        IsotropicVector::Rational(v) => {
            let f = RationalField;
            HyperbolicSplit::Rational(hyperbolic_pair_over(&f, &q.gram_in(&f)?, v)?)
        }
        IsotropicVector::Real(v) => {
            let f = RealField { eps: 1e-9 };
            HyperbolicSplit::Real(hyperbolic_pair_over(&f, &q.gram_in(&f)?, v)?)
        }
        IsotropicVector::Complex(v) => {
            let f = ComplexField { eps: 1e-9 };
            HyperbolicSplit::Complex(hyperbolic_pair_over(&f, &q.gram_in(&f)?, v)?)
        }
        IsotropicVector::Padic(v) => {
            let p = v[0].prime();
            let prec = v.iter().map(|x| x.precision()).max().unwrap_or(DEFAULT_PRECISION).max(1);
            let f = PadicField::new(p, prec)?;
            HyperbolicSplit::Padic(hyperbolic_pair_over(&f, &q.gram_in(&f)?, v)?)
        }
    })
}

pub fn hyperbolic_pair_over<F: Field>(f: &F, gram: &[Vec<F::Elem>], v: &[F::Elem]) -> Result<HyperbolicPair<F::Elem>> {
    let n = gram.len();
    if v.iter().all(|x| f.is_zero(x)) {
        return Err(Error::InvalidArgument("zero vector".into()));
    }
    if !f.is_zero(&bilinear_over(f, gram, v, v)) {
        return Err(Error::InvalidArgument("vector is not isotropic".into()));
    }
    let gv = mat_vec(f, gram, v);
    let j = (0..n)
        .max_by(|&a, &b| f.norm(&gv[a]).total_cmp(&f.norm(&gv[b])))
        .expect("n ≥ 1");
    // non-degeneracy guarantees some ⟨v, e_j⟩ ≠ 0
    assert!(!f.is_zero(&gv[j]), "degenerate pairing for an isotropic vector of a non-degenerate form");
    let b = gv[j].clone();
    let two_b = f.add(&b, &b);
    let qw = gram[j][j].clone();
    let c = f.div(&qw, &two_b)?;
    // w' = e_j − (Q(e_j) / 2b) v is isotropic with ⟨v, w'⟩ = b
    let e2: Vec<F::Elem> = (0..n)
        .map(|i| {
            let ej = if i == j { f.one() } else { f.zero() };
            f.div(&f.sub(&ej, &f.mul(&c, &v[i])), &two_b)
        })
        .collect::<Result<_>>()?;
    let e1 = v.to_vec();

    let half = f.inv(&f.add(&f.one(), &f.one()))?;
    let check = |a: &[F::Elem], b: &[F::Elem], want: &F::Elem, what: &str| -> Result<()> {
        if f.is_zero(&f.sub(&bilinear_over(f, gram, a, b), want)) {
            Ok(())
        } else {
            Err(Error::Verification(format!("hyperbolic pair: {what} failed")))
        }
    };
    check(&e1, &e1, &f.zero(), "Q(e1) = 0")?;
    check(&e2, &e2, &f.zero(), "Q(e2) = 0")?;
    check(&e1, &e2, &half, "<e1,e2> = 1/2")?;

    // orthogonal projection onto H^⊥: u − 2⟨u,e₂⟩e₁ − 2⟨u,e₁⟩e₂
    let two = f.add(&f.one(), &f.one());
    let mut candidates: Vec<Vec<F::Elem>> = Vec::with_capacity(n);
    for k in 0..n {
        let u: Vec<F::Elem> = (0..n).map(|i| if i == k { f.one() } else { f.zero() }).collect();
        let a = f.mul(&two, &bilinear_over(f, gram, &u, &e2));
        let bb = f.mul(&two, &bilinear_over(f, gram, &u, &e1));
        candidates.push(
            (0..n)
                .map(|i| f.sub(&f.sub(&u[i], &f.mul(&a, &e1[i])), &f.mul(&bb, &e2[i])))
                .collect(),
        );
    }
    let basis = independent_subset(f, &candidates, n - 2);
    if basis.len() != n - 2 {
        return Err(Error::Verification("complement of the hyperbolic plane has wrong rank".into()));
    }
    let (residual_basis, residual_diag) = if basis.is_empty() {
        (Vec::new(), Vec::new())
    } else {
        let m = basis.len();
        let sub: Vec<Vec<F::Elem>> = (0..m)
            .map(|a| (0..m).map(|b| bilinear_over(f, gram, &basis[a], &basis[b])).collect())
            .collect();
        let d = diagonalize_over(f, &sub)?;
        let rb = d
            .basis
            .iter()
            .map(|coef| {
                (0..n)
                    .map(|i| coef.iter().zip(&basis).fold(f.zero(), |acc, (c, b)| f.add(&acc, &f.mul(c, &b[i]))))
                    .collect()
            })
            .collect();
        (rb, d.coeffs)
    };
    Ok(HyperbolicPair { e1, e2, residual_basis, residual_diag })
}

/// Greedy selection of up to `want` linearly independent vectors.
fn independent_subset<F: Field>(f: &F, vs: &[Vec<F::Elem>], want: usize) -> Vec<Vec<F::Elem>> {
    let mut chosen = Vec::new();
    // reduced copies with their pivot columns
    let mut echelon: Vec<(usize, Vec<F::Elem>)> = Vec::new();
    for v in vs {
        if chosen.len() == want {
            break;
        }
        let mut r = v.clone();
        for (col, row) in &echelon {
            if f.is_zero(&r[*col]) {
                continue;
            }
            let c = f.div(&r[*col], &row[*col]).expect("nonzero pivot");
            for i in 0..r.len() {
                r[i] = f.sub(&r[i], &f.mul(&c, &row[i]));
            }
        }
        let piv = (0..r.len())
            .filter(|&i| !f.is_zero(&r[i]))
            .max_by(|&a, &b| f.norm(&r[a]).total_cmp(&f.norm(&r[b])));
        if let Some(col) = piv {
            echelon.push((col, r));
            chosen.push(v.clone());
        }
    }
    chosen
}
