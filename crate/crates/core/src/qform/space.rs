use num_rational::BigRational;
use num_traits::{One, Zero};

use super::place::Place;
use crate::error::{Error, Result};
use crate::localfield::{Field, RationalField};

/// A non-degenerate quadratic space `Q(x) = xᵀ G x` over a declared place.
#[derive(Clone, Debug, PartialEq)]
pub struct QuadraticSpace {
    place: Place,
    gram: Vec<Vec<BigRational>>,
}

impl QuadraticSpace {
    pub fn new(place: Place, gram: Vec<Vec<BigRational>>) -> Result<Self> {
        let n = gram.len();
        if n < 2 {
            return Err(Error::InvalidArgument(format!("dimension must be at least 2, got {n}")));
        }
        for (i, row) in gram.iter().enumerate() {
            if row.len() != n {
                return Err(Error::InvalidArgument(format!("Gram row {i} has length {}", row.len())));
            }
            for j in 0..i {
                if gram[i][j] != gram[j][i] {
                    return Err(Error::InvalidArgument(format!("Gram matrix not symmetric at ({i}, {j})")));
                }
            }
        }
        if determinant(&gram).is_zero() {
            return Err(Error::Degenerate);
        }
        Ok(Self { place, gram })
    }

    pub fn diagonal(place: Place, coeffs: &[BigRational]) -> Result<Self> {
        let n = coeffs.len();
        let gram = (0..n)
            .map(|i| (0..n).map(|j| if i == j { coeffs[i].clone() } else { BigRational::zero() }).collect())
            .collect();
        Self::new(place, gram)
    }

    pub fn with_place(&self, place: Place) -> Self {
        Self { place, gram: self.gram.clone() }
    }

    pub fn place(&self) -> Place {
        self.place
    }

    pub fn dim(&self) -> usize {
        self.gram.len()
    }

    pub fn gram(&self) -> &[Vec<BigRational>] {
        &self.gram
    }

    pub fn is_diagonal(&self) -> bool {
        let n = self.dim();
        (0..n).all(|i| (0..n).all(|j| i == j || self.gram[i][j].is_zero()))
    }

    pub fn det(&self) -> BigRational {
        determinant(&self.gram)
    }

    pub fn eval(&self, x: &[BigRational]) -> BigRational {
        self.bilinear(x, x)
    }

    /// `⟨x, y⟩ = xᵀ G y`.
    pub fn bilinear(&self, x: &[BigRational], y: &[BigRational]) -> BigRational {
        bilinear_over(&RationalField, &self.gram, x, y)
    }

    /// The Gram matrix mapped into another field.
    pub fn gram_in<F: Field>(&self, f: &F) -> Result<Vec<Vec<F::Elem>>> {
        self.gram
            .iter()
            .map(|row| row.iter().map(|a| f.from_rational(a)).collect())
            .collect()
    }
}

pub fn bilinear_over<F: Field>(f: &F, gram: &[Vec<F::Elem>], x: &[F::Elem], y: &[F::Elem]) -> F::Elem {
    let mut acc = f.zero();
    for (i, row) in gram.iter().enumerate() {
        let mut r = f.zero();
        for (j, g) in row.iter().enumerate() {
            r = f.add(&r, &f.mul(g, &y[j]));
        }
        acc = f.add(&acc, &f.mul(&x[i], &r));
    }
    acc
}

pub fn mat_vec<F: Field>(f: &F, m: &[Vec<F::Elem>], x: &[F::Elem]) -> Vec<F::Elem> {
    m.iter()
        .map(|row| row.iter().zip(x).fold(f.zero(), |acc, (a, b)| f.add(&acc, &f.mul(a, b))))
        .collect()
}

/// Determinant by fraction-exact elimination.
pub fn determinant(m: &[Vec<BigRational>]) -> BigRational {
    let n = m.len();
    let mut a = m.to_vec();
    let mut det = BigRational::one();
    for c in 0..n {
        let Some(piv) = (c..n).find(|&r| !a[r][c].is_zero()) else {
            return BigRational::zero();
        };
        if piv != c {
            a.swap(piv, c);
            det = -det;
        }
        let pv = a[c][c].clone();
        det *= &pv;
        for r in c + 1..n {
            if a[r][c].is_zero() {
                continue;
            }
            let factor = &a[r][c] / &pv;
            for k in c..n {
                let t = &factor * &a[c][k];
                a[r][k] -= t;
            }
        }
    }
    det
}

/// Result of congruence diagonalization: `Pᵀ G P = diag(coeffs)`.
#[derive(Clone, Debug)]
pub struct Diagonalization<E> {
    /// Column `j` of `P` is `basis[j]`.
    pub basis: Vec<Vec<E>>,
    pub coeffs: Vec<E>,
}

impl<E: Clone> Diagonalization<E> {
    /// `P` as a row-major matrix.
    pub fn matrix(&self) -> Vec<Vec<E>> {
        let n = self.basis.len();
        (0..n).map(|i| (0..n).map(|j| self.basis[j][i].clone()).collect()).collect()
    }
}

/// Symmetric Gaussian elimination over any [`Field`], pivoting on the largest
/// available diagonal (or on `e_j + e_k` when every remaining diagonal vanishes).
pub fn diagonalize_over<F: Field>(f: &F, gram: &[Vec<F::Elem>]) -> Result<Diagonalization<F::Elem>> {
    let n = gram.len();
    let mut a = gram.to_vec();
    let mut basis: Vec<Vec<F::Elem>> = (0..n)
        .map(|j| (0..n).map(|i| if i == j { f.one() } else { f.zero() }).collect())
        .collect();

    // column ops on `basis` mirror the congruence ops on `a`
    let swap = |a: &mut Vec<Vec<F::Elem>>, basis: &mut Vec<Vec<F::Elem>>, i: usize, j: usize| {
        if i == j {
            return;
        }
        a.swap(i, j);
        for row in a.iter_mut() {
            row.swap(i, j);
        }
        basis.swap(i, j);
    };
    // e_j <- e_j + c e_k
    let axpy = |a: &mut Vec<Vec<F::Elem>>, basis: &mut Vec<Vec<F::Elem>>, j: usize, k: usize, c: &F::Elem| {
        for r in 0..n {
            let t = f.mul(c, &a[r][k]);
            a[r][j] = f.add(&a[r][j], &t);
        }
        for col in 0..n {
            let t = f.mul(c, &a[k][col]);
            a[j][col] = f.add(&a[j][col], &t);
        }
        for i in 0..n {
            let t = f.mul(c, &basis[k][i]);
            basis[j][i] = f.add(&basis[j][i], &t);
        }
    };

    for i in 0..n {
        let mut best: Option<usize> = None;
        for j in i..n {
            if !f.is_zero(&a[j][j]) && best.map_or(true, |b| f.norm(&a[j][j]) > f.norm(&a[b][b])) {
                best = Some(j);
            }
        }
        match best {
            Some(j) => swap(&mut a, &mut basis, i, j),
            None => {
                let mut off = None;
                let mut best_norm = -1.0;
                for j in i..n {
                    for k in j + 1..n {
                        if !f.is_zero(&a[j][k]) && f.norm(&a[j][k]) > best_norm {
                            best_norm = f.norm(&a[j][k]);
                            off = Some((j, k));
                        }
                    }
                }
                let Some((j, k)) = off else {
                    return Err(Error::Degenerate);
                };
                axpy(&mut a, &mut basis, j, k, &f.one());
                swap(&mut a, &mut basis, i, j);
            }
        }
        let pivot = a[i][i].clone();
        for j in i + 1..n {
            if f.is_zero(&a[j][i]) {
                continue;
            }
            let c = f.neg(&f.div(&a[j][i], &pivot)?);
            axpy(&mut a, &mut basis, j, i, &c);
        }
    }
    let coeffs = (0..n).map(|i| a[i][i].clone()).collect();
    Ok(Diagonalization { basis, coeffs })
}

/// Exact rational diagonalization of a quadratic space.
pub fn diagonalize(q: &QuadraticSpace) -> Result<Diagonalization<BigRational>> {
    diagonalize_over(&RationalField, q.gram())
}
