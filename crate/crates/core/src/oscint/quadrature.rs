use std::f64::consts::PI;
use std::sync::OnceLock;

use num_complex::Complex64;

use crate::error::{Error, Result};

const ORDER: usize = 16;

/// Gauss–Legendre nodes and weights on [-1, 1], by Newton iteration on `P_16`.
fn gauss_legendre() -> &'static ([f64; ORDER], [f64; ORDER]) {
    static RULE: OnceLock<([f64; ORDER], [f64; ORDER])> = OnceLock::new();
    RULE.get_or_init(|| {
        let mut x = [0.0; ORDER];
        let mut w = [0.0; ORDER];
        let n = ORDER as f64;
        for i in 0..ORDER {
            let mut z = (PI * (i as f64 + 0.75) / (n + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (mut p0, mut p1) = (1.0, z);
                for k in 2..=ORDER {
                    let k = k as f64;
                    let p2 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p0) / k;
                    p0 = p1;
                    p1 = p2;
                }
                dp = n * (z * p1 - p0) / (z * z - 1.0);
                let dz = p1 / dp;
                z -= dz;
                if dz.abs() < 1e-16 {
                    break;
                }
            }
            x[i] = z;
            w[i] = 2.0 / ((1.0 - z * z) * dp * dp);
        }
        (x, w)
    })
}

/// One 16-point panel on `[a, b]`.
pub fn gl16<F: Fn(f64) -> Complex64>(f: &F, a: f64, b: f64) -> Complex64 {
    let (x, w) = gauss_legendre();
    let h = 0.5 * (b - a);
    let c = 0.5 * (b + a);
    let mut acc = Complex64::new(0.0, 0.0);
    for i in 0..ORDER {
        acc += f(c + h * x[i]) * w[i];
    }
    acc * h
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Quadrature {
    pub value: Complex64,
    pub error_estimate: f64,
    pub panels: usize,
}

/// Adaptive panel integration of a complex integrand.
///
/// `breaks` gives the initial panels (for oscillatory integrands they should
/// be no wider than a local wavelength). Each panel is compared with its two
/// halves and bisected until the difference is within its share of `tol`.
pub fn integrate_panels<F: Fn(f64) -> Complex64>(
    f: &F,
    breaks: &[f64],
    tol: f64,
    max_panels: usize,
) -> Result<Quadrature> {
    let total: f64 = breaks.last().unwrap() - breaks[0];
    let mut out = Quadrature { value: Complex64::new(0.0, 0.0), error_estimate: 0.0, panels: 0 };
    if total <= 0.0 {
        return Ok(out);
    }
    let mut stack: Vec<(f64, f64, Complex64)> = Vec::new();
    for win in breaks.windows(2).rev() {
        if win[1] > win[0] {
            stack.push((win[0], win[1], gl16(f, win[0], win[1])));
        }
    }
    let mut over_budget = false;
    while let Some((a, b, whole)) = stack.pop() {
        let m = 0.5 * (a + b);
        let left = gl16(f, a, m);
        let right = gl16(f, m, b);
        let halves = left + right;
        let err = (halves - whole).norm();
        let share = tol * (b - a) / total;
        out.panels += 1;
        if err <= share || (b - a) < 1e-13 * total.max(1.0) || over_budget {
            out.value += halves;
            out.error_estimate += err;
            continue;
        }
        if out.panels + stack.len() >= max_panels {
            over_budget = true;
            out.value += halves;
            out.error_estimate += err;
            continue;
        }
        stack.push((m, b, right));
        stack.push((a, m, left));
    }
    if over_budget && out.error_estimate > tol {
        return Err(Error::QuadratureBudget { tol, achieved: out.error_estimate, panels: out.panels });
    }
    Ok(out)
}

/// Breakpoints on `[a, b]` so that each panel is at most `2π / max(1, ω)` wide,
/// where `omega(a', b')` bounds the angular frequency on `[a', b']`.
pub fn wavelength_breaks<W: Fn(f64, f64) -> f64>(a: f64, b: f64, omega: W) -> Vec<f64> {
    let mut out = vec![a];
    let mut t = a;
    while t < b {
        // grow the step until it is at most one local wavelength
        let mut h = (b - t).min(1.0);
        loop {
            let w = omega(t, t + h).max(1.0);
            if h <= 2.0 * PI / w || h < 1e-12 {
                break;
            }
            h = (2.0 * PI / w).min(0.5 * h);
        }
        t = (t + h).min(b);
        out.push(t);
    }
    out
}
