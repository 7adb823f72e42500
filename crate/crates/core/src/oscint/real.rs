use std::f64::consts::PI;

use num_complex::Complex64;
use serde::Serialize;

use super::quadrature::{integrate_panels, wavelength_breaks, Quadrature};
use crate::error::{Error, Result};

/// Default absolute tolerance for [`real_mu_hat`].
pub const DEFAULT_TOL: f64 = 1e-9;

const MAX_PANELS: usize = 2_000_000;

/// `|x| s` (or `|y| / s`) below which the phase is integrated directly on the
/// real line; beyond it the integration path is rotated into the complex plane.
const DIRECT_LIMIT: f64 = 8.0;

/// The T-chopped hyperbola measure on ℝ².
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct RealChoppedMeasure {
    t: f64,
}

impl RealChoppedMeasure {
    pub fn new(t: f64) -> Result<Self> {
        if !(t.is_finite() && t > 0.0) {
            return Err(Error::InvalidArgument(format!("chop parameter must be positive, got {t}")));
        }
        Ok(Self { t })
    }

    pub fn t(&self) -> f64 {
        self.t
    }

    pub fn fourier(&self, x: f64, y: f64, tol: f64) -> Result<RealMuHat> {
        real_mu_hat(self.t, x, y, tol)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct RealMuHat {
    pub value: f64,
    pub error_estimate: f64,
    pub panels: usize,
}

/// Picks a fixed representative of `{(x,y), (-x,-y), (y,x), (-y,-x)}`; the
/// transform is invariant under all four, so this makes the symmetries exact.
fn canonical(x: f64, y: f64) -> (f64, f64) {
    let mut best = (x, y);
    for c in [(-x, -y), (y, x), (-y, -x)] {
        if c.0.total_cmp(&best.0).then(c.1.total_cmp(&best.1)).is_gt() {
            best = c;
        }
    }
    // no signed zeros in what follows
    (best.0 + 0.0, best.1 + 0.0)
}

/// `∫ exp(2πi(a s + b/s)) ds/s` from `s0` to `+∞` along the ray
/// `s = s0 + iστ`, σ = sign(a). Valid when `|b| / s0² ≤ |a| / 4`, which makes
/// the integrand decay at least like `exp(-1.5π|a|τ) / s0`.
fn ray(a: f64, b: f64, s0: f64, tol: f64) -> Result<Quadrature> {
    let sigma = a.signum();
    let kappa = 1.5 * PI * a.abs();
    let f = |tau: f64| {
        let s = Complex64::new(s0, sigma * tau);
        let phase = Complex64::i() * 2.0 * PI * (a * s + b / s);
        phase.exp() * Complex64::new(0.0, sigma) / s
    };
    let cut = tol * 1e-2;
    let tau_max = ((1.0 / (cut * kappa * s0)).ln() / kappa).max(0.0);
    if tau_max == 0.0 {
        return Ok(Quadrature { value: Complex64::new(0.0, 0.0), error_estimate: cut, panels: 0 });
    }
    let omega = 2.0 * PI * a.abs() + 2.0 * PI * b.abs() / (s0 * s0);
    let mut breaks = wavelength_breaks(0.0, tau_max, |_, _| omega);
    // resolve the 1/s factor near the start of the ray
    let mut g = s0;
    while g < tau_max {
        breaks.push(g);
        g *= 2.0;
    }
    breaks.sort_by(f64::total_cmp);
    breaks.dedup();
    let mut q = integrate_panels(&f, &breaks, tol, MAX_PANELS)?;
    q.error_estimate += cut;
    Ok(q)
}

/// `μ̂_T(x, y) = (1/2T) ∫_{-T}^{T} cos(2π(x e^t + y e^{-t})) dt`, to absolute
/// accuracy `tol`.
///
/// The middle of the range, where both `|x| e^t` and `|y| e^{-t}` are moderate,
/// is integrated on panels no wider than the local wavelength. In the two
/// tails one exponential dominates and the path in `s = e^t` is turned into
/// the half plane where that exponential decays, so the cost does not grow
/// with `|x| e^T`.
pub fn real_mu_hat(t: f64, x: f64, y: f64, tol: f64) -> Result<RealMuHat> {
    if !(t.is_finite() && t > 0.0) {
        return Err(Error::InvalidArgument(format!("chop parameter must be positive, got {t}")));
    }
    if !(tol >= 1e-12) {
        return Err(Error::InvalidArgument(format!("tolerance must be at least 1e-12, got {tol}")));
    }
    if !(x.is_finite() && y.is_finite()) {
        return Err(Error::InvalidArgument("frequency must be finite".into()));
    }
    let (x, y) = canonical(x, y);
    if x == 0.0 && y == 0.0 {
        return Ok(RealMuHat { value: 1.0, error_estimate: 0.0, panels: 0 });
    }
    let (ax, ay) = (x.abs(), y.abs());
    let budget = tol * 2.0 * t;

    let t_hi = if ax == 0.0 { t } else { (DIRECT_LIMIT / ax).max(2.0 * (ay / ax).sqrt()).ln() }.clamp(-t, t);
    let t_lo = if ay == 0.0 { -t } else { -(DIRECT_LIMIT / ay).max(2.0 * (ax / ay).sqrt()).ln() }.clamp(-t, t);

    let phi = |u: f64| Complex64::new(0.0, 2.0 * PI * (x * u.exp() + y * (-u).exp())).exp();
    let breaks = wavelength_breaks(t_lo, t_hi, |a, b| 2.0 * PI * (ax * b.exp() + ay * (-a).exp()));
    let core = integrate_panels(&phi, &breaks, budget * 0.5, MAX_PANELS)?;

    let mut total = core.value;
    let mut err = core.error_estimate;
    let mut panels = core.panels;
    let mut add = |q: Quadrature, sign: f64| {
        total += q.value * sign;
        err += q.error_estimate;
        panels += q.panels;
    };
    if t_hi < t {
        add(ray(x, y, t_hi.exp(), budget / 8.0)?, 1.0);
        add(ray(x, y, t.exp(), budget / 8.0)?, -1.0);
    }
    if t_lo > -t {
        add(ray(y, x, (-t_lo).exp(), budget / 8.0)?, 1.0);
        add(ray(y, x, t.exp(), budget / 8.0)?, -1.0);
    }
    let scale = 1.0 / (2.0 * t);
    let value = total.re * scale;
    let error_estimate = err * scale;
    if error_estimate > tol {
        return Err(Error::QuadratureBudget { tol, achieved: error_estimate, panels });
    }
    Ok(RealMuHat { value, error_estimate, panels })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct VdcCheck {
    pub modulus: f64,
    pub lambda: f64,
    pub bound: f64,
    pub holds: bool,
}

/// Checks `|∫_a^b e^{iφ}| ≤ 8 λ^{-1/2}` for `φ(t) = 2π(x e^t + y e^{-t})`,
/// where `λ = min |φ''| = min |φ|` over `[a, b]`.
pub fn vdc_envelope_check(x: f64, y: f64, a: f64, b: f64) -> Result<VdcCheck> {
    if !(a < b) || !a.is_finite() || !b.is_finite() {
        return Err(Error::InvalidArgument(format!("bad interval [{a}, {b}]")));
    }
    let g = |t: f64| 2.0 * PI * (x * t.exp() + y * (-t).exp());
    // sign change of φ: e^{2t} = -y/x
    if x == 0.0 && y == 0.0 {
        return Err(Error::Precondition("φ vanishes identically".into()));
    }
    if x != 0.0 && -y / x > 0.0 {
        let root = 0.5 * (-y / x).ln();
        if root >= a && root <= b {
            return Err(Error::Precondition(format!("φ vanishes at t = {root} inside [{a}, {b}]")));
        }
    }
    let mut lambda = g(a).abs().min(g(b).abs());
    // interior extremum of φ: e^{2t} = y/x
    if x != 0.0 && y / x > 0.0 {
        let c = 0.5 * (y / x).ln();
        if c > a && c < b {
            lambda = lambda.min(g(c).abs());
        }
    }
    if lambda == 0.0 {
        return Err(Error::Precondition("λ = 0 on the interval".into()));
    }
    let f = |t: f64| Complex64::new(0.0, g(t)).exp();
    let (ax, ay) = (x.abs(), y.abs());
    let breaks = wavelength_breaks(a, b, |s, e| 2.0 * PI * (ax * e.exp() + ay * (-s).exp()));
    let q = integrate_panels(&f, &breaks, 1e-10, MAX_PANELS)?;
    let bound = 8.0 / lambda.sqrt();
    let modulus = q.value.norm();
    Ok(VdcCheck { modulus, lambda, bound, holds: modulus <= bound + q.error_estimate })
}
