//! Fourier transforms of the chopped-hyperbola measures.
//!
//! Over ℝ the transform is an oscillatory integral evaluated by adaptive
//! Gauss–Legendre panels with rotated tails. Over ℚ_p it is a finite sum of
//! character integrals, evaluated exactly in a cyclotomic field, with an
//! independent brute-force enumeration to check it against.

mod cyclotomic;
mod oracle;
mod padic;
pub mod quadrature;
mod real;

pub use cyclotomic::CyclotomicSum;
pub use oracle::{j1_bruteforce, j1_bruteforce_cost, j1_bruteforce_sum, DEFAULT_ORACLE_BUDGET};
pub use padic::{
    ball_character_integral, f_kernel, f_kernel_sum, j1_exact, j1_exact_sum, padic_mu_hat, padic_mu_hat_rational,
    shell_character_integral, PadicChoppedMeasure, ShellIndex,
};
pub use real::{real_mu_hat, vdc_envelope_check, RealChoppedMeasure, RealMuHat, VdcCheck, DEFAULT_TOL};
