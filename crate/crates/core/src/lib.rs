//! Bounds on the Borel chromatic number of quadratic graphs over ℝ and ℚ_p.
//!
//! * [`localfield`]: p-adic scalars, the Tate character, per-place fields.
//! * [`qform`]: quadratic spaces, Hilbert symbols, isotropy, hyperbolic planes.
//! * [`oscint`]: Fourier transforms of the chopped-hyperbola measures.
//! * [`spectral`]: Hoffman-type lower bounds built from those transforms.
//! * [`coloring`]: explicit finite colorings of anisotropic spheres, and cliques.
//! * [`regular`]: the embedding of the hyperbola graph into the regular graph of 2×2 matrices.

pub mod arith;
pub mod coloring;
pub mod error;
pub mod localfield;
pub mod oscint;
pub mod qform;
pub mod regular;
pub mod spectral;

pub use error::{Error, Result};
