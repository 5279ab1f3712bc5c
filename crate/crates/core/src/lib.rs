//! Genus-2 hyperelliptic curves with degree-2 elliptic covers: curve
//! families and maps, period matrices, theta and sigma functions, and the
//! reduction identities linking the Kleinian functions of the genus-2 curve
//! to Weierstrass and Jacobi functions of its elliptic quotients.

pub mod curves;
pub mod error;
pub mod fixtures;
pub mod numerics;
pub mod periods;
pub mod reduction;
pub mod theta_sigma;
pub mod verify;

pub use num_complex::Complex64 as C64;

pub use curves::{AffinePoint, CurveV, LegendreCurve, WeierstrassCurve};
pub use error::{Error, Result};
pub use numerics::{PathSegment, Tolerance};
pub use periods::{PeriodsG1, PeriodsG2};
pub use reduction::ReductionContext;
pub use theta_sigma::{SigmaG1Evaluator, SigmaG2Evaluator, WpIndex, WpValues};

/// Shorthand constructor for complex constants.
#[inline]
pub const fn c64(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

/// Complex number as a `[re, im]` pair for JSON output.
#[inline]
pub fn pair(z: C64) -> [f64; 2] {
    [z.re, z.im]
}
