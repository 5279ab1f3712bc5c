//! Complex-arithmetic kernels: Gauss-Legendre quadrature on straight
//! segments, polynomial roots, lattice membership and branch-aware square
//! roots.

mod lattice;
mod poly;
mod quadrature;

pub use lattice::{lattice_coordinates, lattice_member, LATTICE_ROUNDING};
pub use poly::{poly_eval, poly_roots};
pub use quadrature::{
    gauss_legendre, integrate_segment, integrate_segment_with, integrate_unit, PathSegment, SegmentPoint, Tolerance,
    UnitNode,
};

use crate::C64;

/// Square root continuous near the ray through `reference`: equals
/// `sqrt(reference) * sqrt(w / reference)` with principal roots.
#[inline]
pub fn sqrt_near(w: C64, reference: C64) -> C64 {
    reference.sqrt() * (w / reference).sqrt()
}

/// Smallest eigenvalue of a real symmetric 2x2 matrix.
pub fn sym2_min_eigen(a: f64, b: f64, d: f64) -> f64 {
    let m = 0.5 * (a + d);
    let r = (0.25 * (a - d) * (a - d) + b * b).sqrt();
    m - r
}

/// Largest modulus among a list of terms, floored at one. Used to make
/// identity residuals relative.
pub fn term_scale(terms: &[C64]) -> f64 {
    terms.iter().map(|t| t.norm()).fold(1.0, f64::max)
}
