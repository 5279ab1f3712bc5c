//! Theta functions, genus-2 and genus-1 sigma functions with their
//! logarithmic derivatives, Jacobi elliptic functions and Weierstrass al
//! functions.

mod jacobi;
mod sigma1;
mod sigma2;
mod theta;

pub use jacobi::JacobiContext;
pub use sigma1::SigmaG1Evaluator;
pub use sigma2::{SigmaG2Evaluator, WpIndex, WpValues};
pub use theta::{theta_g1, theta_g1_jet, theta_g2, CharacteristicG2, ThetaJet1, ThetaJet2};

/// Relative truncation tolerance of theta sums.
pub const THETA_TOL: f64 = 1e-17;

/// Relative magnitude below which an argument counts as a zero of sigma.
pub const DIVISOR_THRESHOLD: f64 = 1e-9;
