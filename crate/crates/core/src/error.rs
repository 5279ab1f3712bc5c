//! Error type shared by every module of the crate.

use thiserror::Error;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    #[error("invalid parameters: {0}")]
    InvalidParameters(String),
    #[error("no convergence: {0}")]
    NonConvergence(String),
    #[error("integrand returned a non-finite sample at z = {0}")]
    SingularSample(String),
    #[error("degenerate lattice: real period system is singular")]
    DegenerateLattice,
    #[error("branch points closer than {0:e}")]
    NearDegenerateBranchPoints(f64),
    #[error("epsilon calibration failed: {0}")]
    CalibrationFailure(String),
    #[error("argument lies on the theta divisor (relative magnitude {0:e})")]
    OnThetaDivisor(f64),
    #[error("argument lies on the period lattice")]
    OnLattice,
    #[error("argument is a pole of sn")]
    PoleOfSn,
    #[error("denominator vanishes in {0}")]
    DenominatorVanishes(&'static str),
    #[error("the two divisor points share their x coordinate")]
    BranchCollision,
}

pub type Result<T> = std::result::Result<T, Error>;
