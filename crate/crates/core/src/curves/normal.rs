//! Reduction of Jacobi-quartic and Legendre models to Weierstrass form
//! with zero `x^2` coefficient.

use crate::curves::{AffinePoint, LegendreCurve, WeierstrassCurve};
use crate::error::{Error, Result};
use crate::C64;

/// `t^2 = s^4 + a2 s^2 + a4` with a chosen root `aj`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JacobiQuarticCurve {
    pub a2: C64,
    pub a4: C64,
    pub aj: C64,
}

impl JacobiQuarticCurve {
    pub fn new(a2: C64, a4: C64, aj: C64) -> Result<Self> {
        if (a4 * (a2 * a2 - 4.0 * a4)).norm() < 1e-12 {
            return Err(Error::InvalidParameters("Jacobi quartic is singular".into()));
        }
        let q = JacobiQuarticCurve { a2, a4, aj };
        if q.f(aj).norm() > 1e-10 * (1.0 + a2.norm() + a4.norm()) {
            return Err(Error::InvalidParameters("a_J is not a root of the quartic".into()));
        }
        Ok(q)
    }

    pub fn f(&self, s: C64) -> C64 {
        let s2 = s * s;
        s2 * s2 + self.a2 * s2 + self.a4
    }

    fn f1(&self, s: C64) -> C64 {
        4.0 * s * s * s + 2.0 * self.a2 * s
    }

    fn f2(&self, s: C64) -> C64 {
        12.0 * s * s + 2.0 * self.a2
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum NormalizationSource {
    Jacobi(JacobiQuarticCurve),
    Legendre(LegendreCurve),
}

/// Target curve and the point map onto it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Normalization {
    pub source: NormalizationSource,
    pub target: WeierstrassCurve,
}

impl Normalization {
    pub fn forward(&self, p: &AffinePoint) -> AffinePoint {
        let (s, t) = match *p {
            AffinePoint::Finite { x, y } => (x, y),
            AffinePoint::Infinity => {
                return match self.source {
                    NormalizationSource::Legendre(_) => AffinePoint::Infinity,
                    // the point at infinity on the sheet t ~ +s^2
                    NormalizationSource::Jacobi(q) => AffinePoint::new(q.f2(q.aj) / 6.0, q.f1(q.aj)),
                };
            }
        };
        match self.source {
            NormalizationSource::Legendre(l) => AffinePoint::new(s - (l.b + l.c) / 3.0, t),
            NormalizationSource::Jacobi(q) => {
                let d = s - q.aj;
                if d.norm() <= 1e-14 * (1.0 + q.aj.norm()) {
                    return AffinePoint::Infinity;
                }
                let fp = q.f1(q.aj);
                AffinePoint::new(fp / d + q.f2(q.aj) / 6.0, fp * t / (d * d))
            }
        }
    }

    /// Inverse of [`Normalization::forward`] away from its poles.
    pub fn inverse(&self, p: &AffinePoint) -> AffinePoint {
        let (x, y) = match *p {
            AffinePoint::Finite { x, y } => (x, y),
            AffinePoint::Infinity => {
                return match self.source {
                    NormalizationSource::Legendre(_) => AffinePoint::Infinity,
                    NormalizationSource::Jacobi(q) => AffinePoint::new(q.aj, C64::new(0.0, 0.0)),
                }
            }
        };
        match self.source {
            NormalizationSource::Legendre(l) => AffinePoint::new(x + (l.b + l.c) / 3.0, y),
            NormalizationSource::Jacobi(q) => {
                let fp = q.f1(q.aj);
                let d = fp / (x - q.f2(q.aj) / 6.0);
                AffinePoint::new(q.aj + d, y * d * d / fp)
            }
        }
    }
}

/// Weierstrass model `y^2 = x^3 + l4 x + l6` of a Jacobi quartic or a
/// Legendre cubic, with the forward point map.
pub fn weierstrass_normalize(src: NormalizationSource) -> Normalization {
    let target = match src {
        NormalizationSource::Legendre(l) => {
            let (b, c) = (l.b, l.c);
            WeierstrassCurve {
                lambda2: C64::new(0.0, 0.0),
                lambda4: -(b * b + c * c - b * c) / 3.0,
                lambda6: (2.0 * b - c) * (b + c) * (2.0 * c - b) / 27.0,
            }
        }
        NormalizationSource::Jacobi(q) => {
            let (a2, a4) = (q.a2, q.a4);
            WeierstrassCurve {
                lambda2: C64::new(0.0, 0.0),
                lambda4: -(4.0 * a4 + a2 * a2 / 3.0),
                lambda6: -8.0 / 3.0 * a2 * a4 + 2.0 / 27.0 * a2 * a2 * a2,
            }
        }
    };
    Normalization { source: src, target }
}
