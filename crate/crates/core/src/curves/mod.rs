//! Curve families and the explicit maps between them.
//!
//! The genus-2 curve is `V: y^2 = x(x-1)(x-a^2)(x-b^2)(x-a^2 b^2)`; its two
//! elliptic quotients `E1`, `E2` are in Legendre form. Points are plain
//! values; curve membership is checked where an operation needs it.

mod maps;
mod normal;

pub use maps::{aux_map, iso_zeta, iso_zeta_tilde, phi, phi_preimage, phi_w, pi_cal, pi_minus, pi_plus, xi_w, AuxMap};
pub use normal::{weierstrass_normalize, JacobiQuarticCurve, Normalization, NormalizationSource};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::{pair, C64};

const DEGENERACY: f64 = 1e-12;

/// A point of a plane model, or the point at infinity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum AffinePoint {
    Finite { x: C64, y: C64 },
    Infinity,
}

impl AffinePoint {
    pub fn new(x: C64, y: C64) -> Self {
        AffinePoint::Finite { x, y }
    }

    pub fn is_infinity(&self) -> bool {
        matches!(self, AffinePoint::Infinity)
    }

    pub fn x(&self) -> Option<C64> {
        match self {
            AffinePoint::Finite { x, .. } => Some(*x),
            AffinePoint::Infinity => None,
        }
    }

    pub fn y(&self) -> Option<C64> {
        match self {
            AffinePoint::Finite { y, .. } => Some(*y),
            AffinePoint::Infinity => None,
        }
    }

    /// Hyperelliptic involution `(x, y) -> (x, -y)`.
    pub fn negate_y(&self) -> Self {
        match *self {
            AffinePoint::Finite { x, y } => AffinePoint::Finite { x, y: -y },
            AffinePoint::Infinity => AffinePoint::Infinity,
        }
    }

    /// Distance between two points, infinite when exactly one is at infinity.
    pub fn distance(&self, other: &AffinePoint) -> f64 {
        match (self, other) {
            (AffinePoint::Infinity, AffinePoint::Infinity) => 0.0,
            (AffinePoint::Finite { x, y }, AffinePoint::Finite { x: u, y: v }) => (x - u).norm().max((y - v).norm()),
            _ => f64::INFINITY,
        }
    }
}

/// Relative residual of `y^2 = rhs`.
pub(crate) fn relative_residual(y: C64, rhs: C64) -> f64 {
    let y2 = y * y;
    (y2 - rhs).norm() / y2.norm().max(rhs.norm()).max(1.0)
}

fn near(z: C64, w: C64) -> bool {
    (z - w).norm() <= DEGENERACY * (1.0 + w.norm())
}

/// The genus-2 curve `V`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CurveV {
    #[serde(serialize_with = "ser_c")]
    pub alpha: C64,
    #[serde(serialize_with = "ser_c")]
    pub beta: C64,
    #[serde(skip)]
    pub lambda2: C64,
    #[serde(skip)]
    pub lambda4: C64,
    #[serde(skip)]
    pub lambda6: C64,
    #[serde(skip)]
    pub lambda8: C64,
    #[serde(skip)]
    pub lambda10: C64,
}

pub(crate) fn ser_c<S: serde::Serializer>(z: &C64, s: S) -> std::result::Result<S::Ok, S::Error> {
    pair(*z).serialize(s)
}

impl CurveV {
    pub fn new(alpha: C64, beta: C64) -> Result<Self> {
        let a2 = alpha * alpha;
        let b2 = beta * beta;
        let one = C64::new(1.0, 0.0);
        let zero = C64::new(0.0, 0.0);
        let checks = [
            (near(a2, zero), "alpha^2 = 0"),
            (near(a2, one), "alpha^2 = 1"),
            (near(b2, zero), "beta^2 = 0"),
            (near(b2, one), "beta^2 = 1"),
            (near(a2, b2), "alpha^2 = beta^2"),
            (near(a2 * b2, one), "alpha^2 beta^2 = 1"),
        ];
        for (bad, what) in checks {
            if bad {
                return Err(Error::InvalidParameters(format!("curve V is singular: {what}")));
            }
        }
        if !(alpha.re.is_finite() && alpha.im.is_finite() && beta.re.is_finite() && beta.im.is_finite()) {
            return Err(Error::InvalidParameters("alpha and beta must be finite".into()));
        }
        let a4 = a2 * a2;
        let b4 = b2 * b2;
        Ok(CurveV {
            alpha,
            beta,
            lambda2: -one - a2 - b2 - a2 * b2,
            lambda4: a2 + b2 + 2.0 * a2 * b2 + a4 * b2 + a2 * b4,
            lambda6: -a4 * b4 - a2 * b4 - a4 * b2 - a2 * b2,
            lambda8: a4 * b4,
            lambda10: zero,
        })
    }

    /// Curve with parameters given through `(e1, e2)` of the sextic model.
    pub fn from_e(e1: C64, e2: C64) -> Result<Self> {
        let (a, b) = alpha_beta_from_e(e1, e2)?;
        CurveV::new(a, b)
    }

    pub fn lambdas(&self) -> [C64; 4] {
        [self.lambda2, self.lambda4, self.lambda6, self.lambda8]
    }

    /// `alpha * beta`.
    pub fn ab(&self) -> C64 {
        self.alpha * self.beta
    }

    /// Finite branch points `0, 1, a^2, b^2, a^2 b^2`.
    pub fn branch_points(&self) -> [C64; 5] {
        let a2 = self.alpha * self.alpha;
        let b2 = self.beta * self.beta;
        [C64::new(0.0, 0.0), C64::new(1.0, 0.0), a2, b2, a2 * b2]
    }

    /// Right-hand side `M2(x)` of the curve equation.
    pub fn m2(&self, x: C64) -> C64 {
        ((((x + self.lambda2) * x + self.lambda4) * x + self.lambda6) * x + self.lambda8) * x + self.lambda10
    }

    /// Product form of the right-hand side.
    pub fn m2_product(&self, x: C64) -> C64 {
        self.branch_points().iter().map(|e| x - e).product()
    }

    pub fn residual(&self, p: &AffinePoint) -> f64 {
        match p {
            AffinePoint::Infinity => 0.0,
            AffinePoint::Finite { x, y } => relative_residual(*y, self.m2(*x)),
        }
    }

    /// A point above `x` on the principal sheet.
    pub fn point_at(&self, x: C64) -> AffinePoint {
        AffinePoint::new(x, self.m2_product(x).sqrt())
    }

    /// `(e1, e2)` parameters of the sextic model.
    pub fn e_params(&self) -> Result<(C64, C64)> {
        e_from_alpha_beta(self.alpha, self.beta)
    }

    /// Basepoint `O1` with `phi1(O1) = infinity`.
    pub fn o1(&self) -> AffinePoint {
        let ab = self.ab();
        AffinePoint::new(ab, ab * ab.sqrt() * (ab - 1.0) * (self.alpha - self.beta))
    }

    /// Basepoint `O2` with `phi2(O2) = infinity`.
    pub fn o2(&self) -> AffinePoint {
        let ab = self.ab();
        AffinePoint::new(-ab, ab * (-ab).sqrt() * (ab + 1.0) * (self.alpha + self.beta))
    }

    /// `sqrt((1 - a^2)(1 - b^2))`, principal branch.
    pub fn sqrt_p(&self) -> C64 {
        ((1.0 - self.alpha * self.alpha) * (1.0 - self.beta * self.beta)).sqrt()
    }

    /// The constants `kappa1`, `kappa2`.
    pub fn kappas(&self) -> (C64, C64) {
        let i = C64::new(0.0, 1.0);
        let s = self.sqrt_p();
        (i * (self.alpha - self.beta) / s, i * (self.alpha + self.beta) / s)
    }

    /// Legendre-form elliptic quotients `(E1, E2)`.
    pub fn elliptic_targets(&self) -> (LegendreCurve, LegendreCurve) {
        let ab = self.ab();
        let one = C64::new(1.0, 0.0);
        let c1 = (self.alpha - self.beta) * (self.alpha - self.beta) / ((ab - 1.0) * (ab - 1.0));
        let c2 = (self.alpha + self.beta) * (self.alpha + self.beta) / ((ab + 1.0) * (ab + 1.0));
        (LegendreCurve { b: one, c: c1 }, LegendreCurve { b: one, c: c2 })
    }
}

/// `(e1, e2)` from `(alpha, beta)`.
pub fn e_from_alpha_beta(alpha: C64, beta: C64) -> Result<(C64, C64)> {
    let ab = alpha * beta;
    if near(alpha, beta) || near(ab, C64::new(1.0, 0.0)) {
        return Err(Error::InvalidParameters("alpha = beta or alpha beta = 1".into()));
    }
    let e1 = (alpha + beta) / (alpha - beta);
    let e2 = (ab + 1.0) / (ab - 1.0);
    CurveHPrime::new(e1, e2)?;
    Ok((e1, e2))
}

/// `(alpha, beta)` from `(e1, e2)`: principal root for `alpha`, and the
/// sign of `beta` that maps back to `(e1, e2)` rather than `(1/e1, 1/e2)`.
pub fn alpha_beta_from_e(e1: C64, e2: C64) -> Result<(C64, C64)> {
    CurveHPrime::new(e1, e2)?;
    let alpha = ((e1 + 1.0) * (e2 + 1.0) / ((e1 - 1.0) * (e2 - 1.0))).sqrt();
    let beta = ((e1 - 1.0) * (e2 + 1.0) / ((e1 + 1.0) * (e2 - 1.0))).sqrt();
    let miss = |b: C64| ((alpha + b) - e1 * (alpha - b)).norm();
    Ok(if miss(-beta) < miss(beta) {
        (alpha, -beta)
    } else {
        (alpha, beta)
    })
}

/// Sextic model `t^2 = (s^2 - 1)(s^2 - e1^2)(s^2 - e2^2)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CurveHPrime {
    #[serde(serialize_with = "ser_c")]
    pub e1: C64,
    #[serde(serialize_with = "ser_c")]
    pub e2: C64,
}

impl CurveHPrime {
    pub fn new(e1: C64, e2: C64) -> Result<Self> {
        let one = C64::new(1.0, 0.0);
        let zero = C64::new(0.0, 0.0);
        let (s1, s2) = (e1 * e1, e2 * e2);
        let checks = [
            (near(s1, zero), "e1^2 = 0"),
            (near(s1, one), "e1^2 = 1"),
            (near(s2, zero), "e2^2 = 0"),
            (near(s2, one), "e2^2 = 1"),
            (near(s1, s2), "e1^2 = e2^2"),
        ];
        for (bad, what) in checks {
            if bad {
                return Err(Error::InvalidParameters(format!("sextic model is singular: {what}")));
            }
        }
        Ok(CurveHPrime { e1, e2 })
    }

    pub fn rhs(&self, s: C64) -> C64 {
        let s2 = s * s;
        (s2 - 1.0) * (s2 - self.e1 * self.e1) * (s2 - self.e2 * self.e2)
    }

    pub fn residual(&self, p: &AffinePoint) -> f64 {
        match p {
            AffinePoint::Infinity => 0.0,
            AffinePoint::Finite { x, y } => relative_residual(*y, self.rhs(*x)),
        }
    }
}

/// `Y^2 = X (X - b)(X - c)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LegendreCurve {
    #[serde(serialize_with = "ser_c")]
    pub b: C64,
    #[serde(serialize_with = "ser_c")]
    pub c: C64,
}

impl LegendreCurve {
    pub fn new(b: C64, c: C64) -> Result<Self> {
        if (b * c * (b - c)).norm() < DEGENERACY {
            return Err(Error::InvalidParameters("Legendre curve needs b c (b - c) != 0".into()));
        }
        Ok(LegendreCurve { b, c })
    }

    pub fn rhs(&self, x: C64) -> C64 {
        x * (x - self.b) * (x - self.c)
    }

    pub fn residual(&self, p: &AffinePoint) -> f64 {
        match p {
            AffinePoint::Infinity => 0.0,
            AffinePoint::Finite { x, y } => relative_residual(*y, self.rhs(*x)),
        }
    }

    /// The same curve read as `y^2 = x^3 + l2 x^2 + l4 x + l6` (identity on points).
    pub fn as_cubic(&self) -> WeierstrassCurve {
        WeierstrassCurve {
            lambda2: -(self.b + self.c),
            lambda4: self.b * self.c,
            lambda6: C64::new(0.0, 0.0),
        }
    }

    pub fn roots(&self) -> [C64; 3] {
        [C64::new(0.0, 0.0), self.b, self.c]
    }
}

/// `y^2 = x^3 + l2 x^2 + l4 x + l6`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct WeierstrassCurve {
    #[serde(serialize_with = "ser_c")]
    pub lambda2: C64,
    #[serde(serialize_with = "ser_c")]
    pub lambda4: C64,
    #[serde(serialize_with = "ser_c")]
    pub lambda6: C64,
}

impl WeierstrassCurve {
    pub fn new(lambda2: C64, lambda4: C64, lambda6: C64) -> Result<Self> {
        let w = WeierstrassCurve {
            lambda2,
            lambda4,
            lambda6,
        };
        let scale = 1.0 + lambda2.norm().powi(6) + lambda4.norm().powi(3) + lambda6.norm().powi(2);
        if w.discriminant().norm() < DEGENERACY * scale {
            return Err(Error::InvalidParameters("cubic has a repeated root".into()));
        }
        Ok(w)
    }

    pub fn m1(&self, x: C64) -> C64 {
        ((x + self.lambda2) * x + self.lambda4) * x + self.lambda6
    }

    pub fn m1_prime(&self, x: C64) -> C64 {
        (3.0 * x + 2.0 * self.lambda2) * x + self.lambda4
    }

    pub fn discriminant(&self) -> C64 {
        let (b, c, d) = (self.lambda2, self.lambda4, self.lambda6);
        b * b * c * c - 4.0 * c * c * c - 4.0 * b * b * b * d - 27.0 * d * d + 18.0 * b * c * d
    }

    pub fn roots(&self) -> [C64; 3] {
        let r = crate::numerics::poly_roots(&[self.lambda6, self.lambda4, self.lambda2, C64::new(1.0, 0.0)]);
        [r[0], r[1], r[2]]
    }

    pub fn residual(&self, p: &AffinePoint) -> f64 {
        match p {
            AffinePoint::Infinity => 0.0,
            AffinePoint::Finite { x, y } => relative_residual(*y, self.m1(*x)),
        }
    }
}

/// General cubic `Y^2 = c3 X^3 + c2 X^2 + c1 X + c0` used for the
/// non-monic auxiliary curves.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlaneCubic {
    pub coeffs: [C64; 4],
}

impl PlaneCubic {
    /// `Y^2 = X (1 - X)(1 - k^2 X)`.
    pub fn e_pm(kappa: C64) -> Self {
        let k2 = kappa * kappa;
        let one = C64::new(1.0, 0.0);
        PlaneCubic {
            coeffs: [C64::new(0.0, 0.0), one, -(one + k2), k2],
        }
    }

    pub fn rhs(&self, x: C64) -> C64 {
        crate::numerics::poly_eval(&self.coeffs, x)
    }

    pub fn residual(&self, p: &AffinePoint) -> f64 {
        match p {
            AffinePoint::Infinity => 0.0,
            AffinePoint::Finite { x, y } => relative_residual(*y, self.rhs(*x)),
        }
    }
}

/// `t^2 = (s - 1)(s - e1^2)(s - e2^2)`.
pub fn w1_rhs(e1: C64, e2: C64, s: C64) -> C64 {
    (s - 1.0) * (s - e1 * e1) * (s - e2 * e2)
}

/// `t^2 = (1 - s)(1 - e1^2 s)(1 - e2^2 s)`.
pub fn w2_rhs(e1: C64, e2: C64, s: C64) -> C64 {
    (1.0 - s) * (1.0 - e1 * e1 * s) * (1.0 - e2 * e2 * s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::c64;

    #[test]
    fn lambdas_for_two_three() {
        let v = CurveV::new(c64(2.0, 0.0), c64(3.0, 0.0)).unwrap();
        assert_eq!(v.lambda2, c64(-50.0, 0.0));
        assert_eq!(v.lambda8, c64(1296.0, 0.0));
        let mut bp: Vec<f64> = v.branch_points().iter().map(|z| z.re).collect();
        bp.sort_by(f64::total_cmp);
        assert_eq!(bp, vec![0.0, 1.0, 4.0, 9.0, 36.0]);
    }

    #[test]
    fn expansion_matches_product() {
        let v = CurveV::new(c64(1.5, 0.5), c64(0.5, -0.25)).unwrap();
        for x in [c64(0.3, 0.1), c64(-2.0, 4.0), c64(7.0, -1.0)] {
            let (a, b) = (v.m2(x), v.m2_product(x));
            assert!((a - b).norm() <= 1e-12 * a.norm().max(1.0));
        }
    }

    #[test]
    fn forbidden_parameters() {
        for (a, b) in [(2.0, 1.0), (0.0, 3.0), (2.0, -2.0), (2.0, 0.5)] {
            let r = CurveV::new(c64(a, 0.0), c64(b, 0.0));
            assert!(matches!(r, Err(Error::InvalidParameters(_))), "{a} {b}");
        }
    }

    #[test]
    fn e_parameters_and_back() {
        let (e1, e2) = e_from_alpha_beta(c64(2.0, 0.0), c64(3.0, 0.0)).unwrap();
        assert!((e1 - c64(-5.0, 0.0)).norm() < 1e-15);
        assert!((e2 - c64(1.4, 0.0)).norm() < 1e-15);
        let (a, b) = alpha_beta_from_e(e1, e2).unwrap();
        assert!((a * a - 4.0).norm() < 1e-12 && (b * b - 9.0).norm() < 1e-12);
        let (f1, f2) = e_from_alpha_beta(a, b).unwrap();
        assert!((f1 * f1 - e1 * e1).norm() < 1e-12 && (f2 * f2 - e2 * e2).norm() < 1e-12);
        assert!(alpha_beta_from_e(c64(1.0, 0.0), c64(2.0, 0.0)).is_err());
    }

    #[test]
    fn elliptic_target_roots() {
        let v = CurveV::new(c64(2.0, 0.0), c64(3.0, 0.0)).unwrap();
        let (e1, e2) = v.elliptic_targets();
        assert!((e1.c - 1.0 / 25.0).norm() < 1e-15);
        assert!((e2.c - 25.0 / 49.0).norm() < 1e-15);
        let w = CurveV::new(c64(2.0, 0.0), c64(-3.0, 0.0)).unwrap();
        let (f1, f2) = w.elliptic_targets();
        assert!((f1.c - e2.c).norm() < 1e-15 && (f2.c - e1.c).norm() < 1e-15);
    }

    #[test]
    fn basepoints_lie_on_v() {
        for (a, b) in [(c64(2.0, 0.0), c64(3.0, 0.0)), (c64(1.5, 0.5), c64(0.5, -0.25))] {
            let v = CurveV::new(a, b).unwrap();
            assert!(v.residual(&v.o1()) < 1e-12);
            assert!(v.residual(&v.o2()) < 1e-12);
        }
    }
}
