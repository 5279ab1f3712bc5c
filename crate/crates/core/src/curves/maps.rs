//! Degree-2 covers `V -> Ei`, their fibers, the isomorphism with the sextic
//! model and the auxiliary isomorphisms between elliptic models.

use crate::curves::{AffinePoint, CurveV};
use crate::error::{Error, Result};
use crate::C64;

fn is_pole(d: C64, scale: C64) -> bool {
    d.norm() <= 1e-14 * (1.0 + scale.norm())
}

fn i_unit() -> C64 {
    C64::new(0.0, 1.0)
}

/// The cover `phi_i: V -> E_i`.
pub fn phi(v: &CurveV, i: u8, p: &AffinePoint) -> AffinePoint {
    let (x, y) = match *p {
        AffinePoint::Infinity => return AffinePoint::new(C64::new(0.0, 0.0), C64::new(0.0, 0.0)),
        AffinePoint::Finite { x, y } => (x, y),
    };
    let ab = v.ab();
    if i == 1 {
        let d = x - ab;
        if is_pole(d, ab) {
            return AffinePoint::Infinity;
        }
        let s = (v.alpha - v.beta) * (v.alpha - v.beta);
        AffinePoint::new(s * x / (d * d), s * y / ((ab - 1.0) * d * d * d))
    } else {
        let d = x + ab;
        if is_pole(d, ab) {
            return AffinePoint::Infinity;
        }
        let s = (v.alpha + v.beta) * (v.alpha + v.beta);
        AffinePoint::new(s * x / (d * d), -s * y / ((ab + 1.0) * d * d * d))
    }
}

/// The two points of `phi_i^{-1}(S)`; the first uses the `+` root.
pub fn phi_preimage(v: &CurveV, i: u8, s: &AffinePoint) -> (AffinePoint, AffinePoint) {
    let base = if i == 1 { v.o1() } else { v.o2() };
    let (xx, yy) = match *s {
        AffinePoint::Infinity => return (base, base.negate_y()),
        AffinePoint::Finite { x, y } => (x, y),
    };
    if xx.norm() <= 1e-300 {
        return (
            AffinePoint::new(C64::new(0.0, 0.0), C64::new(0.0, 0.0)),
            AffinePoint::Infinity,
        );
    }
    let ab = v.ab();
    let (d, sign, shift, k) = if i == 1 {
        let d = v.alpha - v.beta;
        (d, 1.0, ab, ab - 1.0)
    } else {
        let d = v.alpha + v.beta;
        (d, -1.0, -ab, ab + 1.0)
    };
    let r = (sign * 4.0 * ab * xx + d * d).sqrt();
    let make = |w: C64| {
        let x = shift + d * w / (2.0 * xx);
        let y = sign * k * d * yy * w * w * w / (8.0 * xx * xx * xx);
        AffinePoint::new(x, y)
    };
    (make(d + r), make(d - r))
}

/// `zeta: H' -> V`. Points at infinity of the sextic model need a sheet
/// label and are rejected.
pub fn iso_zeta(e1: C64, e2: C64, p: &AffinePoint) -> Result<AffinePoint> {
    let (s, t) = match *p {
        AffinePoint::Infinity => {
            return Err(Error::InvalidParameters(
                "points at infinity of the sextic model are not labelled".into(),
            ))
        }
        AffinePoint::Finite { x, y } => (x, y),
    };
    let d = s - 1.0;
    if is_pole(d, C64::new(1.0, 0.0)) {
        return Ok(AffinePoint::Infinity);
    }
    let x = (e2 + 1.0) * (s + 1.0) / ((e2 - 1.0) * d);
    let em = e2 - 1.0;
    let y = 4.0 * (e2 + 1.0) * (e2 + 1.0) * t / (em * em * em * (e1 * e1 - 1.0).sqrt() * d * d * d);
    Ok(AffinePoint::new(x, y))
}

/// `zeta~: V -> H'`; `x = alpha beta` goes to infinity.
pub fn iso_zeta_tilde(alpha: C64, beta: C64, p: &AffinePoint) -> AffinePoint {
    let (x, y) = match *p {
        AffinePoint::Infinity => return AffinePoint::new(C64::new(1.0, 0.0), C64::new(0.0, 0.0)),
        AffinePoint::Finite { x, y } => (x, y),
    };
    let ab = alpha * beta;
    let d = x - ab;
    if is_pole(d, ab) {
        return AffinePoint::Infinity;
    }
    let s = (x + ab) / d;
    let t = 8.0 * ab * ab.sqrt() * y / ((ab - 1.0) * (alpha - beta) * d * d * d);
    AffinePoint::new(s, t)
}

/// `H' -> W_i`: `(s, t) -> (s^2, t)` for `i = 1`, `(1/s^2, t/s^3)` for `i = 2`.
pub fn phi_w(i: u8, p: &AffinePoint) -> AffinePoint {
    match *p {
        AffinePoint::Infinity => AffinePoint::Infinity,
        AffinePoint::Finite { x: s, y: t } => {
            if i == 1 {
                AffinePoint::new(s * s, t)
            } else {
                AffinePoint::new(1.0 / (s * s), t / (s * s * s))
            }
        }
    }
}

/// `W_i -> E_i`.
pub fn xi_w(v: &CurveV, i: u8, p: &AffinePoint) -> AffinePoint {
    let (s, t) = match *p {
        AffinePoint::Infinity => return AffinePoint::Infinity,
        AffinePoint::Finite { x, y } => (x, y),
    };
    let ab = v.ab();
    let r = ab * ab.sqrt();
    let (am, ap) = (v.alpha - v.beta, v.alpha + v.beta);
    if i == 1 {
        AffinePoint::new(am * am * (s - 1.0) / (4.0 * ab), am * am * am * t / (8.0 * r))
    } else {
        AffinePoint::new(
            -ap * ap * (s - 1.0) / (4.0 * ab),
            -ap * ap * am * (ab - 1.0) * t / (8.0 * r * (ab + 1.0)),
        )
    }
}

fn pi_pm(v: &CurveV, sign: f64, p: &AffinePoint) -> AffinePoint {
    let (x, y) = match *p {
        AffinePoint::Infinity => return AffinePoint::new(C64::new(0.0, 0.0), C64::new(0.0, 0.0)),
        AffinePoint::Finite { x, y } => (x, y),
    };
    let a2 = v.alpha * v.alpha;
    let b2 = v.beta * v.beta;
    let (da, db) = (x - a2, x - b2);
    if is_pole(da, a2) || is_pole(db, b2) {
        return AffinePoint::Infinity;
    }
    let prod = (1.0 - a2) * (1.0 - b2);
    AffinePoint::new(
        prod * x / (da * db),
        -v.sqrt_p() * (x - sign * v.ab()) * y / (da * da * db * db),
    )
}

/// `pi_+: V -> E_+`.
pub fn pi_plus(v: &CurveV, p: &AffinePoint) -> AffinePoint {
    pi_pm(v, 1.0, p)
}

/// `pi_-: V -> E_-`.
pub fn pi_minus(v: &CurveV, p: &AffinePoint) -> AffinePoint {
    pi_pm(v, -1.0, p)
}

/// `V -> calE_i`, the curve `Y^2 = X (X - 1)(X - kappa_i^2)`.
pub fn pi_cal(v: &CurveV, i: u8, p: &AffinePoint) -> AffinePoint {
    let (x, y) = match *p {
        AffinePoint::Infinity => return AffinePoint::Infinity,
        AffinePoint::Finite { x, y } => (x, y),
    };
    if is_pole(x, C64::new(1.0, 0.0)) {
        return AffinePoint::Infinity;
    }
    let a2 = v.alpha * v.alpha;
    let b2 = v.beta * v.beta;
    let prod = (1.0 - a2) * (1.0 - b2);
    let sgn = if i == 1 { -1.0 } else { 1.0 };
    AffinePoint::new(
        (x - a2) * (x - b2) / (prod * x),
        (x + sgn * v.ab()) * y / (prod * v.sqrt_p() * x * x),
    )
}

/// Auxiliary isomorphisms between elliptic models.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AuxMap {
    /// `E1 -> E_+`
    XiPlus,
    /// `E2 -> E_-`
    XiMinus,
    /// `E_i -> calE_i`
    XiBar(u8),
    /// `E_i -> E~_i`
    XiTilde(u8),
}

/// Applies one of the auxiliary isomorphisms.
pub fn aux_map(v: &CurveV, kind: AuxMap, p: &AffinePoint) -> AffinePoint {
    let (k1, k2) = v.kappas();
    let ab = v.ab();
    let (am, ap) = (v.alpha - v.beta, v.alpha + v.beta);
    let sp = v.sqrt_p();
    match kind {
        AuxMap::XiPlus | AuxMap::XiMinus => {
            let (k, f, d2) = if kind == AuxMap::XiPlus {
                (k1, 1.0 - ab, am * am)
            } else {
                (k2, 1.0 + ab, ap * ap)
            };
            match *p {
                AffinePoint::Infinity => AffinePoint::new(1.0 / (k * k), C64::new(0.0, 0.0)),
                AffinePoint::Finite { x, y } => {
                    let d = x - 1.0;
                    if is_pole(d, C64::new(1.0, 0.0)) {
                        return AffinePoint::Infinity;
                    }
                    AffinePoint::new(x / (k * k * d), f * sp * y / (d2 * d * d))
                }
            }
        }
        AuxMap::XiBar(i) => {
            let (k, f) = if i == 1 { (k1, 1.0 - ab) } else { (k2, 1.0 + ab) };
            match *p {
                AffinePoint::Infinity => AffinePoint::new(k * k, C64::new(0.0, 0.0)),
                AffinePoint::Finite { x, y } => {
                    if is_pole(x, C64::new(1.0, 0.0)) {
                        return AffinePoint::Infinity;
                    }
                    AffinePoint::new(k * k * (x - 1.0) / x, k * k * f * y / (sp * x * x))
                }
            }
        }
        AuxMap::XiTilde(i) => match *p {
            AffinePoint::Infinity => AffinePoint::Infinity,
            AffinePoint::Finite { x, y } => {
                if i == 1 {
                    let r = (ab - 1.0) / am;
                    AffinePoint::new(1.0 - r * r * x, i_unit() * r * r * r * y)
                } else {
                    let r = (ab + 1.0) / ap;
                    AffinePoint::new(1.0 - r * r * x, -i_unit() * r * r * r * y)
                }
            }
        },
    }
}
