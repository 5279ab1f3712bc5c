//! Reduction of the genus-2 Kleinian functions of `V` to the Weierstrass and
//! Jacobi functions of the elliptic quotients `E1`, `E2` and their
//! Legendre companions.

mod isogeny;
mod kdv;
mod kummer;

pub use isogeny::{DivisorPair, KvFactorization, QValues};
pub use kdv::KdvResiduals;

use nalgebra::Vector2;

use crate::curves::{AffinePoint, CurveV, LegendreCurve};
use crate::error::{Error, Result};
use crate::numerics::Tolerance;
use crate::periods::{periods_g1_legendre, CMat2};
use crate::theta_sigma::{JacobiContext, SigmaG1Evaluator, SigmaG2Evaluator};
use crate::C64;

/// Everything needed to evaluate both sides of the reduction identities
/// for one curve `V`.
#[derive(Debug, Clone)]
pub struct ReductionContext {
    pub curve: CurveV,
    pub sigma: SigmaG2Evaluator,
    /// `E1`, `E2`
    pub e: [LegendreCurve; 2],
    pub sigma_e: [SigmaG1Evaluator; 2],
    /// `O1`, `O2`
    pub o: [AffinePoint; 2],
    pub a: [C64; 2],
    pub b: [C64; 2],
    pub c: [C64; 2],
    pub d: [C64; 2],
    /// columns of `K`
    pub k: [Vector2<C64>; 2],
    pub kmat: CMat2,
    pub kappa: [C64; 2],
    /// Legendre companions `X (X - 1)(X - 1/kappa_i^2)`
    pub e_tilde: [LegendreCurve; 2],
    /// evaluators on the companion curves, in the basis whose half periods
    /// sit over `1/kappa^2` and `0`
    pub sigma_tilde: [SigmaG1Evaluator; 2],
    /// `(a, b, c, d)` of the basis change applied to the companion periods
    pub tilde_change: [[i64; 4]; 2],
    pub jacobi: [JacobiContext; 2],
}

/// Maps the public index `1 | 2` to a slot.
pub(crate) fn slot(i: u8) -> Result<usize> {
    match i {
        1 => Ok(0),
        2 => Ok(1),
        _ => Err(Error::InvalidParameters(format!(
            "elliptic index must be 1 or 2, got {i}"
        ))),
    }
}

pub(crate) fn guard(den: C64, scale: f64, what: &'static str) -> Result<C64> {
    if !(den.norm() > 1e-12 * scale.max(1.0)) {
        return Err(Error::DenominatorVanishes(what));
    }
    Ok(den)
}

fn rel(a: C64, b: C64) -> f64 {
    (a - b).norm() / a.norm().max(b.norm()).max(1.0)
}

/// Picks the basis of the companion lattice with `P(w') = 1/kappa^2` and
/// `P(w'') = 0`, largest `Im tau` and then smallest `|Re tau|`.
fn companion_basis(curve: &LegendreCurve, tol: &Tolerance) -> Result<(SigmaG1Evaluator, [i64; 4])> {
    let base = periods_g1_legendre(curve, tol)?;
    let target = curve.c;
    let mut best: Option<(f64, f64, SigmaG1Evaluator, [i64; 4])> = None;
    for a in -3i64..=3 {
        for b in -3i64..=3 {
            for c in -3i64..=3 {
                for d in -3i64..=3 {
                    if a * d - b * c != 1 {
                        continue;
                    }
                    let p = base.transformed(a, b, c, d)?;
                    let ev = SigmaG1Evaluator::from_periods(p)?;
                    let (w1, _) = ev.half_period(1);
                    let (w3, _) = ev.half_period(3);
                    let (Ok(x1), Ok(x3)) = (ev.wp(w1), ev.wp(w3)) else {
                        continue;
                    };
                    if rel(x1, target) > 1e-6 || x3.norm() > 1e-6 * target.norm().max(1.0) {
                        continue;
                    }
                    let key = (p.tau.im, -p.tau.re.abs());
                    let better = match &best {
                        None => true,
                        Some((im, re, _, _)) => key.0 > im + 1e-9 || ((key.0 - im).abs() <= 1e-9 && key.1 > re + 1e-9),
                    };
                    if better {
                        best = Some((key.0, key.1, ev, [a, b, c, d]));
                    }
                }
            }
        }
    }
    best.map(|(_, _, ev, m)| (ev, m))
        .ok_or_else(|| Error::CalibrationFailure("no companion basis with the required half periods".into()))
}

impl ReductionContext {
    pub fn new(curve: &CurveV, tol: &Tolerance) -> Result<Self> {
        let sigma = SigmaG2Evaluator::new(curve, tol)?;
        let (e1, e2) = curve.elliptic_targets();
        let sigma_e = [
            SigmaG1Evaluator::legendre(&e1, tol)?,
            SigmaG1Evaluator::legendre(&e2, tol)?,
        ];
        let ab = curve.ab();
        let one = C64::new(1.0, 0.0);
        let a = [one - ab, ab + one];
        let b = [ab * (one - ab), -ab * (ab + one)];
        let c = [one / (one - ab), one / (one + ab)];
        let d = [one / (ab * (one - ab)), -one / (ab * (one + ab))];
        let k = [Vector2::new(c[0], d[0]), Vector2::new(c[1], d[1])];
        let kmat = CMat2::new(c[0], c[1], d[0], d[1]);
        let (k1, k2) = curve.kappas();
        let kappa = [k1, k2];
        let mut e_tilde = [e1; 2];
        let mut sigma_tilde = Vec::with_capacity(2);
        let mut tilde_change = [[0; 4]; 2];
        let mut jacobi = Vec::with_capacity(2);
        for i in 0..2 {
            e_tilde[i] = LegendreCurve::new(one, one / (kappa[i] * kappa[i]))?;
            let (ev, m) = companion_basis(&e_tilde[i], tol)?;
            let jc = JacobiContext::new(ev.periods.tau)?;
            let k2 = kappa[i] * kappa[i];
            if rel(jc.m * jc.m, k2) > 1e-8 {
                return Err(Error::CalibrationFailure(format!(
                    "Jacobi modulus squared {} differs from kappa^2 {}",
                    jc.m * jc.m,
                    k2
                )));
            }
            sigma_tilde.push(ev);
            tilde_change[i] = m;
            jacobi.push(jc);
        }
        Ok(ReductionContext {
            curve: *curve,
            sigma,
            e: [e1, e2],
            sigma_e,
            o: [curve.o1(), curve.o2()],
            a,
            b,
            c,
            d,
            k,
            kmat,
            kappa,
            e_tilde,
            sigma_tilde: [sigma_tilde[0], sigma_tilde[1]],
            tilde_change,
            jacobi: [jacobi[0], jacobi[1]],
        })
    }

    /// `(a_i, b_i) . k_j`; equals `2` on the diagonal and `0` off it.
    pub fn pairing(&self, i: u8, j: u8) -> Result<C64> {
        let (i, j) = (slot(i)?, slot(j)?);
        Ok(self.a[i] * self.c[j] + self.b[i] * self.d[j])
    }

    /// Push-forward `a_i u1 + b_i u3`.
    pub fn push_forward(&self, i: u8, u: &Vector2<C64>) -> Result<C64> {
        let s = slot(i)?;
        Ok(self.a[s] * u[0] + self.b[s] * u[1])
    }

    /// `K v`.
    pub fn k_times(&self, v1: C64, v2: C64) -> Vector2<C64> {
        self.kmat * Vector2::new(v1, v2)
    }

    /// `(w1, w2) = sqrt((1 - a^2)(1 - b^2)) (u1 +- ab u3)`.
    pub fn w_coords(&self, u: &Vector2<C64>) -> [C64; 2] {
        let r = self.curve.sqrt_p();
        let ab = self.curve.ab();
        [r * (u[0] + ab * u[1]), r * (u[0] - ab * u[1])]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::c64;
    use crate::fixtures::test_curves;

    #[test]
    fn coefficients_for_2_3() {
        let v = CurveV::new(c64(2.0, 0.0), c64(3.0, 0.0)).unwrap();
        let ctx = ReductionContext::new(&v, &Tolerance::default()).unwrap();
        let close = |a: C64, b: f64| (a - b).norm() < 1e-14;
        assert!(close(ctx.a[0], -5.0) && close(ctx.b[0], -30.0));
        assert!(close(ctx.a[1], 7.0) && close(ctx.b[1], -42.0));
        assert!(close(ctx.c[0], -0.2) && close(ctx.d[0], -1.0 / 30.0));
        assert!(close(ctx.c[1], 1.0 / 7.0) && close(ctx.d[1], -1.0 / 42.0));
    }

    #[test]
    fn pairing_is_twice_identity() {
        for fx in test_curves() {
            let ctx = ReductionContext::new(&fx.curve, &Tolerance::default()).unwrap();
            for i in 1..=2u8 {
                for j in 1..=2u8 {
                    let want = if i == j { 2.0 } else { 0.0 };
                    assert!((ctx.pairing(i, j).unwrap() - want).norm() < 1e-12, "{}", fx.name);
                }
            }
            for i in 0..2 {
                assert!(ctx.jacobi[i].modulus_residual() < 1e-10);
                let m2 = ctx.jacobi[i].m * ctx.jacobi[i].m;
                assert!(rel(m2, ctx.kappa[i] * ctx.kappa[i]) < 1e-10);
            }
        }
    }
}
