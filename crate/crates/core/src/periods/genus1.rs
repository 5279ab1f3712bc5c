use std::f64::consts::PI;

use super::hyperelliptic::{BranchOrdering, OddModel};
use crate::curves::{AffinePoint, LegendreCurve, WeierstrassCurve};
use crate::error::{Error, Result};
use crate::numerics::Tolerance;
use crate::C64;

/// Half periods of `omega = -dx/(2y)` and `eta = -x dx/(2y)` on
/// `y^2 = x^3 + l2 x^2 + l4 x + l6`, with `eta_a = -1/2 int_a eta`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PeriodsG1 {
    pub curve: WeierstrassCurve,
    pub omega_a: C64,
    pub omega_b: C64,
    pub eta_a: C64,
    pub eta_b: C64,
    pub tau: C64,
    pub legendre_sign: i8,
}

impl PeriodsG1 {
    pub fn legendre_residual(&self) -> f64 {
        let lhs = self.eta_a * self.omega_b - self.eta_b * self.omega_a;
        (lhs - C64::new(0.0, 0.5 * PI * self.legendre_sign as f64)).norm()
    }

    /// Periods in the basis `(a a' + b b', c a' + d b')`, `ad - bc = 1`.
    pub fn transformed(&self, a: i64, b: i64, c: i64, d: i64) -> Result<PeriodsG1> {
        if a * d - b * c != 1 {
            return Err(Error::InvalidParameters(
                "basis change must have determinant one".into(),
            ));
        }
        let f = |x: i64| C64::new(x as f64, 0.0);
        let omega_a = f(a) * self.omega_a + f(b) * self.omega_b;
        let omega_b = f(c) * self.omega_a + f(d) * self.omega_b;
        Ok(PeriodsG1 {
            curve: self.curve,
            omega_a,
            omega_b,
            eta_a: f(a) * self.eta_a + f(b) * self.eta_b,
            eta_b: f(c) * self.eta_a + f(d) * self.eta_b,
            tau: omega_b / omega_a,
            legendre_sign: self.legendre_sign,
        })
    }

    /// Whether `u` is a lattice point up to `rounding` in lattice coordinates.
    pub fn lattice_coords(&self, u: C64) -> (f64, f64) {
        // u = x 2w' + y 2w''
        let (w1, w2) = (2.0 * self.omega_a, 2.0 * self.omega_b);
        let det = (w1.conj() * w2).im;
        let x = (u.conj() * w2).im / det;
        let y = (w1.conj() * u).im / det;
        (x, y)
    }
}

fn model(roots: &[C64]) -> Result<OddModel> {
    OddModel::new(roots.to_vec(), BranchOrdering::RealThenImag)
}

fn build(curve: WeierstrassCurve, roots: [C64; 3], tol: &Tolerance) -> Result<PeriodsG1> {
    let m = model(&roots)?;
    let f = |x: C64| [C64::new(-0.5, 0.0), -0.5 * x];
    let c1 = m.segment_integrals(0, f, tol)?;
    let c2 = m.segment_integrals(1, f, tol)?;
    // loops are twice the segments and half periods half the loops
    let omega_a = c1[0];
    let mut omega_b = c2[0];
    let eta_a = -c1[1];
    let mut eta_b = -c2[1];
    if (omega_b / omega_a).im < 0.0 {
        omega_b = -omega_b;
        eta_b = -eta_b;
    }
    if omega_a.norm() == 0.0 {
        return Err(Error::DegenerateLattice);
    }
    let mut p = PeriodsG1 {
        curve,
        omega_a,
        omega_b,
        eta_a,
        eta_b,
        tau: omega_b / omega_a,
        legendre_sign: 1,
    };
    let plus = p.legendre_residual();
    p.legendre_sign = -1;
    if plus <= p.legendre_residual() {
        p.legendre_sign = 1;
    }
    if p.legendre_residual() > 1e-6 {
        return Err(Error::NonConvergence(format!(
            "genus-1 Legendre relation off by {:e}",
            p.legendre_residual()
        )));
    }
    Ok(p)
}

pub fn periods_g1(curve: &WeierstrassCurve, tol: &Tolerance) -> Result<PeriodsG1> {
    build(*curve, curve.roots(), tol)
}

pub fn periods_g1_legendre(curve: &LegendreCurve, tol: &Tolerance) -> Result<PeriodsG1> {
    build(curve.as_cubic(), curve.roots(), tol)
}

/// `int_infinity^S -dX/(2Y)` on a cubic with the given roots.
pub fn abel_g1(roots: &[C64; 3], s: &AffinePoint, tol: &Tolerance) -> Result<C64> {
    let (x, y) = match *s {
        AffinePoint::Infinity => return Ok(C64::new(0.0, 0.0)),
        AffinePoint::Finite { x, y } => (x, y),
    };
    let m = model(roots)?;
    Ok(m.ray_integrals(x, y, |_| [C64::new(-0.5, 0.0)], tol)?[0])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::c64;

    fn agm(mut a: f64, mut b: f64) -> f64 {
        for _ in 0..40 {
            let t = 0.5 * (a + b);
            b = (a * b).sqrt();
            a = t;
        }
        a
    }

    #[test]
    fn lemniscatic_lattice() {
        let w = WeierstrassCurve::new(c64(0.0, 0.0), c64(-1.0, 0.0), c64(0.0, 0.0)).unwrap();
        let p = periods_g1(&w, &Tolerance::default()).unwrap();
        assert!((p.tau - c64(0.0, 1.0)).norm() < 1e-8, "{}", p.tau);
        // |2 omega'| is the lemniscate constant pi / agm(1, sqrt 2)
        assert!(((2.0 * p.omega_a).norm() - PI / agm(1.0, 2f64.sqrt())).abs() < 1e-12);
        assert!(p.legendre_residual() < 1e-9);
    }

    #[test]
    fn legendre_relation_for_e1() {
        let l = LegendreCurve::new(c64(1.0, 0.0), c64(1.0 / 25.0, 0.0)).unwrap();
        let p = periods_g1_legendre(&l, &Tolerance::default()).unwrap();
        assert!(p.legendre_residual() < 1e-9);
        assert!(p.tau.im > 0.0);
    }

    #[test]
    fn scaling_homogeneity() {
        // x -> r^2 x scales the lattice of -dx/(2y) by 1/r
        let r = 1.7;
        let w = WeierstrassCurve::new(c64(0.3, 0.1), c64(-1.2, 0.0), c64(0.4, -0.2)).unwrap();
        let ws = WeierstrassCurve::new(w.lambda2 * r * r, w.lambda4 * r.powi(4), w.lambda6 * r.powi(6)).unwrap();
        let p = periods_g1(&w, &Tolerance::default()).unwrap();
        let q = periods_g1(&ws, &Tolerance::default()).unwrap();
        let (x, y) = p.lattice_coords(q.omega_a * r * 2.0);
        assert!((x - x.round()).abs() < 1e-9 && (y - y.round()).abs() < 1e-9);
        let (x, y) = q.lattice_coords(p.omega_b / r * 2.0);
        assert!((x - x.round()).abs() < 1e-9 && (y - y.round()).abs() < 1e-9);
    }
}
