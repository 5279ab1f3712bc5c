//! Genus-1 sigma, Weierstrass `P`, `P'` and al functions on
//! `y^2 = x^3 + l2 x^2 + l4 x + l6` with `x = P(u)`, `y = -P'(u)/2`.

use super::theta::theta_g1_jet;
use super::{DIVISOR_THRESHOLD, THETA_TOL};
use crate::curves::{LegendreCurve, WeierstrassCurve};
use crate::error::{Error, Result};
use crate::numerics::Tolerance;
use crate::periods::{periods_g1, periods_g1_legendre, PeriodsG1};
use crate::C64;

#[derive(Debug, Clone, Copy)]
pub struct SigmaG1Evaluator {
    pub curve: WeierstrassCurve,
    pub periods: PeriodsG1,
    theta11_prime: C64,
    tol: f64,
}

impl SigmaG1Evaluator {
    pub fn new(curve: &WeierstrassCurve, tol: &Tolerance) -> Result<Self> {
        Self::from_periods(periods_g1(curve, tol)?)
    }

    pub fn legendre(curve: &LegendreCurve, tol: &Tolerance) -> Result<Self> {
        Self::from_periods(periods_g1_legendre(curve, tol)?)
    }

    pub fn from_periods(periods: PeriodsG1) -> Result<Self> {
        let j = theta_g1_jet(0.5, 0.5, C64::new(0.0, 0.0), periods.tau, THETA_TOL)?;
        Ok(SigmaG1Evaluator {
            curve: periods.curve,
            periods,
            theta11_prime: j.d[1] * j.log_scale.exp(),
            tol: THETA_TOL,
        })
    }

    fn z_of(&self, u: C64) -> C64 {
        u / (2.0 * self.periods.omega_a)
    }

    pub fn log_sigma(&self, u: C64) -> Result<C64> {
        let w = self.periods.omega_a;
        let j = theta_g1_jet(0.5, 0.5, self.z_of(u), self.periods.tau, self.tol)?;
        if j.d[0].norm() == 0.0 {
            return Err(Error::OnLattice);
        }
        Ok((2.0 * w / self.theta11_prime).ln() + self.periods.eta_a * u * u / (2.0 * w) + j.log_scale + j.d[0].ln())
    }

    pub fn sigma(&self, u: C64) -> Result<C64> {
        let w = self.periods.omega_a;
        let j = theta_g1_jet(0.5, 0.5, self.z_of(u), self.periods.tau, self.tol)?;
        Ok(2.0 * w / self.theta11_prime * (self.periods.eta_a * u * u / (2.0 * w) + j.log_scale).exp() * j.d[0])
    }

    /// `(P(u), P'(u))`.
    pub fn wp_pair(&self, u: C64) -> Result<(C64, C64)> {
        let tau = self.periods.tau;
        let mut z = self.z_of(u);
        let k = (z.im / tau.im).round();
        z -= k * tau;
        z -= z.re.round();
        let j = theta_g1_jet(0.5, 0.5, z, tau, self.tol)?;
        if j.cancellation() < DIVISOR_THRESHOLD {
            return Err(Error::OnLattice);
        }
        let (l2, l3) = j.log_derivatives();
        let w2 = 2.0 * self.periods.omega_a;
        Ok((
            -self.periods.eta_a / self.periods.omega_a - l2 / (w2 * w2),
            -l3 / (w2 * w2 * w2),
        ))
    }

    pub fn wp(&self, u: C64) -> Result<C64> {
        self.wp_pair(u).map(|p| p.0)
    }

    pub fn wp_prime(&self, u: C64) -> Result<C64> {
        self.wp_pair(u).map(|p| p.1)
    }

    /// Half period and eta value attached to `al_j`.
    pub fn half_period(&self, j: u8) -> (C64, C64) {
        let p = &self.periods;
        match j {
            1 => (p.omega_a, p.eta_a),
            2 => (p.omega_a + p.omega_b, p.eta_a + p.eta_b),
            _ => (p.omega_b, p.eta_b),
        }
    }

    /// `al_j(u) = exp(eta_j u) sigma(omega_j - u) / (sigma(u) sigma(omega_j))`.
    pub fn al(&self, j: u8, u: C64) -> Result<C64> {
        if !(1..=3).contains(&j) {
            return Err(Error::InvalidParameters("al index must be 1, 2 or 3".into()));
        }
        let (w, e) = self.half_period(j);
        let (x, y) = self.periods.lattice_coords(u);
        if (x - x.round()).abs() < 1e-12 && (y - y.round()).abs() < 1e-12 {
            return Err(Error::OnLattice);
        }
        let l = e * u + self.log_sigma(w - u)? - self.log_sigma(u)? - self.log_sigma(w)?;
        Ok(l.exp())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::c64;

    fn lemniscatic() -> SigmaG1Evaluator {
        let w = WeierstrassCurve::new(c64(0.0, 0.0), c64(-1.0, 0.0), c64(0.0, 0.0)).unwrap();
        SigmaG1Evaluator::new(&w, &Tolerance::default()).unwrap()
    }

    fn generic() -> SigmaG1Evaluator {
        let l = LegendreCurve::new(c64(1.0, 0.0), c64(0.37, 0.52)).unwrap();
        SigmaG1Evaluator::legendre(&l, &Tolerance::default()).unwrap()
    }

    #[test]
    fn sigma_is_u_near_zero() {
        for s in [lemniscatic(), generic()] {
            let u = c64(1e-3, 2e-4);
            assert!((s.sigma(u).unwrap() / u - 1.0).norm() < 1e-6);
            let u = c64(1e-5, 0.0);
            assert!((s.sigma(u).unwrap() / u - 1.0).norm() < 1e-9);
        }
    }

    #[test]
    fn differential_equation() {
        for s in [lemniscatic(), generic()] {
            for u in [c64(0.3, 0.1), c64(-0.7, 0.4), c64(1.9, -2.2)] {
                let (p, dp) = s.wp_pair(u).unwrap();
                let lhs = dp * dp;
                let rhs = 4.0 * s.curve.m1(p);
                assert!(
                    (lhs - rhs).norm() < 1e-8 * lhs.norm().max(rhs.norm()).max(1.0),
                    "{lhs} {rhs}"
                );
                let (pm, dpm) = s.wp_pair(-u).unwrap();
                assert!((pm - p).norm() < 1e-10 * (1.0 + p.norm()));
                assert!((dpm + dp).norm() < 1e-10 * (1.0 + dp.norm()));
                let shifted = s.wp(u + 2.0 * s.periods.omega_a).unwrap();
                assert!((shifted - p).norm() < 1e-9 * (1.0 + p.norm()));
            }
        }
    }

    #[test]
    fn half_period_values_are_roots() {
        let s = lemniscatic();
        for j in 1..=3 {
            let (w, _) = s.half_period(j);
            let p = s.wp(w).unwrap();
            assert!([-1.0, 0.0, 1.0].iter().any(|r| (p - r).norm() < 1e-9), "{p}");
        }
    }

    #[test]
    fn al_squares() {
        for s in [lemniscatic(), generic()] {
            for j in 1..=3 {
                let e = s.wp(s.half_period(j).0).unwrap();
                for u in [c64(0.21, 0.13), c64(-0.5, 0.8)] {
                    let a = s.al(j, u).unwrap();
                    let p = s.wp(u).unwrap();
                    assert!((a * a - (p - e)).norm() < 1e-8 * (1.0 + p.norm()), "{j} {u}");
                    let am = s.al(j, -u).unwrap();
                    assert!((am * am - a * a).norm() < 1e-8 * (1.0 + p.norm()));
                }
            }
        }
    }

    #[test]
    fn lattice_points_rejected() {
        let s = generic();
        assert!(matches!(s.wp(c64(0.0, 0.0)), Err(Error::OnLattice)));
        assert!(matches!(s.wp(2.0 * s.periods.omega_b), Err(Error::OnLattice)));
    }
}
