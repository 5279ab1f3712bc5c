//! Jacobi `sn`, `cn`, `dn` as theta quotients.

use std::f64::consts::PI;

use super::theta::theta_g1;
use super::THETA_TOL;
use crate::error::{Error, Result};
use crate::C64;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JacobiContext {
    pub tau: C64,
    /// modulus, `theta10(0)^2 / theta00(0)^2`
    pub m: C64,
    /// quarter period `K = pi theta00(0)^2 / 2`
    pub omega_a: C64,
    /// `K tau`
    pub omega_b: C64,
    t00: C64,
    t01: C64,
    t10: C64,
}

impl JacobiContext {
    pub fn new(tau: C64) -> Result<Self> {
        if tau.im <= 0.0 {
            return Err(Error::InvalidParameters("Im tau must be positive".into()));
        }
        let zero = C64::new(0.0, 0.0);
        let t00 = theta_g1(0.0, 0.0, zero, tau, THETA_TOL)?;
        let t01 = theta_g1(0.0, 0.5, zero, tau, THETA_TOL)?;
        let t10 = theta_g1(0.5, 0.0, zero, tau, THETA_TOL)?;
        let m = t10 * t10 / (t00 * t00);
        let m2 = m * m;
        if m2.norm() < 1e-14 || (m2 - 1.0).norm() < 1e-14 {
            return Err(Error::InvalidParameters("degenerate modulus".into()));
        }
        let k = 0.5 * PI * t00 * t00;
        Ok(JacobiContext {
            tau,
            m,
            omega_a: k,
            omega_b: k * tau,
            t00,
            t01,
            t10,
        })
    }

    /// `(sn, cn, dn)` at `u`.
    pub fn sn_cn_dn(&self, u: C64) -> Result<(C64, C64, C64)> {
        let z = u / (PI * self.t00 * self.t00);
        let tau = self.tau;
        let s11 = theta_g1(0.5, 0.5, z, tau, THETA_TOL)?;
        let s01 = theta_g1(0.0, 0.5, z, tau, THETA_TOL)?;
        let s10 = theta_g1(0.5, 0.0, z, tau, THETA_TOL)?;
        let s00 = theta_g1(0.0, 0.0, z, tau, THETA_TOL)?;
        let scale = s00.norm().max(s10.norm()).max(s11.norm()).max(1e-300);
        if s01.norm() < 1e-12 * scale {
            return Err(Error::PoleOfSn);
        }
        let sn = -self.t00 * s11 / (self.t10 * s01);
        let cn = self.t01 * s10 / (self.t10 * s01);
        let dn = self.t01 * s00 / (self.t00 * s01);
        Ok((sn, cn, dn))
    }

    /// Consistency of `m^2` with `theta10^4 / theta00^4`.
    pub fn modulus_residual(&self) -> f64 {
        let q = self.t10 / self.t00;
        (self.m * self.m - q * q * q * q).norm()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::c64;

    #[test]
    fn origin() {
        let j = JacobiContext::new(c64(0.2, 0.9)).unwrap();
        let (s, c, d) = j.sn_cn_dn(c64(0.0, 0.0)).unwrap();
        assert!(s.norm() < 1e-15 && (c - 1.0).norm() < 1e-14 && (d - 1.0).norm() < 1e-14);
        assert!(j.modulus_residual() < 1e-10);
    }

    #[test]
    fn identities_and_derivative() {
        let j = JacobiContext::new(c64(-0.3, 1.2)).unwrap();
        let m2 = j.m * j.m;
        for u in [c64(0.4, 0.1), c64(-1.3, 0.7), c64(2.2, -0.4)] {
            let (s, c, d) = j.sn_cn_dn(u).unwrap();
            assert!((s * s + c * c - 1.0).norm() < 1e-10);
            assert!((d * d + m2 * s * s - 1.0).norm() < 1e-10);
            let (sm, cm, dm) = j.sn_cn_dn(-u).unwrap();
            assert!((sm + s).norm() < 1e-12 && (cm - c).norm() < 1e-12 && (dm - d).norm() < 1e-12);
            // sn' = cn dn, and (sn, sn') lies on y^2 = (1 - x^2)(1 - m^2 x^2)
            let h = 1e-5;
            let ds = (j.sn_cn_dn(u + h).unwrap().0 - j.sn_cn_dn(u - h).unwrap().0) / (2.0 * h);
            assert!((ds - c * d).norm() < 1e-8);
            assert!((ds * ds - (1.0 - s * s) * (1.0 - m2 * s * s)).norm() < 1e-7);
        }
    }

    #[test]
    fn pole() {
        let j = JacobiContext::new(c64(0.0, 1.0)).unwrap();
        // sn has a pole at i K'
        assert!(matches!(j.sn_cn_dn(j.omega_b), Err(Error::PoleOfSn)));
    }
}
