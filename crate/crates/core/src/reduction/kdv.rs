//! Residuals of the KdV hierarchy satisfied by `F = 2 P11 + 2 l2 / 3` and
//! `G = 2 P13`.

use nalgebra::Vector2;

use super::ReductionContext;
use crate::error::Result;
use crate::numerics::term_scale;
use crate::theta_sigma::WpIndex;
use crate::C64;

/// Relative residuals of the three equations, with the extrapolated
/// fifth-order derivatives used.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KdvResiduals {
    pub r: [f64; 3],
    pub d11_p111: C64,
    pub d11_p113: C64,
}

impl ReductionContext {
    /// `d^2/du1^2` of `P_which` by central differences with one Richardson step.
    fn second_u1(&self, which: WpIndex, u: &Vector2<C64>, h: f64) -> Result<C64> {
        let f = |s: f64| -> Result<C64> {
            let v = Vector2::new(u[0] + s, u[1]);
            self.sigma.wp(which, &v)
        };
        let f0 = f(0.0)?;
        let d = |h: f64| -> Result<C64> { Ok((f(h)? - 2.0 * f0 + f(-h)?) / (h * h)) };
        let (coarse, fine) = (d(h)?, d(0.5 * h)?);
        Ok((4.0 * fine - coarse) / 3.0)
    }

    pub fn kdv_residuals(&self, u: &Vector2<C64>, h: f64) -> Result<KdvResiduals> {
        let w = self.sigma.wp_all(u)?;
        let l2 = self.curve.lambdas()[0];
        let d11_p111 = self.second_u1(WpIndex::P111, u, h)?;
        let d11_p113 = self.second_u1(WpIndex::P113, u, h)?;
        let f = 2.0 * w.p11 + 2.0 / 3.0 * l2;
        let (f1, f3, f111, f113) = (2.0 * w.p111, 2.0 * w.p113, 2.0 * d11_p111, 2.0 * d11_p113);
        let g = 2.0 * w.p13;
        let g1 = 2.0 * w.p113;
        let t1 = [f3, 0.25 * f111, 1.5 * f * f1];
        let r1 = (t1[0] - t1[1] + t1[2]).norm() / term_scale(&t1);
        let t2 = [0.25 * f113, (f + l2 / 3.0) * f3, 0.5 * f1 * g];
        let r2 = (t2[0] - t2[1] - t2[2]).norm() / term_scale(&t2);
        let r3 = (f3 - g1).norm() / term_scale(&[f3, g1]);
        Ok(KdvResiduals {
            r: [r1, r2, r3],
            d11_p111,
            d11_p113,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::c64;
    use crate::fixtures::test_curves;
    use crate::numerics::Tolerance;

    #[test]
    fn hierarchy_residuals_small() {
        for fx in test_curves() {
            let c = ReductionContext::new(&fx.curve, &Tolerance::default()).unwrap();
            let u = Vector2::new(c64(0.21, -0.13), c64(0.04, 0.09));
            let r = c.kdv_residuals(&u, 1e-3).unwrap().r;
            assert!(r[0] < 1e-6 && r[1] < 1e-6 && r[2] == 0.0, "{}: {:?}", fx.name, r);
        }
    }
}
