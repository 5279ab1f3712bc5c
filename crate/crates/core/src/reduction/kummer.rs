//! Kummer-surface coordinates: the Jacobi-function products `Z_j`, the
//! al-function products, and the bridges between `E_i`, their Legendre
//! companions and `sn`, `cn`, `dn`.

use nalgebra::Vector2;

use super::{guard, slot, ReductionContext};
use crate::error::Result;
use crate::numerics::term_scale;
use crate::theta_sigma::WpValues;
use crate::C64;

const I: C64 = C64::new(0.0, 1.0);

impl ReductionContext {
    /// `(Z1, Z2, Z3)` as rational functions of `P11`, `P13`, `P33`.
    pub fn kummer_z(&self, u: &Vector2<C64>) -> Result<[C64; 3]> {
        self.kummer_z_from(&self.sigma.wp_all(u)?)
    }

    pub fn kummer_z_from(&self, w: &WpValues) -> Result<[C64; 3]> {
        let (al, be) = (self.curve.alpha, self.curve.beta);
        let (a2, b2) = (al * al, be * be);
        let ab2 = a2 * b2;
        let d = (a2 + b2) * (w.p13 - ab2) + ab2 * w.p11 + w.p33;
        let d = guard(
            d,
            term_scale(&[w.p13 * (a2 + b2), ab2 * w.p11, w.p33]),
            "Kummer denominator",
        )?;
        Ok([
            -(1.0 - a2) * (1.0 - b2) * (ab2 + w.p13) / d,
            -((1.0 + ab2) * (ab2 - w.p13) - ab2 * w.p11 - w.p33) / d,
            -(ab2 * w.p11 - w.p33) / d,
        ])
    }

    /// Inverse of [`Self::kummer_z`]: `(P11, P13, P33)`.
    pub fn wp_from_z(&self, z: [C64; 3]) -> Result<[C64; 3]> {
        let (al, be) = (self.curve.alpha, self.curve.beta);
        let (a2, b2) = (al * al, be * be);
        let ab2 = a2 * b2;
        let s = guard(z[0] + z[1] - 1.0, term_scale(&z), "Z1 + Z2 - 1")?;
        Ok([
            ((a2 + b2) * (z[1] - z[2]) + (1.0 + ab2) * (z[2] - 1.0)) / s,
            ab2 * (1.0 + z[0] - z[1]) / s,
            ab2 * ((a2 + b2) * (z[1] + z[2]) - (1.0 + ab2) * (z[2] + 1.0)) / s,
        ])
    }

    /// `(sn sn, cn cn, dn dn)` at `(w1, w2)` with moduli from the companion curves.
    pub fn z_products(&self, u: &Vector2<C64>) -> Result<[C64; 3]> {
        let w = self.w_coords(u);
        let (s1, c1, d1) = self.jacobi[0].sn_cn_dn(w[0])?;
        let (s2, c2, d2) = self.jacobi[1].sn_cn_dn(w[1])?;
        Ok([s1 * s2, c1 * c2, d1 * d2])
    }

    /// Both sides of the isomorphism between `E_i` and its Legendre companion:
    /// `P_{E1}(-i (ab - 1) u / (a - b))` against `(a - b)^2 / (ab - 1)^2 (1 - P~(u))`,
    /// and the same with `b -> -b` for `i = 2`.
    pub fn wp_tilde_bridge(&self, i: u8, u: C64) -> Result<(C64, C64)> {
        let s = slot(i)?;
        let (al, be) = (self.curve.alpha, self.curve.beta);
        let ab = al * be;
        let (arg, c) = if s == 0 {
            (
                -I * (ab - 1.0) / (al - be) * u,
                (al - be) * (al - be) / ((ab - 1.0) * (ab - 1.0)),
            )
        } else {
            (
                I * (ab + 1.0) / (al + be) * u,
                (al + be) * (al + be) / ((ab + 1.0) * (ab + 1.0)),
            )
        };
        let lhs = self.sigma_e[s].wp(arg)?;
        let rhs = c * (1.0 - self.sigma_tilde[s].wp(u)?);
        Ok((lhs, rhs))
    }

    /// Pairs `(sn^2, 1/(k^2 P~(k u)))`, `(cn^2, ...)`, `(dn^2, ...)`.
    pub fn jacobi_bridges(&self, i: u8, u: C64) -> Result<[(C64, C64); 3]> {
        let s = slot(i)?;
        let k = self.kappa[s];
        let (sn, cn, dn) = self.jacobi[s].sn_cn_dn(u)?;
        let x = guard(self.sigma_tilde[s].wp(k * u)?, 1.0, "P~(kappa u)")?;
        Ok([
            (sn * sn, 1.0 / (k * k * x)),
            (cn * cn, (x - 1.0 / (k * k)) / x),
            (dn * dn, (x - 1.0) / x),
        ])
    }

    /// `al^(1)_j(kappa1 w1) al^(2)_j(kappa2 w2)` for `j = 1, 2, 3`.
    pub fn al_product_coords(&self, u: &Vector2<C64>) -> Result<[C64; 3]> {
        let w = self.w_coords(u);
        let mut out = [C64::new(0.0, 0.0); 3];
        for (j, o) in out.iter_mut().enumerate() {
            let j = j as u8 + 1;
            *o = self.sigma_tilde[0].al(j, self.kappa[0] * w[0])? * self.sigma_tilde[1].al(j, self.kappa[1] * w[1])?;
        }
        Ok(out)
    }

    /// The al-product coordinates as rational functions of `P_jk`, in the closed form of [`Self::al_display_from`]; these differ from [`Self::al_product_coords`] by `(kappa1 kappa2)^2`.
    pub fn al_display(&self, u: &Vector2<C64>) -> Result<[C64; 3]> {
        self.al_display_from(&self.sigma.wp_all(u)?)
    }

    pub fn al_display_from(&self, w: &WpValues) -> Result<[C64; 3]> {
        let (al, be) = (self.curve.alpha, self.curve.beta);
        let (a2, b2) = (al * al, be * be);
        let ab2 = a2 * b2;
        let p = (1.0 - a2) * (1.0 - b2);
        let pre = (a2 - b2) / (p * p);
        let den = guard(ab2 + w.p13, term_scale(&[ab2, w.p13]), "a^2 b^2 + P13")?;
        Ok([
            pre * ((1.0 + ab2) * (w.p13 - ab2) + ab2 * w.p11 + w.p33) / den,
            pre * (w.p33 - ab2 * w.p11) / den,
            pre * ((a2 + b2) * (w.p13 - ab2) + ab2 * w.p11 + w.p33) / den,
        ])
    }

    /// `(P11, P13, P33)` from the closed-form al coordinates of [`Self::al_display`].
    pub fn wp_from_al_display(&self, z: [C64; 3]) -> Result<[C64; 3]> {
        let (al, be) = (self.curve.alpha, self.curve.beta);
        let (a2, b2) = (al * al, be * be);
        let ab2 = a2 * b2;
        let p = (1.0 - a2) * (1.0 - b2);
        let den = p * (z[2] - z[0]) + a2 - b2;
        let den = guard(
            den,
            term_scale(&[p * z[2], p * z[0], a2 - b2]),
            "al inverse denominator",
        )?;
        Ok([
            p * ((1.0 + ab2) * z[2] - p * z[1] - (a2 + b2) * z[0]) / den,
            ab2 * (p * (z[0] - z[2]) + a2 - b2) / den,
            ab2 * p * ((1.0 + ab2) * z[2] + p * z[1] - (a2 + b2) * z[0]) / den,
        ])
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::c64;
    use crate::fixtures::test_curves;
    use crate::numerics::Tolerance;

    fn rel(a: C64, b: C64) -> f64 {
        (a - b).norm() / a.norm().max(b.norm()).max(1.0)
    }

    fn ctx(k: usize) -> ReductionContext {
        ReductionContext::new(&test_curves()[k].curve, &Tolerance::default()).unwrap()
    }

    #[test]
    fn kummer_z_matches_jacobi_products() {
        for k in 0..5 {
            let c = ctx(k);
            let u = Vector2::new(c64(0.21, -0.13), c64(0.04, 0.09));
            let z = c.kummer_z(&u).unwrap();
            let p = c.z_products(&u).unwrap();
            let back = c.wp_from_z(z).unwrap();
            let w = c.sigma.wp_all(&u).unwrap();
            for j in 0..3 {
                assert!(rel(z[j], p[j]) < 1e-10, "{}", test_curves()[k].name);
            }
            assert!(rel(back[0], w.p11) < 1e-10 && rel(back[1], w.p13) < 1e-10 && rel(back[2], w.p33) < 1e-10);
        }
    }

    #[test]
    fn z1_vanishes_on_k1_line() {
        let c = ctx(2);
        let z = c.kummer_z(&(c.k[0] * c64(0.17, 0.05))).unwrap();
        assert!(z[0].norm() < 1e-10);
    }

    #[test]
    fn companion_bridges() {
        for k in 0..5 {
            let c = ctx(k);
            let u = c64(0.3, 0.1);
            for i in 1..=2u8 {
                let (l, r) = c.wp_tilde_bridge(i, u).unwrap();
                assert!(rel(l, r) < 1e-10);
                for (a, b) in c.jacobi_bridges(i, u).unwrap() {
                    assert!(rel(a, b) < 1e-10);
                }
            }
        }
    }

    #[test]
    fn al_products_are_even_and_match_jacobi_quotients() {
        let c = ctx(3);
        let u = Vector2::new(c64(0.21, -0.13), c64(0.04, 0.09));
        let a = c.al_product_coords(&u).unwrap();
        let b = c.al_product_coords(&-u).unwrap();
        let (s, cn, dn) = {
            let p = c.z_products(&u).unwrap();
            (p[0], p[1], p[2])
        };
        let k = c.kappa[0] * c.kappa[1];
        for j in 0..3 {
            assert!(rel(a[j], b[j]) < 1e-10);
        }
        assert!(rel(s, 1.0 / (k * a[2])) < 1e-10);
        assert!(rel(cn, a[0] / a[2]) < 1e-10);
        assert!(rel(dn, a[1] / a[2]) < 1e-10);
    }

    #[test]
    fn al_display_is_off_by_kappa_product_squared() {
        for k in 0..5 {
            let c = ctx(k);
            let u = Vector2::new(c64(0.21, -0.13), c64(0.04, 0.09));
            let a = c.al_product_coords(&u).unwrap();
            let d = c.al_display(&u).unwrap();
            let kk = c.kappa[0] * c.kappa[1];
            for j in 0..3 {
                assert!(rel(d[j] / a[j], kk * kk) < 1e-10, "{}", test_curves()[k].name);
            }
            let w = c.sigma.wp_all(&u).unwrap();
            let back = c.wp_from_al_display(d).unwrap();
            assert!(rel(back[0], w.p11) < 1e-10 && rel(back[1], w.p13) < 1e-10 && rel(back[2], w.p33) < 1e-10);
        }
    }
}
