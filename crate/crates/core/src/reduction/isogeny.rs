//! Identities along the isogeny `Jac(V) -> E1 x E2`: the functions `f_i`,
//! restrictions to the lines `k_i v`, the two-variable expressions on
//! `K v`, the addition formulae and Jacobi inversion.

use nalgebra::Vector2;

use super::{guard, slot, ReductionContext};
use crate::curves::AffinePoint;
use crate::error::{Error, Result};
use crate::numerics::term_scale;
use crate::theta_sigma::{WpIndex, WpValues};
use crate::C64;

/// The six auxiliary functions of the addition formulae.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QValues {
    pub q: C64,
    pub q1: C64,
    pub q3: C64,
    pub q11: C64,
    pub q13: C64,
    pub q33: C64,
}

/// Unordered pair of points on `V`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DivisorPair {
    pub p: AffinePoint,
    pub q: AffinePoint,
}

/// The pieces of the two-variable expressions on `K v`: the elliptic
/// values, `p1`, `p2`, `p3`, and each `P_jk` written as prefactor times
/// bracket.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KvFactorization {
    pub wp1: C64,
    pub wp1_prime: C64,
    pub wp2: C64,
    pub wp2_prime: C64,
    pub p1: C64,
    pub p2: C64,
    pub p3: C64,
    /// `P11 = pre[0] * bracket[0]`, `P13 - a^2 b^2 = pre[1] * bracket[1]`,
    /// `P33 = pre[2] * bracket[2]`
    pub pre: [C64; 3],
    pub bracket: [C64; 3],
}

impl KvFactorization {
    pub fn wp11(&self) -> C64 {
        self.pre[0] * self.bracket[0]
    }
}

impl ReductionContext {
    /// `f_i(u) = P_{E_i}(a_i u1 + b_i u3)`.
    pub fn f_direct(&self, i: u8, u: &Vector2<C64>) -> Result<C64> {
        let s = slot(i)?;
        self.sigma_e[s].wp(self.push_forward(i, u)?)
    }

    /// `f_i` as the rational expression in `P11`, `P13`, `P33`.
    pub fn f_formula(&self, i: u8, u: &Vector2<C64>) -> Result<C64> {
        slot(i)?;
        let w = self.sigma.wp_all(u)?;
        self.f_formula_from(i, &w)
    }

    pub fn f_formula_from(&self, i: u8, w: &WpValues) -> Result<C64> {
        let (al, be) = (self.curve.alpha, self.curve.beta);
        let ab = al * be;
        let ab2 = ab * ab;
        let ab3 = ab2 * ab;
        let (p11, p13, p33) = (w.p11, w.p13, w.p33);
        let (num, pre) = if i == 1 {
            let a1 = p33 + ab2 * p11 + ab * (ab - 1.0) * (ab - 1.0) * (al - be) * (al - be) - 2.0 * ab3;
            (
                -ab * p13 * p13 - a1 * p13 - ab * (p11 - ab) * (p33 - ab3),
                (ab - 1.0) * (ab - 1.0),
            )
        } else {
            let a2 = p33 + ab2 * p11 - ab * (ab + 1.0) * (ab + 1.0) * (al + be) * (al + be) + 2.0 * ab3;
            (
                ab * p13 * p13 - a2 * p13 + ab * (p11 + ab) * (p33 + ab3),
                (ab + 1.0) * (ab + 1.0),
            )
        };
        let t = p13 + ab2;
        let den = guard(pre * t * t, term_scale(&[p13, ab2]).powi(2), "f formula")?;
        Ok(num / den)
    }

    /// Closed form of `P_jk(k_i v)` or `P_jkl(k_i v)` in `P_{E_i}(v)`, `P'_{E_i}(v)`.
    pub fn restrict_wp(&self, i: u8, which: WpIndex, v: C64) -> Result<C64> {
        let s = slot(i)?;
        let (x, xp) = self.sigma_e[s].wp_pair(v)?;
        self.restrict_from(i, which, x, xp)
    }

    pub fn restrict_from(&self, i: u8, which: WpIndex, x: C64, xp: C64) -> Result<C64> {
        let (al, be) = (self.curve.alpha, self.curve.beta);
        let ab = al * be;
        let ab2 = ab * ab;
        let ab3 = ab2 * ab;
        let xg = || guard(x, 1.0, "restriction");
        Ok(if i == 1 {
            let (m, d2) = (ab - 1.0, (al - be) * (al - be));
            match which {
                WpIndex::P11 => 2.0 * ab + d2 / xg()?,
                WpIndex::P13 => -ab2,
                WpIndex::P33 => ab2 * (m * m * x + 2.0 * ab),
                WpIndex::P111 => m * xp * (d2 + ab * x) / (xg()? * x),
                WpIndex::P113 => -ab2 * m * xp / xg()?,
                WpIndex::P133 => ab3 * m * xp / xg()?,
                WpIndex::P333 => -ab3 * m * (m * m * x + ab) * xp / xg()?,
            }
        } else {
            let (m, d2) = (ab + 1.0, (al + be) * (al + be));
            match which {
                WpIndex::P11 => -2.0 * ab + d2 / xg()?,
                WpIndex::P13 => -ab2,
                WpIndex::P33 => ab2 * (m * m * x - 2.0 * ab),
                WpIndex::P111 => -m * xp * (d2 - ab * x) / (xg()? * x),
                WpIndex::P113 => ab2 * m * xp / xg()?,
                WpIndex::P133 => ab3 * m * xp / xg()?,
                WpIndex::P333 => -ab3 * m * (m * m * x - ab) * xp / xg()?,
            }
        })
    }

    /// `P11`, `P13`, `P33` at `K (v1, v2)` through the elliptic functions.
    pub fn kv_factorization(&self, v1: C64, v2: C64) -> Result<KvFactorization> {
        let (x1, x1p) = self.sigma_e[0].wp_pair(v1)?;
        let (x2, x2p) = self.sigma_e[1].wp_pair(v2)?;
        let (al, be) = (self.curve.alpha, self.curve.beta);
        let (a2, b2) = (al * al, be * be);
        let ab = al * be;
        let ab2 = ab * ab;
        let (mm, mp) = ((ab - 1.0) * (ab - 1.0), (ab + 1.0) * (ab + 1.0));
        let (sp, sm) = ((al + be) * (al + be), (al - be) * (al - be));
        let p1 = (mm * x1 - mp * x2 + 8.0 * ab) * x1 * x2 - sp * x1 + sm * x2;
        let p2 = (ab2 - 1.0) * x1p * x2p
            - 2.0 * (mm * x1 + mp * x2 - 2.0 * (a2 + 1.0) * (b2 + 1.0)) * x1 * x2
            - 2.0 * (sp * x1 + sm * x2);
        let p3 = -2.0 * ab * p1 - 2.0 * (a2 * b2 * b2 + a2 * a2 * b2 - 4.0 * ab2 + a2 + b2) * x1 * x2;
        let den = guard(2.0 * p1 * p1, term_scale(&[x1 * x2, x1, x2]).powi(2), "p1")?;
        let bracket = [
            mm * sp * x1 * x1 + mp * sm * x2 * x2 + p3,
            (ab2 - 1.0) * x1p * x2p - p2,
            (ab2 - 1.0) * (ab2 - 1.0) * x1 * x1 * x2 * x2 + (a2 - b2) * (a2 - b2) + p3,
        ];
        let pre = [-p2 / den, ab2 * p2 / den, -ab2 * p2 / den];
        Ok(KvFactorization {
            wp1: x1,
            wp1_prime: x1p,
            wp2: x2,
            wp2_prime: x2p,
            p1,
            p2,
            p3,
            pre,
            bracket,
        })
    }

    /// `P_jk(K v)` for `jk` in `11`, `13`, `33`.
    pub fn wp_on_kv(&self, which: WpIndex, v1: C64, v2: C64) -> Result<C64> {
        let f = self.kv_factorization(v1, v2)?;
        let ab2 = self.curve.ab() * self.curve.ab();
        match which {
            WpIndex::P11 => Ok(f.pre[0] * f.bracket[0]),
            WpIndex::P13 => Ok(ab2 + f.pre[1] * f.bracket[1]),
            WpIndex::P33 => Ok(f.pre[2] * f.bracket[2]),
            _ => Err(Error::InvalidParameters(
                "only 11, 13, 33 have closed forms on K v".into(),
            )),
        }
    }

    pub fn q_functions(&self, u: &Vector2<C64>, v: &Vector2<C64>) -> Result<QValues> {
        let wu = self.sigma.wp_all(u)?;
        let wv = self.sigma.wp_all(v)?;
        Ok(self.q_from(&wu, &wv))
    }

    pub fn q_from(&self, u: &WpValues, v: &WpValues) -> QValues {
        let l = self.curve.lambdas();
        let (l2, l4, l6, l8) = (l[0], l[1], l[2], l[3]);
        let (pu, pv) = (u.det(), v.det());
        let q = u.p33 - v.p33 + u.p13 * v.p11 - v.p13 * u.p11;
        let q1 = u.p133 - v.p133 + u.p113 * v.p11 - v.p113 * u.p11 + v.p111 * u.p13 - u.p111 * v.p13;
        let q3 = u.p333 - v.p333 + u.p133 * v.p11 - v.p133 * u.p11 + v.p113 * u.p13 - u.p113 * v.p13;
        let q11 = 8.0 * l2 * (u.p13 * v.p11 - v.p13 * u.p11) + 4.0 * l4 * (u.p13 - v.p13)
            - 4.0 * (pu - pv)
            - 8.0 * (u.p33 * v.p11 - v.p33 * u.p11)
            + 2.0 * (u.p113 * v.p111 - v.p113 * u.p111);
        let q13 = 4.0 * l6 * (u.p13 - v.p13) + 2.0 * l4 * (u.p13 * v.p11 - v.p13 * u.p11)
            - 4.0 * (u.p33 * v.p13 - v.p33 * u.p13)
            + 2.0 * (pu * v.p11 - pv * u.p11)
            - 2.0 * l8 * (u.p11 - v.p11)
            + v.p111 * u.p133
            - u.p111 * v.p133;
        let q33 = 4.0 * l6 * q
            + 4.0 * l8 * (u.p13 - v.p13)
            + 4.0 * (pu * v.p13 - pv * u.p13)
            + 2.0 * (u.p133 * v.p113 - v.p133 * u.p113);
        QValues {
            q,
            q1,
            q3,
            q11,
            q13,
            q33,
        }
    }

    /// `(P11, P13, P33)(u + v)` from values at `u` and `v`.
    pub fn addition(&self, u: &Vector2<C64>, v: &Vector2<C64>) -> Result<[C64; 3]> {
        let wu = self.sigma.wp_all(u)?;
        let wv = self.sigma.wp_all(v)?;
        self.addition_from(&wu, &wv)
    }

    pub fn addition_from(&self, wu: &WpValues, wv: &WpValues) -> Result<[C64; 3]> {
        let q = self.q_from(wu, wv);
        let qq = guard(q.q, term_scale(&[wu.p33, wv.p33, wu.p13 * wv.p11]), "q")?;
        Ok([
            -wu.p11 - wv.p11 + 0.25 * (q.q1 / qq).powi(2) - q.q11 / (4.0 * qq),
            -wu.p13 - wv.p13 + q.q1 * q.q3 / (4.0 * qq * qq) - q.q13 / (4.0 * qq),
            -wu.p33 - wv.p33 + 0.25 * (q.q3 / qq).powi(2) - q.q33 / (4.0 * qq),
        ])
    }

    /// Points `P`, `Q` with `u = A(P) + A(Q)`: roots of
    /// `x^2 - P11 x - P13` and `2 y = -P111 x - P113`.
    pub fn jacobi_inversion(&self, u: &Vector2<C64>) -> Result<DivisorPair> {
        let w = self.sigma.wp_all(u)?;
        let disc = w.p11 * w.p11 + 4.0 * w.p13;
        let scale = term_scale(&[w.p11 * w.p11, w.p13]);
        if disc.norm() < 1e-12 * scale {
            return Err(Error::BranchCollision);
        }
        let r = disc.sqrt();
        let x1 = 0.5 * (w.p11 + r);
        let x2 = 0.5 * (w.p11 - r);
        let y = |x: C64| -0.5 * (w.p111 * x + w.p113);
        Ok(DivisorPair {
            p: AffinePoint::new(x1, y(x1)),
            q: AffinePoint::new(x2, y(x2)),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::c64;
    use crate::fixtures::test_curves;
    use crate::numerics::Tolerance;

    fn ctx(k: usize) -> ReductionContext {
        ReductionContext::new(&test_curves()[k].curve, &Tolerance::default()).unwrap()
    }

    fn rel(a: C64, b: C64) -> f64 {
        (a - b).norm() / a.norm().max(b.norm()).max(1.0)
    }

    #[test]
    fn f_formula_matches_direct() {
        for k in 0..5 {
            let c = ctx(k);
            let u = Vector2::new(c64(0.21, -0.13), c64(0.04, 0.09));
            for i in 1..=2 {
                let d = c.f_direct(i, &u).unwrap();
                let f = c.f_formula(i, &u).unwrap();
                assert!(rel(d, f) < 1e-10, "{} f{}: {:e}", test_curves()[k].name, i, rel(d, f));
            }
        }
    }

    #[test]
    fn f1_on_k1_line_is_wp_at_2v() {
        let c = ctx(2);
        let v = c64(0.23, 0.11);
        let u = c.k[0] * v;
        assert!(rel(c.f_direct(1, &u).unwrap(), c.sigma_e[0].wp(2.0 * v).unwrap()) < 1e-10);
    }

    #[test]
    fn restrictions() {
        for k in 0..5 {
            let c = ctx(k);
            let v = c64(0.27, 0.14);
            for i in 1..=2u8 {
                let u = c.k[(i - 1) as usize] * v;
                let w = c.sigma.wp_all(&u).unwrap();
                let worst = WpIndex::ALL
                    .iter()
                    .map(|&j| rel(w.get(j), c.restrict_wp(i, j, v).unwrap()))
                    .fold(0.0, f64::max);
                assert!(worst < 1e-10, "{} i={}: {:e}", test_curves()[k].name, i, worst);
            }
        }
    }

    #[test]
    fn kv_and_addition() {
        for k in 0..5 {
            let c = ctx(k);
            let (v1, v2) = (c64(0.19, 0.07), c64(-0.12, 0.16));
            let u = c.k_times(v1, v2);
            let w = c.sigma.wp_all(&u).unwrap();
            let add = c.addition(&(c.k[0] * v1), &(c.k[1] * v2)).unwrap();
            let mut worst: f64 = 0.0;
            let mut worst_add: f64 = 0.0;
            for (n, j) in [WpIndex::P11, WpIndex::P13, WpIndex::P33].into_iter().enumerate() {
                worst = worst.max(rel(w.get(j), c.wp_on_kv(j, v1, v2).unwrap()));
                worst_add = worst_add.max(rel(w.get(j), add[n]));
            }
            assert!(
                worst < 1e-10 && worst_add < 1e-10,
                "{}: {:e} {:e}",
                test_curves()[k].name,
                worst,
                worst_add
            );
        }
    }

    #[test]
    fn f_formula_denominator_on_k2_line() {
        let c = ctx(0);
        let u = c.k[1] * c64(0.3, 0.2);
        assert!(matches!(c.f_formula(1, &u), Err(Error::DenominatorVanishes(_))));
    }

    #[test]
    fn kv_parity() {
        let c = ctx(2);
        let (v1, v2) = (c64(0.19, 0.07), c64(-0.12, 0.16));
        for j in [WpIndex::P11, WpIndex::P13, WpIndex::P33] {
            assert!(rel(c.wp_on_kv(j, v1, v2).unwrap(), c.wp_on_kv(j, -v1, -v2).unwrap()) < 1e-12);
        }
    }

    #[test]
    fn q_antisymmetry() {
        let c = ctx(0);
        let u = Vector2::new(c64(0.21, -0.13), c64(0.04, 0.09));
        let v = Vector2::new(c64(-0.1, 0.2), c64(0.03, -0.05));
        let a = c.q_functions(&u, &v).unwrap();
        let b = c.q_functions(&v, &u).unwrap();
        assert!(rel(a.q, -b.q) < 1e-12);
        assert!(c.q_functions(&u, &u).unwrap().q.norm() < 1e-12);
    }

    #[test]
    fn inversion_points_lie_on_curve() {
        let c = ctx(2);
        let u = Vector2::new(c64(0.21, -0.13), c64(0.04, 0.09));
        let d = c.jacobi_inversion(&u).unwrap();
        assert!(c.curve.residual(&d.p) < 1e-8 && c.curve.residual(&d.q) < 1e-8);
    }
}
