//! Genus-2 sigma function
//! `sigma(u) = eps exp(u^T eta' omega'^{-1} u / 2) theta[d]((2 omega')^{-1} u, tau)`
//! and the Kleinian functions `P_jk = -d_j d_k log sigma`.

use nalgebra::Vector2;

use super::theta::{theta_g2, CharacteristicG2, ThetaJet2};
use super::{DIVISOR_THRESHOLD, THETA_TOL};
use crate::curves::CurveV;
use crate::error::{Error, Result};
use crate::numerics::Tolerance;
use crate::periods::{periods_g2, CMat2, PeriodsG2};
use crate::C64;

/// Index of `P_jk` or `P_jkl`, written with the subscripts 1 and 3.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum WpIndex {
    P11,
    P13,
    P33,
    P111,
    P113,
    P133,
    P333,
}

impl WpIndex {
    pub const ALL: [WpIndex; 7] = [
        WpIndex::P11,
        WpIndex::P13,
        WpIndex::P33,
        WpIndex::P111,
        WpIndex::P113,
        WpIndex::P133,
        WpIndex::P333,
    ];

    /// Parses `"11"`, `"133"` and permutations such as `"31"`.
    pub fn parse(s: &str) -> Option<WpIndex> {
        let mut d: Vec<char> = s.chars().collect();
        if d.iter().any(|c| *c != '1' && *c != '3') {
            return None;
        }
        d.sort();
        match d.iter().collect::<String>().as_str() {
            "11" => Some(WpIndex::P11),
            "13" => Some(WpIndex::P13),
            "33" => Some(WpIndex::P33),
            "111" => Some(WpIndex::P111),
            "113" => Some(WpIndex::P113),
            "133" => Some(WpIndex::P133),
            "333" => Some(WpIndex::P333),
            _ => None,
        }
    }

    pub fn label(&self) -> &'static str {
        match self {
            WpIndex::P11 => "11",
            WpIndex::P13 => "13",
            WpIndex::P33 => "33",
            WpIndex::P111 => "111",
            WpIndex::P113 => "113",
            WpIndex::P133 => "133",
            WpIndex::P333 => "333",
        }
    }

    /// Subscripts as positions in `(u1, u3)`.
    fn slots(&self) -> &'static [usize] {
        match self {
            WpIndex::P11 => &[0, 0],
            WpIndex::P13 => &[0, 1],
            WpIndex::P33 => &[1, 1],
            WpIndex::P111 => &[0, 0, 0],
            WpIndex::P113 => &[0, 0, 1],
            WpIndex::P133 => &[0, 1, 1],
            WpIndex::P333 => &[1, 1, 1],
        }
    }
}

/// All Kleinian functions at one point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WpValues {
    pub p11: C64,
    pub p13: C64,
    pub p33: C64,
    pub p111: C64,
    pub p113: C64,
    pub p133: C64,
    pub p333: C64,
}

impl WpValues {
    pub fn get(&self, w: WpIndex) -> C64 {
        match w {
            WpIndex::P11 => self.p11,
            WpIndex::P13 => self.p13,
            WpIndex::P33 => self.p33,
            WpIndex::P111 => self.p111,
            WpIndex::P113 => self.p113,
            WpIndex::P133 => self.p133,
            WpIndex::P333 => self.p333,
        }
    }

    /// `P11 P33 - P13^2`.
    pub fn det(&self) -> C64 {
        self.p11 * self.p33 - self.p13 * self.p13
    }
}

#[derive(Debug, Clone)]
pub struct SigmaG2Evaluator {
    pub curve: CurveV,
    pub periods: PeriodsG2,
    pub delta: CharacteristicG2,
    pub epsilon: C64,
    /// `(2 omega')^{-1}`
    pub a: CMat2,
    /// symmetric part of `eta' omega'^{-1}`
    pub q: CMat2,
    pub tol: f64,
}

fn gradient_u(jet: &ThetaJet2, a: &CMat2) -> [C64; 2] {
    std::array::from_fn(|k| (0..2).map(|i| jet.d1[i] * a[(i, k)]).sum::<C64>() * jet.log_scale.exp())
}

impl SigmaG2Evaluator {
    pub fn new(curve: &CurveV, tol: &Tolerance) -> Result<Self> {
        let periods = periods_g2(curve, tol)?;
        Self::from_periods(curve, periods)
    }

    /// Builds the evaluator on given periods: detects the odd
    /// characteristic whose theta has no linear `u1` term at the origin and
    /// fixes `eps` so that `sigma(u) = -u3 + O(|u|^3)`.
    pub fn from_periods(curve: &CurveV, periods: PeriodsG2) -> Result<Self> {
        let a = (periods.omega_a * C64::new(2.0, 0.0))
            .try_inverse()
            .ok_or(Error::DegenerateLattice)?;
        let oinv = periods.omega_a.try_inverse().ok_or(Error::DegenerateLattice)?;
        let q0 = periods.eta_a * oinv;
        let q = (q0 + q0.transpose()) * C64::new(0.5, 0.0);
        let zero = [C64::new(0.0, 0.0); 2];
        let mut best: Option<(f64, CharacteristicG2, [C64; 2])> = None;
        for ch in CharacteristicG2::odd() {
            let g = gradient_u(&theta_g2(&ch, zero, &periods.tau, 1, THETA_TOL)?, &a);
            let ratio = g[0].norm() / g[1].norm();
            if best.as_ref().is_none_or(|(r, _, _)| ratio < *r) {
                best = Some((ratio, ch, g));
            }
        }
        let (ratio, mut delta, mut g) =
            best.ok_or_else(|| Error::CalibrationFailure("no odd characteristic".into()))?;
        if !(ratio < 1e-6) {
            return Err(Error::CalibrationFailure(format!(
                "no odd theta is free of a linear u1 term (best ratio {ratio:e})"
            )));
        }
        let reference = CharacteristicG2::reference();
        if delta.same_class(&reference) {
            delta = reference;
            g = gradient_u(&theta_g2(&delta, zero, &periods.tau, 1, THETA_TOL)?, &a);
        }
        let epsilon = -1.0 / g[1];
        Ok(SigmaG2Evaluator {
            curve: *curve,
            periods,
            delta,
            epsilon,
            a,
            q,
            tol: THETA_TOL,
        })
    }

    fn z_of(&self, u: &Vector2<C64>) -> [C64; 2] {
        let z = self.a * u;
        [z[0], z[1]]
    }

    /// Complex logarithm of `sigma(u)` (imaginary part not normalized).
    pub fn log_sigma(&self, u: &Vector2<C64>) -> Result<C64> {
        let jet = theta_g2(&self.delta, self.z_of(u), &self.periods.tau, 0, self.tol)?;
        if jet.v.norm() == 0.0 {
            return Err(Error::OnThetaDivisor(0.0));
        }
        let quad = (u.transpose() * self.q * u)[(0, 0)];
        Ok(self.epsilon.ln() + 0.5 * quad + jet.log_scale + jet.v.ln())
    }

    pub fn sigma(&self, u: &Vector2<C64>) -> Result<C64> {
        let jet = theta_g2(&self.delta, self.z_of(u), &self.periods.tau, 0, self.tol)?;
        let quad = (u.transpose() * self.q * u)[(0, 0)];
        Ok(self.epsilon * (0.5 * quad + jet.log_scale).exp() * jet.v)
    }

    /// Reduces `z = (2 omega')^{-1} u` into the fundamental cell.
    fn reduced_jet(&self, u: &Vector2<C64>, order: u8) -> Result<ThetaJet2> {
        let tau = &self.periods.tau;
        let mut z = self.z_of(u);
        let (y00, y01, y11) = (tau[(0, 0)].im, 0.5 * (tau[(0, 1)].im + tau[(1, 0)].im), tau[(1, 1)].im);
        let det = y00 * y11 - y01 * y01;
        let k0 = ((y11 * z[0].im - y01 * z[1].im) / det).round();
        let k1 = ((-y01 * z[0].im + y00 * z[1].im) / det).round();
        for r in 0..2 {
            z[r] -= tau[(r, 0)] * k0 + tau[(r, 1)] * k1;
            z[r] -= z[r].re.round();
        }
        let jet = theta_g2(&self.delta, z, tau, order, self.tol)?;
        let c = jet.cancellation();
        if c < DIVISOR_THRESHOLD {
            return Err(Error::OnThetaDivisor(c));
        }
        Ok(jet)
    }

    /// All `P_jk` and `P_jkl` at `u`.
    pub fn wp_all(&self, u: &Vector2<C64>) -> Result<WpValues> {
        let jet = self.reduced_jet(u, 3)?;
        let h = jet.log_hessian();
        let t = jet.log_third();
        let a = &self.a;
        let two = |j: usize, k: usize| {
            let mut s = -self.q[(j, k)];
            for x in 0..2 {
                for y in 0..2 {
                    s -= a[(x, j)] * a[(y, k)] * h[x][y];
                }
            }
            s
        };
        let three = |j: usize, k: usize, l: usize| {
            let mut s = C64::new(0.0, 0.0);
            for x in 0..2 {
                for y in 0..2 {
                    for z in 0..2 {
                        s -= a[(x, j)] * a[(y, k)] * a[(z, l)] * t[x][y][z];
                    }
                }
            }
            s
        };
        Ok(WpValues {
            p11: two(0, 0),
            p13: two(0, 1),
            p33: two(1, 1),
            p111: three(0, 0, 0),
            p113: three(0, 0, 1),
            p133: three(0, 1, 1),
            p333: three(1, 1, 1),
        })
    }

    pub fn wp(&self, which: WpIndex, u: &Vector2<C64>) -> Result<C64> {
        let _ = which.slots();
        Ok(self.wp_all(u)?.get(which))
    }

    /// Lattice vector `2 omega' m1 + 2 omega'' m2`.
    pub fn lattice_vector(&self, m1: [i64; 2], m2: [i64; 2]) -> Vector2<C64> {
        self.periods.lattice_vector(m1, m2)
    }

    /// Predicted `sigma(u + Omega) / sigma(u)` for `Omega = 2 omega' m1 + 2 omega'' m2`.
    pub fn quasi_period_factor(&self, u: &Vector2<C64>, m1: [i64; 2], m2: [i64; 2]) -> C64 {
        let p = &self.periods;
        let f = |m: [i64; 2]| Vector2::new(C64::new(m[0] as f64, 0.0), C64::new(m[1] as f64, 0.0));
        let (v1, v2) = (f(m1), f(m2));
        let d1 = self.delta.delta_prime;
        let d2 = self.delta.delta_dprime;
        let e = 2.0 * (d1[0] * m1[0] as f64 + d1[1] * m1[1] as f64 - d2[0] * m2[0] as f64 - d2[1] * m2[1] as f64)
            + (m1[0] * m2[0] + m1[1] * m2[1]) as f64;
        let sign = if (e.round() as i64).rem_euclid(2) == 0 {
            1.0
        } else {
            -1.0
        };
        let two = C64::new(2.0, 0.0);
        let eta = (p.eta_a * v1 + p.eta_b * v2) * two;
        let shift = u + p.omega_a * v1 + p.omega_b * v2;
        let arg = (eta.transpose() * shift)[(0, 0)];
        sign * arg.exp()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::c64;
    use crate::fixtures::test_curves;

    fn ev(k: usize) -> SigmaG2Evaluator {
        SigmaG2Evaluator::new(&test_curves()[k].curve, &Tolerance::default()).unwrap()
    }

    #[test]
    fn index_parsing() {
        assert_eq!(WpIndex::parse("31"), Some(WpIndex::P13));
        assert_eq!(WpIndex::parse("313"), Some(WpIndex::P133));
        assert_eq!(WpIndex::parse("12"), None);
        for w in WpIndex::ALL {
            assert_eq!(WpIndex::parse(w.label()), Some(w));
        }
    }

    fn rel(a: C64, b: C64) -> f64 {
        (a - b).norm() / a.norm().max(b.norm()).max(1.0)
    }

    #[test]
    fn reference_characteristic_detected() {
        for k in 0..5 {
            assert_eq!(ev(k).delta, CharacteristicG2::reference(), "{}", test_curves()[k].name);
        }
    }

    #[test]
    fn sigma_is_odd() {
        let s = ev(2);
        let u = Vector2::new(c64(0.21, 0.4), c64(-0.3, 0.12));
        assert!(rel(s.sigma(&u).unwrap(), -s.sigma(&-u).unwrap()) < 1e-10);
    }

    #[test]
    fn quasi_periodicity_all_generators() {
        for k in [0, 2, 4] {
            let s = ev(k);
            let u = Vector2::new(c64(0.13, -0.27), c64(0.05, 0.11));
            let base = s.sigma(&u).unwrap();
            for bits in 0..16u32 {
                let m1 = [(bits & 1) as i64, ((bits >> 1) & 1) as i64];
                let m2 = [((bits >> 2) & 1) as i64, ((bits >> 3) & 1) as i64];
                let shifted = s.sigma(&(u + s.lattice_vector(m1, m2))).unwrap();
                let pred = s.quasi_period_factor(&u, m1, m2) * base;
                assert!(rel(shifted, pred) < 1e-7, "{} {:?} {:?}", test_curves()[k].name, m1, m2);
            }
        }
    }

    #[test]
    fn wp_parity_and_periodicity() {
        let s = ev(1);
        let u = Vector2::new(c64(0.31, -0.12), c64(0.07, 0.05));
        let w = s.wp_all(&u).unwrap();
        let m = s.wp_all(&-u).unwrap();
        let t = s.wp_all(&(u + s.lattice_vector([1, 0], [0, 1]))).unwrap();
        for i in WpIndex::ALL {
            let sign = if i.slots().len() == 3 { -1.0 } else { 1.0 };
            assert!(rel(w.get(i), sign * m.get(i)) < 1e-9, "{}", i.label());
            assert!(rel(w.get(i), t.get(i)) < 1e-8, "{}", i.label());
        }
    }

    #[test]
    fn first_fundamental_relation() {
        for k in 0..5 {
            let s = ev(k);
            let l = s.curve.lambdas();
            let u = Vector2::new(c64(0.31, -0.12), c64(0.07, 0.05));
            let w = s.wp_all(&u).unwrap();
            let terms = [
                w.p111 * w.p111,
                4.0 * w.p33,
                4.0 * l[1] * w.p11,
                4.0 * w.p11.powi(3),
                4.0 * w.p13 * w.p11,
                4.0 * l[0] * w.p11 * w.p11,
                4.0 * l[2],
            ];
            let r = terms[0] - terms[1..].iter().sum::<C64>();
            assert!(
                r.norm() / crate::numerics::term_scale(&terms) < 1e-9,
                "{}",
                test_curves()[k].name
            );
        }
    }

    #[test]
    fn independent_of_homology_basis() {
        use crate::periods::{periods_g2_with, BranchOrdering};
        for k in [0, 2, 3] {
            let c = test_curves()[k].curve;
            let s1 = ev(k);
            let p2 = periods_g2_with(&c, BranchOrdering::ImagThenReal, &Tolerance::default()).unwrap();
            let s2 = SigmaG2Evaluator::from_periods(&c, p2).unwrap();
            let u = Vector2::new(c64(0.17, 0.08), c64(-0.11, 0.2));
            assert!(
                rel(s1.sigma(&u).unwrap(), s2.sigma(&u).unwrap()) < 1e-7,
                "{}",
                test_curves()[k].name
            );
            let w1 = s1.wp_all(&u).unwrap();
            let w2 = s2.wp_all(&u).unwrap();
            for i in WpIndex::ALL {
                assert!(rel(w1.get(i), w2.get(i)) < 1e-7);
            }
        }
    }
}
