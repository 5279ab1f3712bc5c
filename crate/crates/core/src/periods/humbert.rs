use serde::Serialize;

use super::CMat2;

/// Integral relation `h1 t11 + h2 t12 + h3 t22 + h4 (t12^2 - t11 t22) + h5 = 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct HumbertRelation {
    pub h: [i64; 5],
    pub delta: i64,
}

impl HumbertRelation {
    pub fn discriminant(h: &[i64; 5]) -> i64 {
        h[1] * h[1] - 4 * (h[0] * h[2] + h[3] * h[4])
    }

    pub fn residual(&self, tau: &CMat2) -> f64 {
        let [h1, h2, h3, h4, h5] = self.h.map(|x| x as f64);
        let (t11, t12, t22) = (tau[(0, 0)], 0.5 * (tau[(0, 1)] + tau[(1, 0)]), tau[(1, 1)]);
        (h1 * t11 + h2 * t12 + h3 * t22 + h4 * (t12 * t12 - t11 * t22) + h5).norm()
    }
}

/// Exhaustive search for a discriminant-4 relation with `|h_i| <= bound`
/// and residual below `tol`. Among all hits the one with the smallest
/// height is returned, its first nonzero entry made positive.
pub fn humbert_delta4(tau: &CMat2, bound: i64, tol: f64) -> Option<HumbertRelation> {
    let (t11, t12, t22) = (tau[(0, 0)], 0.5 * (tau[(0, 1)] + tau[(1, 0)]), tau[(1, 1)]);
    let q = t12 * t12 - t11 * t22;
    if t22.im <= 0.0 {
        return None;
    }
    let mut best: Option<(i64, [i64; 5])> = None;
    for h1 in -bound..=bound {
        for h2 in -bound..=bound {
            for h4 in -bound..=bound {
                let partial = h1 as f64 * t11 + h2 as f64 * t12 + h4 as f64 * q;
                let h3 = (-partial.im / t22.im).round();
                if h3.abs() > bound as f64 {
                    continue;
                }
                let h5 = (-(partial + h3 * t22).re).round();
                if h5.abs() > bound as f64 {
                    continue;
                }
                let mut h = [h1, h2, h3 as i64, h4, h5 as i64];
                if h.iter().all(|&x| x == 0) || HumbertRelation::discriminant(&h) != 4 {
                    continue;
                }
                let rel = HumbertRelation { h, delta: 4 };
                if rel.residual(tau) >= tol {
                    continue;
                }
                if h.iter().find(|&&x| x != 0).is_some_and(|&x| x < 0) {
                    h = h.map(|x| -x);
                }
                let height = h.iter().map(|x| x.abs()).max().unwrap_or(0);
                if best.as_ref().is_none_or(|(bh, bt)| (height, h) < (*bh, *bt)) {
                    best = Some((height, h));
                }
            }
        }
    }
    best.map(|(_, h)| HumbertRelation { h, delta: 4 })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::c64;

    #[test]
    fn diagonal_tau() {
        let tau = CMat2::new(c64(0.0, 1.0), c64(0.0, 0.0), c64(0.0, 0.0), c64(0.0, 2.0));
        let r = humbert_delta4(&tau, 20, 1e-6).unwrap();
        assert_eq!(r.h, [0, 2, 0, 0, 0]);
        assert_eq!(HumbertRelation::discriminant(&r.h), 4);
    }

    #[test]
    fn generic_tau_has_no_relation() {
        let tau = CMat2::new(
            c64(0.2137, 1.318),
            c64(0.4411, 0.3079),
            c64(0.4411, 0.3079),
            c64(-0.1723, 1.5527),
        );
        assert!(humbert_delta4(&tau, 20, 1e-6).is_none());
    }
}
