//! Integrals of `p(x) dx / y` on odd-degree models `y^2 = prod (x - e_j)`.

use crate::error::{Error, Result};
use crate::numerics::{integrate_segment_with, integrate_unit, sqrt_near, PathSegment, Tolerance};
use crate::C64;

/// Monic odd-degree model given by its roots.
#[derive(Debug, Clone)]
pub struct OddModel {
    pub roots: Vec<C64>,
}

/// Branch point ordering used to build the segment chain.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum BranchOrdering {
    /// Lexicographic in (Re, Im).
    #[default]
    RealThenImag,
    /// Lexicographic in (Im, Re).
    ImagThenReal,
}

impl OddModel {
    pub fn new(mut roots: Vec<C64>, ordering: BranchOrdering) -> Result<Self> {
        let key = |z: &C64| match ordering {
            BranchOrdering::RealThenImag => (z.re, z.im),
            BranchOrdering::ImagThenReal => (z.im, z.re),
        };
        roots.sort_by(|a, b| key(a).partial_cmp(&key(b)).unwrap_or(std::cmp::Ordering::Equal));
        let mut closest = f64::INFINITY;
        for i in 0..roots.len() {
            for j in i + 1..roots.len() {
                closest = closest.min((roots[i] - roots[j]).norm());
            }
        }
        if closest < 1e-8 {
            return Err(Error::NearDegenerateBranchPoints(closest));
        }
        Ok(OddModel { roots })
    }

    /// Integral of `f(x)/y dx` over the segment from root `k` to root `k+1`,
    /// with `y` continued along the segment from a fixed sheet.
    pub fn segment_integrals<const N: usize, F>(&self, k: usize, f: F, tol: &Tolerance) -> Result<[C64; N]>
    where
        F: Fn(C64) -> [C64; N] + Sync,
    {
        let (a, b) = (self.roots[k], self.roots[k + 1]);
        let d = b - a;
        let mid = 0.5 * (a + b);
        let others: Vec<(C64, C64)> = self
            .roots
            .iter()
            .enumerate()
            .filter(|(j, _)| *j != k && *j != k + 1)
            .map(|(_, &e)| (e, mid - e))
            .collect();
        let seg = PathSegment::new(a, b, true, true)?;
        let i = C64::new(0.0, 1.0);
        integrate_segment_with(
            |p| {
                let mut y = i * sqrt_near(p.from_start, d) * sqrt_near(p.to_end, d);
                for &(e, r) in &others {
                    y *= sqrt_near(p.z - e, r);
                }
                let mut v = f(p.z);
                for x in v.iter_mut() {
                    *x /= y;
                }
                v
            },
            &seg,
            tol,
        )
    }

    /// Direction of a ray from `x0` staying far from the other roots.
    fn ray_direction(&self, x0: C64) -> C64 {
        let mut best = (f64::NEG_INFINITY, C64::new(1.0, 0.0));
        for k in 0..64 {
            let d = C64::from_polar(1.0, 2.0 * std::f64::consts::PI * (k as f64 + 0.5) / 64.0);
            let mut m = f64::INFINITY;
            for &e in &self.roots {
                let w = e - x0;
                if w.norm() < 1e-12 * (1.0 + e.norm()) {
                    continue;
                }
                let along = (w * d.conj()).re;
                let dist = if along <= 0.0 {
                    w.norm()
                } else {
                    (w * d.conj()).im.abs()
                };
                m = m.min(dist);
            }
            if m > best.0 {
                best = (m, d);
            }
        }
        best.1
    }

    /// `y` continued along the ray `x0 + s d`, `s >= 0`, normalized so that
    /// its value at `x0` has the sign of `y0`.
    fn ray_sheet(&self, x0: C64, y0: C64, d: C64) -> (Vec<(C64, C64)>, f64) {
        let refs: Vec<(C64, C64)> = self
            .roots
            .iter()
            .map(|&e| {
                let w = x0 - e;
                let r = if w.norm() < 1e-12 * (1.0 + e.norm()) {
                    d
                } else {
                    w / w.norm() + d
                };
                (e, r)
            })
            .collect();
        let y_ray: C64 = refs.iter().map(|&(e, r)| sqrt_near(x0 - e, r)).product();
        let sign = if y0.norm() <= 1e-12 * (1.0 + y_ray.norm()) || (y_ray - y0).norm() <= (y_ray + y0).norm() {
            1.0
        } else {
            -1.0
        };
        (refs, sign)
    }

    /// `int_infinity^(x0, y0) f(x)/y dx` along a straight ray.
    pub fn ray_integrals<const N: usize, F>(&self, x0: C64, y0: C64, f: F, tol: &Tolerance) -> Result<[C64; N]>
    where
        F: Fn(C64) -> [C64; N],
    {
        let d = self.ray_direction(x0);
        let (refs, sign) = self.ray_sheet(x0, y0, d);
        integrate_unit(
            |node| {
                let q = node.tc / node.t;
                let s = q * q;
                let dxdr = -2.0 * d * q / (node.t * node.t);
                let x = x0 + d * s;
                let mut y = C64::new(sign, 0.0);
                for &(e, r) in &refs {
                    y *= sqrt_near((x0 - e) + d * s, r);
                }
                let mut v = f(x);
                let scale = dxdr / y;
                for z in v.iter_mut() {
                    *z *= scale;
                }
                if v.iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
                    Ok(v)
                } else if node.t < 1e-3 {
                    // far end of the ray: the integrand decays, overflow means zero
                    Ok([C64::new(0.0, 0.0); N])
                } else {
                    Err(Error::SingularSample(format!("{x}")))
                }
            },
            tol,
        )
    }
}
