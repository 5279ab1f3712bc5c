use std::collections::HashMap;
use std::f64::consts::PI;
use std::sync::{Arc, Mutex, OnceLock};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::C64;

/// Convergence control shared by the iterative kernels.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerance {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_refinements: u32,
}

impl Default for Tolerance {
    fn default() -> Self {
        Tolerance {
            abs_tol: 1e-14,
            rel_tol: 1e-13,
            max_refinements: 16,
        }
    }
}

impl Tolerance {
    pub fn new(abs_tol: f64, rel_tol: f64, max_refinements: u32) -> Result<Self> {
        let t = Tolerance {
            abs_tol,
            rel_tol,
            max_refinements,
        };
        t.validate()?;
        Ok(t)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.abs_tol >= 0.0 && self.rel_tol >= 0.0) || (self.abs_tol == 0.0 && self.rel_tol == 0.0) {
            return Err(Error::InvalidParameters(
                "tolerance needs a positive abs_tol or rel_tol".into(),
            ));
        }
        if self.max_refinements == 0 {
            return Err(Error::InvalidParameters("max_refinements must be positive".into()));
        }
        Ok(())
    }

    fn accepts(&self, diff: f64, size: f64) -> bool {
        diff <= self.abs_tol.max(self.rel_tol * size)
    }
}

/// Straight segment from `a` to `b`; flags mark inverse square root
/// singularities at either end.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PathSegment {
    pub a: C64,
    pub b: C64,
    pub singular_start: bool,
    pub singular_end: bool,
}

impl PathSegment {
    pub fn new(a: C64, b: C64, singular_start: bool, singular_end: bool) -> Result<Self> {
        if a == b {
            return Err(Error::InvalidParameters("segment endpoints coincide".into()));
        }
        Ok(PathSegment {
            a,
            b,
            singular_start,
            singular_end,
        })
    }

    pub fn reversed(&self) -> Self {
        PathSegment {
            a: self.b,
            b: self.a,
            singular_start: self.singular_end,
            singular_end: self.singular_start,
        }
    }
}

/// Sample handed to segment integrands. `from_start = z - a` and
/// `to_end = b - z` are computed without cancellation near the endpoints.
#[derive(Debug, Clone, Copy)]
pub struct SegmentPoint {
    pub z: C64,
    pub from_start: C64,
    pub to_end: C64,
}

/// Node on [0, 1] with its complement `tc = 1 - t` kept exact.
#[derive(Debug, Clone, Copy)]
pub struct UnitNode {
    pub t: f64,
    pub tc: f64,
    pub w: f64,
}

struct Rule {
    x: Vec<f64>,
    w: Vec<f64>,
}

fn compute_rule(n: usize) -> Rule {
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        let mut r = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, r);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * r * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            dp = n as f64 * (r * p1 - p0) / (r * r - 1.0);
            let dr = p1 / dp;
            r -= dr;
            if dr.abs() < 1e-16 {
                break;
            }
        }
        let wi = 2.0 / ((1.0 - r * r) * dp * dp);
        x[i] = -r;
        x[n - 1 - i] = r;
        w[i] = wi;
        w[n - 1 - i] = wi;
    }
    Rule { x, w }
}

fn rule(n: usize) -> Arc<Rule> {
    static CACHE: OnceLock<Mutex<HashMap<usize, Arc<Rule>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(r) = cache.lock().unwrap().get(&n) {
        return r.clone();
    }
    let r = Arc::new(compute_rule(n));
    cache.lock().unwrap().insert(n, r.clone());
    r
}

/// Gauss-Legendre nodes and weights on [-1, 1].
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let r = rule(n);
    (r.x.clone(), r.w.clone())
}

const BASE_NODES: usize = 8;
const MAX_SINGLE_RULE_LEVEL: u32 = 9;

fn unit_nodes(level: u32) -> Vec<UnitNode> {
    let single = level.min(MAX_SINGLE_RULE_LEVEL);
    let n = BASE_NODES << single;
    let panels = 1usize << (level - single);
    let r = rule(n);
    let h = 1.0 / panels as f64;
    let mut out = Vec::with_capacity(n * panels);
    for p in 0..panels {
        let lo = p as f64 * h;
        let hi_c = 1.0 - (p + 1) as f64 * h;
        for (x, w) in r.x.iter().zip(&r.w) {
            let t = lo + 0.5 * h * (1.0 + x);
            let tc = hi_c + 0.5 * h * (1.0 - x);
            out.push(UnitNode { t, tc, w: 0.5 * h * w });
        }
    }
    out
}

/// Integrates a vector-valued function over [0, 1], doubling the node count
/// until two successive estimates agree.
pub fn integrate_unit<const N: usize, F>(f: F, tol: &Tolerance) -> Result<[C64; N]>
where
    F: Fn(&UnitNode) -> Result<[C64; N]>,
{
    let mut prev: Option<[C64; N]> = None;
    for level in 0..=tol.max_refinements {
        let mut acc = [C64::new(0.0, 0.0); N];
        for node in unit_nodes(level) {
            let v = f(&node)?;
            for k in 0..N {
                acc[k] += v[k] * node.w;
            }
        }
        if let Some(p) = prev {
            let diff = (0..N).map(|k| (acc[k] - p[k]).norm()).fold(0.0, f64::max);
            let size = (0..N).map(|k| acc[k].norm()).fold(0.0, f64::max);
            if tol.accepts(diff, size) {
                return Ok(acc);
            }
        }
        prev = Some(acc);
    }
    Err(Error::NonConvergence(format!(
        "quadrature did not settle after {} refinements",
        tol.max_refinements
    )))
}

fn check_finite<const N: usize>(v: [C64; N], z: C64) -> Result<[C64; N]> {
    if v.iter().all(|c| c.re.is_finite() && c.im.is_finite()) {
        Ok(v)
    } else {
        Err(Error::SingularSample(format!("{z}")))
    }
}

/// Integrates along a segment, handing the integrand accurate endpoint
/// offsets. Flagged ends are smoothed by trigonometric substitutions.
pub fn integrate_segment_with<const N: usize, F>(f: F, seg: &PathSegment, tol: &Tolerance) -> Result<[C64; N]>
where
    F: Fn(&SegmentPoint) -> [C64; N],
{
    let d = seg.b - seg.a;
    let half_pi = 0.5 * PI;
    integrate_unit(
        |node| {
            let (ds, de, jac) = match (seg.singular_start, seg.singular_end) {
                (false, false) => (node.t, node.tc, 1.0),
                (true, true) => {
                    let s = (half_pi * node.t).sin();
                    let c = (half_pi * node.tc).sin();
                    (s * s, c * c, PI * s * c)
                }
                (true, false) => {
                    let h = (0.5 * half_pi * node.t).sin();
                    (
                        2.0 * h * h,
                        (half_pi * node.tc).sin(),
                        half_pi * (half_pi * node.t).sin(),
                    )
                }
                (false, true) => {
                    let h = (0.5 * half_pi * node.tc).sin();
                    (
                        (half_pi * node.t).sin(),
                        2.0 * h * h,
                        half_pi * (half_pi * node.tc).sin(),
                    )
                }
            };
            let from_start = d * ds;
            let to_end = d * de;
            let z = if ds <= de { seg.a + from_start } else { seg.b - to_end };
            let v = f(&SegmentPoint { z, from_start, to_end });
            let v = check_finite(v, z)?;
            let scale = d * jac;
            let mut out = v;
            for x in out.iter_mut() {
                *x *= scale;
            }
            Ok(out)
        },
        tol,
    )
}

/// Scalar convenience wrapper around [`integrate_segment_with`].
pub fn integrate_segment<F>(f: F, seg: &PathSegment, tol: &Tolerance) -> Result<C64>
where
    F: Fn(C64) -> C64,
{
    integrate_segment_with(|p| [f(p.z)], seg, tol).map(|v| v[0])
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> C64 {
        C64::new(re, 0.0)
    }

    #[test]
    fn rule_integrates_polynomials() {
        let (x, w) = gauss_legendre(10);
        let s: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(18)).sum();
        assert!((s - 2.0 / 19.0).abs() < 1e-14);
        assert!((w.iter().sum::<f64>() - 2.0).abs() < 1e-14);
    }

    #[test]
    fn constant_integrand() {
        let seg = PathSegment::new(c(0.0), c(1.0), false, false).unwrap();
        let v = integrate_segment(|_| c(1.0), &seg, &Tolerance::default()).unwrap();
        assert!((v - 1.0).norm() < 1e-12);
    }

    #[test]
    fn left_inverse_sqrt() {
        let seg = PathSegment::new(c(0.0), c(1.0), true, false).unwrap();
        let v = integrate_segment(|z| 1.0 / z.sqrt(), &seg, &Tolerance::default()).unwrap();
        assert!((v - 2.0).norm() < 1e-12);
    }

    #[test]
    fn arcsine_density_gives_pi() {
        let seg = PathSegment::new(c(0.0), c(1.0), true, true).unwrap();
        let v = integrate_segment_with(
            |p| [1.0 / (p.from_start * p.to_end).sqrt()],
            &seg,
            &Tolerance::default(),
        )
        .unwrap()[0];
        assert!((v - PI).norm() < 1e-12);
    }

    #[test]
    fn right_singular_complex_segment() {
        let a = C64::new(0.3, -1.0);
        let b = C64::new(2.0, 0.5);
        let seg = PathSegment::new(a, b, false, true).unwrap();
        // oracle: antiderivative -2 sqrt(b - z)
        let v = integrate_segment_with(|p| [1.0 / p.to_end.sqrt()], &seg, &Tolerance::default()).unwrap()[0];
        let exact = 2.0 * (b - a).sqrt();
        assert!((v - exact).norm() < 1e-12, "{v} {exact}");
    }

    #[test]
    fn non_finite_sample_is_reported() {
        let seg = PathSegment::new(c(0.0), c(1.0), false, false).unwrap();
        let r = integrate_segment(|_| C64::new(f64::NAN, 0.0), &seg, &Tolerance::default());
        assert!(matches!(r, Err(Error::SingularSample(_))));
    }

    #[test]
    fn unresolvable_integrand_hits_refinement_cap() {
        let seg = PathSegment::new(c(0.0), c(1.0), false, false).unwrap();
        let tol = Tolerance {
            abs_tol: 1e-15,
            rel_tol: 0.0,
            max_refinements: 3,
        };
        let r = integrate_segment(|z| 1.0 / z.sqrt(), &seg, &tol);
        assert!(matches!(r, Err(Error::NonConvergence(_))));
    }

    #[test]
    fn equal_endpoints_rejected() {
        assert!(PathSegment::new(c(1.0), c(1.0), false, false).is_err());
    }
}
