//! Theta series with half-integer characteristics and their partial
//! derivatives up to order three.
//!
//! Terms `m` and `-m` of the lattice sum are combined into a single sine
//! or cosine, which keeps odd thetas accurate near the origin. Values are
//! returned scaled by `exp(-log_scale)` to stay in range.

use std::f64::consts::PI;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::numerics::sym2_min_eigen;
use crate::periods::CMat2;
use crate::C64;

const TAIL_MARGIN: f64 = 12.0;
const MAX_RADIUS: f64 = 400.0;

/// Genus-2 characteristic `[d'; d'']`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CharacteristicG2 {
    pub delta_prime: [f64; 2],
    pub delta_dprime: [f64; 2],
}

impl CharacteristicG2 {
    /// `d' = (1/2, 1/2)`, `d'' = (1, 1/2)`.
    pub const fn reference() -> Self {
        CharacteristicG2 {
            delta_prime: [0.5, 0.5],
            delta_dprime: [1.0, 0.5],
        }
    }

    /// The six odd characteristics with entries in `{0, 1/2}`.
    pub fn odd() -> Vec<Self> {
        let mut out = Vec::new();
        for bits in 0..16u32 {
            let e: [f64; 4] = std::array::from_fn(|k| if bits >> k & 1 == 1 { 0.5 } else { 0.0 });
            let ch = CharacteristicG2 {
                delta_prime: [e[0], e[1]],
                delta_dprime: [e[2], e[3]],
            };
            if ch.is_odd() {
                out.push(ch);
            }
        }
        out
    }

    pub fn is_odd(&self) -> bool {
        let p = 4.0 * (self.delta_prime[0] * self.delta_dprime[0] + self.delta_prime[1] * self.delta_dprime[1]);
        (p.round() as i64).rem_euclid(2) == 1
    }

    /// Equal modulo integers.
    pub fn same_class(&self, other: &Self) -> bool {
        let d = |a: f64, b: f64| ((a - b) - (a - b).round()).abs() < 1e-12;
        (0..2).all(|k| d(self.delta_prime[k], other.delta_prime[k]) && d(self.delta_dprime[k], other.delta_dprime[k]))
    }

    fn check(&self) -> Result<()> {
        let half_int = |x: f64| ((2.0 * x) - (2.0 * x).round()).abs() < 1e-12;
        if self.delta_prime.iter().chain(&self.delta_dprime).all(|&x| half_int(x)) {
            Ok(())
        } else {
            Err(Error::InvalidParameters("characteristics must be half-integers".into()))
        }
    }
}

/// Scaled value and partials of a genus-2 theta function:
/// true value = `exp(log_scale) * v`.
#[derive(Debug, Clone, Copy)]
pub struct ThetaJet2 {
    pub log_scale: f64,
    pub v: C64,
    pub d1: [C64; 2],
    pub d2: [[C64; 2]; 2],
    pub d3: [[[C64; 2]; 2]; 2],
    /// Sum of term magnitudes on the same scale; `|v| / abs_sum` measures
    /// cancellation.
    pub abs_sum: f64,
}

impl ThetaJet2 {
    pub fn cancellation(&self) -> f64 {
        if self.abs_sum > 0.0 {
            self.v.norm() / self.abs_sum
        } else {
            0.0
        }
    }

    /// Hessian of `log theta`.
    pub fn log_hessian(&self) -> [[C64; 2]; 2] {
        let v = self.v;
        std::array::from_fn(|a| std::array::from_fn(|b| self.d2[a][b] / v - self.d1[a] * self.d1[b] / (v * v)))
    }

    /// Third derivatives of `log theta`.
    pub fn log_third(&self) -> [[[C64; 2]; 2]; 2] {
        let v = self.v;
        let (g, h, t) = (&self.d1, &self.d2, &self.d3);
        std::array::from_fn(|a| {
            std::array::from_fn(|b| {
                std::array::from_fn(|c| {
                    t[a][b][c] / v - (h[a][b] * g[c] + h[a][c] * g[b] + h[b][c] * g[a]) / (v * v)
                        + 2.0 * g[a] * g[b] * g[c] / (v * v * v)
                })
            })
        })
    }
}

fn radius(lambda_min: f64, im_norm: f64, floor: f64, tol: f64) -> Result<f64> {
    // largest r with -pi l r^2 + 2 pi s r >= floor + ln(tol) - margin
    let c = floor + tol.ln() - TAIL_MARGIN;
    let a = PI * lambda_min;
    let b = 2.0 * PI * im_norm;
    let disc = b * b - 4.0 * a * c;
    let r = (b + disc.max(0.0).sqrt()) / (2.0 * a);
    if !r.is_finite() || r > MAX_RADIUS {
        return Err(Error::NonConvergence(format!(
            "theta truncation radius {r} exceeds cap"
        )));
    }
    Ok(r)
}

/// Genus-2 theta with characteristic and partials up to `order` (0..=3).
pub fn theta_g2(ch: &CharacteristicG2, z: [C64; 2], tau: &CMat2, order: u8, tol: f64) -> Result<ThetaJet2> {
    ch.check()?;
    let y = [[tau[(0, 0)].im, tau[(0, 1)].im], [tau[(1, 0)].im, tau[(1, 1)].im]];
    let lam = sym2_min_eigen(y[0][0], 0.5 * (y[0][1] + y[1][0]), y[1][1]);
    if lam <= 0.0 {
        return Err(Error::InvalidParameters("Im tau is not positive definite".into()));
    }
    let iz = [z[0].im, z[1].im];
    let s = (iz[0] * iz[0] + iz[1] * iz[1]).sqrt();
    let log_mag = |m: [f64; 2]| {
        let q = m[0] * (y[0][0] * m[0] + y[0][1] * m[1]) + m[1] * (y[1][0] * m[0] + y[1][1] * m[1]);
        -PI * q + 2.0 * PI * (m[0] * iz[0] + m[1] * iz[1]).abs()
    };
    let floor = log_mag(ch.delta_prime);
    let r = radius(lam, s, floor, tol)?;
    let nmax = r.ceil() as i64 + 1;
    let dp = ch.delta_prime;
    let mut terms: Vec<([f64; 2], f64)> = Vec::new();
    let mut has_zero = false;
    for n0 in -nmax..=nmax {
        for n1 in -nmax..=nmax {
            let m = [n0 as f64 + dp[0], n1 as f64 + dp[1]];
            let zero = m[0] == 0.0 && m[1] == 0.0;
            let upper = m[0] > 0.0 || (m[0] == 0.0 && m[1] > 0.0);
            if zero {
                has_zero = true;
                continue;
            }
            if !upper {
                continue;
            }
            let l = log_mag(m);
            if l >= floor + tol.ln() - TAIL_MARGIN - 2.0 * PI * s {
                terms.push((m, l));
            }
        }
    }
    let mut shift = if has_zero { 0.0 } else { f64::NEG_INFINITY };
    for &(_, l) in &terms {
        shift = shift.max(l);
    }
    let ddp = ch.delta_dprime;
    let mut jet = ThetaJet2 {
        log_scale: shift,
        v: C64::new(0.0, 0.0),
        d1: [C64::new(0.0, 0.0); 2],
        d2: [[C64::new(0.0, 0.0); 2]; 2],
        d3: [[[C64::new(0.0, 0.0); 2]; 2]; 2],
        abs_sum: 0.0,
    };
    if has_zero {
        jet.v = (-shift).exp().into();
        jet.abs_sum = (-shift).exp();
    }
    let i = C64::new(0.0, 1.0);
    let tpi = 2.0 * PI;
    for (m, _) in terms {
        let quad = m[0] * (tau[(0, 0)] * m[0] + tau[(0, 1)] * m[1]) + m[1] * (tau[(1, 0)] * m[0] + tau[(1, 1)] * m[1]);
        let phase = m[0] * ddp[0] + m[1] * ddp[1];
        // s = exp(-4 pi i m.d'') is +-1 for half-integer data
        let flip = (4.0 * phase).round() as i64;
        let sign_even = flip.rem_euclid(2) == 0;
        let c = (PI * i * quad + tpi * i * phase - shift).exp();
        let theta = tpi * (m[0] * z[0] + m[1] * z[1]);
        let (cos2, isin2) = (2.0 * theta.cos(), 2.0 * i * theta.sin());
        // e+ = e^{i th} + s e^{-i th}, e- = e^{i th} - s e^{-i th}
        let (ep, em) = if sign_even { (cos2, isin2) } else { (isin2, cos2) };
        jet.v += c * ep;
        jet.abs_sum += c.norm() * (theta.im.abs().exp()) * 2.0;
        if order >= 1 {
            let k = [tpi * i * m[0], tpi * i * m[1]];
            for a in 0..2 {
                jet.d1[a] += c * k[a] * em;
                if order >= 2 {
                    for b in 0..2 {
                        jet.d2[a][b] += c * k[a] * k[b] * ep;
                        if order >= 3 {
                            for cc in 0..2 {
                                jet.d3[a][b][cc] += c * k[a] * k[b] * k[cc] * em;
                            }
                        }
                    }
                }
            }
        }
    }
    Ok(jet)
}

/// Scaled value and derivatives in `z` of a genus-1 theta function.
#[derive(Debug, Clone, Copy)]
pub struct ThetaJet1 {
    pub log_scale: f64,
    pub d: [C64; 4],
    pub abs_sum: f64,
}

impl ThetaJet1 {
    pub fn value(&self) -> C64 {
        self.d[0] * self.log_scale.exp()
    }

    pub fn cancellation(&self) -> f64 {
        if self.abs_sum > 0.0 {
            self.d[0].norm() / self.abs_sum
        } else {
            0.0
        }
    }

    /// `(log theta)''` and `(log theta)'''`.
    pub fn log_derivatives(&self) -> (C64, C64) {
        let [v, g, h, t] = self.d;
        (
            h / v - g * g / (v * v),
            t / v - 3.0 * h * g / (v * v) + 2.0 * g * g * g / (v * v * v),
        )
    }
}

/// `theta[e1; e2](z, tau)` with derivatives up to order three.
pub fn theta_g1_jet(e1: f64, e2: f64, z: C64, tau: C64, tol: f64) -> Result<ThetaJet1> {
    let ch = CharacteristicG2 {
        delta_prime: [e1, 0.0],
        delta_dprime: [e2, 0.0],
    };
    ch.check()?;
    if tau.im <= 0.0 {
        return Err(Error::InvalidParameters("Im tau must be positive".into()));
    }
    let log_mag = |m: f64| -PI * m * m * tau.im + 2.0 * PI * (m * z.im).abs();
    let floor = log_mag(e1);
    let r = radius(tau.im, z.im.abs(), floor, tol)?;
    let nmax = r.ceil() as i64 + 1;
    let mut ms = Vec::new();
    let mut has_zero = false;
    for n in -nmax..=nmax {
        let m = n as f64 + e1;
        if m == 0.0 {
            has_zero = true;
        } else if m > 0.0 {
            ms.push((m, log_mag(m)));
        }
    }
    let mut shift = if has_zero { 0.0 } else { f64::NEG_INFINITY };
    for &(_, l) in &ms {
        shift = shift.max(l);
    }
    let mut d = [C64::new(0.0, 0.0); 4];
    let mut abs_sum = 0.0;
    if has_zero {
        d[0] = (-shift).exp().into();
        abs_sum = (-shift).exp();
    }
    let i = C64::new(0.0, 1.0);
    let tpi = 2.0 * PI;
    for (m, _) in ms {
        let flip = (4.0 * m * e2).round() as i64;
        let sign_even = flip.rem_euclid(2) == 0;
        let c = (PI * i * m * m * tau + tpi * i * m * e2 - shift).exp();
        let th = tpi * m * z;
        let (cos2, isin2) = (2.0 * th.cos(), 2.0 * i * th.sin());
        let (ep, em) = if sign_even { (cos2, isin2) } else { (isin2, cos2) };
        let k = tpi * i * m;
        d[0] += c * ep;
        d[1] += c * k * em;
        d[2] += c * k * k * ep;
        d[3] += c * k * k * k * em;
        abs_sum += 2.0 * c.norm() * th.im.abs().exp();
    }
    Ok(ThetaJet1 {
        log_scale: shift,
        d,
        abs_sum,
    })
}

/// `theta[e1; e2](z, tau)`.
pub fn theta_g1(e1: f64, e2: f64, z: C64, tau: C64, tol: f64) -> Result<C64> {
    theta_g1_jet(e1, e2, z, tau, tol).map(|j| j.value())
}
