use nalgebra::Vector2;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use super::{
    random_in_cell, random_jacobian_sample, relative, run_checks, suite_seed, Check, IdentityReport, JacobianSample,
    Suite, VerifyConfig,
};
use crate::curves::AffinePoint;
use crate::error::Result;
use crate::numerics::{lattice_coordinates, LATTICE_ROUNDING};
use crate::periods::{abel_inf_g2, humbert_delta4, periods_g2_with, BranchOrdering, CMat2, HumbertRelation};
use crate::reduction::ReductionContext;
use crate::theta_sigma::{SigmaG2Evaluator, WpIndex, WpValues};
use crate::C64;

type Outcome = (Vec<IdentityReport>, usize, Option<HumbertRelation>);

fn max_of(xs: impl IntoIterator<Item = f64>) -> f64 {
    xs.into_iter()
        .fold(0.0, |a, x| if x.is_nan() { f64::INFINITY } else { a.max(x) })
}

/// Distance of real lattice coordinates from the nearest integers.
fn lattice_defect(v: &[C64], cols: &[Vec<C64>]) -> Result<f64> {
    Ok(max_of(
        lattice_coordinates(v, cols)?.into_iter().map(|x| (x - x.round()).abs()),
    ))
}

fn jacobian<'a>(
    ctx: &'a ReductionContext,
    cfg: &'a VerifyConfig,
) -> impl FnMut(&mut ChaCha8Rng) -> Result<JacobianSample> + 'a {
    move |rng| random_jacobian_sample(ctx, rng, &cfg.tol)
}

pub(super) fn periods(ctx: &ReductionContext, _cfg: &VerifyConfig) -> Result<Vec<IdentityReport>> {
    let p = &ctx.sigma.periods;
    let mut out = vec![
        IdentityReport::new("tau symmetric", "tau = tau^T", 1, p.symmetry_residual(), 1e-9),
        IdentityReport::new(
            "Im tau positive definite",
            "lambda_min(Im tau) > 0",
            1,
            if p.im_tau_min_eigen() > 0.0 { 0.0 } else { 1.0 },
            0.5,
        ),
        IdentityReport::new(
            "Legendre relation (genus 2)",
            "w'^T h'' - h'^T w'' = +-(pi i / 2) I",
            1,
            p.legendre_residual(),
            1e-8,
        ),
    ];
    let names = ["Legendre relation E1", "Legendre relation E2"];
    for (i, n) in names.iter().enumerate() {
        out.push(IdentityReport::new(
            n,
            "h' w'' - h'' w' = +-pi i / 2",
            1,
            ctx.sigma_e[i].periods.legendre_residual(),
            1e-9,
        ));
    }
    let names = ["Legendre relation E~1", "Legendre relation E~2"];
    for (i, n) in names.iter().enumerate() {
        out.push(IdentityReport::new(
            n,
            "h' w'' - h'' w' = +-pi i / 2",
            1,
            ctx.sigma_tilde[i].periods.legendre_residual(),
            1e-9,
        ));
    }
    let m = max_of((0..2).map(|i| {
        let m = ctx.jacobi[i].m;
        relative(m * m, ctx.kappa[i] * ctx.kappa[i], &[])
    }));
    out.push(IdentityReport::new("Jacobi modulus", "m_i^2 = kappa_i^2", 2, m, 1e-8));
    Ok(out)
}

/// `sigma(t e3) / (-t)` and `3 sigma(t e1) / t^3`.
pub fn expansion_ratios(s: &SigmaG2Evaluator, t: f64) -> Result<(C64, C64)> {
    let z = C64::new(0.0, 0.0);
    let tt = C64::new(t, 0.0);
    let a = s.sigma(&Vector2::new(z, tt))? / (-t);
    let b = 3.0 * s.sigma(&Vector2::new(tt, z))? / (t * t * t);
    Ok((a, b))
}

/// Evaluators in two further homology bases: the other branch-point
/// ordering and a symplectic change of the default basis.
pub fn alternate_evaluators(ctx: &ReductionContext, cfg: &VerifyConfig) -> Result<Vec<SigmaG2Evaluator>> {
    let alt = periods_g2_with(&ctx.curve, BranchOrdering::ImagThenReal, &cfg.tol)?;
    let m = [[0, 1, 0, 0], [1, 0, 0, 0], [0, 1, 0, 1], [1, 0, 1, 0]];
    let changed = ctx.sigma.periods.change_basis(m)?;
    Ok(vec![
        SigmaG2Evaluator::from_periods(&ctx.curve, alt)?,
        SigmaG2Evaluator::from_periods(&ctx.curve, changed)?,
    ])
}

pub(super) fn sigma(ctx: &ReductionContext, cfg: &VerifyConfig) -> Result<Outcome> {
    let s = &ctx.sigma;
    let t = 1e-3;
    let (a, b) = expansion_ratios(s, t)?;
    let (a2, b2) = expansion_ratios(s, 0.5 * t)?;
    let ea = (4.0 * a2 - a) / 3.0;
    let eb = (4.0 * b2 - b) / 3.0;
    let mut out = vec![
        IdentityReport::new(
            "expansion along e3",
            "sigma(t e3) / (-t) = 1 at t = 1e-3",
            1,
            (a - 1.0).norm(),
            1e-6,
        ),
        IdentityReport::new(
            "expansion along e1",
            "3 sigma(t e1) / t^3 = 1 at t = 1e-3",
            1,
            (b - 1.0).norm(),
            1e-6,
        ),
        IdentityReport::new(
            "expansion limits (extrapolated)",
            "lim sigma(t e3) / (-t) = lim 3 sigma(t e1) / t^3 = 1",
            1,
            (ea - 1.0).norm().max((eb - 1.0).norm()),
            1e-6,
        ),
    ];
    let alts = alternate_evaluators(ctx, cfg)?;
    let checks: Vec<Check<JacobianSample>> = vec![
        Check::new(
            "quasi-periodicity",
            "sigma(u + W) = (-1)^(2(d'm1 - d''m2) + m1 m2) exp((2h'm1 + 2h''m2)^T (u + w'm1 + w''m2)) sigma(u)",
            1e-7,
            |x: &JacobianSample| {
                let base = s.sigma(&x.u)?;
                let mut worst: f64 = 0.0;
                for bits in 0..16u32 {
                    let m1 = [(bits & 1) as i64, ((bits >> 1) & 1) as i64];
                    let m2 = [((bits >> 2) & 1) as i64, ((bits >> 3) & 1) as i64];
                    let lhs = s.sigma(&(x.u + s.lattice_vector(m1, m2)))?;
                    let rhs = s.quasi_period_factor(&x.u, m1, m2) * base;
                    worst = worst.max(relative(lhs, rhs, &[]));
                }
                Ok(worst)
            },
        ),
        Check::new("odd", "sigma(-u) = -sigma(u)", 1e-9, |x: &JacobianSample| {
            Ok(relative(s.sigma(&-x.u)?, -s.sigma(&x.u)?, &[]))
        }),
        Check::new(
            "basis independence",
            "sigma and P_jk agree in three homology bases",
            1e-7,
            |x: &JacobianSample| {
                let w = s.wp_all(&x.u)?;
                let v = s.sigma(&x.u)?;
                let mut worst: f64 = 0.0;
                for e in &alts {
                    worst = worst.max(relative(v, e.sigma(&x.u)?, &[]));
                    let we = e.wp_all(&x.u)?;
                    for j in WpIndex::ALL {
                        worst = worst.max(relative(w.get(j), we.get(j), &[]));
                    }
                }
                Ok(worst)
            },
        ),
    ];
    let (mut rest, rej) = run_checks(
        &checks,
        cfg.samples,
        suite_seed(cfg.seed, Suite::Sigma),
        jacobian(ctx, cfg),
    )?;
    out.append(&mut rest);
    Ok((out, rej, None))
}

/// Residuals of the six differential relations with the given `lambda`s.
pub fn fundamental_residuals(w: &WpValues, l: [C64; 4]) -> [f64; 6] {
    let (l2, l4, l6, l8) = (l[0], l[1], l[2], l[3]);
    let r = |lhs: C64, terms: &[C64]| relative(lhs, terms.iter().sum(), terms);
    [
        r(
            w.p111 * w.p111,
            &[
                4.0 * w.p33,
                4.0 * l4 * w.p11,
                4.0 * w.p11.powi(3),
                4.0 * w.p13 * w.p11,
                4.0 * l2 * w.p11 * w.p11,
                4.0 * l6,
            ],
        ),
        r(
            w.p111 * w.p113,
            &[
                2.0 * l8,
                2.0 * w.p13 * w.p13,
                -2.0 * w.p33 * w.p11,
                2.0 * l4 * w.p13,
                4.0 * w.p13 * w.p11 * w.p11,
                4.0 * l2 * w.p13 * w.p11,
            ],
        ),
        r(
            w.p113 * w.p113,
            &[
                -4.0 * w.p33 * w.p13,
                4.0 * l2 * w.p13 * w.p13,
                4.0 * w.p11 * w.p13 * w.p13,
            ],
        ),
        r(
            w.p33,
            &[
                -w.p11 * w.p13,
                0.25 * w.p111 * w.p111,
                -w.p11.powi(3),
                -l2 * w.p11 * w.p11,
                -l4 * w.p11,
                -l6,
            ],
        ),
        r(w.p133, &[w.p111 * w.p13, -w.p11 * w.p113]),
        r(
            w.p333,
            &[
                2.0 * w.p11 * w.p133,
                -w.p33 * w.p111,
                -w.p13 * w.p113,
                2.0 * l2 * w.p133,
                -l4 * w.p113,
            ],
        ),
    ]
}

const FUNDAMENTAL: [(&str, &str); 6] = [
    (
        "P111^2",
        "P111^2 = 4 P33 + 4 l4 P11 + 4 P11^3 + 4 P13 P11 + 4 l2 P11^2 + 4 l6",
    ),
    (
        "P111 P113",
        "P111 P113 = 2 l8 + 2 P13^2 - 2 P33 P11 + 2 l4 P13 + 4 P13 P11^2 + 4 l2 P13 P11",
    ),
    ("P113^2", "P113^2 = -4 P33 P13 + 4 l2 P13^2 + 4 P11 P13^2"),
    ("P33", "P33 = -P11 P13 + P111^2 / 4 - P11^3 - l2 P11^2 - l4 P11 - l6"),
    ("P133", "P133 = P111 P13 - P11 P113"),
    ("P333", "P333 = 2 P11 P133 - P33 P111 - P13 P113 + 2 l2 P133 - l4 P113"),
];

pub(super) fn fundamental(ctx: &ReductionContext, cfg: &VerifyConfig) -> Result<Outcome> {
    let l = cfg.lambda_override.unwrap_or_else(|| ctx.curve.lambdas());
    let checks: Vec<Check<JacobianSample>> = FUNDAMENTAL
        .iter()
        .enumerate()
        .map(|(k, (n, a))| {
            Check::new(n, a, 1e-6, move |x: &JacobianSample| {
                Ok(fundamental_residuals(&ctx.sigma.wp_all(&x.u)?, l)[k])
            })
        })
        .collect();
    let (out, rej) = run_checks(
        &checks,
        cfg.samples,
        suite_seed(cfg.seed, Suite::Fundamental),
        jacobian(ctx, cfg),
    )?;
    Ok((out, rej, None))
}

pub(super) fn f_formulas(ctx: &ReductionContext, cfg: &VerifyConfig) -> Result<Outcome> {
    let mk = |i: u8, name, anchor| {
        Check::new(name, anchor, 1e-6, move |x: &JacobianSample| {
            let d = ctx.f_direct(i, &x.u)?;
            let f = ctx.f_formula(i, &x.u)?;
            Ok(relative(d, f, &[]))
        })
    };
    let checks = vec![
        mk(
            1,
            "f1",
            "P_E1((1-ab)(u1 + ab u3)) = (-ab P13^2 - A1 P13 - ab (P11 - ab)(P33 - a^3b^3)) / ((ab-1)^2 (P13 + a^2b^2)^2)",
        ),
        mk(
            2,
            "f2",
            "P_E2((1+ab)(u1 - ab u3)) = (ab P13^2 - A2 P13 + ab (P11 + ab)(P33 + a^3b^3)) / ((ab+1)^2 (P13 + a^2b^2)^2)",
        ),
    ];
    let (out, rej) = run_checks(
        &checks,
        cfg.samples,
        suite_seed(cfg.seed, Suite::FFormulas),
        jacobian(ctx, cfg),
    )?;
    Ok((out, rej, None))
}

/// A pair of points, one in each elliptic period cell.
#[derive(Debug, Clone, Copy)]
pub struct EllipticPair {
    pub v: [C64; 2],
}

fn elliptic_pair(ctx: &ReductionContext) -> impl FnMut(&mut ChaCha8Rng) -> Result<EllipticPair> + '_ {
    move |rng| {
        let v = std::array::from_fn(|i| {
            let p = &ctx.sigma_e[i].periods;
            random_in_cell(rng, 2.0 * p.omega_a, 2.0 * p.omega_b)
        });
        Ok(EllipticPair { v })
    }
}

const RESTRICTIONS: [(WpIndex, &str, &str, &str, &str); 6] = [
    (
        WpIndex::P11,
        "P11(k1 v)",
        "P11(k1 v) = 2ab + (a-b)^2 / P_E1(v)",
        "P11(k2 v)",
        "P11(k2 v) = -2ab + (a+b)^2 / P_E2(v)",
    ),
    (
        WpIndex::P33,
        "P33(k1 v)",
        "P33(k1 v) = a^2b^2 ((ab-1)^2 P_E1(v) + 2ab)",
        "P33(k2 v)",
        "P33(k2 v) = a^2b^2 ((ab+1)^2 P_E2(v) - 2ab)",
    ),
    (
        WpIndex::P111,
        "P111(k1 v)",
        "P111(k1 v) = (ab-1) P'_E1(v) ((a-b)^2 + ab P_E1(v)) / P_E1(v)^2",
        "P111(k2 v)",
        "P111(k2 v) = -(ab+1) P'_E2(v) ((a+b)^2 - ab P_E2(v)) / P_E2(v)^2",
    ),
    (
        WpIndex::P113,
        "P113(k1 v)",
        "P113(k1 v) = -a^2b^2 (ab-1) P'_E1(v) / P_E1(v)",
        "P113(k2 v)",
        "P113(k2 v) = a^2b^2 (ab+1) P'_E2(v) / P_E2(v)",
    ),
    (
        WpIndex::P133,
        "P133(k1 v)",
        "P133(k1 v) = a^3b^3 (ab-1) P'_E1(v) / P_E1(v)",
        "P133(k2 v)",
        "P133(k2 v) = a^3b^3 (ab+1) P'_E2(v) / P_E2(v)",
    ),
    (
        WpIndex::P333,
        "P333(k1 v)",
        "P333(k1 v) = -a^3b^3 (ab-1) ((ab-1)^2 P_E1(v) + ab) P'_E1(v) / P_E1(v)",
        "P333(k2 v)",
        "P333(k2 v) = -a^3b^3 (ab+1) ((ab+1)^2 P_E2(v) - ab) P'_E2(v) / P_E2(v)",
    ),
];

pub(super) fn restrictions(ctx: &ReductionContext, cfg: &VerifyConfig) -> Result<Outcome> {
    let mut checks: Vec<Check<EllipticPair>> = Vec::new();
    for i in 1..=2u8 {
        for (j, n1, a1, n2, a2) in RESTRICTIONS {
            let (n, a) = if i == 1 { (n1, a1) } else { (n2, a2) };
            checks.push(Check::new(n, a, 1e-6, move |x: &EllipticPair| {
                let v = x.v[(i - 1) as usize];
                let u = ctx.k[(i - 1) as usize] * v;
                Ok(relative(ctx.sigma.wp(j, &u)?, ctx.restrict_wp(i, j, v)?, &[]))
            }));
        }
    }
    for i in 1..=2u8 {
        let (n, a) = if i == 1 {
            ("P13(k1 v) (absolute)", "P13(k1 v) = -a^2b^2")
        } else {
            ("P13(k2 v) (absolute)", "P13(k2 v) = -a^2b^2")
        };
        checks.push(Check::new(n, a, 1e-8, move |x: &EllipticPair| {
            let v = x.v[(i - 1) as usize];
            let u = ctx.k[(i - 1) as usize] * v;
            let ab = ctx.curve.ab();
            Ok((ctx.sigma.wp(WpIndex::P13, &u)? + ab * ab).norm())
        }));
    }
    let (out, rej) = run_checks(
        &checks,
        cfg.samples,
        suite_seed(cfg.seed, Suite::Restrictions),
        elliptic_pair(ctx),
    )?;
    Ok((out, rej, None))
}

/// Two independent Jacobian samples.
#[derive(Debug, Clone, Copy)]
pub struct JacobianPair {
    pub u: JacobianSample,
    pub v: JacobianSample,
}

pub(super) fn addition(ctx: &ReductionContext, cfg: &VerifyConfig) -> Result<Outcome> {
    let ab2 = ctx.curve.ab() * ctx.curve.ab();
    let seed = suite_seed(cfg.seed, Suite::Addition);
    let kv = [
        (
            WpIndex::P11,
            "P11(K v)",
            "P11(K v) = -p2 {(ab-1)^2 (a+b)^2 P1^2 + (ab+1)^2 (a-b)^2 P2^2 + p3} / (2 p1^2)",
        ),
        (
            WpIndex::P13,
            "P13(K v)",
            "P13(K v) = a^2b^2 + a^2b^2 p2 {(a^2b^2-1) P1' P2' - p2} / (2 p1^2)",
        ),
        (
            WpIndex::P33,
            "P33(K v)",
            "P33(K v) = -a^2b^2 p2 {(a^2b^2-1)^2 P1^2 P2^2 + (a^2-b^2)^2 + p3} / (2 p1^2)",
        ),
    ];
    let mut checks: Vec<Check<EllipticPair>> = kv
        .iter()
        .map(|&(j, n, a)| {
            Check::new(n, a, 1e-6, move |x: &EllipticPair| {
                let u = ctx.k_times(x.v[0], x.v[1]);
                Ok(relative(ctx.sigma.wp(j, &u)?, ctx.wp_on_kv(j, x.v[0], x.v[1])?, &[]))
            })
        })
        .collect();
    let factors = [
        (
            "P11(K v) bracket",
            "P11(K v) / (-p2 / (2 p1^2)) = {(ab-1)^2 (a+b)^2 P1^2 + (ab+1)^2 (a-b)^2 P2^2 + p3}",
        ),
        (
            "P13(K v) bracket",
            "(P13(K v) - a^2b^2) / (a^2b^2 p2 / (2 p1^2)) = {(a^2b^2-1) P1' P2' - p2}",
        ),
        (
            "P33(K v) bracket",
            "P33(K v) / (-a^2b^2 p2 / (2 p1^2)) = {(a^2b^2-1)^2 P1^2 P2^2 + (a^2-b^2)^2 + p3}",
        ),
    ];
    for (k, (n, a)) in factors.into_iter().enumerate() {
        checks.push(Check::new(n, a, 1e-6, move |x: &EllipticPair| {
            let f = ctx.kv_factorization(x.v[0], x.v[1])?;
            let w = ctx.sigma.wp_all(&ctx.k_times(x.v[0], x.v[1]))?;
            let theta_side = [w.p11, w.p13 - ab2, w.p33][k];
            let pre = crate::reduction::guard(f.pre[k], 0.0, "prefactor")?;
            Ok(relative(theta_side / pre, f.bracket[k], &[]))
        }));
    }
    let (mut out, mut rej) = run_checks(&checks, cfg.samples, seed, elliptic_pair(ctx))?;
    let names = [
        ("P11(u + v)", "P11(u+v) = -P11(u) - P11(v) + (q1/q)^2 / 4 - q11 / (4 q)"),
        (
            "P13(u + v)",
            "P13(u+v) = -P13(u) - P13(v) + q1 q3 / (4 q^2) - q13 / (4 q)",
        ),
        ("P33(u + v)", "P33(u+v) = -P33(u) - P33(v) + (q3/q)^2 / 4 - q33 / (4 q)"),
    ];
    let mut checks: Vec<Check<JacobianPair>> = names
        .iter()
        .enumerate()
        .map(|(k, &(n, a))| {
            Check::new(n, a, 1e-6, move |x: &JacobianPair| {
                let lhs = ctx.sigma.wp_all(&(x.u.u + x.v.u))?;
                let rhs = ctx.addition(&x.u.u, &x.v.u)?;
                Ok(relative([lhs.p11, lhs.p13, lhs.p33][k], rhs[k], &[]))
            })
        })
        .collect();
    checks.push(Check::new(
        "q antisymmetry",
        "q(u, v) = -q(v, u)",
        1e-10,
        move |x: &JacobianPair| {
            let a = ctx.q_functions(&x.u.u, &x.v.u)?;
            let b = ctx.q_functions(&x.v.u, &x.u.u)?;
            Ok(max_of(
                [
                    (a.q, b.q),
                    (a.q1, b.q1),
                    (a.q3, b.q3),
                    (a.q11, b.q11),
                    (a.q13, b.q13),
                    (a.q33, b.q33),
                ]
                .map(|(x, y)| relative(x, -y, &[])),
            ))
        },
    ));
    let mut gen = jacobian(ctx, cfg);
    let (mut more, r2) = run_checks(&checks, cfg.samples, seed.wrapping_add(1), move |rng| {
        Ok(JacobianPair {
            u: gen(rng)?,
            v: gen(rng)?,
        })
    })?;
    out.append(&mut more);
    rej += r2;
    Ok((out, rej, None))
}

fn point_error(a: &AffinePoint, b: &AffinePoint) -> f64 {
    match (a, b) {
        (AffinePoint::Finite { x: x1, y: y1 }, AffinePoint::Finite { x: x2, y: y2 }) => {
            relative(*x1, *x2, &[]).max(relative(*y1, *y2, &[]))
        }
        _ => f64::INFINITY,
    }
}

pub(super) fn inversion(ctx: &ReductionContext, cfg: &VerifyConfig) -> Result<Outcome> {
    let cols = ctx.sigma.periods.lattice_columns();
    let checks: Vec<Check<JacobianSample>> = vec![
        Check::new(
            "symmetric functions",
            "x1 + x2 = P11(u), x1 x2 = -P13(u)",
            1e-8,
            |x: &JacobianSample| {
                let d = ctx.jacobi_inversion(&x.u)?;
                let (x1, x2) = (d.p.x().unwrap_or_default(), d.q.x().unwrap_or_default());
                let (xp, xq) = (x.p.x().unwrap_or_default(), x.q.x().unwrap_or_default());
                Ok(relative(x1 + x2, xp + xq, &[x1, x2]).max(relative(x1 * x2, xp * xq, &[])))
            },
        ),
        Check::new(
            "recovered points",
            "2 y_i = -P111(u) x_i - P113(u)",
            1e-8,
            |x: &JacobianSample| {
                let d = ctx.jacobi_inversion(&x.u)?;
                let direct = point_error(&d.p, &x.p).max(point_error(&d.q, &x.q));
                let swapped = point_error(&d.p, &x.q).max(point_error(&d.q, &x.p));
                Ok(direct.min(swapped))
            },
        ),
        Check::new("points on the curve", "y_i^2 = M2(x_i)", 1e-8, |x: &JacobianSample| {
            let d = ctx.jacobi_inversion(&x.u)?;
            Ok(ctx.curve.residual(&d.p).max(ctx.curve.residual(&d.q)))
        }),
        Check::new(
            "Abel sum recovers u",
            "A(P) + A(Q) - u in the period lattice",
            LATTICE_ROUNDING,
            |x: &JacobianSample| {
                let d = ctx.jacobi_inversion(&x.u)?;
                let s = abel_inf_g2(&ctx.curve, &d.p, &cfg.tol)? + abel_inf_g2(&ctx.curve, &d.q, &cfg.tol)? - x.u;
                lattice_defect(&[s[0], s[1]], &cols)
            },
        ),
    ];
    let (out, rej) = run_checks(
        &checks,
        cfg.samples,
        suite_seed(cfg.seed, Suite::Inversion),
        jacobian(ctx, cfg),
    )?;
    Ok((out, rej, None))
}

pub(super) fn lattice(ctx: &ReductionContext, cfg: &VerifyConfig) -> Result<Outcome> {
    let mut worst: f64 = 0.0;
    for i in 1..=2u8 {
        for j in 1..=2u8 {
            let want = if i == j { 2.0 } else { 0.0 };
            worst = worst.max((ctx.pairing(i, j)? - want).norm());
        }
    }
    let mut out = vec![IdentityReport::new(
        "pairing",
        "(a_i, b_i) . k_j = 2 delta_ij",
        1,
        worst,
        1e-12,
    )];
    let cols = ctx.sigma.periods.lattice_columns();
    let gens: Vec<Vector2<C64>> = cols.iter().map(|c| Vector2::new(c[0], c[1])).collect();
    let mut push: f64 = 0.0;
    let mut pull: f64 = 0.0;
    for i in 0..2 {
        let p = &ctx.sigma_e[i].periods;
        let ecols = vec![vec![2.0 * p.omega_a], vec![2.0 * p.omega_b]];
        for g in &gens {
            push = push.max(lattice_defect(&[ctx.push_forward(i as u8 + 1, g)?], &ecols)?);
        }
        for w in [2.0 * p.omega_a, 2.0 * p.omega_b] {
            let v = ctx.k[i] * w;
            pull = pull.max(lattice_defect(&[v[0], v[1]], &cols)?);
        }
    }
    out.push(IdentityReport::new(
        "push-forward of periods",
        "a_i W1 + b_i W3 in the lattice of E_i",
        8,
        push,
        LATTICE_ROUNDING,
    ));
    out.push(IdentityReport::new(
        "pull-back of periods",
        "k_i w in the lattice of V",
        4,
        pull,
        LATTICE_ROUNDING,
    ));
    let checks: Vec<Check<(JacobianSample, usize)>> = vec![
        Check::new(
            "f_i lattice invariance",
            "f_i(u + W) = f_i(u)",
            1e-8,
            |(x, g): &(JacobianSample, usize)| {
                let shifted = x.u + gens[*g];
                Ok(max_of((1..=2u8).map(|i| -> f64 {
                    match (ctx.f_direct(i, &x.u), ctx.f_direct(i, &shifted)) {
                        (Ok(a), Ok(b)) => relative(a, b, &[]),
                        _ => f64::INFINITY,
                    }
                })))
            },
        ),
        Check::new(
            "f1 on the k1 line",
            "f1(k1 v) = P_E1(2 v)",
            1e-8,
            |(x, _): &(JacobianSample, usize)| {
                let v = x.u[0];
                let lhs = ctx.f_direct(1, &(ctx.k[0] * v))?;
                Ok(relative(lhs, ctx.sigma_e[0].wp(2.0 * v)?, &[]))
            },
        ),
    ];
    let mut gen = jacobian(ctx, cfg);
    let (mut more, rej) = run_checks(&checks, cfg.samples, suite_seed(cfg.seed, Suite::Lattice), move |rng| {
        let s = gen(rng)?;
        Ok((s, rng.gen_range(0..4)))
    })?;
    out.append(&mut more);
    Ok((out, rej, None))
}

/// Scalar samples in the companion period cells, as cell fractions.
#[derive(Debug, Clone, Copy)]
pub struct CellFractions {
    pub x: [f64; 2],
    pub y: [f64; 2],
}

pub(super) fn kummer(ctx: &ReductionContext, cfg: &VerifyConfig) -> Result<Outcome> {
    let seed = suite_seed(cfg.seed, Suite::Kummer);
    let checks: Vec<Check<JacobianSample>> = vec![
        Check::new(
            "Kummer round trip",
            "(P11, P13, P33) -> (Z1, Z2, Z3) -> (P11, P13, P33)",
            1e-8,
            |x: &JacobianSample| {
                let w = ctx.sigma.wp_all(&x.u)?;
                let back = ctx.wp_from_z(ctx.kummer_z_from(&w)?)?;
                Ok(max_of(
                    [(w.p11, back[0]), (w.p13, back[1]), (w.p33, back[2])].map(|(a, b)| relative(a, b, &[])),
                ))
            },
        ),
        Check::new(
            "Z products",
            "Z1 = sn(w1) sn(w2), Z2 = cn(w1) cn(w2), Z3 = dn(w1) dn(w2) against the rational forms in P_jk",
            1e-6,
            |x: &JacobianSample| {
                let z = ctx.kummer_z(&x.u)?;
                let p = ctx.z_products(&x.u)?;
                Ok(max_of((0..3).map(|j| relative(z[j], p[j], &[]))))
            },
        ),
        Check::new(
            "al products (rational forms)",
            "Z_j = al1_j(kappa1 w1) al2_j(kappa2 w2) = (a^2-b^2) / ((1-a^2)^2 (1-b^2)^2) * (rational in P_jk)",
            1e-6,
            |x: &JacobianSample| {
                let al = ctx.al_product_coords(&x.u)?;
                let d = ctx.al_display(&x.u)?;
                Ok(max_of((0..3).map(|j| relative(al[j], d[j], &[]))))
            },
        ),
        Check::new(
            "al display to product ratio",
            "rational al form / al product = (kappa1 kappa2)^2",
            1e-6,
            |x: &JacobianSample| {
                let al = ctx.al_product_coords(&x.u)?;
                let d = ctx.al_display(&x.u)?;
                let k = ctx.kappa[0] * ctx.kappa[1];
                Ok(max_of((0..3).map(|j| relative(d[j] / al[j], k * k, &[]))))
            },
        ),
        Check::new(
            "al products vs Jacobi quotients",
            "Z1 = 1 / (kappa1 kappa2 Zal3), Z2 = Zal1 / Zal3, Z3 = Zal2 / Zal3",
            1e-6,
            |x: &JacobianSample| {
                let al = ctx.al_product_coords(&x.u)?;
                let z = ctx.kummer_z(&x.u)?;
                let k = ctx.kappa[0] * ctx.kappa[1];
                let q = [1.0 / (k * al[2]), al[0] / al[2], al[1] / al[2]];
                Ok(max_of((0..3).map(|j| relative(z[j], q[j], &[]))))
            },
        ),
        Check::new(
            "al display round trip",
            "P_jk -> rational al forms -> inverse -> P_jk",
            1e-7,
            |x: &JacobianSample| {
                let w = ctx.sigma.wp_all(&x.u)?;
                let back = ctx.wp_from_al_display(ctx.al_display_from(&w)?)?;
                Ok(max_of(
                    [(w.p11, back[0]), (w.p13, back[1]), (w.p33, back[2])].map(|(a, b)| relative(a, b, &[])),
                ))
            },
        ),
    ];
    let (mut out, mut rej) = run_checks(&checks, cfg.samples, seed, jacobian(ctx, cfg))?;
    let cell = |i: usize, f: &CellFractions| {
        let p = &ctx.sigma_tilde[i].periods;
        f.x[i] * 2.0 * p.omega_a + f.y[i] * 2.0 * p.omega_b
    };
    let bridge = |i: usize| {
        move |f: &CellFractions| -> Result<f64> {
            let (l, r) = ctx.wp_tilde_bridge(i as u8 + 1, cell(i, f))?;
            Ok(relative(l, r, &[]))
        }
    };
    let jac = |k: usize| {
        move |f: &CellFractions| -> Result<f64> {
            let mut worst: f64 = 0.0;
            for i in 0..2 {
                let u = cell(i, f) / ctx.kappa[i];
                let b = ctx.jacobi_bridges(i as u8 + 1, u)?;
                worst = worst.max(relative(b[k].0, b[k].1, &[]));
            }
            Ok(worst)
        }
    };
    let checks: Vec<Check<CellFractions>> = vec![
        Check::new(
            "E1 companion",
            "P_E1(-i (ab-1) u / (a-b)) = (a-b)^2 / (ab-1)^2 (1 - P_E~1(u))",
            1e-7,
            bridge(0),
        ),
        Check::new(
            "E2 companion",
            "P_E2(i (ab+1) u / (a+b)) = (a+b)^2 / (ab+1)^2 (1 - P_E~2(u))",
            1e-7,
            bridge(1),
        ),
        Check::new("sn bridge", "sn(u)^2 = 1 / (kappa^2 P_E~(kappa u))", 1e-7, jac(0)),
        Check::new(
            "cn bridge",
            "cn(u)^2 = (P_E~(kappa u) - 1/kappa^2) / P_E~(kappa u)",
            1e-7,
            jac(1),
        ),
        Check::new(
            "dn bridge",
            "dn(u)^2 = (P_E~(kappa u) - 1) / P_E~(kappa u)",
            1e-7,
            jac(2),
        ),
    ];
    let (mut more, r2) = run_checks(&checks, cfg.samples, seed.wrapping_add(1), |rng| {
        let mut g = || 0.05 + 0.9 * rng.gen::<f64>();
        Ok(CellFractions {
            x: [g(), g()],
            y: [g(), g()],
        })
    })?;
    out.append(&mut more);
    rej += r2;
    Ok((out, rej, None))
}

pub(super) fn kdv(ctx: &ReductionContext, cfg: &VerifyConfig) -> Result<Outcome> {
    let h = cfg.kdv_step;
    let eqs = [
        ("KdV", "dF/du3 = (1/4) d^3F/du1^3 - (3/2) F dF/du1", 1e-5),
        (
            "second flow",
            "0 = (1/4) d^3F/du1^2du3 - (F + l2/3) dF/du3 - (1/2) (dF/du1) G",
            1e-5,
        ),
        ("compatibility", "dF/du3 = dG/du1", 1e-8),
    ];
    let checks: Vec<Check<JacobianSample>> = eqs
        .iter()
        .enumerate()
        .map(|(k, &(n, a, t))| Check::new(n, a, t, move |x: &JacobianSample| Ok(ctx.kdv_residuals(&x.u, h)?.r[k])))
        .collect();
    let (out, rej) = run_checks(
        &checks,
        cfg.samples,
        suite_seed(cfg.seed, Suite::Kdv),
        jacobian(ctx, cfg),
    )?;
    Ok((out, rej, None))
}

/// Random symmetric `tau` with positive definite imaginary part.
pub fn random_siegel(rng: &mut ChaCha8Rng) -> CMat2 {
    let mut g = || rng.gen::<f64>() * 2.0 - 1.0;
    let (x11, x12, x22) = (0.5 * g(), 0.5 * g(), 0.5 * g());
    let (a, b, c, d) = (g(), g(), g(), g());
    let (y11, y12, y22) = (a * a + b * b + 0.5, a * c + b * d, c * c + d * d + 0.5);
    CMat2::new(
        C64::new(x11, y11),
        C64::new(x12, y12),
        C64::new(x12, y12),
        C64::new(x22, y22),
    )
}

pub const HUMBERT_BOUND: i64 = 20;
pub const HUMBERT_TOL: f64 = 1e-6;

pub(super) fn humbert(ctx: &ReductionContext, cfg: &VerifyConfig) -> Result<Outcome> {
    let tau = &ctx.sigma.periods.tau;
    let rel = humbert_delta4(tau, HUMBERT_BOUND, HUMBERT_TOL);
    let res = rel.map(|r| r.residual(tau)).unwrap_or(f64::INFINITY);
    let mut out = vec![IdentityReport::new(
        "discriminant-4 relation",
        "h1 t11 + h2 t12 + h3 t22 + h4 (t12^2 - t11 t22) + h5 = 0, h2^2 - 4 (h1 h3 + h4 h5) = 4",
        1,
        res,
        HUMBERT_TOL,
    )];
    let checks: Vec<Check<CMat2>> = vec![Check::new(
        "random tau has no relation",
        "no discriminant-4 relation with |h| <= 20 for a random tau",
        0.5,
        |t| {
            Ok(if humbert_delta4(t, HUMBERT_BOUND, HUMBERT_TOL).is_some() {
                1.0
            } else {
                0.0
            })
        },
    )];
    let (mut more, rej) = run_checks(&checks, cfg.samples, suite_seed(cfg.seed, Suite::Humbert), |rng| {
        Ok(random_siegel(rng))
    })?;
    out.append(&mut more);
    Ok((out, rej, rel))
}
