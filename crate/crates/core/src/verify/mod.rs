//! Randomized verification suites over a [`ReductionContext`]. Each suite
//! draws seeded sample points, evaluates both sides of its identities and
//! reports the worst relative residual per identity.

mod suites;

use std::f64::consts::PI;

use nalgebra::Vector2;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::curves::AffinePoint;
use crate::error::{Error, Result};
use crate::numerics::Tolerance;
use crate::periods::{abel_inf_g2, HumbertRelation};
use crate::reduction::ReductionContext;
use crate::C64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    Periods,
    Sigma,
    Fundamental,
    FFormulas,
    Restrictions,
    Addition,
    Inversion,
    Lattice,
    Kummer,
    Kdv,
    Humbert,
}

impl Suite {
    pub const ALL: [Suite; 11] = [
        Suite::Periods,
        Suite::Sigma,
        Suite::Fundamental,
        Suite::FFormulas,
        Suite::Restrictions,
        Suite::Addition,
        Suite::Inversion,
        Suite::Lattice,
        Suite::Kummer,
        Suite::Kdv,
        Suite::Humbert,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Suite::Periods => "periods",
            Suite::Sigma => "sigma",
            Suite::Fundamental => "fundamental",
            Suite::FFormulas => "f-formulas",
            Suite::Restrictions => "restrictions",
            Suite::Addition => "addition",
            Suite::Inversion => "inversion",
            Suite::Lattice => "lattice",
            Suite::Kummer => "kummer",
            Suite::Kdv => "kdv",
            Suite::Humbert => "humbert",
        }
    }

    pub fn parse(s: &str) -> Option<Vec<Suite>> {
        if s == "all" {
            return Some(Suite::ALL.to_vec());
        }
        Suite::ALL.iter().find(|x| x.name() == s).map(|x| vec![*x])
    }
}

#[derive(Debug, Clone, Copy)]
pub struct VerifyConfig {
    pub samples: usize,
    pub seed: u64,
    pub tol: Tolerance,
    /// Replaces `(l2, l4, l6, l8)` in the fundamental relations only; the
    /// Kleinian functions are still those of the true curve.
    pub lambda_override: Option<[C64; 4]>,
    /// Finite-difference step for the KdV residuals.
    pub kdv_step: f64,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig {
            samples: 20,
            seed: 42,
            tol: Tolerance::default(),
            lambda_override: None,
            kdv_step: 1e-3,
        }
    }
}

/// Worst residual of one identity over the accepted samples.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IdentityReport {
    pub name: String,
    /// the identity being checked, written out
    pub anchor: String,
    pub samples: usize,
    pub max_residual: f64,
    pub threshold: f64,
    pub pass: bool,
}

impl IdentityReport {
    pub fn new(name: &str, anchor: &str, samples: usize, max_residual: f64, threshold: f64) -> Self {
        IdentityReport {
            name: name.into(),
            anchor: anchor.into(),
            samples,
            max_residual,
            threshold,
            pass: max_residual < threshold,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuiteReport {
    pub suite: Suite,
    pub identities: Vec<IdentityReport>,
    /// samples rejected near the theta divisor or a vanishing denominator
    pub rejected: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub humbert: Option<HumbertRelation>,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerifyReport {
    pub seed: u64,
    pub samples: usize,
    pub suites: Vec<SuiteReport>,
    pub pass: bool,
}

pub fn run(ctx: &ReductionContext, suites: &[Suite], cfg: &VerifyConfig) -> Result<VerifyReport> {
    if cfg.samples == 0 {
        return Err(Error::InvalidParameters("samples must be at least 1".into()));
    }
    let mut out = Vec::with_capacity(suites.len());
    for s in suites {
        out.push(run_suite(ctx, *s, cfg)?);
    }
    let pass = out.iter().all(|s| s.pass);
    Ok(VerifyReport {
        seed: cfg.seed,
        samples: cfg.samples,
        suites: out,
        pass,
    })
}

pub fn run_suite(ctx: &ReductionContext, suite: Suite, cfg: &VerifyConfig) -> Result<SuiteReport> {
    let (identities, rejected, humbert) = match suite {
        Suite::Periods => (suites::periods(ctx, cfg)?, 0, None),
        Suite::Sigma => suites::sigma(ctx, cfg)?,
        Suite::Fundamental => suites::fundamental(ctx, cfg)?,
        Suite::FFormulas => suites::f_formulas(ctx, cfg)?,
        Suite::Restrictions => suites::restrictions(ctx, cfg)?,
        Suite::Addition => suites::addition(ctx, cfg)?,
        Suite::Inversion => suites::inversion(ctx, cfg)?,
        Suite::Lattice => suites::lattice(ctx, cfg)?,
        Suite::Kummer => suites::kummer(ctx, cfg)?,
        Suite::Kdv => suites::kdv(ctx, cfg)?,
        Suite::Humbert => suites::humbert(ctx, cfg)?,
    };
    let pass = identities.iter().all(|i| i.pass);
    Ok(SuiteReport {
        suite,
        identities,
        rejected,
        humbert,
        pass,
    })
}

/// Residual relative to the largest term, floored at one.
pub fn relative(lhs: C64, rhs: C64, terms: &[C64]) -> f64 {
    let scale = terms.iter().chain([&lhs, &rhs]).map(|t| t.norm()).fold(1.0, f64::max);
    (lhs - rhs).norm() / scale
}

/// A random point on `V` with `|x| <= 10`, uniform in the disk, random sheet.
pub fn random_point(ctx: &ReductionContext, rng: &mut ChaCha8Rng) -> AffinePoint {
    let r = 10.0 * rng.gen::<f64>().sqrt();
    let t = 2.0 * PI * rng.gen::<f64>();
    let x = C64::from_polar(r, t);
    let y = ctx.curve.m2(x).sqrt();
    let y = if rng.gen::<bool>() { y } else { -y };
    AffinePoint::new(x, y)
}

/// `u = A(P) + A(Q)` for two random points, together with the points.
#[derive(Debug, Clone, Copy)]
pub struct JacobianSample {
    pub u: Vector2<C64>,
    pub p: AffinePoint,
    pub q: AffinePoint,
}

pub fn random_jacobian_sample(ctx: &ReductionContext, rng: &mut ChaCha8Rng, tol: &Tolerance) -> Result<JacobianSample> {
    let p = random_point(ctx, rng);
    let q = random_point(ctx, rng);
    let (xp, xq) = (p.x().unwrap_or_default(), q.x().unwrap_or_default());
    let scale = xp.norm().max(xq.norm()).max(1.0);
    if (xp - xq).norm() < 1e-3 * scale {
        return Err(Error::BranchCollision);
    }
    let u = abel_inf_g2(&ctx.curve, &p, tol)? + abel_inf_g2(&ctx.curve, &q, tol)?;
    Ok(JacobianSample { u, p, q })
}

/// Seeded stream of Jacobian samples. Draws that fail are skipped; the
/// stream ends after 1000 failures in a row.
pub fn jacobian_samples<'a>(
    ctx: &'a ReductionContext,
    seed: u64,
    tol: &'a Tolerance,
) -> impl Iterator<Item = JacobianSample> + 'a {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    std::iter::from_fn(move || (0..1000).find_map(|_| random_jacobian_sample(ctx, &mut rng, tol).ok()))
}

/// Uniform point of the period parallelogram, kept away from its edges.
pub fn random_in_cell(rng: &mut ChaCha8Rng, w1: C64, w2: C64) -> C64 {
    let x = 0.05 + 0.9 * rng.gen::<f64>();
    let y = 0.05 + 0.9 * rng.gen::<f64>();
    x * w1 + y * w2
}

type CheckFn<'a, S> = Box<dyn Fn(&S) -> Result<f64> + Send + Sync + 'a>;

/// One identity: its name, written form, threshold and residual function.
pub(crate) struct Check<'a, S> {
    pub name: &'static str,
    pub anchor: &'static str,
    pub threshold: f64,
    pub eval: CheckFn<'a, S>,
}

impl<'a, S> Check<'a, S> {
    pub fn new(
        name: &'static str,
        anchor: &'static str,
        threshold: f64,
        eval: impl Fn(&S) -> Result<f64> + Send + Sync + 'a,
    ) -> Self {
        Check {
            name,
            anchor,
            threshold,
            eval: Box::new(eval),
        }
    }
}

/// Draws candidates serially from a seeded stream, evaluates them in
/// parallel and keeps, in draw order, the first `n` on which every check
/// evaluates. Returns the reports and the number of rejected candidates.
pub(crate) fn run_checks<S, G>(
    checks: &[Check<'_, S>],
    n: usize,
    seed: u64,
    mut gen: G,
) -> Result<(Vec<IdentityReport>, usize)>
where
    S: Send + Sync,
    G: FnMut(&mut ChaCha8Rng) -> Result<S>,
{
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst = vec![0.0f64; checks.len()];
    let mut accepted = 0;
    let mut rejected = 0;
    let mut rounds = 0;
    while accepted < n {
        rounds += 1;
        if rounds > 20 {
            return Err(Error::NonConvergence(format!(
                "only {accepted} of {n} samples could be evaluated"
            )));
        }
        let need = n - accepted;
        let mut batch = Vec::with_capacity(need);
        for _ in 0..need {
            match gen(&mut rng) {
                Ok(s) => batch.push(s),
                Err(_) => rejected += 1,
            }
        }
        let results: Vec<Option<Vec<f64>>> = batch
            .par_iter()
            .map(|s| checks.iter().map(|c| (c.eval)(s)).collect::<Result<Vec<f64>>>().ok())
            .collect();
        for r in results {
            match r {
                Some(v) if accepted < n => {
                    accepted += 1;
                    for (w, x) in worst.iter_mut().zip(v) {
                        *w = if x.is_nan() { f64::INFINITY } else { w.max(x) };
                    }
                }
                Some(_) => {}
                None => rejected += 1,
            }
        }
    }
    let reports = checks
        .iter()
        .zip(worst)
        .map(|(c, w)| IdentityReport::new(c.name, c.anchor, n, w, c.threshold))
        .collect();
    Ok((reports, rejected))
}

/// Seed of one suite, derived from the run seed.
pub(crate) fn suite_seed(seed: u64, suite: Suite) -> u64 {
    let k = Suite::ALL.iter().position(|s| *s == suite).unwrap_or(0) as u64;
    seed ^ (k + 1).wrapping_mul(0x9E37_79B9_7F4A_7C15)
}
