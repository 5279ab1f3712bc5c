use std::io::Write;

use kleinian::periods::{humbert_delta4, HumbertRelation, PeriodsG1};
use kleinian::theta_sigma::CharacteristicG2;
use kleinian::verify::{self, jacobian_samples, Suite, VerifyConfig, VerifyReport};
use kleinian::{pair, CurveV, ReductionContext, SigmaG2Evaluator, Tolerance, WpIndex, C64};
use nalgebra::Vector2;
use serde::Serialize;

use crate::output::{self, complex_fields, complex_header, json, mat, Pair, Point};
use crate::{EvalCmd, Failure, KdvArgs, SampleArgs, VerifyArgs, EXIT_FAIL};

#[derive(Serialize)]
struct Lambdas {
    lambda2: Pair,
    lambda4: Pair,
    lambda6: Pair,
    lambda8: Pair,
    lambda10: Pair,
}

#[derive(Serialize)]
struct Elliptic {
    /// `Y^2 = X (X - b)(X - c)`
    b: Pair,
    c: Pair,
    roots: [Pair; 3],
}

impl Elliptic {
    fn new(b: C64, c: C64) -> Self {
        Elliptic {
            b: pair(b),
            c: pair(c),
            roots: [pair(C64::new(0.0, 0.0)), pair(b), pair(c)],
        }
    }
}

#[derive(Serialize)]
struct CurveInfo {
    alpha: Pair,
    beta: Pair,
    #[serde(flatten)]
    lambdas: Lambdas,
    branch_points: Vec<Pair>,
    e1: Pair,
    e2: Pair,
    #[serde(rename = "E1")]
    big_e1: Elliptic,
    #[serde(rename = "E2")]
    big_e2: Elliptic,
    kappa1: Pair,
    kappa2: Pair,
    #[serde(rename = "E1_tilde")]
    e1_tilde: Elliptic,
    #[serde(rename = "E2_tilde")]
    e2_tilde: Elliptic,
    #[serde(rename = "O1")]
    o1: Point,
    #[serde(rename = "O2")]
    o2: Point,
    push_forward: [[Pair; 2]; 2],
    pull_back: [[Pair; 2]; 2],
}

pub fn curve_info(v: &CurveV, out: &mut dyn Write) -> Result<u8, Failure> {
    let l = v.lambdas();
    let (e1, e2) = v.e_params()?;
    let (a, b) = v.elliptic_targets();
    let (k1, k2) = v.kappas();
    let ab = v.ab();
    let one = C64::new(1.0, 0.0);
    let info = CurveInfo {
        alpha: pair(v.alpha),
        beta: pair(v.beta),
        lambdas: Lambdas {
            lambda2: pair(l[0]),
            lambda4: pair(l[1]),
            lambda6: pair(l[2]),
            lambda8: pair(l[3]),
            lambda10: pair(v.lambda10),
        },
        branch_points: v.branch_points().iter().map(|z| pair(*z)).collect(),
        e1: pair(e1),
        e2: pair(e2),
        big_e1: Elliptic::new(a.b, a.c),
        big_e2: Elliptic::new(b.b, b.c),
        kappa1: pair(k1),
        kappa2: pair(k2),
        e1_tilde: Elliptic::new(one, one / (k1 * k1)),
        e2_tilde: Elliptic::new(one, one / (k2 * k2)),
        o1: output::point(&v.o1()),
        o2: output::point(&v.o2()),
        push_forward: [
            [pair(one - ab), pair(ab * (one - ab))],
            [pair(one + ab), pair(-ab * (one + ab))],
        ],
        pull_back: [
            [pair(one / (one - ab)), pair(one / (ab * (one - ab)))],
            [pair(one / (one + ab)), pair(-one / (ab * (one + ab)))],
        ],
    };
    json(&info, out)?;
    Ok(0)
}

#[derive(Serialize)]
struct G1Json {
    omega_a: Pair,
    omega_b: Pair,
    eta_a: Pair,
    eta_b: Pair,
    tau: Pair,
    legendre_residual: f64,
}

impl From<&PeriodsG1> for G1Json {
    fn from(p: &PeriodsG1) -> Self {
        G1Json {
            omega_a: pair(p.omega_a),
            omega_b: pair(p.omega_b),
            eta_a: pair(p.eta_a),
            eta_b: pair(p.eta_b),
            tau: pair(p.tau),
            legendre_residual: p.legendre_residual(),
        }
    }
}

#[derive(Serialize)]
struct PeriodsJson {
    omega_a: [[Pair; 2]; 2],
    omega_b: [[Pair; 2]; 2],
    eta_a: [[Pair; 2]; 2],
    eta_b: [[Pair; 2]; 2],
    tau: [[Pair; 2]; 2],
    legendre_sign: i8,
    symmetry_residual: f64,
    legendre_residual: f64,
    im_tau_min_eigenvalue: f64,
    characteristic: CharacteristicG2,
    epsilon: Pair,
    #[serde(skip_serializing_if = "Option::is_none")]
    humbert: Option<HumbertRelation>,
    #[serde(rename = "E1")]
    e1: G1Json,
    #[serde(rename = "E2")]
    e2: G1Json,
    #[serde(rename = "E1_tilde")]
    e1_tilde: G1Json,
    #[serde(rename = "E2_tilde")]
    e2_tilde: G1Json,
}

pub fn periods(v: &CurveV, tol: &Tolerance, out: &mut dyn Write) -> Result<u8, Failure> {
    let ctx = ReductionContext::new(v, tol)?;
    let s = &ctx.sigma;
    let p = &s.periods;
    let doc = PeriodsJson {
        omega_a: mat(&p.omega_a),
        omega_b: mat(&p.omega_b),
        eta_a: mat(&p.eta_a),
        eta_b: mat(&p.eta_b),
        tau: mat(&p.tau),
        legendre_sign: p.legendre_sign,
        symmetry_residual: p.symmetry_residual(),
        legendre_residual: p.legendre_residual(),
        im_tau_min_eigenvalue: p.im_tau_min_eigen(),
        characteristic: s.delta,
        epsilon: pair(s.epsilon),
        humbert: humbert_delta4(&p.tau, 20, 1e-6),
        e1: (&ctx.sigma_e[0].periods).into(),
        e2: (&ctx.sigma_e[1].periods).into(),
        e1_tilde: (&ctx.sigma_tilde[0].periods).into(),
        e2_tilde: (&ctx.sigma_tilde[1].periods).into(),
    };
    json(&doc, out)?;
    Ok(0)
}

fn point2(u: &[C64]) -> Vector2<C64> {
    Vector2::new(u[0], u[1])
}

#[derive(Serialize)]
struct Value {
    name: String,
    value: Pair,
}

#[derive(Serialize)]
struct EvalJson {
    function: &'static str,
    argument: Vec<Pair>,
    values: Vec<Value>,
}

pub fn eval(v: &CurveV, tol: &Tolerance, what: EvalCmd, out: &mut dyn Write) -> Result<u8, Failure> {
    let val = |name: &str, z: C64| Value {
        name: name.into(),
        value: pair(z),
    };
    let doc = match what {
        EvalCmd::Wp { jk, u } => {
            let s = SigmaG2Evaluator::new(v, tol)?;
            let which = match jk.as_deref() {
                None => WpIndex::ALL.to_vec(),
                Some(t) => vec![WpIndex::parse(t).ok_or_else(|| Failure::input(format!("unknown subscripts '{t}'")))?],
            };
            let w = s.wp_all(&point2(&u))?;
            let values = which
                .iter()
                .map(|i| val(&format!("P{}", i.label()), w.get(*i)))
                .collect();
            EvalJson {
                function: "wp",
                argument: u.iter().map(|z| pair(*z)).collect(),
                values,
            }
        }
        EvalCmd::Sigma { u } => {
            let s = SigmaG2Evaluator::new(v, tol)?;
            let x = s.sigma(&point2(&u))?;
            EvalJson {
                function: "sigma",
                argument: u.iter().map(|z| pair(*z)).collect(),
                values: vec![val("sigma", x)],
            }
        }
        EvalCmd::WpE { i, v: z } => {
            let ctx = ReductionContext::new(v, tol)?;
            let (p, dp) = ctx.sigma_e[(i - 1) as usize].wp_pair(z)?;
            EvalJson {
                function: "wpE",
                argument: vec![pair(z)],
                values: vec![val(&format!("P_E{i}"), p), val(&format!("P'_E{i}"), dp)],
            }
        }
        EvalCmd::Sn { i, v: z } => {
            let ctx = ReductionContext::new(v, tol)?;
            let (s, c, d) = ctx.jacobi[(i - 1) as usize].sn_cn_dn(z)?;
            EvalJson {
                function: "sn",
                argument: vec![pair(z)],
                values: vec![
                    val("k", ctx.jacobi[(i - 1) as usize].m),
                    val("sn", s),
                    val("cn", c),
                    val("dn", d),
                ],
            }
        }
        EvalCmd::Al { i, j, v: z } => {
            let ctx = ReductionContext::new(v, tol)?;
            let a = ctx.sigma_tilde[(i - 1) as usize].al(j, z)?;
            EvalJson {
                function: "al",
                argument: vec![pair(z)],
                values: vec![val(&format!("al{j}"), a)],
            }
        }
    };
    json(&doc, out)?;
    Ok(0)
}

#[derive(Serialize)]
struct VerifyJson {
    alpha: Pair,
    beta: Pair,
    #[serde(skip_serializing_if = "Option::is_none")]
    lambda4_perturbation: Option<f64>,
    #[serde(flatten)]
    report: VerifyReport,
}

pub fn verify(v: &CurveV, tol: &Tolerance, a: &VerifyArgs, out: &mut dyn Write) -> Result<u8, Failure> {
    let suites = Suite::parse(&a.suite).ok_or_else(|| Failure::input(format!("unknown suite '{}'", a.suite)))?;
    let ctx = ReductionContext::new(v, tol)?;
    let lambda_override = a.perturb_lambda4.map(|d| {
        let mut l = v.lambdas();
        l[1] += d;
        l
    });
    let cfg = VerifyConfig {
        samples: a.sample.samples as usize,
        seed: a.sample.seed,
        tol: *tol,
        lambda_override,
        ..Default::default()
    };
    let report = verify::run(&ctx, &suites, &cfg)?;
    let pass = report.pass;
    json(
        &VerifyJson {
            alpha: pair(v.alpha),
            beta: pair(v.beta),
            lambda4_perturbation: a.perturb_lambda4,
            report,
        },
        out,
    )?;
    Ok(if pass { 0 } else { EXIT_FAIL })
}

pub fn kummer(v: &CurveV, tol: &Tolerance, a: &SampleArgs, out: &mut dyn Write) -> Result<u8, Failure> {
    let ctx = ReductionContext::new(v, tol)?;
    let mut w = csv::Writer::from_writer(out);
    w.write_record(complex_header(&["u1", "u3", "P11", "P13", "P33", "Z1", "Z2", "Z3"]))?;
    let n = a.samples as usize;
    let mut rows = 0;
    for s in jacobian_samples(&ctx, a.seed, tol) {
        if rows == n {
            break;
        }
        let Ok(p) = ctx.sigma.wp_all(&s.u) else { continue };
        let Ok(z) = ctx.kummer_z_from(&p) else { continue };
        w.write_record(complex_fields(&[s.u[0], s.u[1], p.p11, p.p13, p.p33, z[0], z[1], z[2]]))?;
        rows += 1;
    }
    w.flush()?;
    if rows < n {
        return Err(Failure {
            code: crate::EXIT_CONVERGENCE,
            message: format!("only {rows} of {n} samples evaluated"),
        });
    }
    Ok(0)
}

pub fn kdv(v: &CurveV, tol: &Tolerance, a: &KdvArgs, out: &mut dyn Write) -> Result<u8, Failure> {
    if !(a.step > 0.0 && a.radius >= 0.0) {
        return Err(Failure::input("--step must be positive and --radius non-negative"));
    }
    let ctx = ReductionContext::new(v, tol)?;
    let mut w = csv::Writer::from_writer(out);
    let mut header = complex_header(&["u1", "u3"]);
    header.extend(["r1", "r2", "r3", "error"].map(String::from));
    w.write_record(&header)?;
    let n = a.n as usize;
    let grid = |k: usize| {
        if n == 1 {
            0.0
        } else {
            -1.0 + 2.0 * k as f64 / (n - 1) as f64
        }
    };
    for iy in 0..n {
        for ix in 0..n {
            let u1 = a.center[0] + a.radius * C64::new(grid(ix), grid(iy));
            let u = Vector2::new(u1, a.center[1]);
            let mut rec = complex_fields(&[u[0], u[1]]);
            match ctx.kdv_residuals(&u, a.step) {
                Ok(r) => {
                    rec.extend(r.r.iter().map(|x| format!("{x:?}")));
                    rec.push(String::new());
                }
                Err(e) => {
                    rec.extend([String::new(), String::new(), String::new(), e.to_string()]);
                }
            }
            w.write_record(&rec)?;
        }
    }
    w.flush()?;
    Ok(0)
}
