//! Acceptance criteria 1 to 11 over the default grid of test curves at seed 42.
//!
//! Prints one PASS/FAIL line per criterion. Two closed-form identities are known
//! not to hold at the stated tolerance; they are listed in `EXPECTED_FAILURES`
//! and still reported as FAIL. The test fails if anything else fails, or if
//! a listed identity starts passing.

use std::collections::BTreeSet;
use std::io::Write;
use std::time::Instant;

use kleinian::fixtures::test_curves;
use kleinian::verify::{run_suite, IdentityReport, Suite, VerifyConfig};
use kleinian::{ReductionContext, Tolerance};

struct Criterion {
    id: u8,
    title: &'static str,
    /// suite and sample count
    runs: &'static [(Suite, usize)],
}

const CRITERIA: [Criterion; 10] = [
    Criterion {
        id: 1,
        title: "period sanity",
        runs: &[(Suite::Periods, 1)],
    },
    Criterion {
        id: 2,
        title: "sigma normalization",
        runs: &[(Suite::Sigma, 10)],
    },
    Criterion {
        id: 3,
        title: "fundamental relations",
        runs: &[(Suite::Fundamental, 50)],
    },
    Criterion {
        id: 4,
        title: "f formulas",
        runs: &[(Suite::FFormulas, 50)],
    },
    Criterion {
        id: 5,
        title: "restrictions to k_i v",
        runs: &[(Suite::Restrictions, 20)],
    },
    Criterion {
        id: 6,
        title: "P_jk(K v) and addition",
        runs: &[(Suite::Addition, 25)],
    },
    Criterion {
        id: 7,
        title: "Jacobi inversion",
        runs: &[(Suite::Inversion, 20), (Suite::Lattice, 20)],
    },
    Criterion {
        id: 8,
        title: "Kummer bridge",
        runs: &[(Suite::Kummer, 20)],
    },
    Criterion {
        id: 9,
        title: "KdV residuals",
        runs: &[(Suite::Kdv, 20)],
    },
    Criterion {
        id: 10,
        title: "Humbert relation",
        runs: &[(Suite::Humbert, 20)],
    },
];

/// `(criterion, curve, identity)` known to fail at the stated tolerance.
const EXPECTED_FAILURES: &[(u8, &str, &str)] = &[
    // literal expansion at t = 1e-3 is dominated by O(l6 t^2) terms on
    // curves with large l6; the extrapolated limit passes
    (2, "real (2,3)", "expansion along e3"),
    (2, "real (2,3)", "expansion along e1"),
    (2, "imaginary (2,3i)", "expansion along e3"),
    (2, "imaginary (2,3i)", "expansion along e1"),
    (2, "C48,2", "expansion along e3"),
    // the closed-form al expressions carry an extra (kappa1 kappa2)^2; the ratio entry
    // of the same suite checks this exactly
    (8, "real (2,3)", "al products (rational forms)"),
    (8, "imaginary (2,3i)", "al products (rational forms)"),
    (8, "complex (1.5+0.5i,0.5-0.25i)", "al products (rational forms)"),
    (8, "C48,1", "al products (rational forms)"),
    (8, "C48,2", "al products (rational forms)"),
];

fn line(id: u8, title: &str, pass: bool, note: &str) -> String {
    let status = if pass { "PASS" } else { "FAIL" };
    format!("criterion {id:>2}  {title:<26} {status}  {note}\n")
}

#[test]
fn acceptance_criteria() {
    let tol = Tolerance::default();
    let curves: Vec<_> = test_curves()
        .into_iter()
        .map(|fx| (fx.name, ReductionContext::new(&fx.curve, &tol).expect("context")))
        .collect();

    let mut failing: BTreeSet<(u8, String, String)> = BTreeSet::new();
    let mut detail: Vec<String> = Vec::new();
    let mut outcomes = Vec::new();

    for c in &CRITERIA {
        let start = Instant::now();
        let mut pass = true;
        let mut worst = 0.0f64;
        for (name, ctx) in &curves {
            for &(suite, samples) in c.runs {
                let cfg = VerifyConfig {
                    samples,
                    ..Default::default()
                };
                let rep = run_suite(ctx, suite, &cfg).unwrap_or_else(|e| panic!("{name} {}: {e}", suite.name()));
                for id in &rep.identities {
                    if id.pass {
                        if id.threshold > 0.0 {
                            worst = worst.max(id.max_residual / id.threshold);
                        }
                    } else {
                        pass = false;
                        failing.insert((c.id, name.to_string(), id.name.clone()));
                        detail.push(describe(c.id, name, id));
                    }
                }
            }
        }
        let secs = start.elapsed().as_secs_f64();
        outcomes.push((
            c.id,
            c.title,
            pass,
            format!("worst passing residual/threshold {worst:.1e}, {secs:.1} s"),
        ));
    }

    let start = Instant::now();
    let mut control = true;
    for (name, ctx) in &curves {
        let mut l = ctx.curve.lambdas();
        l[1] += 1e-3;
        let cfg = VerifyConfig {
            samples: 50,
            lambda_override: Some(l),
            ..Default::default()
        };
        let rep = run_suite(ctx, Suite::Fundamental, &cfg).expect("fundamental");
        if rep.pass {
            control = false;
            failing.insert((11, name.to_string(), "fundamental passed with perturbed l4".into()));
        }
    }
    let note = format!(
        "perturbed l4 rejected on all curves, {:.1} s",
        start.elapsed().as_secs_f64()
    );
    outcomes.push((11, "negative control", control, note));

    // written to the raw handle so the summary shows even when output is captured
    let mut text = String::from("\n");
    for (id, title, pass, note) in &outcomes {
        text += &line(*id, title, *pass, note);
    }
    if !detail.is_empty() {
        text += "failing identities:\n";
        for d in &detail {
            text += &format!("  {d}\n");
        }
    }
    std::io::stderr().write_all(text.as_bytes()).ok();

    let expected: BTreeSet<(u8, String, String)> = EXPECTED_FAILURES
        .iter()
        .map(|(c, n, i)| (*c, n.to_string(), i.to_string()))
        .collect();
    let unexpected: Vec<_> = failing.difference(&expected).collect();
    let fixed: Vec<_> = expected.difference(&failing).collect();
    assert!(unexpected.is_empty(), "unexpected failures: {unexpected:?}");
    assert!(
        fixed.is_empty(),
        "expected failures now pass, update the registry: {fixed:?}"
    );
}

fn describe(c: u8, curve: &str, id: &IdentityReport) -> String {
    let tag = if EXPECTED_FAILURES
        .iter()
        .any(|(k, n, i)| *k == c && *n == curve && *i == id.name)
    {
        "expected"
    } else {
        "UNEXPECTED"
    };
    format!(
        "[{c}] {curve}: {} max {:.3e} threshold {:.0e} ({tag})",
        id.name, id.max_residual, id.threshold
    )
}
