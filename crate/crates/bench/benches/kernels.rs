use criterion::{black_box, criterion_group, criterion_main, Criterion};
use kleinian::fixtures::test_curves;
use kleinian::periods::periods_g2;
use kleinian::theta_sigma::{theta_g2, CharacteristicG2};
use kleinian::verify::{run_suite, Suite, VerifyConfig};
use kleinian::{c64, ReductionContext, SigmaG2Evaluator, Tolerance};
use nalgebra::Vector2;

fn periods(c: &mut Criterion) {
    let tol = Tolerance::default();
    for fx in test_curves().into_iter().take(3) {
        c.bench_function(&format!("periods_g2 {}", fx.name), |b| {
            b.iter(|| periods_g2(black_box(&fx.curve), &tol).unwrap())
        });
    }
}

fn theta(c: &mut Criterion) {
    let s = SigmaG2Evaluator::new(&test_curves()[0].curve, &Tolerance::default()).unwrap();
    let z = [c64(0.13, -0.07), c64(0.02, 0.11)];
    let ch = CharacteristicG2::reference();
    for order in [0u8, 3] {
        c.bench_function(&format!("theta_g2 order {order}"), |b| {
            b.iter(|| theta_g2(&ch, black_box(z), &s.periods.tau, order, 1e-15).unwrap())
        });
    }
}

fn wp(c: &mut Criterion) {
    let s = SigmaG2Evaluator::new(&test_curves()[2].curve, &Tolerance::default()).unwrap();
    let u = Vector2::new(c64(0.21, -0.13), c64(0.04, 0.09));
    c.bench_function("sigma", |b| b.iter(|| s.sigma(black_box(&u)).unwrap()));
    c.bench_function("wp_all", |b| b.iter(|| s.wp_all(black_box(&u)).unwrap()));
}

fn suites(c: &mut Criterion) {
    let ctx = ReductionContext::new(&test_curves()[0].curve, &Tolerance::default()).unwrap();
    let cfg = VerifyConfig {
        samples: 10,
        ..Default::default()
    };
    let mut g = c.benchmark_group("suites");
    g.sample_size(10);
    for s in [Suite::Fundamental, Suite::Kummer] {
        g.bench_function(s.name(), |b| b.iter(|| run_suite(&ctx, s, &cfg).unwrap()));
    }
    g.finish();
}

criterion_group!(benches, periods, theta, wp, suites);
criterion_main!(benches);
