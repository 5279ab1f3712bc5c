use std::sync::OnceLock;

use kleinian::curves::{alpha_beta_from_e, e_from_alpha_beta, phi, phi_preimage};
use kleinian::fixtures::test_curves;
use kleinian::numerics::{integrate_segment, lattice_member, LATTICE_ROUNDING};
use kleinian::theta_sigma::WpIndex;
use kleinian::{c64, PathSegment, ReductionContext, Tolerance, C64};
use nalgebra::Vector2;
use proptest::prelude::*;

fn ctx() -> &'static ReductionContext {
    static CTX: OnceLock<ReductionContext> = OnceLock::new();
    CTX.get_or_init(|| ReductionContext::new(&test_curves()[2].curve, &Tolerance::default()).unwrap())
}

fn rel(a: C64, b: C64) -> f64 {
    (a - b).norm() / a.norm().max(b.norm()).max(1.0)
}

fn cplx(r: f64) -> impl Strategy<Value = C64> {
    (-r..r, -r..r).prop_map(|(a, b)| c64(a, b))
}

fn small_u() -> impl Strategy<Value = Vector2<C64>> {
    (cplx(0.3), cplx(0.05)).prop_map(|(a, b)| Vector2::new(a, b))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn quadrature_is_linear_and_reverses(a in cplx(2.0), b in cplx(2.0), s in cplx(3.0), t in cplx(3.0)) {
        prop_assume!((a - b).norm() > 1e-2);
        let tol = Tolerance::default();
        let seg = PathSegment::new(a, b, false, false).unwrap();
        let f = |z: C64| z * z + 1.0;
        let g = |z: C64| (0.5 * z).exp();
        let lhs = integrate_segment(|z| s * f(z) + t * g(z), &seg, &tol).unwrap();
        let rhs = s * integrate_segment(f, &seg, &tol).unwrap() + t * integrate_segment(g, &seg, &tol).unwrap();
        prop_assert!(rel(lhs, rhs) < 1e-11);
        let back = integrate_segment(f, &seg.reversed(), &tol).unwrap();
        prop_assert!(rel(back, -integrate_segment(f, &seg, &tol).unwrap()) < 1e-12);
        let exact = (b * b * b - a * a * a) / 3.0 + b - a;
        prop_assert!(rel(integrate_segment(f, &seg, &tol).unwrap(), exact) < 1e-12);
    }

    #[test]
    fn lattice_vectors_are_recovered(m in prop::array::uniform4(-6i64..=6)) {
        let p = &ctx().sigma.periods;
        let v = p.lattice_vector([m[0], m[1]], [m[2], m[3]]);
        let got = lattice_member(&[v[0], v[1]], &p.lattice_columns(), LATTICE_ROUNDING).unwrap();
        prop_assert_eq!(got, Some(m.to_vec()));
    }

    #[test]
    fn half_lattice_vectors_are_not_members(m in prop::array::uniform4(-6i64..=6), k in 0usize..4) {
        let p = &ctx().sigma.periods;
        let v = p.lattice_vector([m[0], m[1]], [m[2], m[3]]);
        let cols = p.lattice_columns();
        let w = [v[0] + 0.5 * cols[k][0], v[1] + 0.5 * cols[k][1]];
        prop_assert_eq!(lattice_member(&w, &cols, LATTICE_ROUNDING).unwrap(), None);
    }

    #[test]
    fn covers_map_onto_the_quotients(x in cplx(8.0), i in 1u8..=2) {
        let c = ctx();
        let p = c.curve.point_at(x);
        let s = phi(&c.curve, i, &p);
        let e = &c.e[(i - 1) as usize];
        prop_assert!(e.residual(&s) < 1e-9);
        let (p1, p2) = phi_preimage(&c.curve, i, &s);
        prop_assert!(c.curve.residual(&p1) < 1e-8 && c.curve.residual(&p2) < 1e-8);
        let d = p.distance(&p1).min(p.distance(&p2));
        prop_assert!(d < 1e-7 * (1.0 + x.norm()), "{d:e}");
    }

    #[test]
    fn e_parameters_round_trip(e1 in cplx(4.0), e2 in cplx(4.0)) {
        let ok = [e1 - 1.0, e1 + 1.0, e2 - 1.0, e2 + 1.0, e1 - e2, e1 + e2, e1, e2]
            .iter()
            .all(|z| z.norm() > 0.1);
        prop_assume!(ok);
        let (a, b) = alpha_beta_from_e(e1, e2).unwrap();
        let (f1, f2) = e_from_alpha_beta(a, b).unwrap();
        prop_assert!(rel(f1, e1) < 1e-10 && rel(f2, e2) < 1e-10);
    }

    #[test]
    fn sigma_odd_and_wp_even(u in small_u()) {
        let s = &ctx().sigma;
        prop_assume!(s.sigma(&u).unwrap().norm() > 1e-6);
        prop_assert!(rel(s.sigma(&-u).unwrap(), -s.sigma(&u).unwrap()) < 1e-10);
        for w in [WpIndex::P11, WpIndex::P13, WpIndex::P33] {
            prop_assert!(rel(s.wp(w, &-u).unwrap(), s.wp(w, &u).unwrap()) < 1e-9);
        }
    }

    #[test]
    fn wp_is_lattice_periodic(u in small_u(), m in prop::array::uniform4(-2i64..=2)) {
        let s = &ctx().sigma;
        prop_assume!(s.sigma(&u).unwrap().norm() > 1e-6);
        let w = u + s.lattice_vector([m[0], m[1]], [m[2], m[3]]);
        for j in [WpIndex::P11, WpIndex::P13, WpIndex::P33] {
            prop_assert!(rel(s.wp(j, &w).unwrap(), s.wp(j, &u).unwrap()) < 1e-7);
        }
    }

    #[test]
    fn q_is_antisymmetric(u in small_u(), v in small_u()) {
        let c = ctx();
        prop_assume!(c.sigma.sigma(&u).unwrap().norm() > 1e-6 && c.sigma.sigma(&v).unwrap().norm() > 1e-6);
        let a = c.q_functions(&u, &v).unwrap();
        let b = c.q_functions(&v, &u).unwrap();
        let scale = a.q.norm().max(1.0);
        prop_assert!((a.q + b.q).norm() / scale < 1e-10);
    }
}
