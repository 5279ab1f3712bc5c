//! The default grid of test curves.

use crate::curves::CurveV;
use crate::{c64, C64};

#[derive(Debug, Clone, Copy)]
pub struct Fixture {
    pub name: &'static str,
    pub curve: CurveV,
}

/// `(alpha, beta)` for the curves of type C48 built from the sextic
/// model `s^2 - a^2/r^2`, `s^2 - b^2/r^2`.
fn c48(a: C64, b: C64, r: f64) -> (C64, C64) {
    let alpha = ((a + r) * (b + r) / ((a - r) * (b - r))).sqrt();
    let beta = ((a - r) * (b + r) / ((a + r) * (b - r))).sqrt();
    (alpha, beta)
}

pub fn c48_first() -> (C64, C64) {
    let s7 = 7f64.sqrt();
    let a = c64(5.0 + 2.0 * s7, 0.0).sqrt();
    let b = c64(5.0 - 2.0 * s7, 0.0).sqrt();
    c48(a, b, 2.0)
}

pub fn c48_second() -> (C64, C64) {
    let sm7 = c64(-7.0, 0.0).sqrt();
    let a = (-7.0 - 7.0 * sm7).sqrt();
    let b = (-7.0 + 7.0 * sm7).sqrt();
    c48(a, b, 6f64.sqrt())
}

/// Real, imaginary, generic complex and the two C48 curves.
pub fn test_curves() -> Vec<Fixture> {
    let mk = |name, (a, b): (C64, C64)| Fixture {
        name,
        curve: CurveV::new(a, b).expect("fixture curve"),
    };
    vec![
        mk("real (2,3)", (c64(2.0, 0.0), c64(3.0, 0.0))),
        mk("imaginary (2,3i)", (c64(2.0, 0.0), c64(0.0, 3.0))),
        mk("complex (1.5+0.5i,0.5-0.25i)", (c64(1.5, 0.5), c64(0.5, -0.25))),
        mk("C48,1", c48_first()),
        mk("C48,2", c48_second()),
    ]
}
