use crate::C64;

/// Evaluates a polynomial given by coefficients in ascending degree.
pub fn poly_eval(coeffs: &[C64], x: C64) -> C64 {
    coeffs.iter().rev().fold(C64::new(0.0, 0.0), |acc, &c| acc * x + c)
}

fn poly_eval_with_derivative(coeffs: &[C64], x: C64) -> (C64, C64) {
    let mut p = C64::new(0.0, 0.0);
    let mut dp = C64::new(0.0, 0.0);
    for &c in coeffs.iter().rev() {
        dp = dp * x + p;
        p = p * x + c;
    }
    (p, dp)
}

/// All complex roots of a polynomial (ascending coefficients, nonzero
/// leading term) by Aberth-Ehrlich iteration.
pub fn poly_roots(coeffs: &[C64]) -> Vec<C64> {
    let n = coeffs.len() - 1;
    let lead = coeffs[n];
    let monic: Vec<C64> = coeffs.iter().map(|c| c / lead).collect();
    let radius = 1.0 + monic[..n].iter().map(|c| c.norm()).fold(0.0, f64::max);
    let mut z: Vec<C64> = (0..n)
        .map(|k| C64::from_polar(radius, 2.0 * std::f64::consts::PI * (k as f64 + 0.25) / n as f64 + 0.4))
        .collect();
    for _ in 0..500 {
        let mut moved = 0.0f64;
        for i in 0..n {
            let (p, dp) = poly_eval_with_derivative(&monic, z[i]);
            if p.norm() == 0.0 {
                continue;
            }
            let ratio = p / dp;
            let s: C64 = (0..n).filter(|&j| j != i).map(|j| 1.0 / (z[i] - z[j])).sum();
            let step = ratio / (1.0 - ratio * s);
            z[i] -= step;
            moved = moved.max(step.norm() / (1.0 + z[i].norm()));
        }
        if moved < 1e-16 {
            break;
        }
    }
    z
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn roots_of_known_cubic() {
        let r = [C64::new(0.0, 0.0), C64::new(1.0, 0.0), C64::new(0.04, 0.0)];
        // x (x - 1) (x - 1/25)
        let coeffs = [
            C64::new(0.0, 0.0),
            C64::new(0.04, 0.0),
            C64::new(-1.04, 0.0),
            C64::new(1.0, 0.0),
        ];
        let found = poly_roots(&coeffs);
        for t in r {
            assert!(found.iter().any(|f| (f - t).norm() < 1e-13), "{found:?}");
        }
    }

    #[test]
    fn horner_matches_direct() {
        let c = [C64::new(1.0, 1.0), C64::new(-2.0, 0.0), C64::new(0.5, 0.0)];
        let x = C64::new(0.3, -0.7);
        assert!((poly_eval(&c, x) - (c[0] + c[1] * x + c[2] * x * x)).norm() < 1e-15);
    }
}
