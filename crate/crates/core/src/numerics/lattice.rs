use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::C64;

/// Default component-wise rounding threshold for lattice membership.
pub const LATTICE_ROUNDING: f64 = 1e-6;

/// Real coordinates of `v` in the real basis formed by `columns`
/// (2g complex vectors of dimension g).
pub fn lattice_coordinates(v: &[C64], columns: &[Vec<C64>]) -> Result<Vec<f64>> {
    let g = v.len();
    if columns.len() != 2 * g || columns.iter().any(|c| c.len() != g) {
        return Err(Error::InvalidParameters(
            "lattice needs 2g columns of dimension g".into(),
        ));
    }
    let n = 2 * g;
    let m = DMatrix::from_fn(n, n, |r, c| if r < g { columns[c][r].re } else { columns[c][r - g].im });
    let rhs = DVector::from_fn(n, |r, _| if r < g { v[r].re } else { v[r - g].im });
    let sv = m.clone().singular_values();
    let smax = sv.max();
    if !(smax > 0.0) || sv.min() <= 1e-12 * smax {
        return Err(Error::DegenerateLattice);
    }
    let sol = m.lu().solve(&rhs).ok_or(Error::DegenerateLattice)?;
    Ok(sol.iter().copied().collect())
}

/// Integer coefficients `m` with `v = sum m_i columns_i`, if the real
/// solve rounds to integers within `rounding` component-wise.
pub fn lattice_member(v: &[C64], columns: &[Vec<C64>], rounding: f64) -> Result<Option<Vec<i64>>> {
    let x = lattice_coordinates(v, columns)?;
    if x.iter().any(|c| (c - c.round()).abs() >= rounding) {
        return Ok(None);
    }
    Ok(Some(x.iter().map(|c| c.round() as i64).collect()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cols() -> Vec<Vec<C64>> {
        vec![
            vec![C64::new(1.0, 0.2), C64::new(0.1, 0.0)],
            vec![C64::new(0.3, 0.0), C64::new(1.1, -0.4)],
            vec![C64::new(0.2, 1.3), C64::new(-0.5, 0.7)],
            vec![C64::new(-0.4, 0.6), C64::new(0.3, 1.9)],
        ]
    }

    #[test]
    fn zero_is_member() {
        let z = [C64::new(0.0, 0.0); 2];
        assert_eq!(
            lattice_member(&z, &cols(), LATTICE_ROUNDING).unwrap(),
            Some(vec![0, 0, 0, 0])
        );
    }

    #[test]
    fn exact_combination() {
        let c = cols();
        let v: Vec<C64> = (0..2).map(|r| c[0][r] + 2.0 * c[2][r]).collect();
        assert_eq!(
            lattice_member(&v, &c, LATTICE_ROUNDING).unwrap(),
            Some(vec![1, 0, 2, 0])
        );
    }

    #[test]
    fn half_column_rejected() {
        let c = cols();
        let v: Vec<C64> = (0..2).map(|r| 0.5 * c[0][r]).collect();
        assert_eq!(lattice_member(&v, &c, LATTICE_ROUNDING).unwrap(), None);
    }

    #[test]
    fn degenerate_columns() {
        let mut c = cols();
        c[1] = c[0].clone();
        assert_eq!(
            lattice_member(&[C64::new(0.0, 0.0); 2], &c, LATTICE_ROUNDING),
            Err(Error::DegenerateLattice)
        );
    }
}
