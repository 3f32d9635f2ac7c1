//! Lattice Chern numbers by plaquette products of link overlaps.

use std::f64::consts::PI;

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::bott::{Fiber, ProjectorField};
use crate::error::{HncError, Result};

/// Fixes the global sign so that the Bott field at mass 1 has Chern number +1.
pub const CHERN_ORIENTATION: f64 = 1.0;

pub const QUANTIZATION_TOL: f64 = 0.01;

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ChernReport {
    pub value: i64,
    pub raw: f64,
    pub grid: usize,
    pub doubled_grid_value: i64,
}

/// Orthonormal basis (columns) of the range of a Hermitian projection.
fn range_basis(p: &Fiber) -> DMatrix<Complex64> {
    let eig = SymmetricEigen::new(*p);
    let cols: Vec<usize> = (0..2).filter(|&i| eig.eigenvalues[i] > 0.5).collect();
    DMatrix::from_fn(2, cols.len(), |r, c| eig.eigenvectors[(r, cols[c])])
}

fn link(a: &DMatrix<Complex64>, b: &DMatrix<Complex64>) -> Complex64 {
    if a.ncols() == 0 {
        return Complex64::new(1.0, 0.0);
    }
    (a.adjoint() * b).determinant()
}

/// Unoriented sum of plaquette phases over 2π.
pub fn raw_chern(field: &ProjectorField) -> f64 {
    let g = field.grid;
    let basis: Vec<DMatrix<Complex64>> = field.samples.iter().map(range_basis).collect();
    let at = |i: usize, j: usize| &basis[(i % g) * g + (j % g)];
    let mut total = 0.0;
    for i in 0..g {
        for j in 0..g {
            let w = link(at(i, j), at(i + 1, j))
                * link(at(i + 1, j), at(i + 1, j + 1))
                * link(at(i + 1, j + 1), at(i, j + 1))
                * link(at(i, j + 1), at(i, j));
            total += w.arg();
        }
    }
    total / (2.0 * PI)
}

fn quantize(raw: f64) -> Result<i64> {
    let v = raw.round();
    if (raw - v).abs() > QUANTIZATION_TOL {
        return Err(HncError::NotQuantized(format!("plaquette sum {raw:.6} is not near an integer")));
    }
    Ok(v as i64)
}

/// Oriented lattice Chern number, checked on the field's grid and on twice
/// that grid.
pub fn lattice_chern(field: &ProjectorField) -> Result<ChernReport> {
    let raw = CHERN_ORIENTATION * raw_chern(field);
    let value = quantize(raw)?;
    let doubled = quantize(CHERN_ORIENTATION * raw_chern(&field.resample(2 * field.grid)?))?;
    if doubled != value {
        return Err(HncError::NotConverged(format!(
            "Chern number {value} at grid {} but {doubled} at grid {}",
            field.grid,
            2 * field.grid
        )));
    }
    Ok(ChernReport {
        value,
        raw,
        grid: field.grid,
        doubled_grid_value: doubled,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fredholm::bott::{bott_projector, constant_projector};

    #[test]
    fn bott_chern_numbers() {
        for g in [16, 32, 64] {
            assert_eq!(lattice_chern(&bott_projector(g, 1.0).unwrap()).unwrap().value, 1);
        }
        assert_eq!(lattice_chern(&bott_projector(16, -1.0).unwrap()).unwrap().value, -1);
        assert_eq!(lattice_chern(&bott_projector(16, 3.0).unwrap()).unwrap().value, 0);
        assert_eq!(lattice_chern(&bott_projector(16, -2.5).unwrap()).unwrap().value, 0);
    }

    #[test]
    fn flat_fields() {
        let mut m = Fiber::zeros();
        m[(0, 0)] = Complex64::new(1.0, 0.0);
        assert_eq!(lattice_chern(&constant_projector(16, m).unwrap()).unwrap().value, 0);
        assert_eq!(lattice_chern(&constant_projector(16, Fiber::identity()).unwrap()).unwrap().value, 0);
    }
}
