//! Seeded random instances shared by the unit and integration test suites.
#![doc(hidden)]

use nalgebra::DMatrix;

use crate::gen::gaussian;
use crate::matlin::Matrix;

pub fn random_matrix(n: usize, m: usize, seed: u64) -> Matrix {
    gaussian(n, m, seed)
}

/// Random rank-r orthogonal projector in ℝ^n.
pub fn random_projector(n: usize, r: usize, seed: u64) -> DMatrix<f64> {
    assert!(r <= n);
    if r == 0 {
        return DMatrix::zeros(n, n);
    }
    let g = gaussian(n, r, seed);
    let q = g.orthonormal_span(&(0..r).collect::<Vec<_>>());
    assert_eq!(q.ncols(), r);
    &q * q.transpose()
}
