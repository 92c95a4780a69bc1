//! Deterministic matrix generators for experiments and tests.

use nalgebra::{DMatrix, DVector};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};
use crate::matlin::Matrix;

/// Diagonal matrix with s_j = 1/√j, the slowly decaying spectrum family.
pub fn harmonic(m: usize) -> Matrix {
    Matrix::new(DMatrix::from_diagonal(&DVector::from_fn(m, |j, _| {
        1.0 / ((j + 1) as f64).sqrt()
    })))
}

/// Symmetric square root of B = (m+1)I − J (diagonal m, off-diagonal −1).
///
/// B has eigenvalue 1 on the all-ones vector and m+1 on its complement, so
/// the root is computed exactly from that eigenstructure.
pub fn circulant_sqrt(m: usize) -> Matrix {
    let mf = m as f64;
    let ones = DMatrix::from_element(m, m, 1.0 / mf);
    let eye = DMatrix::identity(m, m);
    // √B = 1·P_ones + √(m+1)·(I − P_ones)
    let a = &ones + (&eye - &ones) * (mf + 1.0).sqrt();
    Matrix::new(a)
}

/// Matrix with i.i.d. standard Gaussian entries, fully determined by `seed`.
pub fn gaussian(n: usize, m: usize, seed: u64) -> Matrix {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Matrix::new(DMatrix::from_fn(n, m, |_, _| {
        StandardNormal.sample(&mut rng)
    }))
}

/// Gaussian matrix with every column normalized to unit Euclidean length.
pub fn unit_columns(n: usize, m: usize, seed: u64) -> Matrix {
    let g = gaussian(n, m, seed);
    let mut d = g.inner().clone();
    for mut c in d.column_iter_mut() {
        let norm = c.norm();
        if norm > 0.0 {
            c /= norm;
        }
    }
    Matrix::new(d)
}

/// Dispatch by generator name, as used by the command line.
pub fn generate(kind: &str, n: usize, m: usize, seed: u64) -> Result<Matrix> {
    if m == 0 {
        return Err(Error::BadParams("m must be positive".into()));
    }
    match kind {
        "identity" => Ok(Matrix::identity(m)),
        "harmonic" => Ok(harmonic(m)),
        "circulant-sqrt" => Ok(circulant_sqrt(m)),
        "gaussian" => {
            if n == 0 {
                return Err(Error::BadParams("n must be positive".into()));
            }
            Ok(gaussian(n, m, seed))
        }
        "unit-columns" => {
            if n == 0 {
                return Err(Error::BadParams("n must be positive".into()));
            }
            Ok(unit_columns(n, m, seed))
        }
        other => Err(Error::UnknownGenerator(other.into())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn harmonic_singular_values() {
        let a = harmonic(16);
        let s = a.singular_values().unwrap();
        for (j, &v) in s.iter().enumerate() {
            assert!((v - 1.0 / ((j + 1) as f64).sqrt()).abs() < 1e-12);
        }
    }

    #[test]
    fn circulant_gram_structure() {
        let m = 5;
        let a = circulant_sqrt(m);
        let gram = a.inner().transpose() * a.inner();
        for i in 0..m {
            for j in 0..m {
                let expect = if i == j { m as f64 } else { -1.0 };
                assert!((gram[(i, j)] - expect).abs() < 1e-10, "({i},{j})");
            }
        }
    }

    #[test]
    fn generators_are_deterministic() {
        let a = gaussian(4, 6, 99);
        let b = gaussian(4, 6, 99);
        assert_eq!(&a, &b);
        let u = unit_columns(5, 3, 7);
        for j in 0..3 {
            assert!((u.column(j).norm() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn unknown_generator_rejected() {
        assert!(generate("nope", 2, 2, 0).is_err());
    }
}
