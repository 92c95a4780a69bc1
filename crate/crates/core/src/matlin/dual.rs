use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};

use super::Matrix;

/// Dual basis {v_j} of the columns {A e_j}_{j ∈ ω} inside their span, with
/// the leverage quantities ℓ_j = ‖v_j‖² = 1/‖P_{F_j} A e_j‖².
#[derive(Debug, Clone)]
pub struct DualBasis {
    pub omega: Vec<usize>,
    pub vectors: Vec<DVector<f64>>,
    pub leverage: Vec<f64>,
}

impl DualBasis {
    /// `M = max_j ℓ_j^{1/2}`, the largest reciprocal projection length.
    pub fn max_leverage_sqrt(&self) -> f64 {
        self.leverage.iter().cloned().fold(0.0, f64::max).sqrt()
    }
}

impl Matrix {
    /// Dual basis via `v_j = (AJ_ω)((AJ_ω)ᵀ(AJ_ω))⁻¹ e_j`; the leverage is the
    /// j-th diagonal entry of the inverse Gram matrix.
    pub fn dual_basis(&self, omega: &[usize]) -> Result<DualBasis> {
        let sub = self.restrict(omega);
        if sub.rank() < omega.len() {
            return Err(Error::RankDeficient {
                rank: sub.rank(),
                wanted: omega.len(),
            });
        }
        let gram = sub.inner().transpose() * sub.inner();
        let inv = invert_spd(&gram).ok_or(Error::RankDeficient {
            rank: sub.rank(),
            wanted: omega.len(),
        })?;
        let w = sub.inner() * &inv;
        let vectors: Vec<DVector<f64>> =
            (0..omega.len()).map(|j| w.column(j).into_owned()).collect();
        let leverage: Vec<f64> = (0..omega.len()).map(|j| inv[(j, j)]).collect();
        Ok(DualBasis {
            omega: omega.to_vec(),
            vectors,
            leverage,
        })
    }
}

fn invert_spd(g: &DMatrix<f64>) -> Option<DMatrix<f64>> {
    let chol = g.clone().cholesky()?;
    Some(chol.inverse())
}

/// Moore–Penrose pseudo-inverse of a full-column-rank matrix.
pub(crate) fn pinv_full_rank(b: &DMatrix<f64>) -> Option<DMatrix<f64>> {
    let gram = b.transpose() * b;
    let inv = invert_spd(&gram)?;
    Some(inv * b.transpose())
}
