use nalgebra::DVector;

use crate::error::{Error, Result};

use super::Matrix;

/// `‖T‖_{ℓ∞→ℓ2} = max_{x ∈ {−1,1}^m} ‖Tx‖₂`, by exact enumeration of sign
/// vectors. The maximum over the cube is attained at a vertex, and ±x give the
/// same value, so `2^{m−1}` evaluations suffice; a Gray-code walk updates
/// `Tx` one column flip at a time.
pub fn norm_inf_to_2(t: &Matrix, exact_cap: usize) -> Result<f64> {
    let m = t.ncols();
    if m > exact_cap {
        return Err(Error::TooLarge {
            cap: exact_cap,
            got: m,
        });
    }
    // start at x = all ones; fix x_{m-1} = +1 to quotient out the ± symmetry
    let cols: Vec<DVector<f64>> = (0..m).map(|j| t.column(j)).collect();
    let mut y: DVector<f64> = cols
        .iter()
        .fold(DVector::zeros(t.nrows()), |acc, c| acc + c);
    let mut best = y.norm_squared();
    let steps: u64 = 1u64 << (m - 1);
    let mut signs = vec![1.0f64; m];
    for g in 1..steps {
        // Gray code: flip the lowest set bit position of g
        let j = g.trailing_zeros() as usize;
        signs[j] = -signs[j];
        y += cols[j].scale(2.0 * signs[j]);
        let v = y.norm_squared();
        if v > best {
            best = v;
        }
    }
    Ok(best.sqrt())
}

/// `‖T‖_{ℓ2→ℓ1} = ‖Tᵀ‖_{ℓ∞→ℓ2}` by duality.
pub fn norm_2_to_1(t: &Matrix, exact_cap: usize) -> Result<f64> {
    let tt = Matrix::new(t.inner().transpose());
    norm_inf_to_2(&tt, exact_cap)
}
