//! Pietsch domination measures computed by minimizing the largest eigenvalue
//! of the weighted row outer-product sum over the probability simplex, and
//! the resulting large-subset operator-norm upgrade.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matlin::Matrix;

const MAX_ITERS: usize = 50_000;

/// A probability vector μ on the rows of T together with the achieved
/// domination constant ‖T* diag(μ)^{−1/2}‖ on the support of μ.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PietschMeasure {
    pub mu: Vec<f64>,
    pub achieved_m: f64,
}

impl PietschMeasure {
    /// The domination inequality ‖T*y‖₂² ≤ M²·Σμ_i y_i² for y supported on
    /// supp(μ), checked directly for one y.
    pub fn dominates(&self, t: &Matrix, y: &[f64], tol: f64) -> bool {
        assert_eq!(y.len(), t.nrows());
        let mut lhs = DVector::zeros(t.ncols());
        let mut rhs = 0.0;
        for (i, &yi) in y.iter().enumerate() {
            if self.mu[i] == 0.0 {
                if yi != 0.0 {
                    return true; // unconstrained off the support
                }
                continue;
            }
            lhs += yi * t.inner().row(i).transpose();
            rhs += self.mu[i] * yi * yi;
        }
        lhs.norm_squared() <= self.achieved_m * self.achieved_m * rhs + tol
    }
}

/// Minimizes λ_max(Σ_i t_i t_iᵀ/μ_i) over the simplex by a damped fixed
/// point on the optimality condition μ_i ∝ |⟨v, t_i⟩| for the leading
/// eigenvector v, with gains averaged over the leading eigenspace to handle
/// degeneracy. Zero rows are pinned to μ_i = 0.
pub fn pietsch_measure(t: &Matrix) -> Result<PietschMeasure> {
    let m = t.nrows();
    let n = t.ncols();
    let rows: Vec<DVector<f64>> = (0..m).map(|i| t.inner().row(i).transpose()).collect();
    let active: Vec<usize> = (0..m).filter(|&i| rows[i].norm() > 0.0).collect();
    if active.is_empty() {
        return Err(Error::ZeroMatrix);
    }
    let mut mu = vec![0.0; m];
    let total: f64 = active.iter().map(|&i| rows[i].norm_squared()).sum();
    for &i in &active {
        mu[i] = rows[i].norm_squared() / total;
    }
    let eval = |mu: &[f64]| -> (f64, Vec<f64>) {
        let mut w = DMatrix::zeros(n, n);
        for &i in &active {
            w += &rows[i] * rows[i].transpose() / mu[i].max(1e-300);
        }
        let eig = w.symmetric_eigen();
        let lam_max = eig
            .eigenvalues
            .iter()
            .cloned()
            .fold(f64::NEG_INFINITY, f64::max);
        let mut gains = vec![0.0; m];
        let mut count = 0usize;
        for (c, &lam) in eig.eigenvalues.iter().enumerate() {
            if lam >= lam_max * (1.0 - 1e-8) {
                count += 1;
                let v = eig.eigenvectors.column(c);
                for &i in &active {
                    let ip = rows[i].dot(&v);
                    gains[i] += ip * ip;
                }
            }
        }
        for g in &mut gains {
            *g /= count as f64;
        }
        (lam_max, gains)
    };
    let mut best_mu = mu.clone();
    let (mut best_val, mut gains) = eval(&mu);
    let mut stall = 0usize;
    for _ in 0..MAX_ITERS {
        let mut nu = vec![0.0; m];
        let mut z: f64 = 0.0;
        for &i in &active {
            nu[i] = gains[i].sqrt();
            z += nu[i];
        }
        if z == 0.0 {
            break;
        }
        for &i in &active {
            mu[i] = 0.5 * mu[i] + 0.5 * nu[i] / z;
        }
        let (val, g) = eval(&mu);
        gains = g;
        if val < best_val * (1.0 - 1e-9) {
            best_val = val;
            best_mu = mu.clone();
            stall = 0;
        } else {
            if val < best_val {
                best_val = val;
                best_mu = mu.clone();
            }
            stall += 1;
            if stall >= 25 {
                break;
            }
        }
    }
    Ok(PietschMeasure {
        mu: best_mu,
        achieved_m: best_val.sqrt(),
    })
}

/// The Lemma-2.4 subset σ = {i : μ_i ≤ 1/(mε)} for the computed Pietsch
/// measure of T; |σ| ≥ (1−ε)m and the row restriction obeys the
/// √(π/(2εm))·‖T‖_{ℓ2→ℓ1} operator-norm bound.
pub fn grothendieck_pietsch_subset(t: &Matrix, eps: f64) -> Result<Vec<usize>> {
    assert!(eps > 0.0 && eps < 1.0);
    let m = t.nrows();
    let measure = pietsch_measure(t)?;
    let cutoff = 1.0 / (m as f64 * eps);
    Ok((0..m).filter(|&i| measure.mu[i] <= cutoff).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matlin::norms::norm_2_to_1;
    use crate::test_util::random_matrix;
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    #[test]
    fn identity_measure_uniform() {
        let m = 6;
        let t = Matrix::identity(m);
        let p = pietsch_measure(&t).unwrap();
        for &mu in &p.mu {
            assert!((mu - 1.0 / m as f64).abs() < 1e-6, "mu {mu}");
        }
        assert!((p.achieved_m - (m as f64).sqrt()).abs() < 1e-5);
    }

    #[test]
    fn single_row_gets_all_mass() {
        let mut data = DMatrix::zeros(4, 3);
        data[(2, 0)] = 3.0;
        data[(2, 1)] = 4.0;
        let t = Matrix::new(data);
        let p = pietsch_measure(&t).unwrap();
        assert!((p.mu[2] - 1.0).abs() < 1e-9);
        assert!((p.achieved_m - 5.0).abs() < 1e-6);
    }

    #[test]
    fn little_grothendieck_guarantee() {
        for seed in 0..10 {
            let t = random_matrix(6, 6, 1000 + seed);
            let p = pietsch_measure(&t).unwrap();
            let norm21 = norm_2_to_1(&t, 22).unwrap();
            assert!(
                p.achieved_m <= (std::f64::consts::PI / 2.0).sqrt() * norm21 + 1e-6,
                "seed {seed}: {} vs {}",
                p.achieved_m,
                norm21
            );
        }
    }

    #[test]
    fn simplex_membership() {
        let t = random_matrix(4, 7, 44);
        let p = pietsch_measure(&t).unwrap();
        let sum: f64 = p.mu.iter().sum();
        assert!((sum - 1.0).abs() < 1e-10);
        assert!(p.mu.iter().all(|&x| x >= 0.0));
    }

    #[test]
    fn domination_on_random_directions() {
        let t = random_matrix(5, 8, 45);
        let p = pietsch_measure(&t).unwrap();
        let mut rng = StdRng::seed_from_u64(7);
        for _ in 0..1000 {
            let y: Vec<f64> = (0..t.nrows())
                .map(|_| rng.random_range(-1.0..1.0))
                .collect();
            assert!(p.dominates(&t, &y, 1e-8));
        }
    }

    #[test]
    fn gp_subset_identity_keeps_all() {
        let t = Matrix::identity(5);
        let sigma = grothendieck_pietsch_subset(&t, 0.3).unwrap();
        assert_eq!(sigma, vec![0, 1, 2, 3, 4]);
    }

    #[test]
    fn gp_subset_drops_heavy_row() {
        let mut data = DMatrix::identity(6, 6);
        data[(3, 3)] = 40.0;
        let t = Matrix::new(data);
        let sigma = grothendieck_pietsch_subset(&t, 0.3).unwrap();
        assert!(!sigma.contains(&3));
        assert!(sigma.len() >= 4); // ≥ (1−ε)m rounded down
    }

    #[test]
    fn gp_subset_postconditions() {
        let t = random_matrix(5, 8, 46);
        let eps = 0.4;
        let m = t.nrows() as f64;
        let sigma = grothendieck_pietsch_subset(&t, eps).unwrap();
        assert!(sigma.len() as f64 >= (1.0 - eps) * m);
        let sub = Matrix::new(DMatrix::from_fn(sigma.len(), t.ncols(), |i, j| {
            t.inner()[(sigma[i], j)]
        }));
        let lhs = sub.schatten_norm(f64::INFINITY);
        let norm21 = norm_2_to_1(&t, 22).unwrap();
        let rhs = (std::f64::consts::PI / (2.0 * eps * m)).sqrt() * norm21;
        assert!(lhs <= rhs + 1e-6, "{lhs} vs {rhs}");
    }
}
