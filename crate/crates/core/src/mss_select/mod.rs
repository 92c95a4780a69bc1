//! Interlacing and barrier machinery: expected characteristic polynomials,
//! soft spectral edges, the γ and refined barrier lower bounds, and a greedy
//! conditional-expectation selector whose certificate is s_min² ≥ γ/m.

mod poly;

pub use poly::Polynomial;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matlin::{Matrix, SelectionMethod, SubsetSelection};

/// Largest ambient dimension for which determinant expansions are attempted.
pub const DET_DIM_CAP: usize = 64;

/// Evaluation of the barrier lower bounds for a given (A, k).
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BarrierEval {
    /// The φ achieving `value`.
    pub phi: f64,
    /// The refined lower bound: sup over φ of −k/φ + Σ 1/(1/s_i² + φ).
    pub value: f64,
    /// Closed-form maximizer of the relaxed (Jensen) bound.
    pub phi_max: f64,
    /// The relaxed bound rank·(√rank−√k)²/Σ(1/s_i²).
    pub gamma: f64,
}

/// Returns f − s2·f′, one factor of the Π(I − s_i²D) product.
pub fn apply_shift_derivative(f: &Polynomial, s2: f64) -> Polynomial {
    f.add(&f.derivative().scale(-s2))
}

/// Π_{i ≤ rank}(I − s_i²D) applied to x^k; degree exactly k.
pub fn g_poly(s: &[f64], rank: usize, k: usize) -> Polynomial {
    assert!(k >= 1 && rank >= 1 && rank <= s.len());
    let mut f = Polynomial::monomial(k);
    for &si in s.iter().take(rank) {
        f = apply_shift_derivative(&f, si * si);
    }
    f
}

/// Elementary symmetric polynomials e_0..e_d of the given values.
fn elementary_symmetric(vals: &[f64], d: usize) -> Vec<f64> {
    let mut e = vec![0.0; d + 1];
    e[0] = 1.0;
    for &v in vals {
        for j in (1..=d).rev() {
            e[j] += v * e[j - 1];
        }
    }
    e
}

/// The expected characteristic polynomial q of Σ_{t≤k} w_t⊗w_t for uniform
/// columns, computed by two independent routes that must agree to relative
/// 1e-8: the operator product x^{n−k}·g and the elementary-symmetric
/// expansion of the bivariate determinant.
pub fn expected_char_poly(a: &Matrix, k: usize) -> Result<Polynomial> {
    let n = a.nrows();
    assert!(k >= 1 && k <= n);
    let rank = a.rank();
    let s = a.singular_values()?;
    let via_g = g_poly(&s, rank, k).shift_up(n - k);
    // x^{n−rank}·Σ_j (−1)^j k!/(k−j)!·e_j(s²)·x^{rank−j}
    let s2: Vec<f64> = s.iter().take(rank).map(|x| x * x).collect();
    let d = k.min(rank);
    let e = elementary_symmetric(&s2, d);
    let mut coeffs = vec![0.0; rank + 1];
    let mut falling = 1.0;
    for (j, &ej) in e.iter().enumerate().take(d + 1) {
        let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
        coeffs[rank - j] = sign * falling * ej;
        falling *= (k - j) as f64;
    }
    let via_det = Polynomial::new(coeffs).shift_up(n - rank);
    let rel = via_g.rel_distance(&via_det);
    if rel > 1e-8 {
        return Err(Error::IdentityMismatch { rel });
    }
    Ok(via_g)
}

/// Soft spectral edge: the smallest real b with f′(b) = −φf(b). Always at
/// most the smallest root of f.
pub fn smin_phi(f: &Polynomial, phi: f64) -> Result<f64> {
    assert!(phi > 0.0);
    f.real_roots(1e-7)?;
    let h = f.derivative().add(&f.scale(phi));
    let roots = h.real_roots(1e-7)?;
    roots.first().copied().ok_or(Error::RootFindingFailure)
}

/// The relaxed barrier constant γ = rank·(√rank−√k)²/Σ 1/s_i².
pub fn gamma(a: &Matrix, k: usize) -> Result<f64> {
    let rank = a.rank();
    if k >= rank {
        return Err(Error::KTooLarge { k, rank });
    }
    let s = a.singular_values()?;
    let sum_inv: f64 = s.iter().take(rank).map(|x| 1.0 / (x * x)).sum();
    let rk = rank as f64;
    Ok(rk * (rk.sqrt() - (k as f64).sqrt()).powi(2) / sum_inv)
}

/// γ, φ_max, and the refined supremum of −k/φ + Σ s_i²/(1+φs_i²) over φ > 0,
/// located by golden-section search on log φ seeded at φ_max.
pub fn barrier_bound(a: &Matrix, k: usize) -> Result<BarrierEval> {
    let rank = a.rank();
    if k >= rank {
        return Err(Error::KTooLarge { k, rank });
    }
    let s = a.singular_values()?;
    let inv2: Vec<f64> = s.iter().take(rank).map(|x| 1.0 / (x * x)).collect();
    let sum_inv: f64 = inv2.iter().sum();
    let rk = rank as f64;
    let kf = k as f64;
    let gamma = rk * (rk.sqrt() - kf.sqrt()).powi(2) / sum_inv;
    let phi_max = kf.sqrt() / (rk.sqrt() - kf.sqrt()) * (sum_inv / rk);
    let objective =
        |phi: f64| -> f64 { -kf / phi + inv2.iter().map(|&w| 1.0 / (w + phi)).sum::<f64>() };
    let center = sum_inv / rk;
    let (mut lo, mut hi) = ((center * 1e-6).ln(), (center * 1e6).ln());
    let gr = (5.0f64.sqrt() - 1.0) / 2.0;
    let mut x1 = hi - gr * (hi - lo);
    let mut x2 = lo + gr * (hi - lo);
    let mut f1 = objective(x1.exp());
    let mut f2 = objective(x2.exp());
    for _ in 0..200 {
        if f1 < f2 {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + gr * (hi - lo);
            f2 = objective(x2.exp());
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - gr * (hi - lo);
            f1 = objective(x1.exp());
        }
    }
    let mut best = (phi_max, objective(phi_max));
    let searched = 0.5 * (lo + hi);
    let fs = objective(searched.exp());
    if fs > best.1 {
        best = (searched.exp(), fs);
    }
    debug_assert!(best.1 >= gamma - 1e-12 * gamma.max(1.0));
    Ok(BarrierEval {
        phi: best.0,
        value: best.1,
        phi_max,
        gamma,
    })
}

/// (I−∂_y)^{k−t} det(xI − B + yQ) at y = 0, with B the rank-one sum of the
/// prefix columns scaled by m and Q = AAᵀ. The determinant is interpolated
/// in y from symmetric eigendecompositions at Chebyshev nodes.
pub fn conditional_expected_char_poly(
    a: &Matrix,
    prefix: &[usize],
    k: usize,
) -> Result<Polynomial> {
    let n = a.nrows();
    if n > DET_DIM_CAP {
        return Err(Error::DimTooLarge {
            dim: n,
            cap: DET_DIM_CAP,
        });
    }
    let t = prefix.len();
    assert!(t <= k && k <= n);
    let m = a.ncols() as f64;
    let q_mat = a.inner() * a.inner().transpose();
    let mut b = DMatrix::zeros(n, n);
    for &j in prefix {
        let col = a.column(j);
        b += m * &col * col.transpose();
    }
    let ry = a.rank();
    let s1 = a.singular_values()?[0];
    let yscale = (s1 * s1).max(1.0);
    // Chebyshev nodes in a normalized variable u = y/yscale; interpolating
    // in u keeps the Vandermonde entries in [−1, 1] and well conditioned.
    let unodes: Vec<f64> = (0..=ry)
        .map(|i| (std::f64::consts::PI * (2 * i + 1) as f64 / (2 * (ry + 1)) as f64).cos())
        .collect();
    // char poly of B − yQ at each node, as ascending x-coefficients
    let mut by_node: Vec<Vec<f64>> = Vec::with_capacity(ry + 1);
    for &u in &unodes {
        let mat = &b - (yscale * u) * &q_mat;
        let eig = mat.symmetric_eigen();
        let mut p = Polynomial::monomial(0);
        for lambda in eig.eigenvalues.iter() {
            p = p.mul_linear(*lambda);
        }
        let mut coeffs = p.coeffs().to_vec();
        coeffs.resize(n + 1, 0.0);
        by_node.push(coeffs);
    }
    // interpolate each x-coefficient as a degree-ry polynomial in u, then
    // rescale: the y^i coefficient is the u^i coefficient / yscale^i
    let mut vand = DMatrix::zeros(ry + 1, ry + 1);
    for (i, &u) in unodes.iter().enumerate() {
        let mut pw = 1.0;
        for j in 0..=ry {
            vand[(i, j)] = pw;
            pw *= u;
        }
    }
    let lu = vand.lu();
    let p = k - t;
    let mut out = vec![0.0; n + 1];
    for (ci, slot) in out.iter_mut().enumerate() {
        let rhs = nalgebra::DVector::from_iterator(ry + 1, by_node.iter().map(|c| c[ci]));
        let ucoeffs = lu.solve(&rhs).ok_or(Error::InterpolationIllConditioned)?;
        // (I−∂_y)^p at y=0: Σ_i (−1)^i p!/(p−i)! · a_i
        let mut falling = 1.0;
        let mut acc = 0.0;
        let mut pw = 1.0;
        for i in 0..=p.min(ry) {
            let sign = if i % 2 == 0 { 1.0 } else { -1.0 };
            acc += sign * falling * ucoeffs[i] / pw;
            falling *= (p - i) as f64;
            pw *= yscale;
        }
        *slot = acc;
    }
    Ok(Polynomial::new(out))
}

/// Greedy conditional-expectation selector: at step t pick the column whose
/// conditional expected characteristic polynomial has the largest k-th
/// largest root, ties to the lowest index. The resulting σ is certified by
/// direct SVD; the theory guarantees s_min(AJ_σ)² ≥ γ/m.
pub fn interlacing_greedy_select(a: &Matrix, k: usize) -> Result<SubsetSelection> {
    let rank = a.rank();
    if k >= rank {
        return Err(Error::KTooLarge { k, rank });
    }
    let m = a.ncols();
    let mut prefix: Vec<usize> = Vec::with_capacity(k);
    for _ in 0..k {
        let mut best: Option<(usize, f64)> = None;
        for j in 0..m {
            // candidates are distinct columns: a repeat drives the k-th
            // largest root of the final rank-deficient sum to zero, and the
            // certificate is defined on a duplicate-free σ
            if prefix.contains(&j) {
                continue;
            }
            prefix.push(j);
            let poly = conditional_expected_char_poly(a, &prefix, k)?;
            prefix.pop();
            let root = poly.kth_largest_root(k)?;
            if best.is_none_or(|(_, br)| root > br) {
                best = Some((j, root));
            }
        }
        prefix.push(best.ok_or(Error::RootFindingFailure)?.0);
    }
    let mut sorted = prefix.clone();
    sorted.sort_unstable();
    sorted.dedup();
    if sorted.len() != k {
        return Err(Error::NotFullColumnRank);
    }
    let mut cert = a.restrict_certificate(&sorted);
    cert.method = SelectionMethod::Interlacing;
    Ok(cert)
}
