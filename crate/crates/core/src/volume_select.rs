//! Column selection by weighted volume maximization: greedy initialization
//! followed by (1+δ)-approximate exchange local search. A locally maximal
//! subset satisfies, up to the δ slack, the pivot inequality that ties every
//! selected column's out-of-span projection to the tail of the spectrum.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::matlin::{Matrix, Weights, RANK_REL_TOL};

/// Default relative improvement a swap must achieve to be accepted.
pub const DEFAULT_DELTA: f64 = 1e-6;

/// State of the exchange search over subsets of size r.
#[derive(Debug, Clone)]
pub struct ExchangeState {
    pub tau: Vec<usize>,
    /// ½·log det of the weighted Gram matrix of the selected columns.
    pub log_vol: f64,
    pub delta: f64,
    /// Number of accepted swaps.
    pub swaps: usize,
}

/// From-scratch weighted log-volume: ½·log det((AJ_τ D⁻¹)ᵀ(AJ_τ D⁻¹)) with
/// D = diag(d) restricted to τ.
pub fn log_volume(a: &Matrix, tau: &[usize], d: &[f64]) -> f64 {
    let cols = scaled_columns(a, d);
    let mut b = DMatrix::zeros(a.nrows(), tau.len());
    for (c, &j) in tau.iter().enumerate() {
        b.set_column(c, &cols[j]);
    }
    let gram = b.transpose() * &b;
    match gram.cholesky() {
        Some(ch) => ch.l().diagonal().iter().map(|x| x.ln()).sum(),
        None => f64::NEG_INFINITY,
    }
}

fn scaled_columns(a: &Matrix, d: &[f64]) -> Vec<DVector<f64>> {
    (0..a.ncols()).map(|j| a.column(j) / d[j]).collect()
}

/// Selects τ with |τ| = r that is a (1+δ)-approximate local maximizer of the
/// weighted r-dimensional volume, using `DEFAULT_DELTA`.
pub fn volume_exchange_select(a: &Matrix, r: usize, d: &Weights) -> Result<Vec<usize>> {
    volume_exchange_select_with(a, r, d, DEFAULT_DELTA).map(|st| st.tau)
}

/// Full-state variant with an explicit improvement factor δ.
pub fn volume_exchange_select_with(
    a: &Matrix,
    r: usize,
    d: &Weights,
    delta: f64,
) -> Result<ExchangeState> {
    let m = a.ncols();
    assert_eq!(d.len(), m);
    let rank = a.rank();
    if r > rank {
        return Err(Error::RankTooSmall { r, rank });
    }
    let dn = d.normalized();
    let cols = scaled_columns(a, &dn);

    // Greedy start: repeatedly take the column farthest from the current span.
    let mut tau: Vec<usize> = Vec::with_capacity(r);
    let mut basis: Vec<DVector<f64>> = Vec::new();
    for _ in 0..r {
        let mut best = (usize::MAX, -1.0f64);
        for (j, col) in cols.iter().enumerate() {
            if tau.contains(&j) {
                continue;
            }
            let res = residual_norm(col, &basis);
            if res > best.1 {
                best = (j, res);
            }
        }
        let (j, res) = best;
        if res <= 0.0 {
            return Err(Error::RankTooSmall { r, rank });
        }
        tau.push(j);
        let mut v = cols[j].clone();
        for q in &basis {
            let c = q.dot(&v);
            v -= c * q;
        }
        basis.push(&v / res);
    }
    tau.sort_unstable();

    // Exchange local search: accept a swap j → i only if it multiplies the
    // volume by more than 1+δ. Ties and candidate order are index-lowest.
    let mut log_vol = log_volume(a, &tau, &dn);
    let mut swaps = 0usize;
    loop {
        let mut improved = false;
        'outer: for pos in 0..tau.len() {
            let j = tau[pos];
            let rest: Vec<usize> = tau.iter().cloned().filter(|&x| x != j).collect();
            let proj = complement_apply(a, &rest);
            let hj = proj(&cols[j]);
            for (i, col) in cols.iter().enumerate() {
                if tau.contains(&i) {
                    continue;
                }
                let hi = proj(col);
                if hi > (1.0 + delta) * hj {
                    tau[pos] = i;
                    tau.sort_unstable();
                    log_vol = log_volume(a, &tau, &dn);
                    swaps += 1;
                    improved = true;
                    break 'outer;
                }
            }
        }
        if !improved {
            break;
        }
    }
    Ok(ExchangeState {
        tau,
        log_vol,
        delta,
        swaps,
    })
}

/// Returns a closure measuring ‖P_{E_rest} x‖₂ for the complement of the
/// (scaled) span of `rest`.
fn complement_apply(a: &Matrix, rest: &[usize]) -> impl Fn(&DVector<f64>) -> f64 {
    // The span of scaled columns equals the span of the raw columns.
    let q = a.orthonormal_span(rest);
    move |x: &DVector<f64>| {
        let coeffs = q.transpose() * x;
        (x.norm_squared() - coeffs.norm_squared()).max(0.0).sqrt()
    }
}

fn residual_norm(x: &DVector<f64>, basis: &[DVector<f64>]) -> f64 {
    let mut v = x.clone();
    for q in basis {
        let c = q.dot(&v);
        v -= c * q;
    }
    let res = v.norm();
    if res <= RANK_REL_TOL * x.norm() {
        0.0
    } else {
        res
    }
}

/// True iff no single swap into τ improves the weighted pivot ratio by more
/// than the factor 1+δ.
pub fn verify_local_max(a: &Matrix, tau: &[usize], d: &Weights, delta: f64) -> Result<bool> {
    let dn = d.normalized();
    let cols = scaled_columns(a, &dn);
    let sub = a.restrict(tau);
    if sub.rank() < tau.len() {
        return Err(Error::RankDeficient {
            rank: sub.rank(),
            wanted: tau.len(),
        });
    }
    for &j in tau {
        let rest: Vec<usize> = tau.iter().cloned().filter(|&x| x != j).collect();
        let proj = complement_apply(a, &rest);
        let hj = proj(&cols[j]);
        let hmax = (0..a.ncols())
            .map(|i| proj(&cols[i]))
            .fold(0.0f64, f64::max);
        if hj < hmax / (1.0 + delta) - 1e-12 {
            return Ok(false);
        }
    }
    Ok(true)
}

/// The guaranteed pivot lower bound for every j in a locally maximal τ:
/// `‖P_{E_{τ∖{j}}} A e_j‖ ≥ (d_j/‖d‖₂)·(Σ_{i≥r} s_i²)^{1/2}/(1+δ)`.
pub fn pivot_lower_bound(a: &Matrix, r: usize, d: &Weights, j: usize, delta: f64) -> f64 {
    let dn = d.normalized();
    let dsum: f64 = dn.iter().map(|x| x * x).sum();
    let s = a.singular_values().expect("finite entries");
    let tail: f64 = s.iter().skip(r - 1).map(|x| x * x).sum();
    dn[j] / dsum.sqrt() * tail.sqrt() / (1.0 + delta)
}
