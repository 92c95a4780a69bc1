//! Iterated shattering/domination selection: the hypercube induction, its
//! combination with the Pietsch subset step, the full multi-level pipeline
//! with a tracked constant, the rank-pipeline composition with the volume
//! selector, and the ellipsoid-projection verifier.

mod pietsch;
mod sauer;

pub use pietsch::{grothendieck_pietsch_subset, pietsch_measure, PietschMeasure};
pub use sauer::{sauer_shelah_extract, SignSet, SAUER_CAP};

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matlin::dual::pinv_full_rank;
use crate::matlin::{DualBasis, Matrix, SelectionMethod, SubsetSelection, Weights};
use crate::volume_select::{volume_exchange_select_with, DEFAULT_DELTA};

/// α_t = Σ_{r=1..t} 2^{r/2}, the accumulated induction constant.
pub fn alpha(t: usize) -> f64 {
    (1..=t).map(|r| (r as f64 / 2.0).exp2()).sum()
}

/// One level of the pipeline, recorded for reports and property checks.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GiaLevel {
    pub u: usize,
    pub t: usize,
    pub sigma: Vec<usize>,
    pub tau: Vec<usize>,
    pub beta: Vec<usize>,
    pub vartheta: Vec<usize>,
    /// Per-level norm constant: ‖P_σ(AJ_ϑ)⁻¹‖ ≤ c_level·M.
    pub c_level: f64,
}

/// Full trace of a pipeline run, including the tracked constant.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GiaTrace {
    pub m: usize,
    pub k: usize,
    pub r: usize,
    pub levels: Vec<GiaLevel>,
    /// M = max_j ℓ_j^{1/2} of the input columns.
    pub max_leverage_sqrt: f64,
    /// Gluing constant: inv_norm ≤ c_glue·M.
    pub c_glue: f64,
    /// Same bound in the √(m/(m−k))·M normalization.
    pub c_impl: f64,
}

/// Result of the end-to-end rank-pipeline selector.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MainSelection {
    pub selection: SubsetSelection,
    /// The r whose pipeline produced the returned subset.
    pub r_used: usize,
    /// The argmin of the rank-bound objective (always attempted).
    pub r_opt: usize,
    /// The objective minimum √(mr/((r−k)·tail_r)) over candidate r.
    pub bound_value: f64,
    /// Tracked constant: selection.inv_norm ≤ c_impl·bound_value.
    pub c_impl: f64,
    pub trace: GiaTrace,
}

fn set_minus(s: &[usize], t: &[usize]) -> Vec<usize> {
    s.iter().cloned().filter(|x| !t.contains(x)).collect()
}

fn sorted_union(a: &[usize], b: &[usize]) -> Vec<usize> {
    let mut out = a.to_vec();
    out.extend_from_slice(b);
    out.sort_unstable();
    out.dedup();
    out
}

/// The hypercube induction: grows τ ⊆ s over `k_levels` rounds, each round
/// materializing Ω = {ε : ‖Σ_{i∈s∖τ} ε_i v_i‖ ≤ M√(2|s∖τ|)} by Gray-code
/// enumeration and merging in a Sauer–Shelah shattered half.
pub fn induction_subset(
    a: &Matrix,
    s: &[usize],
    k_levels: usize,
    basis: &DualBasis,
) -> Result<Vec<usize>> {
    assert_eq!(basis.omega.len(), a.ncols());
    let m_const = basis.max_leverage_sqrt();
    let mut tau: Vec<usize> = Vec::new();
    for _ in 0..k_levels {
        let diff = set_minus(s, &tau);
        if diff.is_empty() {
            break;
        }
        let d = diff.len();
        if d > SAUER_CAP {
            return Err(Error::DimTooLarge {
                dim: d,
                cap: SAUER_CAP,
            });
        }
        let threshold = m_const * (2.0 * d as f64).sqrt();
        let vs: Vec<_> = diff.iter().map(|&i| &basis.vectors[i]).collect();
        // Gray-code walk over {−1,+1}^d; bit set encodes +1
        let mut cur = -vs
            .iter()
            .fold(nalgebra::DVector::zeros(a.nrows()), |acc, v| acc + *v);
        let mut mask: u32 = 0;
        let mut members: Vec<u32> = Vec::new();
        for g in 0u64..1 << d {
            if cur.norm() <= threshold {
                members.push(mask);
            }
            if g + 1 < 1 << d {
                let j = (g + 1).trailing_zeros() as usize;
                if mask >> j & 1 == 1 {
                    cur -= 2.0 * vs[j];
                    mask &= !(1 << j);
                } else {
                    cur += 2.0 * vs[j];
                    mask |= 1 << j;
                }
            }
        }
        // the Markov counting step guarantees a strict majority
        assert!(members.len() as u64 > 1 << (d - 1));
        let omega = SignSet::new(d, members)?;
        let beta_pos = sauer_shelah_extract(&omega, d.div_ceil(2))?;
        let beta: Vec<usize> = beta_pos.iter().map(|&p| diff[p]).collect();
        tau = sorted_union(&tau, &beta);
    }
    Ok(tau)
}

/// Output of one combined induction + Pietsch level.
#[derive(Debug, Clone)]
pub struct CombineResult {
    pub sigma: Vec<usize>,
    pub tau: Vec<usize>,
    pub vartheta: Vec<usize>,
    /// ‖P_σ(AJ_ϑ)⁻¹‖ ≤ c_level·M, with c_level = √(2π)·α_t.
    pub c_level: f64,
}

/// One level: induction inside β with t rounds, then the Pietsch subset of
/// P_τ(AJ_ϑ)⁻¹ at ε = |β|/(4|τ|), where ϑ = τ ∪ ([m]∖β).
pub fn combine_subset(
    a: &Matrix,
    beta: &[usize],
    t: usize,
    basis: &DualBasis,
) -> Result<CombineResult> {
    assert!(t >= 1 && !beta.is_empty());
    let m = a.ncols();
    let tau = induction_subset(a, beta, t, basis)?;
    let all: Vec<usize> = (0..m).collect();
    let vartheta = sorted_union(&tau, &set_minus(&all, beta));
    let eps = beta.len() as f64 / (4.0 * tau.len() as f64);
    let sub = a.restrict(&vartheta);
    let pinv = pinv_full_rank(sub.inner()).ok_or(Error::NotFullColumnRank)?;
    let rows: Vec<usize> = tau
        .iter()
        .map(|j| vartheta.binary_search(j).unwrap())
        .collect();
    let t_mat = Matrix::new(DMatrix::from_fn(rows.len(), pinv.ncols(), |i, c| {
        pinv[(rows[i], c)]
    }));
    let sigma_local = grothendieck_pietsch_subset(&t_mat, eps)?;
    let sigma: Vec<usize> = sigma_local.iter().map(|&i| tau[i]).collect();
    Ok(CombineResult {
        sigma,
        tau,
        vartheta,
        c_level: (2.0 * std::f64::consts::PI).sqrt() * alpha(t),
    })
}

fn choose_r(m: usize, k: usize) -> usize {
    let val = (m - k) as f64 / m as f64;
    let mut r = 0usize;
    while val < 0.5f64.powi(2 * r as i32 + 1) {
        r += 1;
    }
    r
}

/// The full multi-level selector for a matrix with linearly independent
/// columns: levels u = 1..r+1 with t_u = 2r−u+4, glued via the disjoint
/// union of the per-level σ_u and trimmed to |σ| = k.
pub fn giannopoulos_select(a: &Matrix, k: usize) -> Result<(SubsetSelection, GiaTrace)> {
    let m = a.ncols();
    if a.rank() < m {
        return Err(Error::NotFullColumnRank);
    }
    assert!(k >= 1 && k < m);
    let all: Vec<usize> = (0..m).collect();
    let basis = a.dual_basis(&all)?;
    let m_const = basis.max_leverage_sqrt();
    let r = choose_r(m, k);
    let mut beta_prev = all.clone();
    let mut levels: Vec<GiaLevel> = Vec::new();
    let mut sigma: Vec<usize> = Vec::new();
    for u in 1..=r + 1 {
        if beta_prev.is_empty() {
            break;
        }
        let t = 2 * r + 4 - u;
        let res = combine_subset(a, &beta_prev, t, &basis)?;
        let beta = set_minus(&res.tau, &res.sigma);
        sigma = sorted_union(&sigma, &res.sigma);
        levels.push(GiaLevel {
            u,
            t,
            sigma: res.sigma,
            tau: res.tau,
            beta: beta.clone(),
            vartheta: res.vartheta,
            c_level: res.c_level,
        });
        beta_prev = beta;
    }
    assert!(
        sigma.len() >= k,
        "pipeline produced {} < k = {k}",
        sigma.len()
    );
    let c_glue = levels
        .iter()
        .map(|l| l.c_level * l.c_level)
        .sum::<f64>()
        .sqrt();
    let trace = GiaTrace {
        m,
        k,
        r,
        levels,
        max_leverage_sqrt: m_const,
        c_glue,
        c_impl: c_glue * ((m - k) as f64 / m as f64).sqrt(),
    };
    // trim to exactly k, dropping the index whose removal keeps s_min largest
    while sigma.len() > k {
        let mut best: Option<(usize, f64)> = None;
        for pos in 0..sigma.len() {
            let mut reduced = sigma.clone();
            reduced.remove(pos);
            let smin = a.restrict_certificate(&reduced).smin;
            if best.is_none_or(|(_, b)| smin > b) {
                best = Some((pos, smin));
            }
        }
        sigma.remove(best.unwrap().0);
    }
    let mut cert = a.restrict_certificate(&sigma);
    cert.method = SelectionMethod::Giannopoulos;
    Ok((cert, trace))
}

/// Rank-pipeline composition: volume-select r columns, then run the
/// multi-level selector on the restriction, for the argmin r of the rank
/// objective and its feasible neighbors; returns the best certificate.
pub fn main_theorem_select(a: &Matrix, k: usize, d: Option<&Weights>) -> Result<MainSelection> {
    let rank = a.rank();
    if k >= rank {
        return Err(Error::RankTooSmall { r: k + 1, rank });
    }
    let m = a.ncols();
    let s = a.singular_values()?;
    let objective = |r: usize| -> f64 {
        let tail: f64 = s.iter().skip(r - 1).map(|x| x * x).sum();
        (m as f64 * r as f64 / ((r - k) as f64 * tail)).sqrt()
    };
    let feasible: Vec<usize> = (k + 1..=rank.min(SAUER_CAP)).collect();
    if feasible.is_empty() {
        return Err(Error::DimTooLarge {
            dim: k + 1,
            cap: SAUER_CAP,
        });
    }
    let r_opt = *feasible
        .iter()
        .min_by(|&&x, &&y| objective(x).partial_cmp(&objective(y)).unwrap())
        .unwrap();
    let mut candidates = vec![r_opt];
    if r_opt > k + 1 {
        candidates.push(r_opt - 1);
    }
    if r_opt < *feasible.last().unwrap() {
        candidates.push(r_opt + 1);
    }
    let weights = match d {
        Some(w) => w.clone(),
        None => Weights::uniform(m),
    };
    let mut best: Option<(SubsetSelection, usize)> = None;
    let mut opt_trace: Option<GiaTrace> = None;
    for &r in &candidates {
        let tau = volume_exchange_select_with(a, r, &weights, DEFAULT_DELTA)?.tau;
        let sub = a.restrict(&tau);
        let (local, trace) = giannopoulos_select(&sub, k)?;
        let sigma: Vec<usize> = local.sigma.iter().map(|&i| tau[i]).collect();
        let mut cert = a.restrict_certificate(&sigma);
        cert.method = SelectionMethod::RankPipeline;
        if r == r_opt {
            opt_trace = Some(trace);
        }
        if best.as_ref().is_none_or(|(b, _)| cert.smin > b.smin) {
            best = Some((cert, r));
        }
    }
    let (selection, r_used) = best.unwrap();
    let trace = opt_trace.unwrap();
    // inv_norm ≤ c_glue·M ≤ c_glue·(1+δ)·√((r−k)/r)·objective(r_opt)
    let c_impl = trace.c_glue * (1.0 + DEFAULT_DELTA) * ((r_opt - k) as f64 / r_opt as f64).sqrt();
    Ok(MainSelection {
        selection,
        r_used,
        r_opt,
        bound_value: objective(r_opt),
        c_impl,
        trace,
    })
}

/// Inradius of the coordinate projection onto ℝ^σ of the ellipsoid
/// E = {a : ‖Σ a_j y_j‖ ≤ 1}: 1/√λ_max of the Schur complement of the Gram
/// matrix. Dependent columns are handled by lifting y_i ↦ y_i + e_{n+i}
/// when `lift` is set.
pub fn ellipsoid_projection_inradius(y: &Matrix, sigma: &[usize], lift: bool) -> Result<f64> {
    let m = y.ncols();
    assert!(!sigma.is_empty() && sigma.iter().all(|&j| j < m));
    let mut gram = y.inner().transpose() * y.inner();
    if y.rank() < m {
        if !lift {
            return Err(Error::RankDeficient {
                rank: y.rank(),
                wanted: m,
            });
        }
        gram += DMatrix::identity(m, m);
    }
    let comp: Vec<usize> = (0..m).filter(|j| !sigma.contains(j)).collect();
    let pick = |rows: &[usize], cols: &[usize]| {
        DMatrix::from_fn(rows.len(), cols.len(), |i, j| gram[(rows[i], cols[j])])
    };
    let schur = if comp.is_empty() {
        gram.clone()
    } else {
        let gcc = pick(&comp, &comp);
        let inv = gcc
            .cholesky()
            .ok_or(Error::RankDeficient {
                rank: y.rank(),
                wanted: m,
            })?
            .inverse();
        pick(sigma, sigma) - pick(sigma, &comp) * inv * pick(&comp, sigma)
    };
    let lam_max = schur
        .symmetric_eigen()
        .eigenvalues
        .iter()
        .cloned()
        .fold(f64::NEG_INFINITY, f64::max);
    Ok(1.0 / lam_max.sqrt())
}
