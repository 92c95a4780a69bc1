//! Exhaustive ground truth at desk scale: the exact best subset of a given
//! cardinality under either the smallest-singular-value objective or the
//! determinant volume proxy.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matlin::Matrix;

/// Default cap on the number of enumerated subsets.
pub const SUBSET_CAP: u64 = 5_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Objective {
    Smin,
    Volume,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct OracleResult {
    pub best_sigma: Vec<usize>,
    pub best_value: f64,
    pub evaluated: u64,
    pub objective: Objective,
}

/// C(m, k) without overflow for the sizes we enumerate, saturating at u64::MAX.
pub fn binomial(m: usize, k: usize) -> u64 {
    if k > m {
        return 0;
    }
    let k = k.min(m - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (m - i) as u128 / (i + 1) as u128;
        if acc > u64::MAX as u128 {
            return u64::MAX;
        }
    }
    acc as u64
}

/// Exact argmax over all σ with |σ| = k. Enumeration is in colex order;
/// among maximizers (values within 1e-12 relative of each other, so that
/// floating-point noise cannot break structural ties) the lexicographically
/// smallest σ wins.
pub fn best_subset(a: &Matrix, k: usize, objective: Objective) -> Result<OracleResult> {
    best_subset_capped(a, k, objective, SUBSET_CAP)
}

pub fn best_subset_capped(
    a: &Matrix,
    k: usize,
    objective: Objective,
    cap: u64,
) -> Result<OracleResult> {
    let m = a.ncols();
    assert!(k >= 1 && k <= m);
    let count = binomial(m, k);
    if count > cap {
        return Err(Error::TooManySubsets { count, cap });
    }
    let mut best: Option<(f64, Vec<usize>)> = None;
    let mut evaluated = 0u64;
    let mut sigma: Vec<usize> = (0..k).collect();
    loop {
        evaluated += 1;
        let value = match objective {
            Objective::Smin => a.restrict_certificate(&sigma).smin,
            Objective::Volume => {
                let sub = a.restrict(&sigma);
                let gram = sub.inner().transpose() * sub.inner();
                gram.determinant().max(0.0)
            }
        };
        let take = match &best {
            None => true,
            Some((bv, bs)) => {
                let tol = 1e-12 * bv.abs().max(value.abs());
                if (value - *bv).abs() <= tol {
                    sigma < *bs
                } else {
                    value > *bv
                }
            }
        };
        if take {
            // on a tie keep the larger of the two values with the smaller σ
            let value = best.map_or(value, |(bv, _)| value.max(bv));
            best = Some((value, sigma.clone()));
        }
        if !next_colex(&mut sigma, m) {
            break;
        }
    }
    let (best_value, best_sigma) = best.unwrap();
    Ok(OracleResult {
        best_sigma,
        best_value,
        evaluated,
        objective,
    })
}

/// Advances σ to the next k-subset of [m] in colexicographic order.
/// Returns false after the last subset.
fn next_colex(sigma: &mut [usize], m: usize) -> bool {
    let k = sigma.len();
    for i in 0..k {
        let ceiling = if i + 1 < k { sigma[i + 1] } else { m };
        if sigma[i] + 1 < ceiling {
            sigma[i] += 1;
            for (j, slot) in sigma.iter_mut().enumerate().take(i) {
                *slot = j;
            }
            return true;
        }
    }
    false
}
