//! Constructive Sauer–Shelah extraction over bitmask-encoded sign vectors,
//! via the Pajor recursion on the family of shattered subsets.

use crate::error::{Error, Result};

/// Largest hypercube dimension the exact enumeration will touch.
pub const SAUER_CAP: usize = 24;

/// A set of sign vectors in {−1,+1}^dim; bit i set means +1 in coordinate i.
#[derive(Debug, Clone)]
pub struct SignSet {
    dim: usize,
    members: Vec<u32>,
}

impl SignSet {
    pub fn new(dim: usize, mut members: Vec<u32>) -> Result<Self> {
        if dim > SAUER_CAP {
            return Err(Error::DimTooLarge {
                dim,
                cap: SAUER_CAP,
            });
        }
        members.sort_unstable();
        members.dedup();
        debug_assert!(members.last().is_none_or(|&m| m < 1u32 << dim));
        Ok(SignSet { dim, members })
    }

    pub fn full_cube(dim: usize) -> Result<Self> {
        SignSet::new(dim, (0..1u32 << dim).collect())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn members(&self) -> &[u32] {
        &self.members
    }

    /// True iff every sign pattern on `sigma` extends to a member.
    pub fn shatters(&self, sigma: &[usize]) -> bool {
        let k = sigma.len();
        assert!(k <= 20);
        let mut seen = vec![false; 1 << k];
        let mut count = 0usize;
        for &m in &self.members {
            let mut pat = 0usize;
            for (b, &c) in sigma.iter().enumerate() {
                if m >> c & 1 == 1 {
                    pat |= 1 << b;
                }
            }
            if !seen[pat] {
                seen[pat] = true;
                count += 1;
                if count == 1 << k {
                    return true;
                }
            }
        }
        count == 1 << k
    }
}

/// Sorted index set σ with |σ| ≥ target such that Ω shatters σ. The family
/// of all shattered subsets is built by the Pajor recursion; among the
/// largest members the numerically smallest bitmask is returned.
pub fn sauer_shelah_extract(omega: &SignSet, target: usize) -> Result<Vec<usize>> {
    let family = shatter_family(omega.members(), omega.dim());
    let mut best: Option<u32> = None;
    for &mask in &family {
        let better = match best {
            None => true,
            Some(b) => {
                mask.count_ones() > b.count_ones()
                    || (mask.count_ones() == b.count_ones() && mask < b)
            }
        };
        if better {
            best = Some(mask);
        }
    }
    let mask = best.unwrap_or(0);
    if (mask.count_ones() as usize) < target {
        return Err(Error::NotEnoughVectors { target });
    }
    Ok((0..omega.dim()).filter(|&i| mask >> i & 1 == 1).collect())
}

/// sh(Ω) as sorted bitmasks: split on the top coordinate, recurse, and keep
/// sh(Ω₁) ∪ sh(Ω₋₁) together with {σ∪{dim−1} : σ ∈ sh(Ω₁)∩sh(Ω₋₁)}.
fn shatter_family(members: &[u32], dim: usize) -> Vec<u32> {
    match members.len() {
        0 => return Vec::new(),
        1 => return vec![0],
        _ => {}
    }
    debug_assert!(dim > 0);
    let top = 1u32 << (dim - 1);
    let mut low = Vec::new();
    let mut high = Vec::new();
    for &m in members {
        if m & top == 0 {
            low.push(m);
        } else {
            high.push(m & !top);
        }
    }
    let sh_low = shatter_family(&low, dim - 1);
    let sh_high = shatter_family(&high, dim - 1);
    let mut out = merge_union(&sh_low, &sh_high);
    for m in merge_intersection(&sh_low, &sh_high) {
        out.push(m | top);
    }
    out.sort_unstable();
    out
}

fn merge_union(a: &[u32], b: &[u32]) -> Vec<u32> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        match (a.get(i), b.get(j)) {
            (Some(&x), Some(&y)) if x == y => {
                out.push(x);
                i += 1;
                j += 1;
            }
            (Some(&x), Some(&y)) if x < y => {
                out.push(x);
                i += 1;
            }
            (Some(_), Some(&y)) => {
                out.push(y);
                j += 1;
            }
            (Some(&x), None) => {
                out.push(x);
                i += 1;
            }
            (None, Some(&y)) => {
                out.push(y);
                j += 1;
            }
            (None, None) => unreachable!(),
        }
    }
    out
}

fn merge_intersection(a: &[u32], b: &[u32]) -> Vec<u32> {
    let mut out = Vec::new();
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Equal => {
                out.push(a[i]);
                i += 1;
                j += 1;
            }
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
        }
    }
    out
}
