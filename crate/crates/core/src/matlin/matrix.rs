use std::sync::OnceLock;

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

use super::RANK_REL_TOL;

/// Cached singular value decomposition `A = U diag(s) Vᵀ` (thin form).
///
/// `s` is non-increasing; `u` is n×min(n,m), `v` is m×min(n,m), both with
/// orthonormal columns.
#[derive(Debug, Clone)]
pub struct SvdFactors {
    pub u: DMatrix<f64>,
    pub s: DVector<f64>,
    pub v: DMatrix<f64>,
}

/// Dense real n×m operator. Columns `A e_j` are the selectable family.
#[derive(Debug)]
pub struct Matrix {
    data: DMatrix<f64>,
    svd: OnceLock<SvdFactors>,
}

impl Clone for Matrix {
    fn clone(&self) -> Self {
        Matrix {
            data: self.data.clone(),
            svd: self.svd.clone(),
        }
    }
}

impl PartialEq for Matrix {
    fn eq(&self, other: &Self) -> bool {
        self.data == other.data
    }
}

/// Which selection procedure produced a [`SubsetSelection`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum SelectionMethod {
    Volume,
    Giannopoulos,
    RankPipeline,
    Interlacing,
    Oracle,
}

/// An index set σ ⊆ [m] together with its invertibility certificate.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SubsetSelection {
    /// Sorted, duplicate-free column indices.
    pub sigma: Vec<usize>,
    pub k: usize,
    /// Smallest singular value of the column restriction.
    pub smin: f64,
    /// Operator norm of the inverse restriction; `f64::INFINITY` when singular.
    pub inv_norm: f64,
    pub method: SelectionMethod,
}

/// Strictly positive per-column weights `d`.
#[derive(Debug, Clone)]
pub struct Weights(Vec<f64>);

impl Weights {
    pub fn new(d: Vec<f64>) -> Result<Self> {
        if d.is_empty() || d.iter().any(|&x| !x.is_finite() || x <= 0.0) {
            return Err(Error::BadParams(
                "weights must be finite and strictly positive".into(),
            ));
        }
        Ok(Weights(d))
    }

    pub fn uniform(m: usize) -> Self {
        Weights(vec![1.0; m])
    }

    /// Weights rescaled by the sup norm; the selection guarantees are
    /// scale invariant and this keeps volumes away from overflow.
    pub fn normalized(&self) -> Vec<f64> {
        let max = self.0.iter().cloned().fold(0.0, f64::max);
        self.0.iter().map(|&x| x / max).collect()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl Matrix {
    pub fn new(data: DMatrix<f64>) -> Self {
        assert!(data.nrows() >= 1 && data.ncols() >= 1);
        Matrix {
            data,
            svd: OnceLock::new(),
        }
    }

    pub fn from_rows(n: usize, m: usize, rows: &[f64]) -> Self {
        assert_eq!(rows.len(), n * m);
        Matrix::new(DMatrix::from_row_slice(n, m, rows))
    }

    pub fn identity(m: usize) -> Self {
        Matrix::new(DMatrix::identity(m, m))
    }

    pub fn nrows(&self) -> usize {
        self.data.nrows()
    }

    pub fn ncols(&self) -> usize {
        self.data.ncols()
    }

    pub fn inner(&self) -> &DMatrix<f64> {
        &self.data
    }

    pub fn column(&self, j: usize) -> DVector<f64> {
        self.data.column(j).into_owned()
    }

    /// Column restriction `A J_σ`.
    pub fn restrict(&self, sigma: &[usize]) -> Matrix {
        let n = self.nrows();
        let mut out = DMatrix::zeros(n, sigma.len());
        for (c, &j) in sigma.iter().enumerate() {
            out.set_column(c, &self.data.column(j));
        }
        Matrix::new(out)
    }

    /// Singular value decomposition, computed once and cached.
    pub fn svd(&self) -> Result<&SvdFactors> {
        if self.data.iter().any(|x| !x.is_finite()) {
            return Err(Error::NonFinite);
        }
        Ok(self.svd.get_or_init(|| {
            let svd = self.data.clone().svd(true, true);
            let u = svd.u.unwrap();
            let vt = svd.v_t.unwrap();
            let s = svd.singular_values;
            // nalgebra returns the factors unsorted in general; sort descending
            // and permute U, V columns to match.
            let mut idx: Vec<usize> = (0..s.len()).collect();
            idx.sort_by(|&a, &b| s[b].partial_cmp(&s[a]).unwrap());
            let k = s.len();
            let mut us = DMatrix::zeros(u.nrows(), k);
            let mut vs = DMatrix::zeros(vt.ncols(), k);
            let mut ss = DVector::zeros(k);
            for (c, &i) in idx.iter().enumerate() {
                us.set_column(c, &u.column(i));
                vs.set_column(c, &vt.row(i).transpose());
                ss[c] = s[i];
            }
            SvdFactors {
                u: us,
                s: ss,
                v: vs,
            }
        }))
    }

    /// Non-increasing singular values.
    pub fn singular_values(&self) -> Result<Vec<f64>> {
        Ok(self.svd()?.s.iter().cloned().collect())
    }

    /// Count of singular values above `rel_tol · s₁`.
    pub fn numerical_rank(&self, rel_tol: f64) -> usize {
        let s = &self.svd().expect("finite entries").s;
        if s.is_empty() {
            return 0;
        }
        let s1 = s[0];
        if s1 == 0.0 {
            return 0;
        }
        s.iter().filter(|&&x| x > rel_tol * s1).count()
    }

    pub fn rank(&self) -> usize {
        self.numerical_rank(RANK_REL_TOL)
    }

    /// Schatten p-norm of the singular value vector; `p = f64::INFINITY`
    /// gives the operator norm.
    pub fn schatten_norm(&self, p: f64) -> f64 {
        assert!(p >= 1.0);
        let s = &self.svd().expect("finite entries").s;
        if p.is_infinite() {
            return s.iter().cloned().fold(0.0, f64::max);
        }
        let s1 = s.iter().cloned().fold(0.0, f64::max);
        if s1 == 0.0 {
            return 0.0;
        }
        // Factor out s1 to avoid overflow at large p.
        let sum: f64 = s.iter().map(|&x| (x / s1).powf(p)).sum();
        s1 * sum.powf(1.0 / p)
    }

    /// p-stable rank `(‖A‖_{S2}/‖A‖_{Sp})^{2p/(p−2)}` for p ∈ (2, ∞].
    pub fn stable_rank(&self, p: f64) -> Result<f64> {
        assert!(p > 2.0);
        let s2 = self.schatten_norm(2.0);
        if s2 == 0.0 {
            return Err(Error::ZeroMatrix);
        }
        if p.is_infinite() {
            let sinf = self.schatten_norm(f64::INFINITY);
            return Ok((s2 / sinf).powi(2));
        }
        let sp = self.schatten_norm(p);
        Ok((s2 / sp).powf(2.0 * p / (p - 2.0)))
    }

    /// The p → 2⁺ limit of the p-stable rank, evaluated in log space over the
    /// nonzero singular values.
    pub fn entropic_stable_rank(&self) -> Result<f64> {
        let s = self.singular_values()?;
        let s1 = s.iter().cloned().fold(0.0, f64::max);
        if s1 == 0.0 {
            return Err(Error::ZeroMatrix);
        }
        let nz: Vec<f64> = s
            .iter()
            .cloned()
            .filter(|&x| x > RANK_REL_TOL * s1)
            .collect();
        let hs2: f64 = nz.iter().map(|&x| x * x).sum();
        let weighted_log: f64 = nz.iter().map(|&x| x * x * x.ln()).sum();
        Ok((hs2.ln() - 2.0 * weighted_log / hs2).exp())
    }

    /// Orthogonal projector onto the complement of span{A e_j : j ∈ τ}.
    pub fn proj_complement(&self, tau: &[usize]) -> DMatrix<f64> {
        let n = self.nrows();
        let q = self.orthonormal_span(tau);
        DMatrix::identity(n, n) - &q * q.transpose()
    }

    /// Orthonormal basis of span{A e_j : j ∈ τ} via column-pivoted
    /// Gram-Schmidt; near-dependent columns are dropped at the rank tolerance.
    pub fn orthonormal_span(&self, tau: &[usize]) -> DMatrix<f64> {
        let n = self.nrows();
        let mut residuals: Vec<DVector<f64>> = tau.iter().map(|&j| self.column(j)).collect();
        let scale = residuals
            .iter()
            .map(|c| c.norm())
            .fold(0.0_f64, f64::max)
            .max(f64::MIN_POSITIVE);
        let mut basis: Vec<DVector<f64>> = Vec::new();
        while let Some((best, norm)) = residuals
            .iter()
            .enumerate()
            .map(|(i, r)| (i, r.norm()))
            .max_by(|a, b| a.1.partial_cmp(&b.1).unwrap())
        {
            if norm <= RANK_REL_TOL * scale {
                break;
            }
            let q = residuals.swap_remove(best) / norm;
            for r in residuals.iter_mut() {
                let c = q.dot(r);
                *r -= c * &q;
                // second reorthogonalization pass
                let c2 = q.dot(r);
                *r -= c2 * &q;
            }
            basis.push(q);
        }
        let mut out = DMatrix::zeros(n, basis.len());
        for (c, q) in basis.iter().enumerate() {
            out.set_column(c, q);
        }
        out
    }

    /// Certificate for the column restriction to σ: smallest singular value
    /// and the operator norm of the inverse.
    pub fn restrict_certificate(&self, sigma: &[usize]) -> SubsetSelection {
        assert!(!sigma.is_empty());
        let sub = self.restrict(sigma);
        let s = sub.singular_values().expect("finite entries");
        let s1 = s.iter().cloned().fold(0.0, f64::max);
        let smin = if sigma.len() > sub.nrows() {
            0.0
        } else {
            s.iter().cloned().fold(f64::INFINITY, f64::min)
        };
        let singular = smin <= RANK_REL_TOL * s1;
        let mut sigma = sigma.to_vec();
        sigma.sort_unstable();
        SubsetSelection {
            k: sigma.len(),
            sigma,
            smin,
            inv_norm: if singular { f64::INFINITY } else { 1.0 / smin },
            method: SelectionMethod::Oracle,
        }
    }

    /// Lower bound of the Fan maximum principle for a rank-r orthogonal
    /// projector P: `‖PA‖²_{S2} ≥ Σ_{i=n−r+1}^{m} s_i(A)²`.
    pub fn fan_projection_check(&self, p: &DMatrix<f64>) -> Result<bool> {
        let n = self.nrows();
        if p.nrows() != n || p.ncols() != n {
            return Err(Error::NotAProjector);
        }
        let sym_err = (p - p.transpose()).abs().max();
        let idem_err = (p * p - p).abs().max();
        if sym_err > 1e-8 || idem_err > 1e-8 {
            return Err(Error::NotAProjector);
        }
        let r = p.trace().round() as usize;
        let pa = Matrix::new(p * &self.data);
        let lhs = pa.schatten_norm(2.0).powi(2);
        let s = self.singular_values()?;
        // Σ_{i=n−r+1}^{m} s_i², 1-based indices; s_i = 0 beyond min(n,m).
        let lo = n - r; // 0-based start
        let rhs: f64 = s.iter().skip(lo).map(|&x| x * x).sum();
        Ok(lhs >= rhs - 1e-8)
    }
}
