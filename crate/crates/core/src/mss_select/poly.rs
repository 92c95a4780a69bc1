//! Dense univariate polynomials with companion-matrix root finding. Degrees
//! stay small (at most the ambient dimension), so no sparse or FFT tricks.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Real polynomial stored as ascending coefficients; trailing exact zeros
/// are trimmed. Small leading coefficients are kept: a monic characteristic
/// polynomial with large roots legitimately has a leading coefficient many
/// orders below its constant term.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Polynomial {
    coeffs: Vec<f64>,
}

impl Polynomial {
    pub fn new(mut coeffs: Vec<f64>) -> Self {
        while coeffs.len() > 1 && *coeffs.last().unwrap() == 0.0 {
            coeffs.pop();
        }
        if coeffs.is_empty() {
            coeffs.push(0.0);
        }
        Polynomial { coeffs }
    }

    /// The monomial x^k.
    pub fn monomial(k: usize) -> Self {
        let mut coeffs = vec![0.0; k + 1];
        coeffs[k] = 1.0;
        Polynomial { coeffs }
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0.0)
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, &c| acc * x + c)
    }

    pub fn derivative(&self) -> Polynomial {
        if self.coeffs.len() == 1 {
            return Polynomial { coeffs: vec![0.0] };
        }
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, &c)| i as f64 * c)
            .collect();
        Polynomial::new(coeffs)
    }

    pub fn scale(&self, c: f64) -> Polynomial {
        Polynomial::new(self.coeffs.iter().map(|&x| c * x).collect())
    }

    pub fn add(&self, other: &Polynomial) -> Polynomial {
        let len = self.coeffs.len().max(other.coeffs.len());
        let mut coeffs = vec![0.0; len];
        for (i, &c) in self.coeffs.iter().enumerate() {
            coeffs[i] += c;
        }
        for (i, &c) in other.coeffs.iter().enumerate() {
            coeffs[i] += c;
        }
        Polynomial::new(coeffs)
    }

    /// Multiplication by the linear factor (x − root).
    pub fn mul_linear(&self, root: f64) -> Polynomial {
        let mut coeffs = vec![0.0; self.coeffs.len() + 1];
        for (i, &c) in self.coeffs.iter().enumerate() {
            coeffs[i + 1] += c;
            coeffs[i] -= root * c;
        }
        Polynomial::new(coeffs)
    }

    /// Shift by x^p: returns x^p · self with exact zero low-order coefficients.
    pub fn shift_up(&self, p: usize) -> Polynomial {
        let mut coeffs = vec![0.0; p];
        coeffs.extend_from_slice(&self.coeffs);
        Polynomial { coeffs }
    }

    /// Largest relative coefficient discrepancy against `other`, scaled by the
    /// largest coefficient magnitude of either.
    pub fn rel_distance(&self, other: &Polynomial) -> f64 {
        let len = self.coeffs.len().max(other.coeffs.len());
        let mut scale = 0.0f64;
        let mut diff = 0.0f64;
        for i in 0..len {
            let a = self.coeffs.get(i).copied().unwrap_or(0.0);
            let b = other.coeffs.get(i).copied().unwrap_or(0.0);
            scale = scale.max(a.abs()).max(b.abs());
            diff = diff.max((a - b).abs());
        }
        if scale == 0.0 {
            0.0
        } else {
            diff / scale
        }
    }

    /// All roots from the companion matrix, each polished with a few Newton
    /// steps, returned as (re, im) pairs. Exact zero roots from trailing zero
    /// coefficients are split off beforehand so their multiplicity does not
    /// poison the eigenvalue cluster.
    pub fn roots(&self) -> Result<Vec<(f64, f64)>> {
        if self.is_zero() {
            return Err(Error::RootFindingFailure);
        }
        let mut zeros = 0usize;
        while zeros < self.coeffs.len() - 1 && self.coeffs[zeros] == 0.0 {
            zeros += 1;
        }
        let body = &self.coeffs[zeros..];
        let d = body.len() - 1;
        let mut out = vec![(0.0, 0.0); zeros];
        if d == 0 {
            return Ok(out);
        }
        let lead = body[d];
        // substitute x = c·z (Fujiwara bound) so the roots of the z-poly sit
        // in the unit disk; this equalizes the companion-matrix coefficient
        // magnitudes and sharply improves eigenvalue accuracy
        let c = (0..d)
            .filter(|&i| body[i] != 0.0)
            .map(|i| 2.0 * (body[i] / lead).abs().powf(1.0 / (d - i) as f64))
            .fold(0.0f64, f64::max)
            .max(f64::MIN_POSITIVE);
        let mut comp = DMatrix::zeros(d, d);
        for i in 1..d {
            comp[(i, i - 1)] = 1.0;
        }
        for i in 0..d {
            comp[(i, d - 1)] = -body[i] / lead / c.powi((d - i) as i32);
        }
        let eig = comp.complex_eigenvalues();
        let deriv = self.derivative();
        for lambda in eig.iter() {
            let (mut re, im) = (c * lambda.re, c * lambda.im);
            if im == 0.0 || im.abs() < 1e-9 * (1.0 + re.abs()) {
                for _ in 0..3 {
                    let f = self.eval(re);
                    let df = deriv.eval(re);
                    if df == 0.0 {
                        break;
                    }
                    let step = f / df;
                    if !step.is_finite() {
                        break;
                    }
                    re -= step;
                }
            }
            out.push((re, im));
        }
        Ok(out)
    }

    /// Sorted real roots; errors when some root has imaginary part larger
    /// than `tol` relative to the root scale.
    pub fn real_roots(&self, tol: f64) -> Result<Vec<f64>> {
        let roots = self.roots()?;
        let scale = roots
            .iter()
            .fold(1.0f64, |a, &(re, im)| a.max(re.abs()).max(im.abs()));
        let worst = roots.iter().fold(0.0f64, |a, &(_, im)| a.max(im.abs()));
        if worst > tol * scale {
            return Err(Error::NotRealRooted { imag: worst });
        }
        let mut out: Vec<f64> = roots.into_iter().map(|(re, _)| re).collect();
        out.sort_by(|a, b| a.partial_cmp(b).unwrap());
        Ok(out)
    }

    /// The k-th largest root by real part (1-based). The top k roots must be
    /// close to real; lower roots may sit in a multiple-root cluster at zero
    /// and are not checked. The imaginary tolerance is 0.1 relative: a root
    /// of multiplicity q under relative coefficient noise ε splits into a
    /// symmetric cluster with imaginary parts up to O(ε^{1/q}), which at
    /// machine precision and q ≈ 12 already reaches several percent. A
    /// genuinely complex pair sits at Ω(1) relative imaginary part, so the
    /// two cases stay separated. The real part of a conjugate pair inside a
    /// split cluster is the correct root location either way.
    pub fn kth_largest_root(&self, k: usize) -> Result<f64> {
        let mut roots = self.roots()?;
        if roots.len() < k {
            return Err(Error::RootFindingFailure);
        }
        roots.sort_by(|a, b| b.0.partial_cmp(&a.0).unwrap());
        let scale = roots.iter().fold(1.0f64, |a, &(re, _)| a.max(re.abs()));
        for &(_, im) in roots.iter().take(k) {
            if im.abs() > 0.1 * scale {
                return Err(Error::NotRealRooted { imag: im.abs() });
            }
        }
        Ok(roots[k - 1].0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn eval_and_derivative() {
        // 1 + 2x + 3x²
        let p = Polynomial::new(vec![1.0, 2.0, 3.0]);
        assert_eq!(p.degree(), 2);
        assert_eq!(p.eval(2.0), 17.0);
        assert_eq!(p.derivative().coeffs(), &[2.0, 6.0]);
    }

    #[test]
    fn trim_keeps_leading_nonzero() {
        let p = Polynomial::new(vec![1.0, 1.0, 0.0]);
        assert_eq!(p.degree(), 1);
        let tiny = Polynomial::new(vec![1.0, 1.0, 1e-20]);
        assert_eq!(tiny.degree(), 2);
        let z = Polynomial::new(vec![0.0, 0.0]);
        assert!(z.is_zero());
        assert_eq!(z.degree(), 0);
    }

    #[test]
    fn mul_linear_expands() {
        // (x−1)(x−3) = 3 − 4x + x²
        let p = Polynomial::monomial(0).mul_linear(1.0).mul_linear(3.0);
        assert_eq!(p.coeffs(), &[3.0, -4.0, 1.0]);
    }

    #[test]
    fn quadratic_roots() {
        let p = Polynomial::new(vec![3.0, -4.0, 1.0]);
        let r = p.real_roots(1e-9).unwrap();
        assert!((r[0] - 1.0).abs() < 1e-9 && (r[1] - 3.0).abs() < 1e-9);
    }

    #[test]
    fn zero_multiplicity_is_exact() {
        // x^5(x−2): trailing zeros split off, no spurious imaginary parts
        let p = Polynomial::monomial(0).mul_linear(2.0).shift_up(5);
        let r = p.real_roots(1e-9).unwrap();
        assert_eq!(r.len(), 6);
        assert_eq!(&r[..5], &[0.0; 5]);
        assert!((r[5] - 2.0).abs() < 1e-12);
    }

    #[test]
    fn complex_roots_rejected() {
        // x² + 1
        let p = Polynomial::new(vec![1.0, 0.0, 1.0]);
        assert!(matches!(
            p.real_roots(1e-9),
            Err(Error::NotRealRooted { .. })
        ));
    }

    #[test]
    fn kth_largest_on_known_spectrum() {
        let mut p = Polynomial::monomial(0);
        for r in [5.0, 3.0, 1.0, -2.0] {
            p = p.mul_linear(r);
        }
        assert!((p.kth_largest_root(1).unwrap() - 5.0).abs() < 1e-9);
        assert!((p.kth_largest_root(3).unwrap() - 1.0).abs() < 1e-9);
        assert!((p.kth_largest_root(4).unwrap() + 2.0).abs() < 1e-9);
    }
}
