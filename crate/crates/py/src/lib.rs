//! Python bindings for the `resinv` column subset selection toolkit.
//!
//! The module exposes the dense [`Matrix`] wrapper, the invertibility
//! certificate type, the three constructive selectors, the exhaustive
//! oracle, and the closed-form bound report. Structured diagnostics (pipeline
//! traces, full run reports) are returned as JSON strings with the same
//! schema the CLI writes.

use std::str::FromStr;

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use resinv::matlin::Weights;
use resinv::oracle::{Objective, SUBSET_CAP};
use resinv::report::Selector;
use resinv::{Matrix as CoreMatrix, SubsetSelection};

fn err(e: resinv::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

/// A selected index set σ together with its invertibility certificate.
#[pyclass(name = "Selection", skip_from_py_object)]
#[derive(Clone)]
struct PySelection {
    inner: SubsetSelection,
}

#[pymethods]
impl PySelection {
    /// Sorted, duplicate-free selected column indices.
    #[getter]
    fn sigma(&self) -> Vec<usize> {
        self.inner.sigma.clone()
    }

    #[getter]
    fn k(&self) -> usize {
        self.inner.k
    }

    /// Smallest singular value of the column restriction.
    #[getter]
    fn smin(&self) -> f64 {
        self.inner.smin
    }

    /// Operator norm of the inverse restriction (inf when singular).
    #[getter]
    fn inv_norm(&self) -> f64 {
        self.inner.inv_norm
    }

    /// Name of the procedure that produced the selection.
    #[getter]
    fn method(&self) -> String {
        format!("{:?}", self.inner.method)
    }

    fn __repr__(&self) -> String {
        format!(
            "Selection(sigma={:?}, k={}, smin={}, inv_norm={}, method={:?})",
            self.inner.sigma, self.inner.k, self.inner.smin, self.inner.inv_norm, self.inner.method
        )
    }
}

/// Dense real matrix with cached SVD, column restrictions, and the stable
/// rank family.
#[pyclass(name = "Matrix", skip_from_py_object)]
#[derive(Clone)]
struct PyMatrix {
    inner: CoreMatrix,
}

#[pymethods]
impl PyMatrix {
    /// Build from a row-major nested list of floats.
    #[new]
    fn new(rows: Vec<Vec<f64>>) -> PyResult<Self> {
        let n = rows.len();
        if n == 0 {
            return Err(PyValueError::new_err("matrix must have at least one row"));
        }
        let m = rows[0].len();
        if m == 0 || rows.iter().any(|r| r.len() != m) {
            return Err(PyValueError::new_err(
                "all rows must have the same nonzero length",
            ));
        }
        let flat: Vec<f64> = rows.into_iter().flatten().collect();
        Ok(PyMatrix {
            inner: CoreMatrix::from_rows(n, m, &flat),
        })
    }

    #[staticmethod]
    fn identity(n: usize) -> Self {
        PyMatrix {
            inner: CoreMatrix::identity(n),
        }
    }

    /// Named test-matrix generators: "harmonic", "circulant-sqrt",
    /// "gaussian", "unit-columns", "identity".
    #[staticmethod]
    #[pyo3(signature = (kind, n, m, seed = 0))]
    fn generate(kind: &str, n: usize, m: usize, seed: u64) -> PyResult<Self> {
        Ok(PyMatrix {
            inner: resinv::gen::generate(kind, n, m, seed).map_err(err)?,
        })
    }

    #[staticmethod]
    fn from_csv(text: &str) -> PyResult<Self> {
        Ok(PyMatrix {
            inner: CoreMatrix::from_csv(text).map_err(err)?,
        })
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        Ok(PyMatrix {
            inner: CoreMatrix::from_json(text).map_err(err)?,
        })
    }

    #[getter]
    fn n(&self) -> usize {
        self.inner.nrows()
    }

    #[getter]
    fn m(&self) -> usize {
        self.inner.ncols()
    }

    #[getter]
    fn rank(&self) -> usize {
        self.inner.rank()
    }

    fn rows(&self) -> Vec<Vec<f64>> {
        (0..self.inner.nrows())
            .map(|i| {
                (0..self.inner.ncols())
                    .map(|j| self.inner.inner()[(i, j)])
                    .collect()
            })
            .collect()
    }

    fn to_csv(&self) -> String {
        self.inner.to_csv()
    }

    fn to_json(&self) -> String {
        self.inner.to_json()
    }

    /// Singular values in non-increasing order.
    fn singular_values(&self) -> PyResult<Vec<f64>> {
        self.inner.singular_values().map_err(err)
    }

    fn schatten_norm(&self, p: f64) -> f64 {
        self.inner.schatten_norm(p)
    }

    /// p-stable rank (‖A‖_{S2}/‖A‖_{Sp})^{2p/(p−2)}; p = inf gives ‖A‖²_{S2}/‖A‖².
    fn stable_rank(&self, p: f64) -> PyResult<f64> {
        self.inner.stable_rank(p).map_err(err)
    }

    fn entropic_stable_rank(&self) -> PyResult<f64> {
        self.inner.entropic_stable_rank().map_err(err)
    }

    /// Certificate for an explicit index set σ.
    fn restrict_certificate(&self, sigma: Vec<usize>) -> PySelection {
        PySelection {
            inner: self.inner.restrict_certificate(&sigma),
        }
    }

    fn __repr__(&self) -> String {
        format!("Matrix(n={}, m={})", self.inner.nrows(), self.inner.ncols())
    }
}

fn weights_from(d: Option<Vec<f64>>) -> PyResult<Option<Weights>> {
    d.map(|v| Weights::new(v).map_err(err)).transpose()
}

/// Volume-exchange local search: returns the selected index set τ, |τ| = r.
#[pyfunction]
#[pyo3(signature = (a, r, d = None))]
fn volume_select(a: &PyMatrix, r: usize, d: Option<Vec<f64>>) -> PyResult<Vec<usize>> {
    let w = weights_from(d)?.unwrap_or_else(|| Weights::uniform(a.inner.ncols()));
    resinv::volume_select::volume_exchange_select(&a.inner, r, &w).map_err(err)
}

/// Multi-level selector for full-column-rank inputs; returns the certificate
/// and the pipeline trace as JSON.
#[pyfunction]
fn giannopoulos_select(a: &PyMatrix, k: usize) -> PyResult<(PySelection, String)> {
    let (sel, trace) = resinv::gia_select::giannopoulos_select(&a.inner, k).map_err(err)?;
    let trace_json =
        serde_json::to_string(&trace).map_err(|e| PyValueError::new_err(e.to_string()))?;
    Ok((PySelection { inner: sel }, trace_json))
}

/// End-to-end rank pipeline; returns (selection, c_impl, bound_value, r_used).
#[pyfunction]
#[pyo3(signature = (a, k, d = None))]
fn rank_select(
    a: &PyMatrix,
    k: usize,
    d: Option<Vec<f64>>,
) -> PyResult<(PySelection, f64, f64, usize)> {
    let w = weights_from(d)?;
    let main = resinv::gia_select::main_theorem_select(&a.inner, k, w.as_ref()).map_err(err)?;
    Ok((
        PySelection {
            inner: main.selection,
        },
        main.c_impl,
        main.bound_value,
        main.r_used,
    ))
}

/// Interlacing greedy via expected characteristic polynomials; the
/// certificate satisfies smin² ≥ γ/m.
#[pyfunction]
fn interlacing_select(a: &PyMatrix, k: usize) -> PyResult<PySelection> {
    Ok(PySelection {
        inner: resinv::mss_select::interlacing_greedy_select(&a.inner, k).map_err(err)?,
    })
}

/// The constant-free barrier quantity γ = rank(√rank−√k)²/Σ 1/s_i².
#[pyfunction]
fn gamma(a: &PyMatrix, k: usize) -> PyResult<f64> {
    resinv::mss_select::gamma(&a.inner, k).map_err(err)
}

/// Refined barrier bound; returns (phi, value, phi_max, gamma).
#[pyfunction]
fn barrier_bound(a: &PyMatrix, k: usize) -> PyResult<(f64, f64, f64, f64)> {
    let b = resinv::mss_select::barrier_bound(&a.inner, k).map_err(err)?;
    Ok((b.phi, b.value, b.phi_max, b.gamma))
}

/// Exhaustive optimum over all σ with |σ| = k; objective "smin" or "volume".
/// Returns (best_sigma, best_value, evaluated).
#[pyfunction]
#[pyo3(signature = (a, k, objective = "smin", cap = SUBSET_CAP))]
fn oracle_best(
    a: &PyMatrix,
    k: usize,
    objective: &str,
    cap: u64,
) -> PyResult<(Vec<usize>, f64, u64)> {
    let obj = match objective {
        "smin" => Objective::Smin,
        "volume" => Objective::Volume,
        other => {
            return Err(PyValueError::new_err(format!(
                "unknown objective '{other}' (expected 'smin' or 'volume')"
            )))
        }
    };
    let res = resinv::oracle::best_subset_capped(&a.inner, k, obj, cap).map_err(err)?;
    Ok((res.best_sigma, res.best_value, res.evaluated))
}

/// Closed-form bound report as JSON (one entry per bound, with applicability
/// flags and whether the bound carries the tracked implementation constant).
#[pyfunction]
fn bound_report_json(a: &PyMatrix, k: usize) -> PyResult<String> {
    serde_json::to_string_pretty(&resinv::bounds::bound_report(&a.inner, k))
        .map_err(|e| PyValueError::new_err(e.to_string()))
}

/// Full run report (schema "restricted-inv/1") as JSON, matching the CLI's
/// `select` output byte for byte for the same inputs.
#[pyfunction]
#[pyo3(signature = (a, k, selectors = None, with_oracle = false))]
fn run_report_json(
    a: &PyMatrix,
    k: usize,
    selectors: Option<Vec<String>>,
    with_oracle: bool,
) -> PyResult<String> {
    let sels: Vec<Selector> = match selectors {
        None => Selector::ALL.to_vec(),
        Some(names) => names
            .iter()
            .map(|s| Selector::from_str(s).map_err(err))
            .collect::<PyResult<_>>()?,
    };
    let meta = resinv::report::matrix_meta(&a.inner, None, None);
    let report =
        resinv::report::run_select(&a.inner, k, &sels, None, with_oracle, SUBSET_CAP, meta)
            .map_err(err)?;
    Ok(report.to_json())
}

#[pymodule]
fn resinv_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyMatrix>()?;
    m.add_class::<PySelection>()?;
    m.add_function(wrap_pyfunction!(volume_select, m)?)?;
    m.add_function(wrap_pyfunction!(giannopoulos_select, m)?)?;
    m.add_function(wrap_pyfunction!(rank_select, m)?)?;
    m.add_function(wrap_pyfunction!(interlacing_select, m)?)?;
    m.add_function(wrap_pyfunction!(gamma, m)?)?;
    m.add_function(wrap_pyfunction!(barrier_bound, m)?)?;
    m.add_function(wrap_pyfunction!(oracle_best, m)?)?;
    m.add_function(wrap_pyfunction!(bound_report_json, m)?)?;
    m.add_function(wrap_pyfunction!(run_report_json, m)?)?;
    Ok(())
}
