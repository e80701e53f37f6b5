//! Python bindings for the biquadratic tensor library.
//!
//! Exposes the tensor and graph types plus the spectral operations as a
//! `biquad` extension module. Indices are 0-based on this surface; the
//! JSON document format (1-based) is reachable through
//! `BiquadraticTensor.from_document` / `to_document`.

use biquad_core::io::TensorDocument;
use biquad_core::{
    BipartiteTwoGraph, BiquadraticTensor, Edge, MEigenPair, SolverConfig, StructureReport,
    VectorPair,
};
use pyo3::exceptions::{PyIndexError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;
use std::collections::BTreeMap;

fn err(e: biquad_core::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

#[pyclass(name = "BiquadraticTensor", module = "biquad")]
struct PyTensor {
    inner: BiquadraticTensor,
}

impl PyTensor {
    fn check_index(&self, i1: usize, j1: usize, i2: usize, j2: usize) -> PyResult<()> {
        let (m, n) = (self.inner.m(), self.inner.n());
        if i1 >= m || i2 >= m || j1 >= n || j2 >= n {
            return Err(PyIndexError::new_err(format!(
                "index ({i1},{j1},{i2},{j2}) out of range for a {m}x{n} tensor (0-based)"
            )));
        }
        Ok(())
    }
}

#[pymethods]
impl PyTensor {
    /// Zero tensor with modes (m, n, m, n).
    #[new]
    fn new(m: usize, n: usize) -> PyResult<Self> {
        BiquadraticTensor::zeros(m, n)
            .map(|inner| Self { inner })
            .map_err(err)
    }

    /// Builds a tensor from a row-major (i1, j1, i2, j2) entry buffer.
    #[staticmethod]
    fn from_entries(m: usize, n: usize, entries: Vec<f64>) -> PyResult<Self> {
        BiquadraticTensor::from_entries(m, n, entries)
            .map(|inner| Self { inner })
            .map_err(err)
    }

    /// Parses the JSON document format (1-based indices).
    #[staticmethod]
    fn from_document(text: &str) -> PyResult<Self> {
        let doc = TensorDocument::from_json(text).map_err(|e| PyValueError::new_err(e.to_string()))?;
        doc.to_tensor().map(|inner| Self { inner }).map_err(err)
    }

    #[getter]
    fn m(&self) -> usize {
        self.inner.m()
    }

    #[getter]
    fn n(&self) -> usize {
        self.inner.n()
    }

    fn set(&mut self, i1: usize, j1: usize, i2: usize, j2: usize, value: f64) -> PyResult<()> {
        self.check_index(i1, j1, i2, j2)?;
        if !value.is_finite() {
            return Err(PyValueError::new_err("entries must be finite"));
        }
        self.inner.set(i1, j1, i2, j2, value);
        Ok(())
    }

    fn get(&self, i1: usize, j1: usize, i2: usize, j2: usize) -> PyResult<f64> {
        self.check_index(i1, j1, i2, j2)?;
        Ok(self.inner.get(i1, j1, i2, j2))
    }

    /// Value of the biquadratic form f(x, y).
    fn eval(&self, x: Vec<f64>, y: Vec<f64>) -> PyResult<f64> {
        self.inner
            .biquadratic_form(&VectorPair::new(x, y))
            .map_err(err)
    }

    fn contract_g(&self, x: Vec<f64>, y: Vec<f64>) -> PyResult<Vec<f64>> {
        self.inner.contract_g(&VectorPair::new(x, y)).map_err(err)
    }

    fn contract_h(&self, x: Vec<f64>, y: Vec<f64>) -> PyResult<Vec<f64>> {
        self.inner.contract_h(&VectorPair::new(x, y)).map_err(err)
    }

    fn is_nonnegative(&self) -> bool {
        self.inner.is_nonnegative()
    }

    #[pyo3(signature = (tol=0.0))]
    fn is_weakly_symmetric(&self, tol: f64) -> bool {
        self.inner.is_weakly_symmetric(tol)
    }

    #[pyo3(signature = (tol=0.0))]
    fn is_symmetric(&self, tol: f64) -> bool {
        self.inner.is_symmetric(tol)
    }

    fn scaled(&self, c: f64) -> Self {
        Self {
            inner: self.inner.scaled(c),
        }
    }

    /// Serializes to the JSON document format (1-based indices).
    #[pyo3(signature = (name=None))]
    fn to_document(&self, name: Option<String>) -> String {
        let mut metadata = BTreeMap::new();
        if let Some(name) = name {
            metadata.insert("name".to_string(), name);
        }
        TensorDocument::from_tensor(&self.inner, metadata).to_json()
    }

    fn __repr__(&self) -> String {
        format!(
            "BiquadraticTensor(m={}, n={}, nonzeros={})",
            self.inner.m(),
            self.inner.n(),
            self.inner.entries().iter().filter(|v| **v != 0.0).count()
        )
    }
}

#[pyclass(name = "BipartiteTwoGraph", module = "biquad")]
struct PyGraph {
    inner: BipartiteTwoGraph,
}

#[pymethods]
impl PyGraph {
    #[new]
    fn new(m: usize, n: usize) -> PyResult<Self> {
        BipartiteTwoGraph::new(m, n)
            .map(|inner| Self { inner })
            .map_err(err)
    }

    /// Parses the plain-text edge list format (1-based, `m n` header).
    #[staticmethod]
    fn from_edge_list(text: &str) -> PyResult<Self> {
        biquad_core::io::parse_edge_list(text)
            .map(|inner| Self { inner })
            .map_err(|e| PyValueError::new_err(e.to_string()))
    }

    #[pyo3(signature = (i1, i2, j1, j2, weight=1.0))]
    fn add_edge(&mut self, i1: usize, i2: usize, j1: usize, j2: usize, weight: f64) -> PyResult<()> {
        let edge = Edge::new(i1, i2, j1, j2, weight).map_err(err)?;
        self.inner.add_edge(edge).map_err(err)
    }

    #[getter]
    fn m(&self) -> usize {
        self.inner.m()
    }

    #[getter]
    fn n(&self) -> usize {
        self.inner.n()
    }

    fn edge_count(&self) -> usize {
        self.inner.edges().len()
    }

    fn adjacency(&self) -> PyTensor {
        PyTensor {
            inner: self.inner.adjacency_tensor(),
        }
    }

    fn degree_tensors(&self) -> (PyTensor, PyTensor, PyTensor) {
        let (d0, dx, dy) = self.inner.degree_tensors();
        (
            PyTensor { inner: d0 },
            PyTensor { inner: dx },
            PyTensor { inner: dy },
        )
    }

    fn signless_laplacian(&self) -> PyTensor {
        PyTensor {
            inner: self.inner.signless_laplacian(),
        }
    }

    fn laplacian(&self) -> PyTensor {
        PyTensor {
            inner: self.inner.laplacian(),
        }
    }

    fn is_bi_separable(&self) -> PyResult<bool> {
        self.inner.is_bi_separable().map_err(err)
    }

    fn separability_report<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyDict>> {
        let r = self.inner.separability_report().map_err(err)?;
        let dict = PyDict::new(py);
        let witness = |py: Python<'py>,
                       w: &Option<biquad_core::SeparabilityWitness>|
         -> PyResult<Option<Bound<'py, PyDict>>> {
            match w {
                Some(w) => {
                    let d = PyDict::new(py);
                    d.set_item("pair", w.pair)?;
                    d.set_item("block", w.block.clone())?;
                    Ok(Some(d))
                }
                None => Ok(None),
            }
        };
        dict.set_item("t_separable", r.t_separable.is_some())?;
        dict.set_item("t_witness", witness(py, &r.t_separable)?)?;
        dict.set_item("s_separable", r.s_separable.is_some())?;
        dict.set_item("s_witness", witness(py, &r.s_separable)?)?;
        dict.set_item("bi_separable", r.bi_separable)?;
        Ok(dict)
    }

    fn __repr__(&self) -> String {
        format!(
            "BipartiteTwoGraph(m={}, n={}, edges={})",
            self.inner.m(),
            self.inner.n(),
            self.inner.edges().len()
        )
    }
}

fn eigenpair_dict<'py>(py: Python<'py>, p: &MEigenPair) -> PyResult<Bound<'py, PyDict>> {
    let dict = PyDict::new(py);
    dict.set_item("lambda", p.lambda)?;
    dict.set_item("x", p.pair.x.clone())?;
    dict.set_item("y", p.pair.y.clone())?;
    dict.set_item("class", p.class.to_string())?;
    dict.set_item("residual", p.residual)?;
    dict.set_item("is_m_plus", p.is_m_plus(1e-8))?;
    Ok(dict)
}

fn structure_dict<'py>(py: Python<'py>, r: &StructureReport) -> PyResult<Bound<'py, PyDict>> {
    let dict = PyDict::new(py);
    let witness = |w: &Option<biquad_core::ReducibilityWitness>| -> PyResult<Option<Bound<'py, PyDict>>> {
        match w {
            Some(w) => {
                let d = PyDict::new(py);
                d.set_item("fixed", w.fixed)?;
                d.set_item("block", w.block.clone())?;
                Ok(Some(d))
            }
            None => Ok(None),
        }
    };
    let quasi_witness =
        |w: &Option<biquad_core::QuasiReducibilityWitness>| -> PyResult<Option<Bound<'py, PyDict>>> {
            match w {
                Some(w) => {
                    let d = PyDict::new(py);
                    d.set_item("pair", w.fixed)?;
                    d.set_item("block", w.block.clone())?;
                    Ok(Some(d))
                }
                None => Ok(None),
            }
        };
    dict.set_item("x_reducible", r.x_reducible.is_some())?;
    dict.set_item("x_witness", witness(&r.x_reducible)?)?;
    dict.set_item("y_reducible", r.y_reducible.is_some())?;
    dict.set_item("y_witness", witness(&r.y_reducible)?)?;
    dict.set_item("x_quasi_reducible", r.x_quasi_reducible.is_some())?;
    dict.set_item("x_quasi_witness", quasi_witness(&r.x_quasi_reducible)?)?;
    dict.set_item("y_quasi_reducible", r.y_quasi_reducible.is_some())?;
    dict.set_item("y_quasi_witness", quasi_witness(&r.y_quasi_reducible)?)?;
    dict.set_item("irreducible", r.irreducible)?;
    dict.set_item("quasi_irreducible", r.quasi_irreducible)?;
    Ok(dict)
}

/// Structural reducibility flags with witnesses (0-based).
#[pyfunction]
fn structure_report<'py>(py: Python<'py>, tensor: &PyTensor) -> PyResult<Bound<'py, PyDict>> {
    let r = biquad_core::structure_report(&tensor.inner).map_err(err)?;
    structure_dict(py, &r)
}

fn config(tol: f64, restarts: usize, max_iter: usize, seed: u64, shift: Option<f64>) -> SolverConfig {
    SolverConfig {
        max_iter,
        tol,
        shift,
        restarts,
        seed,
    }
}

/// Largest M-eigenvalue of a nonnegative tensor by bound-driven iteration.
#[pyfunction]
#[pyo3(signature = (tensor, tol=1e-10, restarts=32, max_iter=5000, seed=0, shift=None))]
fn solve_lambda_max<'py>(
    py: Python<'py>,
    tensor: &PyTensor,
    tol: f64,
    restarts: usize,
    max_iter: usize,
    seed: u64,
    shift: Option<f64>,
) -> PyResult<Bound<'py, PyDict>> {
    let outcome =
        biquad_core::solve_lambda_max(&tensor.inner, &config(tol, restarts, max_iter, seed, shift))
            .map_err(err)?;
    let dict = eigenpair_dict(py, &outcome.best)?;
    dict.set_item("lower_bound", outcome.lower_bound)?;
    dict.set_item("upper_bound", outcome.upper_bound)?;
    dict.set_item("converged", outcome.converged)?;
    dict.set_item("iterations_used", outcome.iterations_used)?;
    dict.set_item("restart_values", outcome.restart_values)?;
    Ok(dict)
}

/// All M-eigenpairs of a small tensor (2 <= m, n <= 3), sorted by
/// eigenvalue.
#[pyfunction]
#[pyo3(signature = (tensor, grid=721, tol=1e-9))]
fn enumerate_m_eigenpairs<'py>(
    py: Python<'py>,
    tensor: &PyTensor,
    grid: usize,
    tol: f64,
) -> PyResult<Vec<Bound<'py, PyDict>>> {
    let pairs =
        biquad_core::enumerate_m_eigenpairs_small(&tensor.inner, grid, tol).map_err(err)?;
    pairs.iter().map(|p| eigenpair_dict(py, p)).collect()
}

/// Ratio bounds (v, u) at a nonnegative nonzero pair.
#[pyfunction]
fn collatz_bounds(tensor: &PyTensor, x: Vec<f64>, y: Vec<f64>) -> PyResult<(f64, f64)> {
    biquad_core::collatz_bounds(&tensor.inner, &VectorPair::new(x, y)).map_err(err)
}

#[pyfunction]
#[pyo3(signature = (tensor, samples=1000, seed=0))]
fn estimate_rho_star(tensor: &PyTensor, samples: usize, seed: u64) -> PyResult<f64> {
    biquad_core::estimate_rho_star(&tensor.inner, samples, seed).map_err(err)
}

#[pyfunction]
#[pyo3(signature = (tensor, samples=1000, seed=0))]
fn estimate_rho_lower(tensor: &PyTensor, samples: usize, seed: u64) -> PyResult<f64> {
    biquad_core::estimate_rho_lower(&tensor.inner, samples, seed).map_err(err)
}

/// Multi-start minimization of the form; one-sided PSD probe.
#[pyfunction]
#[pyo3(signature = (tensor, restarts=32, max_iter=5000, seed=0))]
fn min_m_eigenvalue_probe<'py>(
    py: Python<'py>,
    tensor: &PyTensor,
    restarts: usize,
    max_iter: usize,
    seed: u64,
) -> PyResult<Bound<'py, PyDict>> {
    let probe = biquad_core::min_m_eigenvalue_probe(
        &tensor.inner,
        &config(1e-10, restarts, max_iter, seed, None),
    )
    .map_err(err)?;
    let dict = PyDict::new(py);
    dict.set_item("value", probe.value)?;
    dict.set_item("converged", probe.converged)?;
    dict.set_item("x", probe.witness.x)?;
    dict.set_item("y", probe.witness.y)?;
    Ok(dict)
}

/// Verifies a candidate eigenpair; returns (ok, residual).
#[pyfunction]
#[pyo3(signature = (tensor, lam, x, y, tol=1e-9))]
fn check_m_eigenpair(
    tensor: &PyTensor,
    lam: f64,
    x: Vec<f64>,
    y: Vec<f64>,
    tol: f64,
) -> PyResult<(bool, f64)> {
    let mut cand = MEigenPair::new(lam, VectorPair::new(x, y));
    let ok = tensor
        .inner
        .check_m_eigenpair(&mut cand, tol)
        .map_err(err)?;
    Ok((ok, cand.residual))
}

/// Class tag ("M", "M+", "M++", "M0") of a verified eigenpair.
#[pyfunction]
#[pyo3(signature = (tensor, lam, x, y, tol=1e-8))]
fn classify_eigenpair(
    tensor: &PyTensor,
    lam: f64,
    x: Vec<f64>,
    y: Vec<f64>,
    tol: f64,
) -> PyResult<String> {
    let mut cand = MEigenPair::new(lam, VectorPair::new(x, y));
    tensor
        .inner
        .check_m_eigenpair(&mut cand, tol.max(f64::MIN_POSITIVE))
        .map_err(err)?;
    let class = biquad_core::classify_eigenpair(&cand, tol).map_err(err)?;
    Ok(class.to_string())
}

#[pymodule]
fn biquad(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyTensor>()?;
    m.add_class::<PyGraph>()?;
    m.add_function(wrap_pyfunction!(structure_report, m)?)?;
    m.add_function(wrap_pyfunction!(solve_lambda_max, m)?)?;
    m.add_function(wrap_pyfunction!(enumerate_m_eigenpairs, m)?)?;
    m.add_function(wrap_pyfunction!(collatz_bounds, m)?)?;
    m.add_function(wrap_pyfunction!(estimate_rho_star, m)?)?;
    m.add_function(wrap_pyfunction!(estimate_rho_lower, m)?)?;
    m.add_function(wrap_pyfunction!(min_m_eigenvalue_probe, m)?)?;
    m.add_function(wrap_pyfunction!(check_m_eigenpair, m)?)?;
    m.add_function(wrap_pyfunction!(classify_eigenpair, m)?)?;
    m.add("SUPPORT_THRESHOLD", biquad_core::SUPPORT_THRESHOLD)?;
    m.add("DEFAULT_RESIDUAL_TOL", biquad_core::DEFAULT_RESIDUAL_TOL)?;
    m.add("__version__", env!("CARGO_PKG_VERSION"))?;
    Ok(())
}
