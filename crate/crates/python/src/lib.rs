//! Python bindings for `eislab`.
//!
//! Report-shaped results are handed over as plain dicts and lists (decoded
//! from the same JSON the CLI emits), so big integers arrive as Python ints.

use num_bigint::BigInt;
use num_rational::BigRational;
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use serde::Serialize;

use eislab::cuspgroup;
use eislab::divlattice::build_tables;
use eislab::modsym::{self, LevelAnalysis};
use eislab::qseries;
use eislab::verify::{self, Suite};
use eislab::{Error, SquareFreeLevel};

fn py_err(e: Error) -> PyErr {
    match e {
        Error::Invariant(_) | Error::InfiniteIndex(_) => PyRuntimeError::new_err(e.to_string()),
        _ => PyValueError::new_err(e.to_string()),
    }
}

fn level(n: u64) -> PyResult<SquareFreeLevel> {
    SquareFreeLevel::new(n).map_err(py_err)
}

fn to_py<T: Serialize>(py: Python<'_>, value: &T) -> PyResult<Py<PyAny>> {
    let text = serde_json::to_string(value).map_err(|e| PyRuntimeError::new_err(e.to_string()))?;
    Ok(py.import("json")?.call_method1("loads", (text,))?.unbind())
}

/// A square-free level `N`.
#[pyclass(name = "Level", frozen)]
struct PyLevel {
    inner: SquareFreeLevel,
}

#[pymethods]
impl PyLevel {
    #[new]
    fn new(n: u64) -> PyResult<Self> {
        Ok(Self { inner: level(n)? })
    }

    #[getter]
    fn value(&self) -> u64 {
        self.inner.value()
    }

    #[getter]
    fn primes(&self) -> Vec<u64> {
        self.inner.primes().to_vec()
    }

    #[getter]
    fn omega(&self) -> usize {
        self.inner.omega()
    }

    /// `(φ(N), ψ(N))`.
    fn phi_psi(&self) -> (BigInt, BigInt) {
        let (phi, psi, _) = eislab::exactnum::phi_psi_omega(&self.inner);
        (phi, psi)
    }

    /// Divisors in the table order.
    fn divisors(&self) -> PyResult<Vec<u64>> {
        Ok(eislab::divlattice::DivisorTable::new(&self.inner)
            .map_err(py_err)?
            .values())
    }

    fn __repr__(&self) -> String {
        format!("Level({})", self.inner.value())
    }
}

/// The Hecke ring of level `N` on integral cuspidal modular symbols, with
/// the indices of all Eisenstein ideals.
#[pyclass(name = "HeckeRing", frozen)]
struct PyHeckeRing {
    analysis: LevelAnalysis,
}

#[pymethods]
impl PyHeckeRing {
    #[new]
    #[pyo3(signature = (n, cap = modsym::DEFAULT_MAX_LEVEL))]
    fn new(py: Python<'_>, n: u64, cap: u64) -> PyResult<Self> {
        let l = level(n)?;
        let analysis = py
            .detach(|| LevelAnalysis::build_with_cap(&l, cap))
            .map_err(py_err)?;
        Ok(Self { analysis })
    }

    #[getter]
    fn level(&self) -> u64 {
        self.analysis.ring.level()
    }

    #[getter]
    fn genus(&self) -> usize {
        self.analysis.ring.genus()
    }

    #[getter]
    fn rank(&self) -> usize {
        self.analysis.ring.rank()
    }

    #[getter]
    fn sturm_bound(&self) -> u64 {
        self.analysis.ring.bound()
    }

    /// Matrix of `T_n` on the cuspidal lattice, as a list of rows.
    fn hecke_matrix(&self, n: u64) -> PyResult<Vec<Vec<BigInt>>> {
        Ok(self.analysis.ring.t(n).map_err(py_err)?.row_vecs())
    }

    /// Index of `I_{M,N}` in the ring.
    fn eisenstein_index(&self, m: u64) -> PyResult<BigInt> {
        Ok(self.analysis.index(m).map_err(py_err)?.clone())
    }

    /// Index against cuspidal order, with the per-prime exponents and verdict.
    fn compare_index_order(&self, py: Python<'_>, m: u64) -> PyResult<Py<PyAny>> {
        to_py(
            py,
            &modsym::compare_index_order(&self.analysis, m).map_err(py_err)?,
        )
    }

    /// Eisenstein maximal ideals, the check for `I_{1,N}`, and the case split
    /// for each maximal ideal.
    fn maximal_ideals(&self, py: Python<'_>) -> PyResult<Py<PyAny>> {
        let (records, nonmax) =
            modsym::enumerate_eisenstein_maximal(&self.analysis).map_err(py_err)?;
        let checks =
            modsym::verify_main_theorem(self.analysis.level(), &records).map_err(py_err)?;
        to_py(
            py,
            &serde_json::json!({ "records": records, "nonmaximal": nonmax, "checks": checks }),
        )
    }

    fn __repr__(&self) -> String {
        format!("HeckeRing(level={}, rank={})", self.level(), self.rank())
    }
}

/// Order of `C_{M,N}` as a dict; `oracle=True` adds the eta-lattice order.
#[pyfunction]
#[pyo3(signature = (n, m, oracle = false))]
fn cusp_order(py: Python<'_>, n: u64, m: u64, oracle: bool) -> PyResult<Py<PyAny>> {
    let l = level(n)?;
    let r = if oracle {
        cuspgroup::order_with_oracle(&l, m)
    } else {
        cuspgroup::order_closed_form(&l, m)
    }
    .map_err(py_err)?;
    to_py(py, &r)
}

#[pyfunction]
fn order_lattice_oracle(n: u64, m: u64) -> PyResult<BigInt> {
    cuspgroup::order_lattice_oracle(&level(n)?, m).map_err(py_err)
}

/// Invariant factors of the group generated by degree-zero cuspidal divisors.
#[pyfunction]
fn cuspidal_group_structure(n: u64) -> PyResult<Vec<BigInt>> {
    cuspgroup::cuspidal_group_structure(&level(n)?).map_err(py_err)
}

type Rows = Vec<Vec<BigInt>>;

/// `(24Λ, A)` as lists of rows.
#[pyfunction]
fn lambda_matrices(n: u64) -> PyResult<(Rows, Rows)> {
    let t = build_tables(&level(n)?).map_err(py_err)?;
    Ok((t.lambda24.row_vecs(), t.a.row_vecs()))
}

/// Coefficients `a_0, …, a_{prec-1}` of `E_{M,N}`.
#[pyfunction]
#[pyo3(signature = (n, m, prec = qseries::DEFAULT_PRECISION))]
fn eisenstein_series(n: u64, m: u64, prec: usize) -> PyResult<Vec<BigInt>> {
    Ok(qseries::eisenstein_series(&level(n)?, m, prec)
        .map_err(py_err)?
        .coeffs()
        .to_vec())
}

/// `[(cusp, source, value)]` with `value` a `fractions.Fraction`.
#[pyfunction]
fn residues(n: u64, m: u64) -> PyResult<Vec<(u64, String, BigRational)>> {
    Ok(qseries::residues(&level(n)?, m)
        .map_err(py_err)?
        .into_iter()
        .map(|r| {
            let source = serde_json::to_value(r.source)
                .ok()
                .and_then(|v| v.as_str().map(str::to_string))
                .unwrap_or_default();
            (r.cusp, source, r.value)
        })
        .collect())
}

/// Coefficient-wise check of the level-lowering identity at `(N, p)`.
#[pyfunction]
#[pyo3(signature = (n, p, prec = 500))]
fn level_lowering_identity(py: Python<'_>, n: u64, p: u64, prec: usize) -> PyResult<Py<PyAny>> {
    to_py(
        py,
        &qseries::level_lowering_identity_check(&level(n)?, p, prec).map_err(py_err)?,
    )
}

/// Runs a verification suite and returns its report as a dict.
#[pyfunction]
fn run_suite(py: Python<'_>, suite: &str, max_level: u64) -> PyResult<Py<PyAny>> {
    let suite: Suite = suite.parse().map_err(PyValueError::new_err)?;
    let report = py
        .detach(|| verify::run_suite(suite, max_level))
        .map_err(py_err)?;
    to_py(py, &report)
}

#[pymodule]
fn eislab_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyLevel>()?;
    m.add_class::<PyHeckeRing>()?;
    m.add_function(wrap_pyfunction!(cusp_order, m)?)?;
    m.add_function(wrap_pyfunction!(order_lattice_oracle, m)?)?;
    m.add_function(wrap_pyfunction!(cuspidal_group_structure, m)?)?;
    m.add_function(wrap_pyfunction!(lambda_matrices, m)?)?;
    m.add_function(wrap_pyfunction!(eisenstein_series, m)?)?;
    m.add_function(wrap_pyfunction!(residues, m)?)?;
    m.add_function(wrap_pyfunction!(level_lowering_identity, m)?)?;
    m.add_function(wrap_pyfunction!(run_suite, m)?)?;
    Ok(())
}
