//! Python bindings: states, observables, relation checks and scenario runs.
//!
//! Reports cross the boundary as plain dicts built from their JSON form.

use angulab::operators::{self, spectral, SpectralEvaluator};
use angulab::oracle::{OracleEvaluator, Resolution};
use angulab::relations::{self, BoundaryExponent};
use angulab::scenario::{self, ScenarioConfig};
use angulab::states::{OscillatorParams, DEFAULT_FOURIER_TRUNCATION, DEFAULT_HERMITE_TRUNCATION};
use angulab::{Complex64, Error, Evaluator, Observable, OscillatorState, PeriodicState, SphereState};
use pyo3::exceptions::{PyArithmeticError, PyValueError};
use pyo3::prelude::*;
use serde::Serialize;

fn to_py(err: Error) -> PyErr {
    match err {
        Error::NonFinite(_) | Error::Range(_) => PyArithmeticError::new_err(err.to_string()),
        _ => PyValueError::new_err(err.to_string()),
    }
}

fn to_dict<'py, T: Serialize>(py: Python<'py>, value: &T) -> PyResult<Bound<'py, PyAny>> {
    let text = serde_json::to_string(value).map_err(|e| PyValueError::new_err(e.to_string()))?;
    py.import("json")?.call_method1("loads", (text,))
}

fn observable(name: &str) -> PyResult<Observable> {
    name.parse().map_err(to_py)
}

/// A normalized state on the circle, the torsion-pendulum line or the sphere.
#[pyclass(name = "State", module = "angulab", frozen)]
struct PyState {
    inner: angulab::State,
}

#[pymethods]
impl PyState {
    /// Circle state `Σ c_m e^{imφ}/√(2π)` from `(m, c_m)` pairs.
    #[staticmethod]
    #[pyo3(signature = (coeffs, hbar = 1.0))]
    fn periodic(coeffs: Vec<(i32, Complex64)>, hbar: f64) -> PyResult<Self> {
        let max = coeffs.iter().map(|(m, _)| m.unsigned_abs()).max().unwrap_or(0);
        let state = PeriodicState::new(&coeffs, max.max(DEFAULT_FOURIER_TRUNCATION), hbar).map_err(to_py)?;
        Ok(Self { inner: state.into() })
    }

    /// Torsion-pendulum state from `(n, c_n)` pairs.
    #[staticmethod]
    #[pyo3(signature = (coeffs, inertia = 1.0, omega = 1.0, hbar = 1.0))]
    fn oscillator(coeffs: Vec<(u32, Complex64)>, inertia: f64, omega: f64, hbar: f64) -> PyResult<Self> {
        let params = OscillatorParams::new(inertia, omega, hbar).map_err(to_py)?;
        let max = coeffs.iter().map(|(n, _)| *n).max().unwrap_or(0);
        let state = OscillatorState::new(&coeffs, max.max(DEFAULT_HERMITE_TRUNCATION), params).map_err(to_py)?;
        Ok(Self { inner: state.into() })
    }

    /// Fixed-`l` sphere state `Σ_m c_m Y_lm` from `(m, c_m)` pairs.
    #[staticmethod]
    #[pyo3(signature = (l, coeffs, hbar = 1.0))]
    fn sphere(l: u32, coeffs: Vec<(i32, Complex64)>, hbar: f64) -> PyResult<Self> {
        let state = SphereState::new(l, &coeffs, hbar).map_err(to_py)?;
        Ok(Self { inner: state.into() })
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        Ok(Self { inner: angulab::State::from_json(text).map_err(to_py)? })
    }

    fn to_json(&self) -> PyResult<String> {
        self.inner.to_json().map_err(to_py)
    }

    #[getter]
    fn family(&self) -> String {
        self.inner.family().to_string()
    }

    #[getter]
    fn hbar(&self) -> f64 {
        self.inner.hbar()
    }

    fn norm_sqr(&self) -> f64 {
        self.inner.norm_sqr()
    }

    /// Normalized `(index, coefficient)` pairs.
    fn support(&self) -> Vec<(i32, Complex64)> {
        self.inner.support()
    }

    fn __repr__(&self) -> String {
        format!("State(family={}, terms={})", self.inner.family(), self.inner.support().len())
    }
}

/// Spectral evaluator by default; `oracle=True` switches to quadrature.
enum Backend {
    Spectral(SpectralEvaluator),
    Oracle(OracleEvaluator),
}

impl Backend {
    fn new(state: &PyState, oracle: bool) -> PyResult<Self> {
        Ok(if oracle {
            Backend::Oracle(OracleEvaluator::new(&state.inner, &Resolution::default()).map_err(to_py)?)
        } else {
            Backend::Spectral(spectral(&state.inner).map_err(to_py)?)
        })
    }

    fn get(&self) -> &dyn Evaluator {
        match self {
            Backend::Spectral(e) => e,
            Backend::Oracle(e) => e,
        }
    }
}

#[pyfunction]
#[pyo3(signature = (state, a, oracle = false))]
fn mean(state: &PyState, a: &str, oracle: bool) -> PyResult<f64> {
    operators::mean(Backend::new(state, oracle)?.get(), &observable(a)?).map_err(to_py)
}

#[pyfunction]
#[pyo3(signature = (state, a, oracle = false))]
fn std_dev(state: &PyState, a: &str, oracle: bool) -> PyResult<f64> {
    operators::std_dev(Backend::new(state, oracle)?.get(), &observable(a)?).map_err(to_py)
}

/// Cauchy–Schwarz form `ΔA·ΔB ≥ |(δAψ, δBψ)|`.
#[pyfunction]
#[pyo3(signature = (state, a = "Lz", b = "Phi", oracle = false))]
fn csf<'py>(py: Python<'py>, state: &PyState, a: &str, b: &str, oracle: bool) -> PyResult<Bound<'py, PyAny>> {
    let report = relations::csf(Backend::new(state, oracle)?.get(), &observable(a)?, &observable(b)?).map_err(to_py)?;
    to_dict(py, &report)
}

/// Robertson form `ΔA·ΔB ≥ ½|⟨[A, B]⟩|`, with its entitlement diagnostics.
#[pyfunction]
#[pyo3(signature = (state, a = "Lz", b = "Phi", oracle = false))]
fn rsur<'py>(py: Python<'py>, state: &PyState, a: &str, b: &str, oracle: bool) -> PyResult<Bound<'py, PyAny>> {
    let report = relations::rsur(Backend::new(state, oracle)?.get(), &observable(a)?, &observable(b)?).map_err(to_py)?;
    to_dict(py, &report)
}

/// Matrix of `(A_jψ, A_kψ) − (ψ, A_j A_k ψ)` over the given observables.
#[pyfunction]
#[pyo3(signature = (state, observables, oracle = false))]
fn mismatch_matrix<'py>(
    py: Python<'py>,
    state: &PyState,
    observables: Vec<String>,
    oracle: bool,
) -> PyResult<Bound<'py, PyAny>> {
    let obs = observables.iter().map(|o| observable(o)).collect::<PyResult<Vec<_>>>()?;
    let m = relations::mismatch_matrix(Backend::new(state, oracle)?.get(), &obs).map_err(to_py)?;
    to_dict(py, &m)
}

/// Boundary bound on the circle; `squared=False` uses `|ψ(2π−0)|` instead.
#[pyfunction]
#[pyo3(signature = (state, squared = true, oracle = false))]
fn boundary_bound<'py>(py: Python<'py>, state: &PyState, squared: bool, oracle: bool) -> PyResult<Bound<'py, PyAny>> {
    let exponent = if squared { BoundaryExponent::Squared } else { BoundaryExponent::Single };
    let bound = relations::boundary_bound(Backend::new(state, oracle)?.get(), exponent).map_err(to_py)?;
    to_dict(py, &bound)
}

/// Gram determinant of the deviation vectors, which is never negative.
#[pyfunction]
#[pyo3(signature = (state, observables, oracle = false))]
fn gram_det<'py>(py: Python<'py>, state: &PyState, observables: Vec<String>, oracle: bool) -> PyResult<Bound<'py, PyAny>> {
    let obs = observables.iter().map(|o| observable(o)).collect::<PyResult<Vec<_>>>()?;
    let report = relations::gram_det(Backend::new(state, oracle)?.get(), &obs).map_err(to_py)?;
    to_dict(py, &report)
}

/// Run a scenario from its JSON config and return the report.
#[pyfunction]
fn run_scenario<'py>(py: Python<'py>, config: &str) -> PyResult<Bound<'py, PyAny>> {
    let cfg = ScenarioConfig::from_json(config).map_err(to_py)?;
    let report = scenario::run_scenario(&cfg).map_err(to_py)?;
    to_dict(py, &report)
}

#[pymodule]
#[pyo3(name = "angulab")]
fn angulab_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyState>()?;
    m.add_function(wrap_pyfunction!(mean, m)?)?;
    m.add_function(wrap_pyfunction!(std_dev, m)?)?;
    m.add_function(wrap_pyfunction!(csf, m)?)?;
    m.add_function(wrap_pyfunction!(rsur, m)?)?;
    m.add_function(wrap_pyfunction!(mismatch_matrix, m)?)?;
    m.add_function(wrap_pyfunction!(boundary_bound, m)?)?;
    m.add_function(wrap_pyfunction!(gram_det, m)?)?;
    m.add_function(wrap_pyfunction!(run_scenario, m)?)?;
    m.add("SCHEMA_VERSION", scenario::SCHEMA_VERSION)?;
    Ok(())
}
