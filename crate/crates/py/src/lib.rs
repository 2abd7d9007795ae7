//! Python bindings for the orliczlab core.

use orliczlab::counterexample::{verify_counterexample, CounterexampleSpec, Schedule};
use orliczlab::functionals::{self as fun, HardyKind, NormResult};
use orliczlab::indices::{boyd_analytic_bracket, zippin_indices as zippin};
use orliczlab::{DilationFactor, Error, PhiSpec};
use pyo3::exceptions::{PyArithmeticError, PyValueError};
use pyo3::prelude::*;

fn py_err(e: Error) -> PyErr {
    match e {
        Error::Divergent { .. } => PyArithmeticError::new_err(e.to_string()),
        _ => PyValueError::new_err(e.to_string()),
    }
}

type Bracket = (f64, f64, f64);

fn bracket(r: NormResult) -> Bracket {
    (r.lo, r.value(), r.hi)
}

#[pyclass(name = "PhiFunction", module = "pyorliczlab", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyPhi {
    inner: orliczlab::PhiFunction,
}

#[pymethods]
impl PyPhi {
    /// `t^p`.
    #[staticmethod]
    fn power(p: f64) -> PyResult<Self> {
        Ok(PyPhi { inner: orliczlab::PhiFunction::power(p).map_err(py_err)? })
    }

    /// Build from a JSON φ-spec.
    #[staticmethod]
    fn from_json(spec: &str) -> PyResult<Self> {
        let s = PhiSpec::from_json(spec).map_err(py_err)?;
        Ok(PyPhi { inner: s.build().map_err(py_err)? })
    }

    /// Knots `(ln t, ln F(t))` with tail slopes; interior slopes are chords.
    #[staticmethod]
    fn from_knots(knots: Vec<(f64, f64)>, tail_lo: f64, tail_hi: f64) -> PyResult<Self> {
        Ok(PyPhi { inner: orliczlab::PhiFunction::from_knots(knots, tail_lo, tail_hi).map_err(py_err)? })
    }

    fn to_json(&self) -> String {
        PhiSpec::of(&self.inner).to_json()
    }

    fn __call__(&self, t: f64) -> f64 {
        self.inner.eval(t)
    }

    fn eval_inverse(&self, y: f64) -> f64 {
        self.inner.eval_inverse(y)
    }

    fn inverse(&self) -> Self {
        PyPhi { inner: self.inner.inverse() }
    }

    fn tilde(&self) -> Self {
        PyPhi { inner: self.inner.tilde() }
    }

    /// `self ∘ inner`.
    fn compose(&self, inner: &PyPhi) -> Self {
        PyPhi { inner: self.inner.compose(&inner.inner) }
    }

    fn knots(&self) -> Vec<(f64, f64)> {
        self.inner.knots().to_vec()
    }

    /// `(p_m, q_m)`.
    fn mo_indices(&self) -> (f64, f64) {
        let m = self.inner.mo_indices();
        (m.p_m, m.q_m)
    }

    fn __eq__(&self, other: &PyPhi) -> bool {
        self.inner == other.inner
    }

    fn __repr__(&self) -> String {
        format!("PhiFunction({})", self.to_json())
    }
}

#[pyclass(name = "StepFunction", module = "pyorliczlab", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyStep {
    inner: orliczlab::StepFunction,
}

#[pymethods]
impl PyStep {
    /// Consecutive cells `(length, value)` starting at 0.
    #[new]
    fn new(cells: Vec<(f64, f64)>) -> PyResult<Self> {
        Ok(PyStep { inner: orliczlab::StepFunction::new(cells).map_err(py_err)? })
    }

    /// `χ_[0, s)`.
    #[staticmethod]
    fn indicator(s: f64) -> PyResult<Self> {
        Ok(PyStep { inner: orliczlab::StepFunction::indicator(s).map_err(py_err)? })
    }

    /// Sum of `value·χ_[a, b)` over `(a, b, value)` triples.
    #[staticmethod]
    fn from_intervals(intervals: Vec<(f64, f64, f64)>) -> PyResult<Self> {
        Ok(PyStep { inner: orliczlab::StepFunction::from_intervals(&intervals).map_err(py_err)? })
    }

    fn cells(&self) -> Vec<(f64, f64)> {
        self.inner.cells().to_vec()
    }

    fn rearrange(&self) -> Self {
        PyStep { inner: self.inner.rearrange() }
    }

    /// `x -> f(a x)`.
    fn dilate(&self, a: f64) -> PyResult<Self> {
        let a = DilationFactor::new(a).map_err(py_err)?;
        Ok(PyStep { inner: self.inner.dilate(a) })
    }

    fn distribution(&self, t: f64) -> f64 {
        self.inner.distribution(t)
    }

    fn __repr__(&self) -> String {
        format!("StepFunction({:?})", self.inner.cells())
    }
}

/// `(lo, value, hi)` of the Luxemburg norm.
#[pyfunction]
#[pyo3(signature = (phi, f, tol = 1e-12))]
fn luxemburg_norm(phi: &PyPhi, f: &PyStep, tol: f64) -> PyResult<Bracket> {
    fun::luxemburg_norm(&phi.inner, &f.inner, tol).map(bracket).map_err(py_err)
}

/// `(lo, value, hi)` of `‖f‖_{F,G}`.
#[pyfunction]
#[pyo3(signature = (F, G, f, tol = 1e-12))]
#[allow(non_snake_case)]
fn orlicz_lorentz_norm(F: &PyPhi, G: &PyPhi, f: &PyStep, tol: f64) -> PyResult<Bracket> {
    fun::orlicz_lorentz_norm(&F.inner, &G.inner, &f.inner, tol).map(bracket).map_err(py_err)
}

#[pyfunction]
#[pyo3(signature = (F, G, f, tol = 1e-12))]
#[allow(non_snake_case)]
fn torchinsky_norm(F: &PyPhi, G: &PyPhi, f: &PyStep, tol: f64) -> PyResult<Bracket> {
    fun::torchinsky_norm(&F.inner, &G.inner, &f.inner, tol).map(bracket).map_err(py_err)
}

/// Norm of `f**` (`lower=False`) or `f_**` (`lower=True`).
#[pyfunction]
#[pyo3(signature = (F, G, f, lower = false, tol = 1e-12))]
#[allow(non_snake_case)]
fn hardy_norm(F: &PyPhi, G: &PyPhi, f: &PyStep, lower: bool, tol: f64) -> PyResult<Bracket> {
    let kind = if lower { HardyKind::LowerStar } else { HardyKind::Star };
    fun::hardy_norm(&F.inner, &G.inner, &f.inner, kind, tol).map(bracket).map_err(py_err)
}

#[pyfunction]
fn solve_block_scale(p: f64, q: f64, m: u64) -> PyResult<f64> {
    orliczlab::solve_block_scale(p, q, m).map_err(py_err)
}

/// `((p_lo, p_hi), (q_lo, q_hi))`.
#[pyfunction]
#[allow(non_snake_case)]
fn zippin_indices(F: &PyPhi, G: &PyPhi) -> ((f64, f64), (f64, f64)) {
    let (p, q) = zippin(&F.inner, &G.inner);
    ((p.lo, p.hi), (q.lo, q.hi))
}

/// `((p_lo, p_hi), (q_lo, q_hi))` from the Matuszewska–Orlicz indices.
#[pyfunction]
#[allow(non_snake_case)]
fn boyd_bracket(F: &PyPhi, G: &PyPhi) -> ((f64, f64), (f64, f64)) {
    let b = boyd_analytic_bracket(&F.inner, &G.inner);
    ((b.p.lo, b.p.hi), (b.q.lo, b.q.hi))
}

/// Build the two-exponent construction; returns `(G, report_json)`.
#[pyfunction]
#[pyo3(signature = (p, q, blocks, tol = 1e-9))]
fn counterexample(p: f64, q: f64, blocks: usize, tol: f64) -> PyResult<(PyPhi, String)> {
    let spec = CounterexampleSpec::new(p, q, blocks, &Schedule::Pow2).map_err(py_err)?;
    let g = orliczlab::counterexample::build_theorem41_phi(&spec).map_err(py_err)?;
    let report = verify_counterexample(&spec, tol).map_err(py_err)?;
    let json = serde_json::to_string(&report).map_err(|e| PyValueError::new_err(e.to_string()))?;
    Ok((PyPhi { inner: g }, json))
}

#[pymodule]
fn pyorliczlab(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyPhi>()?;
    m.add_class::<PyStep>()?;
    m.add_function(wrap_pyfunction!(luxemburg_norm, m)?)?;
    m.add_function(wrap_pyfunction!(orlicz_lorentz_norm, m)?)?;
    m.add_function(wrap_pyfunction!(torchinsky_norm, m)?)?;
    m.add_function(wrap_pyfunction!(hardy_norm, m)?)?;
    m.add_function(wrap_pyfunction!(solve_block_scale, m)?)?;
    m.add_function(wrap_pyfunction!(zippin_indices, m)?)?;
    m.add_function(wrap_pyfunction!(boyd_bracket, m)?)?;
    m.add_function(wrap_pyfunction!(counterexample, m)?)?;
    Ok(())
}
