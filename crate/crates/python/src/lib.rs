//! Python bindings. Elements cross the boundary as canonical indices and
//! structured reports as plain dicts and lists.

use std::sync::Arc;

use agq_core::agcode::{self, CodeSource};
use agq_core::golden::golden_report;
use agq_core::quantum;
use agq_core::simulator::DecodeStatus;
use agq_core::{Felt, Matrix};
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use serde::Serialize;

fn err(e: agq_core::Error) -> PyErr {
    match e {
        agq_core::Error::Io(e) => PyRuntimeError::new_err(e.to_string()),
        other => PyValueError::new_err(other.to_string()),
    }
}

fn to_py<'py, T: Serialize>(py: Python<'py>, value: &T) -> PyResult<Bound<'py, PyAny>> {
    Ok(pythonize::pythonize(py, value)?)
}

fn felts(field: &agq_core::Field, v: &[u32]) -> PyResult<Vec<Felt>> {
    v.iter().map(|&x| field.element(x).map_err(err)).collect()
}

fn idx(v: &[Felt]) -> Vec<u32> {
    v.iter().map(|x| x.index()).collect()
}

#[pyclass(frozen, module = "agq")]
struct Field {
    inner: Arc<agq_core::Field>,
}

#[pymethods]
impl Field {
    #[new]
    #[pyo3(signature = (p, e = 1))]
    fn new(p: u32, e: u32) -> PyResult<Self> {
        Ok(Field { inner: Arc::new(agq_core::Field::new(p, e).map_err(err)?) })
    }

    #[getter]
    fn order(&self) -> u32 {
        self.inner.order()
    }

    #[getter]
    fn characteristic(&self) -> u32 {
        self.inner.characteristic()
    }

    #[getter]
    fn degree(&self) -> u32 {
        self.inner.degree()
    }

    #[getter]
    fn modulus(&self) -> Vec<u32> {
        self.inner.modulus().to_vec()
    }

    #[getter]
    fn primitive(&self) -> u32 {
        self.inner.primitive().index()
    }

    fn add(&self, a: u32, b: u32) -> PyResult<u32> {
        let f = &self.inner;
        Ok(f.add(f.element(a).map_err(err)?, f.element(b).map_err(err)?).index())
    }

    fn mul(&self, a: u32, b: u32) -> PyResult<u32> {
        let f = &self.inner;
        Ok(f.mul(f.element(a).map_err(err)?, f.element(b).map_err(err)?).index())
    }

    fn neg(&self, a: u32) -> PyResult<u32> {
        Ok(self.inner.neg(self.inner.element(a).map_err(err)?).index())
    }

    fn inv(&self, a: u32) -> PyResult<u32> {
        let f = &self.inner;
        Ok(f.inv(f.element(a).map_err(err)?).map_err(err)?.index())
    }

    fn pow(&self, a: u32, k: u64) -> PyResult<u32> {
        Ok(self.inner.pow(self.inner.element(a).map_err(err)?, k).index())
    }

    /// `a^q` in GF(q^2).
    fn frobenius(&self, a: u32) -> PyResult<u32> {
        let f = &self.inner;
        Ok(f.frobenius_q(f.element(a).map_err(err)?).map_err(err)?.index())
    }

    fn format(&self, a: u32) -> PyResult<String> {
        Ok(self.inner.format(self.inner.element(a).map_err(err)?))
    }

    fn __repr__(&self) -> String {
        format!("Field(order={})", self.inner.order())
    }
}

#[pyclass(frozen, module = "agq")]
struct Curve {
    inner: agq_core::Curve,
}

#[pymethods]
impl Curve {
    #[new]
    #[pyo3(signature = (family, q, m = None, relaxed = false))]
    fn new(family: &str, q: u32, m: Option<u32>, relaxed: bool) -> PyResult<Self> {
        let family: agq_core::Family = family.parse().map_err(err)?;
        let spec = match (family, relaxed, m) {
            (agq_core::Family::Superelliptic, true, Some(m)) => agq_core::CurveSpec::superelliptic_relaxed(q, m),
            _ => agq_core::CurveSpec::new(family, q, m),
        }
        .map_err(err)?;
        Ok(Curve { inner: agq_core::Curve::new(spec).map_err(err)? })
    }

    #[getter]
    fn genus(&self) -> u32 {
        self.inner.genus()
    }

    #[getter]
    fn field(&self) -> Field {
        Field { inner: Arc::clone(self.inner.field()) }
    }

    fn equation(&self) -> String {
        self.inner.spec().equation()
    }

    /// Affine points as `(x, y)` index pairs in canonical order.
    fn points(&self) -> Vec<(u32, u32)> {
        self.inner.affine_points().iter().filter_map(|p| p.coords()).map(|(x, y)| (x.index(), y.index())).collect()
    }

    fn maximality<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        to_py(py, &self.inner.maximality_check())
    }

    fn basis<'py>(&self, py: Python<'py>, r: i64) -> PyResult<Bound<'py, PyAny>> {
        let points = self.inner.affine_points();
        let (basis, _) = agq_core::verified_basis(&self.inner, r, &points).map_err(err)?;
        to_py(py, &basis)
    }

    fn dimension_comparison<'py>(&self, py: Python<'py>, r_min: i64, r_max: i64) -> PyResult<Bound<'py, PyAny>> {
        to_py(py, &agq_core::rrspace::dimension_comparison(&self.inner, r_min..=r_max).map_err(err)?)
    }

    fn __repr__(&self) -> String {
        format!("Curve({})", self.inner.spec())
    }
}

#[pyclass(frozen, module = "agq")]
struct LinearCode {
    inner: agq_core::LinearCode,
}

#[pymethods]
impl LinearCode {
    /// `C(D, r P_inf)`; `points` restricts `D` to the first that many affine points.
    #[staticmethod]
    #[pyo3(signature = (curve, r, points = None))]
    fn from_curve(curve: &Curve, r: i64, points: Option<usize>) -> PyResult<Self> {
        let eval = points.map_or(agcode::EvalSet::AllAffine, agcode::EvalSet::First);
        Ok(LinearCode { inner: agq_core::build_onepoint_code(&curve.inner, r, &eval).map_err(err)? })
    }

    /// Parses the matrix file format (`q2=.. n=.. k=..` then rows).
    #[staticmethod]
    #[pyo3(signature = (text, label = "python"))]
    fn from_matrix_text(text: &str, label: &str) -> PyResult<Self> {
        Ok(LinearCode { inner: agcode::load_explicit_code_str(text, label).map_err(err)? })
    }

    #[staticmethod]
    fn from_rows(field: &Field, rows: Vec<Vec<u32>>) -> PyResult<Self> {
        let n = rows.first().map_or(0, |r| r.len());
        let m = Matrix::from_indices(n, &rows).map_err(err)?;
        let source = CodeSource::Explicit { label: "python".into() };
        Ok(LinearCode {
            inner: agq_core::LinearCode::from_generator(Arc::clone(&field.inner), m, source).map_err(err)?,
        })
    }

    #[getter]
    fn n(&self) -> usize {
        self.inner.n()
    }

    #[getter]
    fn k(&self) -> usize {
        self.inner.k()
    }

    #[getter]
    fn field(&self) -> Field {
        Field { inner: Arc::clone(self.inner.field()) }
    }

    fn generator(&self) -> Vec<Vec<u32>> {
        self.inner.generator().to_indices()
    }

    fn parity_check(&self) -> Vec<Vec<u32>> {
        self.inner.parity_check().to_indices()
    }

    fn to_matrix_text(&self) -> String {
        agcode::format_matrix(self.inner.field(), self.inner.generator())
    }

    fn encode(&self, message: Vec<u32>) -> PyResult<Vec<u32>> {
        let m = felts(self.inner.field(), &message)?;
        Ok(idx(&self.inner.encode(&m).map_err(err)?))
    }

    fn syndrome(&self, word: Vec<u32>) -> PyResult<Vec<u32>> {
        let w = felts(self.inner.field(), &word)?;
        Ok(idx(&self.inner.syndrome(&w).map_err(err)?))
    }

    /// `(status, corrected word or None)` with status `success`, `corrected` or `failure`.
    fn decode(&self, received: Vec<u32>) -> PyResult<(&'static str, Option<Vec<u32>>)> {
        let w = felts(self.inner.field(), &received)?;
        let out = agq_core::decode_goppa(&w, &self.inner).map_err(err)?;
        let status = match out.status {
            DecodeStatus::Success => "success",
            DecodeStatus::Corrected => "corrected",
            DecodeStatus::Failure => "failure",
        };
        Ok((status, out.word.as_deref().map(idx)))
    }

    #[pyo3(signature = (budget = agq_core::DEFAULT_BUDGET))]
    fn min_distance(&self, budget: u128) -> Option<usize> {
        self.inner.min_distance(budget).d
    }

    #[pyo3(signature = (budget = agq_core::DEFAULT_BUDGET))]
    fn weight_distribution(&self, budget: u128) -> PyResult<Vec<u64>> {
        self.inner.weight_distribution(budget).map_err(err)
    }

    fn dual(&self) -> LinearCode {
        LinearCode { inner: self.inner.dual() }
    }

    fn hermitian_dual(&self) -> PyResult<LinearCode> {
        Ok(LinearCode { inner: self.inner.hermitian_dual().map_err(err)? })
    }

    fn is_hermitian_self_orthogonal(&self) -> PyResult<bool> {
        self.inner.is_hermitian_self_orthogonal().map_err(err)
    }

    #[pyo3(signature = (budget = agq_core::DEFAULT_BUDGET))]
    fn report<'py>(&self, py: Python<'py>, budget: u128) -> PyResult<Bound<'py, PyAny>> {
        to_py(py, &self.inner.report(budget))
    }

    /// Stabilizer parameters from this Hermitian self-orthogonal code.
    #[pyo3(signature = (budget = agq_core::DEFAULT_BUDGET))]
    fn quantum_params<'py>(&self, py: Python<'py>, budget: u128) -> PyResult<Bound<'py, PyAny>> {
        to_py(py, &agq_core::from_self_orthogonal(&self.inner, budget).map_err(err)?)
    }

    fn __repr__(&self) -> String {
        format!("LinearCode(n={}, k={}, q={})", self.inner.n(), self.inner.k(), self.inner.field().order())
    }
}

#[pyfunction]
fn theorem_params<'py>(py: Python<'py>, q: u32, m: u32, r: i64) -> PyResult<Bound<'py, PyAny>> {
    to_py(py, &agq_core::theorem_params(q, m, r))
}

#[pyfunction]
fn quantum_table<'py>(py: Python<'py>, q: u32, m: u32, r_min: i64, r_max: i64) -> PyResult<Bound<'py, PyAny>> {
    to_py(py, &quantum::table(q, m, r_min..=r_max, &[]))
}

#[pyfunction]
#[pyo3(signature = (code, rates, trials, seed, threads = None, d = None))]
fn simulate<'py>(
    py: Python<'py>,
    code: &LinearCode,
    rates: Vec<f64>,
    trials: u64,
    seed: u64,
    threads: Option<usize>,
    d: Option<usize>,
) -> PyResult<Bound<'py, PyAny>> {
    let config = agq_core::SimConfig { error_rates: rates, num_transmissions: trials, master_seed: seed, threads };
    let result = py.detach(|| agq_core::run_simulation(&code.inner, d, &config)).map_err(err)?;
    to_py(py, &result)
}

/// Regenerates every reference value; the dict has `checks` with `passed` flags.
#[pyfunction]
#[pyo3(name = "golden_report", signature = (budget = agq_core::DEFAULT_BUDGET))]
fn golden<'py>(py: Python<'py>, budget: u128) -> PyResult<Bound<'py, PyAny>> {
    to_py(py, &golden_report(budget).map_err(err)?)
}

#[pymodule]
fn agq(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Field>()?;
    m.add_class::<Curve>()?;
    m.add_class::<LinearCode>()?;
    m.add_function(wrap_pyfunction!(theorem_params, m)?)?;
    m.add_function(wrap_pyfunction!(quantum_table, m)?)?;
    m.add_function(wrap_pyfunction!(simulate, m)?)?;
    m.add_function(wrap_pyfunction!(golden, m)?)?;
    m.add("__version__", agq_core::VERSION)?;
    Ok(())
}
