//! Python bindings: `ordlab.Ordinal`, `ordlab.Coloring` and free functions
//! over largeness, codes and the Ramsey searches. Structured results come
//! back as plain dicts and lists.

use std::collections::hash_map::DefaultHasher;
use std::hash::{Hash, Hasher};

use num_bigint::BigUint;
use pyo3::basic::CompareOp;
use pyo3::create_exception;
use pyo3::exceptions::PyException;
use pyo3::prelude::*;

use ordlab_core::fundamental as fnd;
use ordlab_core::ramsey;
use ordlab_core::{Error, FiniteSet, Limits, OrdCode};

create_exception!(ordlab, OrdlabError, PyException);
create_exception!(ordlab, PreconditionError, OrdlabError);
create_exception!(ordlab, ResourceLimitError, OrdlabError);
create_exception!(ordlab, FalsificationError, OrdlabError);

fn to_py(e: Error) -> PyErr {
    let msg = e.to_string();
    match e {
        Error::ResourceLimit(_) => ResourceLimitError::new_err(msg),
        Error::Falsification(_) => FalsificationError::new_err(msg),
        Error::Precondition(_) => PreconditionError::new_err(msg),
        _ => OrdlabError::new_err(msg),
    }
}

fn limits() -> Limits {
    Limits::default()
}

fn set(xs: Vec<u64>) -> PyResult<FiniteSet> {
    FiniteSet::new(xs).map_err(to_py)
}

fn to_json_obj(py: Python<'_>, v: &impl serde::Serialize) -> PyResult<Py<PyAny>> {
    let text = serde_json::to_string(v).map_err(|e| OrdlabError::new_err(e.to_string()))?;
    Ok(py.import("json")?.call_method1("loads", (text,))?.unbind())
}

/// An ordinal below ε₀ in Cantor normal form.
#[pyclass(name = "Ordinal", module = "ordlab", frozen, from_py_object)]
#[derive(Clone)]
struct PyOrdinal(ordlab_core::Ordinal);

#[pymethods]
impl PyOrdinal {
    /// Parses an expression such as `"w^2*3+w+4"`; an int gives a finite ordinal.
    #[new]
    fn new(value: &Bound<'_, PyAny>) -> PyResult<Self> {
        if let Ok(n) = value.extract::<BigUint>() {
            return Ok(PyOrdinal(ordlab_core::Ordinal::nat(n)));
        }
        let text: String = value.extract()?;
        ordlab_core::syntax::parse(&text).map(PyOrdinal).map_err(to_py)
    }

    #[staticmethod]
    fn omega() -> Self {
        PyOrdinal(ordlab_core::Ordinal::omega())
    }

    #[staticmethod]
    fn from_code(code: BigUint) -> PyResult<Self> {
        let l = limits();
        let c = OrdCode::new(code, &l).map_err(to_py)?;
        c.decode(&l).map(PyOrdinal).map_err(to_py)
    }

    fn code(&self) -> PyResult<BigUint> {
        OrdCode::encode(&self.0, &limits())
            .map(OrdCode::into_value)
            .map_err(to_py)
    }

    fn fund(&self, x: u64) -> Self {
        PyOrdinal(self.0.fund(x))
    }

    fn fund_iterated(&self, xs: Vec<u64>) -> PyResult<Self> {
        self.0.fund_iterated(&xs, &limits()).map(PyOrdinal).map_err(to_py)
    }

    fn is_large(&self, xs: Vec<u64>) -> PyResult<bool> {
        fnd::is_large(&self.0, &set(xs)?, &limits()).map_err(to_py)
    }

    fn natural_sum(&self, other: &PyOrdinal) -> Self {
        PyOrdinal(self.0.natural_sum(&other.0))
    }

    fn max_coefficient(&self) -> BigUint {
        self.0.max_coefficient()
    }

    #[getter]
    fn kind(&self) -> &'static str {
        match self.0.classify() {
            ordlab_core::Kind::Zero => "zero",
            ordlab_core::Kind::Successor => "successor",
            ordlab_core::Kind::Limit => "limit",
        }
    }

    #[getter]
    fn height(&self) -> usize {
        self.0.height()
    }

    /// `(exponent, coefficient)` pairs, highest exponent first.
    fn terms(&self) -> Vec<(PyOrdinal, BigUint)> {
        self.0
            .terms()
            .iter()
            .map(|t| (PyOrdinal(t.exponent().clone()), t.coefficient().clone()))
            .collect()
    }

    fn __add__(&self, other: &PyOrdinal) -> Self {
        PyOrdinal(&self.0 + &other.0)
    }

    fn __mul__(&self, other: &PyOrdinal) -> Self {
        PyOrdinal(&self.0 * &other.0)
    }

    fn __richcmp__(&self, other: &PyOrdinal, op: CompareOp) -> bool {
        op.matches(self.0.cmp(&other.0))
    }

    fn __hash__(&self) -> u64 {
        let mut h = DefaultHasher::new();
        self.0.hash(&mut h);
        h.finish()
    }

    fn __str__(&self) -> String {
        self.0.to_string()
    }

    fn __repr__(&self) -> String {
        format!("Ordinal('{}')", self.0)
    }
}

/// A total coloring of the `arity`-subsets of a finite ground set.
#[pyclass(name = "Coloring", module = "ordlab", frozen, from_py_object)]
#[derive(Clone)]
struct PyColoring(ramsey::Coloring);

#[pymethods]
impl PyColoring {
    /// `table[r]` colors the `r`-th subset in colex order of positions.
    #[new]
    fn new(ground: Vec<u64>, arity: usize, colors: u32, table: Vec<u32>) -> PyResult<Self> {
        ramsey::Coloring::from_table(set(ground)?, arity, colors, table)
            .map(PyColoring)
            .map_err(to_py)
    }

    /// Builds a coloring by calling `f` on every subset (as a tuple).
    #[staticmethod]
    fn from_function(ground: Vec<u64>, arity: usize, colors: u32, f: &Bound<'_, PyAny>) -> PyResult<Self> {
        let mut failure = None;
        let col = ramsey::Coloring::from_fn(set(ground)?, arity, colors, |t| {
            match f.call1((t.to_vec(),)).and_then(|v| v.extract::<u32>()) {
                Ok(c) => c,
                Err(e) => {
                    failure.get_or_insert(e);
                    0
                }
            }
        });
        if let Some(e) = failure {
            return Err(e);
        }
        col.map(PyColoring).map_err(to_py)
    }

    #[staticmethod]
    fn from_fixture(text: &str) -> PyResult<Self> {
        ramsey::Coloring::from_fixture(text).map(PyColoring).map_err(to_py)
    }

    fn to_fixture(&self) -> String {
        self.0.to_fixture()
    }

    fn color(&self, tuple: Vec<u64>) -> PyResult<u32> {
        self.0.color(&tuple).map_err(to_py)
    }

    #[getter]
    fn arity(&self) -> usize {
        self.0.arity()
    }

    #[getter]
    fn colors(&self) -> u32 {
        self.0.colors()
    }

    #[getter]
    fn ground(&self) -> Vec<u64> {
        self.0.ground().elements().to_vec()
    }
}

#[pyfunction]
fn parse(text: &str) -> PyResult<PyOrdinal> {
    ordlab_core::syntax::parse(text).map(PyOrdinal).map_err(to_py)
}

#[pyfunction]
fn is_large(alpha: &PyOrdinal, xs: Vec<u64>) -> PyResult<bool> {
    alpha.is_large(xs)
}

#[pyfunction]
fn minimal_large_endpoint(alpha: &PyOrdinal, x0: u64, cap: u64) -> PyResult<Option<u64>> {
    fnd::minimal_large_endpoint(&alpha.0, x0, cap, &limits()).map_err(to_py)
}

#[pyfunction]
fn phi(alpha: &PyOrdinal, l: u64) -> PyOrdinal {
    PyOrdinal(fnd::phi(&alpha.0, l))
}

#[pyfunction]
#[pyo3(signature = (xs, l, gammas, iter_cap = 4096))]
fn verify_descent(py: Python<'_>, xs: Vec<u64>, l: u64, gammas: Vec<PyOrdinal>, iter_cap: usize) -> PyResult<Py<PyAny>> {
    let gs: Vec<_> = gammas.into_iter().map(|g| g.0).collect();
    let r = fnd::verify_descent(&set(xs)?, l, &gs, iter_cap, &limits()).map_err(to_py)?;
    to_json_obj(py, &r)
}

#[pyfunction]
fn code_fund(code: BigUint, x: u64) -> PyResult<BigUint> {
    let l = limits();
    let c = OrdCode::new(code, &l).map_err(to_py)?;
    c.fund(x, &l).map(OrdCode::into_value).map_err(to_py)
}

#[pyfunction]
fn is_code(n: BigUint) -> PyResult<bool> {
    ordlab_core::codes::is_code(&n, &limits()).map_err(to_py)
}

#[pyfunction]
fn is_homogeneous(ys: Vec<u64>, coloring: &PyColoring) -> PyResult<bool> {
    ramsey::is_homogeneous(&set(ys)?, &coloring.0).map_err(to_py)
}

#[pyfunction]
fn is_min_homogeneous(ys: Vec<u64>, coloring: &PyColoring, i: usize) -> PyResult<bool> {
    ramsey::is_min_homogeneous(&set(ys)?, &coloring.0, i).map_err(to_py)
}

#[pyfunction]
fn build_er_tree(py: Python<'_>, coloring: &PyColoring, level: usize) -> PyResult<Py<PyAny>> {
    let t = ramsey::build_er_tree(coloring.0.ground(), &coloring.0, level).map_err(to_py)?;
    to_json_obj(py, &t)
}

/// The γ-sequence (`"pairs"` or `"general"`) with its descent certificate.
#[pyfunction]
#[pyo3(signature = (coloring, variant, c = None, alpha = None))]
fn gamma_sequence(
    py: Python<'_>,
    coloring: &PyColoring,
    variant: &str,
    c: Option<u64>,
    alpha: Option<PyOrdinal>,
) -> PyResult<Py<PyAny>> {
    let l = limits();
    let col = &coloring.0;
    let c = c.unwrap_or(u64::from(col.colors()));
    let trace = match variant {
        "pairs" => ramsey::gamma_sequence_pairs(col.ground(), col, c, &l),
        "general" => {
            let a = alpha.ok_or_else(|| PreconditionError::new_err("the general variant needs alpha"))?;
            ramsey::gamma_sequence_general(col.ground(), col, &a.0, c, &l)
        }
        other => return Err(PreconditionError::new_err(format!("unknown variant {other:?}"))),
    }
    .map_err(to_py)?;
    let cert = trace.certificate();
    let gammas: Vec<String> = trace.gammas().iter().map(|g| g.to_string()).collect();
    to_json_obj(
        py,
        &serde_json::json!({
            "gammas": gammas,
            "certificate": cert,
            "holds": cert.holds(),
        }),
    )
}

#[pyfunction]
fn php_homogeneous(coloring: &PyColoring) -> PyResult<Vec<u64>> {
    ramsey::php_homogeneous(coloring.0.ground(), &coloring.0, &limits())
        .map(FiniteSet::into_vec)
        .map_err(to_py)
}

#[pyfunction]
fn find_homogeneous(coloring: &PyColoring) -> PyResult<Option<Vec<u64>>> {
    ramsey::find_homogeneous_exhaustive(coloring.0.ground(), &coloring.0, &limits())
        .map(|h| h.map(FiniteSet::into_vec))
        .map_err(to_py)
}

#[pyfunction]
#[pyo3(signature = (coloring, budget = 1_000_000))]
fn ks_pipeline(py: Python<'_>, coloring: &PyColoring, budget: usize) -> PyResult<Py<PyAny>> {
    let r = ramsey::ks_pipeline(coloring.0.ground(), &coloring.0, budget, &limits()).map_err(to_py)?;
    to_json_obj(py, &r)
}

#[pyfunction]
#[pyo3(signature = (arity, colors, min_elt, cap, max_nodes = None))]
fn ph_threshold(arity: usize, colors: u32, min_elt: u64, cap: u64, max_nodes: Option<u64>) -> PyResult<Option<u64>> {
    let mut l = limits();
    if let Some(m) = max_nodes {
        l.max_search_nodes = m;
    }
    ramsey::ph_threshold(arity, colors, min_elt, cap, &l).map_err(to_py)
}

#[pymodule]
#[pyo3(name = "ordlab")]
fn ordlab(m: &Bound<'_, PyModule>) -> PyResult<()> {
    let py = m.py();
    m.add("OrdlabError", py.get_type::<OrdlabError>())?;
    m.add("PreconditionError", py.get_type::<PreconditionError>())?;
    m.add("ResourceLimitError", py.get_type::<ResourceLimitError>())?;
    m.add("FalsificationError", py.get_type::<FalsificationError>())?;
    m.add_class::<PyOrdinal>()?;
    m.add_class::<PyColoring>()?;
    m.add_function(wrap_pyfunction!(parse, m)?)?;
    m.add_function(wrap_pyfunction!(is_large, m)?)?;
    m.add_function(wrap_pyfunction!(minimal_large_endpoint, m)?)?;
    m.add_function(wrap_pyfunction!(phi, m)?)?;
    m.add_function(wrap_pyfunction!(verify_descent, m)?)?;
    m.add_function(wrap_pyfunction!(code_fund, m)?)?;
    m.add_function(wrap_pyfunction!(is_code, m)?)?;
    m.add_function(wrap_pyfunction!(is_homogeneous, m)?)?;
    m.add_function(wrap_pyfunction!(is_min_homogeneous, m)?)?;
    m.add_function(wrap_pyfunction!(build_er_tree, m)?)?;
    m.add_function(wrap_pyfunction!(gamma_sequence, m)?)?;
    m.add_function(wrap_pyfunction!(php_homogeneous, m)?)?;
    m.add_function(wrap_pyfunction!(find_homogeneous, m)?)?;
    m.add_function(wrap_pyfunction!(ks_pipeline, m)?)?;
    m.add_function(wrap_pyfunction!(ph_threshold, m)?)?;
    Ok(())
}
