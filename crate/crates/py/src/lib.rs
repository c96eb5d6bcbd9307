//! Python module `gupb_lab`.

use gupb_core::catalog;
use gupb_core::filter::{filter, FilterOptions};
use gupb_core::gen::{enumerate_regular, Connectivity, EnumerationSpec};
use gupb_core::io::{parse_graph6, to_graph6};
use gupb_core::propagate::propagate_equalities;
use gupb_core::repr::{rank_of_subset, verify_representation, FloatTolerance, Representation};
use gupb_core::scenario::{self, ReportFormat, ScenarioConfig, ScenarioName};
use gupb_core::search::{solve_for, Outcome, SolveOptions};
use gupb_core::{canonical_form, find_induced_embedding, Graph};
use num_complex::Complex64;
use pyo3::exceptions::{PyKeyError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::{PyDict, PyList};
use serde_json::Value;

fn err(e: gupb_core::Error) -> PyErr {
    match e {
        gupb_core::Error::UnknownGraph(_) => PyKeyError::new_err(e.to_string()),
        other => PyValueError::new_err(other.to_string()),
    }
}

fn to_py<'py>(py: Python<'py>, v: &Value) -> PyResult<Bound<'py, PyAny>> {
    Ok(match v {
        Value::Null => py.None().into_bound(py),
        Value::Bool(b) => b.into_pyobject(py)?.to_owned().into_any(),
        Value::Number(n) => match (n.as_i64(), n.as_u64()) {
            (Some(i), _) => i.into_pyobject(py)?.into_any(),
            (None, Some(u)) => u.into_pyobject(py)?.into_any(),
            _ => n.as_f64().unwrap_or(f64::NAN).into_pyobject(py)?.into_any(),
        },
        Value::String(s) => s.into_pyobject(py)?.into_any(),
        Value::Array(a) => {
            let l = PyList::empty(py);
            for x in a {
                l.append(to_py(py, x)?)?;
            }
            l.into_any()
        }
        Value::Object(m) => {
            let d = PyDict::new(py);
            for (k, x) in m {
                d.set_item(k, to_py(py, x)?)?;
            }
            d.into_any()
        }
    })
}

fn json_to_py<'py, T: serde::Serialize>(py: Python<'py>, x: &T) -> PyResult<Bound<'py, PyAny>> {
    let v = serde_json::to_value(x).map_err(|e| PyValueError::new_err(e.to_string()))?;
    to_py(py, &v)
}

/// Simple undirected graph on at most 64 vertices.
#[pyclass(name = "Graph", module = "gupb_lab", from_py_object)]
#[derive(Clone)]
struct PyGraph {
    inner: Graph,
}

#[pymethods]
impl PyGraph {
    #[new]
    #[pyo3(signature = (n, edges = Vec::new()))]
    fn new(n: usize, edges: Vec<(usize, usize)>) -> PyResult<Self> {
        Ok(PyGraph { inner: Graph::from_edges(n, &edges).map_err(err)? })
    }

    #[staticmethod]
    fn from_graph6(s: &str) -> PyResult<Self> {
        Ok(PyGraph { inner: parse_graph6(s.trim(), 0).map_err(err)? })
    }

    #[staticmethod]
    fn from_catalog(name: &str) -> PyResult<Self> {
        Ok(PyGraph { inner: catalog::get_graph(name).map_err(err)? })
    }

    #[getter]
    fn n(&self) -> usize {
        self.inner.n()
    }

    fn edges(&self) -> Vec<(usize, usize)> {
        self.inner.edges()
    }

    fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.inner.n() && v < self.inner.n() && self.inner.has_edge(u, v)
    }

    fn degree_sequence(&self) -> Vec<usize> {
        self.inner.degree_sequence()
    }

    fn is_regular(&self) -> Option<usize> {
        self.inner.is_regular()
    }

    fn is_connected(&self) -> bool {
        self.inner.is_connected()
    }

    fn girth(&self) -> Option<usize> {
        self.inner.girth()
    }

    fn clique_number(&self) -> usize {
        self.inner.clique_number()
    }

    fn complement(&self) -> Self {
        PyGraph { inner: self.inner.complement() }
    }

    fn graph6(&self) -> String {
        to_graph6(&self.inner)
    }

    fn canonical_form(&self) -> String {
        canonical_form(&self.inner).to_hex()
    }

    fn is_isomorphic(&self, other: &PyGraph) -> bool {
        canonical_form(&self.inner) == canonical_form(&other.inner)
    }

    /// Catalog name of an isomorphic entry, if any.
    fn identify(&self) -> Option<&'static str> {
        catalog::identify(&self.inner)
    }

    fn __len__(&self) -> usize {
        self.inner.n()
    }

    fn __eq__(&self, other: &PyGraph) -> bool {
        self.inner == other.inner
    }

    fn __repr__(&self) -> String {
        format!("Graph(n={}, m={})", self.inner.n(), self.inner.edge_count())
    }
}

#[pyfunction]
fn catalog_names() -> Vec<&'static str> {
    catalog::names()
}

#[pyfunction]
fn fixture_names() -> Vec<&'static str> {
    catalog::fixture_names()
}

/// Induced embedding of `pattern` into `host` as a list of host vertices.
#[pyfunction]
fn find_embedding(pattern: &PyGraph, host: &PyGraph) -> Option<Vec<usize>> {
    find_induced_embedding(&pattern.inner, &host.inner).map(|e| e.map)
}

#[pyfunction]
#[pyo3(signature = (n, r, connectivity = "connected", girth_min = None))]
fn enumerate(py: Python<'_>, n: usize, r: usize, connectivity: &str, girth_min: Option<usize>) -> PyResult<Vec<PyGraph>> {
    let conn = match connectivity {
        "connected" => Connectivity::ConnectedOnly,
        "disconnected" => Connectivity::DisconnectedOnly,
        "all" => Connectivity::All,
        other => return Err(PyValueError::new_err(format!("connectivity must be connected, disconnected or all, got {other}"))),
    };
    let mut spec = EnumerationSpec::new(n, r, conn);
    spec.girth_min = girth_min;
    let gs = py.detach(|| enumerate_regular(&spec)).map_err(err)?;
    Ok(gs.into_iter().map(|inner| PyGraph { inner }).collect())
}

/// Filter report as a dict: rows, survivors (indices into `graphs`).
#[pyfunction]
#[pyo3(signature = (graphs, obstruction_set, full_counts = true))]
fn filter_graphs<'py>(
    py: Python<'py>,
    graphs: Vec<PyGraph>,
    obstruction_set: &str,
    full_counts: bool,
) -> PyResult<Bound<'py, PyAny>> {
    let obs = catalog::obstruction_set(obstruction_set).map_err(err)?;
    let gs: Vec<Graph> = graphs.into_iter().map(|g| g.inner).collect();
    let report = py.detach(|| filter(&gs, &obs, FilterOptions { full_counts }));
    json_to_py(py, &report)
}

#[pyfunction]
fn propagate<'py>(py: Python<'py>, graph: &PyGraph, d: usize) -> PyResult<Bound<'py, PyAny>> {
    json_to_py(py, &propagate_equalities(&graph.inner, d))
}

/// Returns (label, vectors or None); vectors are lists of complex numbers.
#[pyfunction]
#[pyo3(signature = (graph, d, restarts = 200, iterations = 5000, seed = 0, real = false))]
fn solve(
    py: Python<'_>,
    graph: &PyGraph,
    d: usize,
    restarts: usize,
    iterations: usize,
    seed: u64,
    real: bool,
) -> (String, Option<Vec<Vec<(f64, f64)>>>) {
    let opts = SolveOptions { real, ..SolveOptions::default().with_budget(restarts, iterations).with_seed(seed) };
    let g = graph.inner.clone();
    let v = py.detach(|| solve_for(&g, d, &opts));
    let vectors = match &v.outcome {
        Outcome::Found(rep) => Some(rep.to_float().iter().map(|x| x.iter().map(|z| (z.re, z.im)).collect()).collect()),
        _ => None,
    };
    (v.label().to_string(), vectors)
}

fn rep_from(d: usize, vectors: Vec<Vec<(f64, f64)>>) -> PyResult<Representation> {
    let vs = vectors
        .into_iter()
        .map(|v| v.into_iter().map(|(re, im)| Complex64::new(re, im)).collect())
        .collect();
    Representation::float(d, vs).map_err(err)
}

/// Faithfulness check of floating vectors given as (re, im) pairs.
#[pyfunction]
fn verify<'py>(py: Python<'py>, graph: &PyGraph, d: usize, vectors: Vec<Vec<(f64, f64)>>) -> PyResult<Bound<'py, PyAny>> {
    let rep = rep_from(d, vectors)?;
    json_to_py(py, &verify_representation(&graph.inner, &rep, FloatTolerance::default()).map_err(err)?)
}

#[pyfunction]
fn verify_fixture<'py>(py: Python<'py>, name: &str) -> PyResult<Bound<'py, PyAny>> {
    json_to_py(py, &scenario::verify_fixture(name).map_err(err)?)
}

#[pyfunction]
fn fixture_rank(name: &str, subset: Vec<usize>) -> PyResult<usize> {
    let f = catalog::get_fixture(name).map_err(err)?;
    rank_of_subset(&f.rep, &subset).map_err(err)
}

#[pyfunction]
fn lower_bound<'py>(py: Python<'py>, d: usize, parties: usize) -> PyResult<Bound<'py, PyAny>> {
    json_to_py(py, &scenario::gupb_lower_bound(d, parties).map_err(err)?)
}

#[pyfunction]
fn count_degree_sequences(n: usize, degrees: Vec<usize>) -> u128 {
    scenario::count_degree_sequences(n, &degrees)
}

#[pyfunction]
fn edge_feasible(n: usize, regularities: Vec<usize>) -> PyResult<bool> {
    Ok(scenario::decomposition_edge_feasible(n, &regularities).map_err(err)?.feasible)
}

/// Runs a scenario and returns its JSON report as a dict.
#[pyfunction]
#[pyo3(signature = (name, seed = 0))]
fn run_scenario<'py>(py: Python<'py>, name: &str, seed: u64) -> PyResult<Bound<'py, PyAny>> {
    let name: ScenarioName = name.parse().map_err(err)?;
    let cfg = ScenarioConfig { seed, ..ScenarioConfig::from_env() };
    let ev = py.detach(|| scenario::run_scenario(name, &cfg)).map_err(err)?;
    let text = scenario::emit_report(&ev, ReportFormat::Json).map_err(err)?;
    let v: Value = serde_json::from_str(&text).map_err(|e| PyValueError::new_err(e.to_string()))?;
    to_py(py, &v)
}

#[pymodule]
fn gupb_lab(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyGraph>()?;
    m.add_function(wrap_pyfunction!(catalog_names, m)?)?;
    m.add_function(wrap_pyfunction!(fixture_names, m)?)?;
    m.add_function(wrap_pyfunction!(find_embedding, m)?)?;
    m.add_function(wrap_pyfunction!(enumerate, m)?)?;
    m.add_function(wrap_pyfunction!(filter_graphs, m)?)?;
    m.add_function(wrap_pyfunction!(propagate, m)?)?;
    m.add_function(wrap_pyfunction!(solve, m)?)?;
    m.add_function(wrap_pyfunction!(verify, m)?)?;
    m.add_function(wrap_pyfunction!(verify_fixture, m)?)?;
    m.add_function(wrap_pyfunction!(fixture_rank, m)?)?;
    m.add_function(wrap_pyfunction!(lower_bound, m)?)?;
    m.add_function(wrap_pyfunction!(count_degree_sequences, m)?)?;
    m.add_function(wrap_pyfunction!(edge_feasible, m)?)?;
    m.add_function(wrap_pyfunction!(run_scenario, m)?)?;
    Ok(())
}
