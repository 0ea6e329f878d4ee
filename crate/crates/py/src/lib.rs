//! Python bindings for `turan-core`.
//!
//! `Graph` and `ExponentProfile` are native classes. Reports from the lab
//! and the proof pipeline come back as plain dicts built from their JSON
//! form, with exact counts as Python ints. Long computations release the
//! GIL.

use num_bigint::BigUint;
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;

use turan_core::blowup::{self, ExponentProfile as CoreProfile};
use turan_core::graph::{self as core_graph, GraphFormat};
use turan_core::proof::{ConstantsSpec, PipelineConfig, RainbowStrategy};
use turan_core::{lab, subgraph, Error};

fn to_py_err(e: Error) -> PyErr {
    if e.is_internal() {
        PyRuntimeError::new_err(e.to_string())
    } else {
        PyValueError::new_err(e.to_string())
    }
}

/// Turns a serializable report into Python objects through `json.loads`.
fn to_python<'py>(py: Python<'py>, doc: &impl serde::Serialize) -> PyResult<Bound<'py, PyAny>> {
    let text = serde_json::to_string(doc).map_err(|e| PyRuntimeError::new_err(e.to_string()))?;
    py.import("json")?.call_method1("loads", (text,))
}

/// An undirected simple graph.
#[pyclass(module = "turan", frozen, eq, skip_from_py_object)]
#[derive(Clone, PartialEq)]
pub struct Graph {
    inner: core_graph::Graph,
}

impl From<core_graph::Graph> for Graph {
    fn from(inner: core_graph::Graph) -> Self {
        Graph { inner }
    }
}

#[pymethods]
impl Graph {
    #[new]
    #[pyo3(signature = (n, edges = Vec::new()))]
    fn new(n: usize, edges: Vec<(usize, usize)>) -> PyResult<Self> {
        core_graph::Graph::from_edges(n, &edges).map(Graph::from).map_err(to_py_err)
    }

    #[staticmethod]
    fn from_graph6(text: &str) -> PyResult<Self> {
        core_graph::parse_graph(text, GraphFormat::Graph6).map(Graph::from).map_err(to_py_err)
    }

    #[staticmethod]
    fn from_edge_list(text: &str) -> PyResult<Self> {
        core_graph::parse_graph(text, GraphFormat::EdgeList).map(Graph::from).map_err(to_py_err)
    }

    #[staticmethod]
    fn path(n: usize) -> Self {
        core_graph::Graph::path(n).into()
    }

    #[staticmethod]
    fn star(leaves: usize) -> Self {
        core_graph::Graph::star(leaves).into()
    }

    #[staticmethod]
    fn complete(n: usize) -> Self {
        core_graph::Graph::complete(n).into()
    }

    #[staticmethod]
    fn cycle(n: usize) -> Self {
        core_graph::Graph::cycle(n).into()
    }

    #[getter]
    fn n(&self) -> usize {
        self.inner.n()
    }

    fn edges(&self) -> Vec<(usize, usize)> {
        self.inner.edges().collect()
    }

    fn edge_count(&self) -> usize {
        self.inner.edge_count()
    }

    fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.inner.n() && v < self.inner.n() && self.inner.has_edge(u, v)
    }

    fn graph6(&self) -> String {
        core_graph::serialize_graph(&self.inner, GraphFormat::Graph6)
    }

    fn edge_list(&self) -> String {
        core_graph::serialize_graph(&self.inner, GraphFormat::EdgeList)
    }

    fn canonical_form(&self) -> PyResult<String> {
        core_graph::canonical_form(&self.inner).map_err(to_py_err)
    }

    fn is_tree(&self) -> bool {
        core_graph::is_tree(&self.inner)
    }

    /// `(order, d)`: min-degree removal order and the degeneracy.
    fn degeneracy(&self) -> (Vec<usize>, usize) {
        let o = core_graph::degeneracy_ordering(&self.inner);
        (o.order, o.bound)
    }

    fn __len__(&self) -> usize {
        self.inner.n()
    }

    fn __repr__(&self) -> String {
        format!("Graph.from_graph6({:?})", self.graph6())
    }
}

/// `r(H, T)` with its witness set, or the zero profile when `H` contains `T`.
#[pyclass(module = "turan", frozen, eq, skip_from_py_object)]
#[derive(Clone, PartialEq)]
pub struct ExponentProfile {
    inner: CoreProfile,
}

#[pymethods]
impl ExponentProfile {
    /// `"Finite"` or `"Zero"`.
    #[getter]
    fn status(&self) -> &'static str {
        match self.inner {
            CoreProfile::Finite { .. } => "Finite",
            CoreProfile::Zero { .. } => "Zero",
        }
    }

    #[getter]
    fn r(&self) -> Option<usize> {
        self.inner.r()
    }

    #[getter]
    fn witness(&self) -> Option<Vec<usize>> {
        self.inner.witness().map(<[usize]>::to_vec)
    }

    #[getter]
    fn t_used(&self) -> usize {
        self.inner.t_used()
    }

    fn to_dict<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        to_python(py, &self.inner)
    }

    fn __repr__(&self) -> String {
        match &self.inner {
            CoreProfile::Finite { r, witness, t_used } => {
                format!("ExponentProfile(status='Finite', r={r}, witness={witness:?}, t_used={t_used})")
            }
            CoreProfile::Zero { t_used } => format!("ExponentProfile(status='Zero', t_used={t_used})"),
        }
    }
}

#[pyfunction]
fn exponent_r(py: Python<'_>, h: &Graph, t: &Graph) -> PyResult<ExponentProfile> {
    let inner = py.detach(|| blowup::exponent_r(&h.inner, &t.inner)).map_err(to_py_err)?;
    Ok(ExponentProfile { inner })
}

/// `(valid, reason)` after re-deriving the profile from scratch.
#[pyfunction]
fn verify_profile(py: Python<'_>, h: &Graph, t: &Graph, profile: &ExponentProfile) -> (bool, Option<String>) {
    let v = py.detach(|| blowup::verify_profile(&h.inner, &t.inner, &profile.inner));
    (v.valid, v.reason)
}

/// `(graph, phi, copy_index)` for the `(U, t)`-blow-up of `H`.
#[pyfunction]
fn blow_up(h: &Graph, u: Vec<usize>, t: usize) -> PyResult<(Graph, Vec<usize>, Vec<usize>)> {
    let b = blowup::blow_up(&h.inner, &u, t).map_err(to_py_err)?;
    Ok((b.graph.into(), b.phi, b.copy_index))
}

#[pyfunction]
fn count_copies(py: Python<'_>, g: &Graph, h: &Graph) -> PyResult<BigUint> {
    py.detach(|| subgraph::count_copies(&g.inner, &h.inner)).map_err(to_py_err)
}

/// One embedding of `H` into `G` as a vertex list, or `None`.
#[pyfunction]
fn find_copy(py: Python<'_>, g: &Graph, h: &Graph) -> PyResult<Option<Vec<usize>>> {
    let found = py.detach(|| subgraph::contains_copy(&g.inner, &h.inner)).map_err(to_py_err)?;
    Ok(found.map(|e| e.0))
}

#[pyfunction]
fn lower_bound_construction(h: &Graph, t: &Graph, n: usize) -> PyResult<Graph> {
    lab::lower_bound_construction(&h.inner, &t.inner, n).map(Graph::from).map_err(to_py_err)
}

/// Exhaustive `Ex(n, H, T)`; returns a dict with `max_count`, `witness`
/// (graph6), `graphs_examined` and `source`.
#[pyfunction]
fn brute_force_ex<'py>(py: Python<'py>, n: usize, h: &Graph, t: &Graph) -> PyResult<Bound<'py, PyAny>> {
    let result = py.detach(|| lab::brute_force_ex(n, &h.inner, &t.inner)).map_err(to_py_err)?;
    let doc = to_python(py, &result)?;
    doc.set_item("max_count", result.max_count)?;
    Ok(doc)
}

/// Construction counts at each `n`, with slopes and the CSV rendering.
#[pyfunction]
fn growth_report<'py>(py: Python<'py>, h: &Graph, t: &Graph, ns: Vec<usize>) -> PyResult<Bound<'py, PyDict>> {
    let report = py.detach(|| lab::growth_report(&h.inner, &t.inner, &ns)).map_err(to_py_err)?;
    let out = PyDict::new(py);
    let rows: Vec<(usize, BigUint)> = report.rows.iter().map(|r| (r.n, r.count.clone())).collect();
    out.set_item("rows", rows)?;
    out.set_item("slopes", report.slopes.clone())?;
    out.set_item("r_claimed", report.r_claimed)?;
    out.set_item("csv", report.to_csv())?;
    Ok(out)
}

/// Runs the upper-bound pipeline on host `G`.
///
/// `constants` is `"paper"`, an int for uniform desk constants, or a list of
/// ints. With `seed` set the rainbow partition is the best of `trials`
/// seeded random colourings; otherwise it is derandomized.
#[pyfunction]
#[pyo3(signature = (g, h, t, constants = None, seed = None, trials = 16))]
fn run_pipeline<'py>(
    py: Python<'py>,
    g: &Graph,
    h: &Graph,
    t: &Graph,
    constants: Option<&Bound<'py, PyAny>>,
    seed: Option<u64>,
    trials: u32,
) -> PyResult<Bound<'py, PyAny>> {
    let constants = match constants {
        None => ConstantsSpec::PaperScale,
        Some(c) if c.extract::<String>().is_ok_and(|s| s == "paper") => ConstantsSpec::PaperScale,
        Some(c) => match c.extract::<u64>() {
            Ok(c) => ConstantsSpec::DeskUniform(c),
            Err(_) => ConstantsSpec::Desk(c.extract::<Vec<BigUint>>().map_err(|_| {
                PyValueError::new_err("constants must be 'paper', an int, or a list of ints")
            })?),
        },
    };
    let rainbow = match seed {
        Some(seed) => RainbowStrategy::Random { seed, trials },
        None => RainbowStrategy::Derandomized,
    };
    let config = PipelineConfig { constants, rainbow };
    let report = py.detach(|| turan_core::proof::run_pipeline(&g.inner, &h.inner, &t.inner, &config)).map_err(to_py_err)?;
    let doc = to_python(py, &report)?;
    doc.set_item("trace", to_python(py, &report.trace)?)?;
    Ok(doc)
}

#[pymodule]
mod turan {
    #[pymodule_export]
    use super::{
        blow_up, brute_force_ex, count_copies, exponent_r, find_copy, growth_report, lower_bound_construction,
        run_pipeline, verify_profile, ExponentProfile, Graph,
    };
}
