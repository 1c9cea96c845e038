//! Python bindings for `m0n_core`.
//!
//! Objects are built from the same literals the command line accepts:
//! `"12|3456"`, `"1|2|3|456"`, `"[abc];[d];[ef]/0-1,1-2"`.

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use m0n_core::intersect;
use m0n_core::literal::{self, format_blocks, format_tree};
use m0n_core::trees::make_tree;
use m0n_core::{limit, LabelSet};

fn err(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn tokens(s: &LabelSet, m: m0n_core::mask::Mask) -> Vec<String> {
    m0n_core::mask::labels(m).map(|l| s.token(l).to_string()).collect()
}

#[pyclass(name = "TwoPartition", module = "m0n", frozen, eq, hash, skip_from_py_object)]
#[derive(Clone, PartialEq, Eq, Hash)]
struct PyTwoPartition {
    labels: LabelSet,
    inner: m0n_core::TwoPartition,
}

#[pymethods]
impl PyTwoPartition {
    #[new]
    fn new(lit: &str) -> PyResult<Self> {
        let (labels, inner) = literal::parse_two_partition(lit).map_err(err)?;
        Ok(Self { labels, inner })
    }

    #[getter]
    fn n(&self) -> usize {
        self.inner.n()
    }

    fn parts(&self) -> (Vec<String>, Vec<String>) {
        (tokens(&self.labels, self.inner.part_a()), tokens(&self.labels, self.inner.part_b()))
    }

    fn c_weight(&self) -> u64 {
        self.inner.c_weight()
    }

    fn compatible(&self, other: &PyTwoPartition) -> PyResult<bool> {
        if self.labels != other.labels {
            return Err(PyValueError::new_err("label sets differ"));
        }
        self.inner.compatible(&other.inner).map_err(err)
    }

    fn __str__(&self) -> String {
        format_blocks(&self.labels, &self.inner.parts())
    }

    fn __repr__(&self) -> String {
        format!("TwoPartition('{}')", self.__str__())
    }
}

#[pyclass(name = "DistinguishedPartition", module = "m0n", frozen, eq, hash, skip_from_py_object)]
#[derive(Clone, PartialEq, Eq, Hash)]
struct PyDistinguished {
    labels: LabelSet,
    inner: m0n_core::DistinguishedPartition,
}

impl PyDistinguished {
    fn two(&self, p: m0n_core::TwoPartition) -> PyTwoPartition {
        PyTwoPartition {
            labels: self.labels.clone(),
            inner: p,
        }
    }
}

#[pymethods]
impl PyDistinguished {
    #[new]
    fn new(lit: &str) -> PyResult<Self> {
        let (labels, inner) = literal::parse_distinguished(lit).map_err(err)?;
        Ok(Self { labels, inner })
    }

    #[getter]
    fn n(&self) -> usize {
        self.inner.n()
    }

    fn blocks(&self) -> Vec<Vec<String>> {
        self.inner.blocks().iter().map(|&b| tokens(&self.labels, b)).collect()
    }

    fn shape(&self) -> [usize; 4] {
        self.inner.shape().0
    }

    fn p_set(&self) -> Vec<PyTwoPartition> {
        self.inner.p_set().into_iter().map(|p| self.two(p)).collect()
    }

    fn n_set(&self) -> Vec<PyTwoPartition> {
        self.inner.n_set().into_iter().map(|p| self.two(p)).collect()
    }

    /// Intersection number with the boundary divisor `sigma`.
    fn pair(&self, sigma: &str) -> PyResult<i64> {
        let sigma = literal::parse_two_partition_in(sigma, &self.labels).map_err(err)?;
        intersect::pair_divisor_curve(&sigma, &self.inner).map_err(err)
    }

    fn minus_k(&self) -> i64 {
        intersect::minus_k_closed(&self.inner)
    }

    /// The divisor-expansion value, as a string such as "1" or "-3/4".
    fn minus_k_expanded(&self) -> PyResult<String> {
        intersect::minus_k_expanded(&self.inner).map(|r| r.to_string()).map_err(err)
    }

    fn class_size(&self) -> u64 {
        m0n_core::census::class_size_oracle(&self.inner)
    }

    fn __str__(&self) -> String {
        format_blocks(&self.labels, self.inner.blocks())
    }

    fn __repr__(&self) -> String {
        format!("DistinguishedPartition('{}')", self.__str__())
    }
}

#[pyclass(name = "StableTree", module = "m0n", frozen, eq, hash, skip_from_py_object)]
#[derive(Clone, PartialEq, Eq, Hash)]
struct PyStableTree {
    labels: LabelSet,
    inner: m0n_core::StableTree,
}

#[pymethods]
impl PyStableTree {
    #[new]
    fn new(lit: &str) -> PyResult<Self> {
        let raw = literal::parse_tree(lit).map_err(err)?;
        let inner = make_tree(&raw.vertex_tails, &raw.edges, &raw.labels).map_err(err)?;
        Ok(Self {
            labels: raw.labels,
            inner,
        })
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        let inner: m0n_core::StableTree = serde_json::from_str(text).map_err(err)?;
        Ok(Self {
            labels: LabelSet::standard(inner.n()).map_err(err)?,
            inner,
        })
    }

    /// Violations of a proposed dual graph, empty when it is a stable tree.
    #[staticmethod]
    fn diagnose(lit: &str) -> PyResult<Vec<String>> {
        let raw = literal::parse_tree(lit).map_err(err)?;
        Ok(m0n_core::trees::diagnose(raw.labels.len(), &raw.vertex_tails, &raw.edges)
            .iter()
            .map(ToString::to_string)
            .collect())
    }

    #[getter]
    fn n(&self) -> usize {
        self.inner.n()
    }

    fn codimension(&self) -> usize {
        self.inner.codimension()
    }

    fn vertices(&self) -> Vec<Vec<String>> {
        self.inner.vertices().iter().map(|v| tokens(&self.labels, v.tails)).collect()
    }

    fn edges(&self) -> Vec<(usize, usize)> {
        self.inner.edges().to_vec()
    }

    fn signature(&self) -> Vec<PyTwoPartition> {
        self.inner
            .signature()
            .parts()
            .iter()
            .map(|&p| PyTwoPartition {
                labels: self.labels.clone(),
                inner: p,
            })
            .collect()
    }

    /// Contract edge `e` of the canonical layout.
    fn contract(&self, e: usize) -> PyResult<Self> {
        Ok(Self {
            labels: self.labels.clone(),
            inner: self.inner.contract_edge(e).map_err(err)?,
        })
    }

    /// Forget the given labels (same literal syntax as a block) and stabilize.
    fn forget(&self, labels: &str) -> PyResult<Self> {
        let q = literal::parse_label_subset(labels, &self.labels).map_err(err)?;
        Ok(Self {
            labels: self.labels.without(q).map_err(err)?,
            inner: self.inner.forget_and_stabilize(q).map_err(err)?,
        })
    }

    fn pi(&self) -> PyResult<PyDistinguished> {
        Ok(PyDistinguished {
            labels: self.labels.clone(),
            inner: self.inner.pi().map_err(err)?,
        })
    }

    fn type_key(&self) -> String {
        self.inner.unlabeled_type_key()
    }

    fn to_json(&self) -> String {
        serde_json::to_string(&self.inner).expect("trees serialize")
    }

    fn __str__(&self) -> String {
        format_tree(&self.labels, &self.inner)
    }

    fn __repr__(&self) -> String {
        format!("StableTree('{}')", self.__str__())
    }
}

#[pyfunction]
fn pair(sigma: &str, pi: &str) -> PyResult<i64> {
    PyDistinguished::new(pi)?.pair(sigma)
}

#[pyfunction]
fn minus_k(pi: &str) -> PyResult<i64> {
    Ok(PyDistinguished::new(pi)?.minus_k())
}

#[pyfunction]
fn picard_rank(n: usize) -> PyResult<u64> {
    intersect::picard_rank(n).map_err(err)
}

/// Exact rank of the divisor-curve intersection matrix on `n` labels.
#[pyfunction]
fn matrix_rank(py: Python<'_>, n: usize) -> PyResult<usize> {
    let s = LabelSet::standard(n).map_err(err)?;
    py.detach(|| intersect::intersection_matrix(&s).map(|m| intersect::matrix_rank(&m)))
        .map_err(err)
}

/// Census report as a JSON string.
#[pyfunction]
fn census_json(py: Python<'_>, n: usize) -> PyResult<String> {
    let s = LabelSet::standard(n).map_err(err)?;
    let report = py.detach(|| m0n_core::run_census(&s)).map_err(err)?;
    serde_json::to_string(&report).map_err(err)
}

#[pyfunction]
#[pyo3(signature = (genus, sigma_size, target_dim, minus_k_beta))]
fn virtual_dimension(genus: u32, sigma_size: u32, target_dim: u32, minus_k_beta: i64) -> i64 {
    intersect::virtual_dimension(genus, sigma_size, target_dim, minus_k_beta)
}

#[pyfunction]
fn max_n() -> usize {
    limit::max_n()
}

#[pyfunction]
fn set_max_n(n: usize) {
    limit::set_max_n(n)
}

#[pymodule]
fn m0n(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyTwoPartition>()?;
    m.add_class::<PyDistinguished>()?;
    m.add_class::<PyStableTree>()?;
    m.add_function(wrap_pyfunction!(pair, m)?)?;
    m.add_function(wrap_pyfunction!(minus_k, m)?)?;
    m.add_function(wrap_pyfunction!(picard_rank, m)?)?;
    m.add_function(wrap_pyfunction!(matrix_rank, m)?)?;
    m.add_function(wrap_pyfunction!(census_json, m)?)?;
    m.add_function(wrap_pyfunction!(virtual_dimension, m)?)?;
    m.add_function(wrap_pyfunction!(max_n, m)?)?;
    m.add_function(wrap_pyfunction!(set_max_n, m)?)?;
    m.add("__version__", env!("CARGO_PKG_VERSION"))?;
    Ok(())
}
