//! Python module `monostruct`.
//!
//! Structures, orders and formulas are wrapped as classes; reports come back
//! as plain dicts and lists with the same shape as the CLI's JSON output.

use std::sync::Arc;

use monostruct_core::chaining::{classify_chain_set, enumerate_chaining_orders, is_chaining, transport_order};
use monostruct_core::definability::{derive_structure, synthesize_definition};
use monostruct_core::generate::{self as generators, GeneratorSpec};
use monostruct_core::logic::{self, Assignment, OrderDefinitions};
use monostruct_core::monomorphy::{self, SweepOptions};
use monostruct_core::order::LinearOrder;
use monostruct_core::{Bijection, Signature};
use pyo3::create_exception;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyModule;
use serde::Serialize;

create_exception!(monostruct, MonostructError, PyValueError);

fn err(e: monostruct_core::Error) -> PyErr {
    MonostructError::new_err(e.to_string())
}

fn to_py<'py>(py: Python<'py>, value: &impl Serialize) -> PyResult<Bound<'py, PyAny>> {
    let text = serde_json::to_string(value).map_err(|e| PyValueError::new_err(e.to_string()))?;
    PyModule::import(py, "json")?.call_method1("loads", (text,))
}

#[pyclass(name = "Structure", module = "monostruct", frozen, eq, skip_from_py_object)]
#[derive(Clone, PartialEq)]
struct PyStructure {
    inner: monostruct_core::Structure,
}

#[pymethods]
impl PyStructure {
    /// `Structure("R/2", 3, {"R": [(0, 1), (1, 2)]})`
    #[new]
    #[pyo3(signature = (signature, size, relations = None))]
    fn new(signature: &str, size: usize, relations: Option<std::collections::HashMap<String, Vec<Vec<usize>>>>) -> PyResult<Self> {
        let sig = Arc::new(Signature::parse(signature).map_err(err)?);
        let mut relations = relations.unwrap_or_default();
        let lists: Vec<Vec<Vec<usize>>> = sig.symbols().iter().map(|s| relations.remove(&s.name).unwrap_or_default()).collect();
        if let Some(name) = relations.keys().next() {
            return Err(MonostructError::new_err(format!("unknown symbol `{name}`")));
        }
        let inner = monostruct_core::Structure::from_tuples(sig, size, &lists).map_err(err)?;
        Ok(PyStructure { inner })
    }

    /// Parses the structure file format.
    #[staticmethod]
    fn parse(text: &str) -> PyResult<Self> {
        let inner = monostruct_core::parse_structure(text).map_err(err)?.structure;
        Ok(PyStructure { inner })
    }

    #[getter]
    fn size(&self) -> usize {
        self.inner.size()
    }

    #[getter]
    fn signature(&self) -> Vec<(String, usize)> {
        self.inner.signature().symbols().iter().map(|s| (s.name.clone(), s.arity)).collect()
    }

    fn tuples(&self, symbol: &str) -> PyResult<Vec<Vec<usize>>> {
        let i = self
            .inner
            .signature()
            .index_of(symbol)
            .ok_or_else(|| MonostructError::new_err(format!("unknown symbol `{symbol}`")))?;
        Ok(self.inner.tuples(i))
    }

    fn to_text(&self) -> String {
        self.inner.to_text()
    }

    fn relabel(&self, mapping: Vec<usize>) -> PyResult<Self> {
        Ok(PyStructure {
            inner: self.inner.relabel(&mapping).map_err(err)?,
        })
    }

    fn induced(&self, subset: Vec<usize>) -> PyResult<Self> {
        Ok(PyStructure {
            inner: monostruct_core::induced_substructure(&self.inner, &subset).map_err(err)?,
        })
    }

    fn canonical_code(&self) -> PyResult<String> {
        Ok(monostruct_core::canonical_code(&self.inner).map_err(err)?.to_hex())
    }

    fn __str__(&self) -> String {
        self.inner.to_text()
    }

    fn __repr__(&self) -> String {
        format!("Structure(size={}, signature={:?})", self.inner.size(), self.signature())
    }
}

#[pyclass(name = "LinearOrder", module = "monostruct", frozen, eq, hash, skip_from_py_object)]
#[derive(Clone, PartialEq, Eq, Hash)]
struct PyOrder {
    inner: LinearOrder,
}

#[pymethods]
impl PyOrder {
    /// Ascending enumeration of `0..n`.
    #[new]
    fn new(ascending: Vec<usize>) -> PyResult<Self> {
        Ok(PyOrder {
            inner: LinearOrder::new(ascending).map_err(err)?,
        })
    }

    #[staticmethod]
    fn parse(text: &str) -> PyResult<Self> {
        Ok(PyOrder {
            inner: LinearOrder::parse(text).map_err(err)?,
        })
    }

    #[staticmethod]
    fn natural(n: usize) -> Self {
        PyOrder {
            inner: LinearOrder::natural(n),
        }
    }

    #[getter]
    fn ascending(&self) -> Vec<usize> {
        self.inner.ascending().to_vec()
    }

    fn reverse(&self) -> Self {
        PyOrder {
            inner: self.inner.reverse(),
        }
    }

    fn __len__(&self) -> usize {
        self.inner.len()
    }

    fn __str__(&self) -> String {
        self.inner.to_string()
    }

    fn __repr__(&self) -> String {
        format!("LinearOrder({:?})", self.inner.ascending())
    }
}

#[pyclass(name = "Formula", module = "monostruct", frozen, eq, skip_from_py_object)]
#[derive(Clone, PartialEq)]
struct PyFormula {
    inner: logic::Formula,
}

#[pymethods]
impl PyFormula {
    /// Parses a formula over the given signature, e.g. `"R/2"`.
    #[staticmethod]
    fn parse(text: &str, signature: &str) -> PyResult<Self> {
        let sig = Signature::parse(signature).map_err(err)?;
        Ok(PyFormula {
            inner: logic::parse_formula(text, &sig).map_err(err)?,
        })
    }

    /// Parses a formula in `<` and `=` only.
    #[staticmethod]
    fn parse_order(text: &str) -> PyResult<Self> {
        Ok(PyFormula {
            inner: logic::parse_order_formula(text).map_err(err)?,
        })
    }

    #[getter]
    fn is_sentence(&self) -> bool {
        self.inner.is_sentence()
    }

    #[getter]
    fn quantifier_depth(&self) -> usize {
        self.inner.quantifier_depth()
    }

    fn free_vars(&self) -> Vec<u32> {
        self.inner.free_vars().into_iter().collect()
    }

    fn __str__(&self) -> String {
        self.inner.to_string()
    }

    fn __repr__(&self) -> String {
        format!("Formula({:?})", self.inner.to_string())
    }
}

fn same_size(y: &PyStructure, x: &PyOrder) -> PyResult<()> {
    if y.inner.size() != x.inner.len() {
        return Err(MonostructError::new_err(format!(
            "order on {} elements for a structure of size {}",
            x.inner.len(),
            y.inner.size()
        )));
    }
    Ok(())
}

/// Per-level verdicts, or the single level `k`.
#[pyfunction]
#[pyo3(signature = (y, k = None))]
fn check_monomorphy<'py>(py: Python<'py>, y: &PyStructure, k: Option<usize>) -> PyResult<Bound<'py, PyAny>> {
    match k {
        Some(k) => to_py(py, &py.detach(|| monomorphy::is_k_monomorphic(&y.inner, k)).map_err(err)?),
        None => to_py(py, &py.detach(|| monomorphy::is_monomorphic(&y.inner)).map_err(err)?),
    }
}

#[pyfunction]
fn is_monomorphic(py: Python<'_>, y: &PyStructure) -> PyResult<bool> {
    Ok(py.detach(|| monomorphy::is_monomorphic(&y.inner)).map_err(err)?.monomorphic)
}

#[pyfunction]
fn chains(y: &PyStructure, x: &PyOrder) -> PyResult<bool> {
    same_size(y, x)?;
    is_chaining(&y.inner, &x.inner).map_err(err)
}

/// All chaining orders, sorted.
#[pyfunction]
fn find_chains(py: Python<'_>, y: &PyStructure) -> PyResult<Vec<PyOrder>> {
    let l = py.detach(|| enumerate_chaining_orders(&y.inner)).map_err(err)?;
    Ok(l.orders.into_iter().map(|inner| PyOrder { inner }).collect())
}

#[pyfunction]
fn classify<'py>(py: Python<'py>, y: &PyStructure) -> PyResult<Bound<'py, PyAny>> {
    let report = py
        .detach(|| enumerate_chaining_orders(&y.inner).and_then(|l| classify_chain_set(&y.inner, &l)))
        .map_err(err)?;
    to_py(py, &report)
}

/// Definitions report; `"text"` holds the definitions file.
#[pyfunction]
fn synthesize_def<'py>(py: Python<'py>, y: &PyStructure, order: &PyOrder) -> PyResult<Bound<'py, PyAny>> {
    let d = synthesize_definition(&y.inner, &order.inner).map_err(err)?;
    let out = to_py(py, &d)?;
    out.set_item("text", d.to_text())?;
    Ok(out)
}

/// Structure defined in `order` by a definitions file.
#[pyfunction]
fn derive(order: &PyOrder, definitions: &str) -> PyResult<PyStructure> {
    let defs = OrderDefinitions::parse(definitions).map_err(err)?;
    Ok(PyStructure {
        inner: derive_structure(&order.inner, &defs).map_err(err)?,
    })
}

#[pyfunction]
#[pyo3(signature = (kind, size, seed = 0, density = 0.5))]
fn generate(kind: &str, size: usize, seed: u64, density: f64) -> PyResult<PyStructure> {
    let spec = GeneratorSpec {
        kind: kind.parse().map_err(err)?,
        size,
        seed,
        density,
    };
    Ok(PyStructure {
        inner: generators::generate(&spec).map_err(err)?,
    })
}

#[pyfunction]
fn corpus() -> Vec<PyStructure> {
    generators::corpus().into_iter().map(|inner| PyStructure { inner }).collect()
}

/// Truth of `formula` (text or `Formula`) in `y` under `v0 -> assign[0]`, ...
#[pyfunction]
#[pyo3(signature = (y, formula, assign = None))]
fn model_check(y: &PyStructure, formula: &Bound<'_, PyAny>, assign: Option<Vec<usize>>) -> PyResult<bool> {
    let f = match formula.cast::<PyFormula>() {
        Ok(f) => f.get().inner.clone(),
        Err(_) => logic::parse_formula(&formula.extract::<String>()?, y.inner.signature()).map_err(err)?,
    };
    let asg = Assignment::from_slice(&assign.unwrap_or_default());
    logic::eval(&y.inner, &f, &asg).map_err(err)
}

/// Sentence true in `y` exactly when every `|k|`-subset of `y` induces a copy of `k`.
#[pyfunction]
fn build_psi(k: &PyStructure) -> PyResult<PyFormula> {
    Ok(PyFormula {
        inner: logic::build_psi(&k.inner).map_err(err)?,
    })
}

/// Sentence true exactly in the `n`-monomorphic structures over `signature`.
#[pyfunction]
fn build_psi_n(py: Python<'_>, signature: &str, n: usize) -> PyResult<PyFormula> {
    let sig = Signature::parse(signature).map_err(err)?;
    Ok(PyFormula {
        inner: py.detach(|| logic::build_psi_n(&sig, n)).map_err(err)?,
    })
}

#[pyfunction]
fn star_translate(formula: &PyFormula, definitions: &str) -> PyResult<PyFormula> {
    let defs = OrderDefinitions::parse(definitions).map_err(err)?;
    Ok(PyFormula {
        inner: logic::star_translate(&formula.inner, &defs).map_err(err)?,
    })
}

/// `(reduced structure, merged symbol groups)`.
#[pyfunction]
fn reduce_signature(y: &PyStructure) -> (PyStructure, Vec<Vec<String>>) {
    let r = logic::reduce_duplicate_relations(&y.inner);
    (PyStructure { inner: r.structure }, r.classes)
}

/// An isomorphism `a -> b` as the list of images, or `None`.
#[pyfunction]
fn find_isomorphism(a: &PyStructure, b: &PyStructure) -> PyResult<Option<Vec<usize>>> {
    Ok(monostruct_core::find_isomorphism(&a.inner, &b.inner)
        .map_err(err)?
        .map(|f| f.as_slice().to_vec()))
}

/// Pulls an order on `Y` back along the bijection `f: Z -> Y`.
#[pyfunction]
fn transport(f: Vec<usize>, order: &PyOrder) -> PyResult<PyOrder> {
    let f = Bijection::new(f).map_err(err)?;
    Ok(PyOrder {
        inner: transport_order(&f, &order.inner).map_err(err)?,
    })
}

#[pyfunction]
#[pyo3(signature = (arity, max_size, exhaustive_limit = None, samples = None, seed = 0))]
fn frasnay_sweep<'py>(
    py: Python<'py>,
    arity: usize,
    max_size: usize,
    exhaustive_limit: Option<u64>,
    samples: Option<usize>,
    seed: u64,
) -> PyResult<Bound<'py, PyAny>> {
    let d = SweepOptions::default();
    let options = SweepOptions {
        exhaustive_limit: exhaustive_limit.unwrap_or(d.exhaustive_limit),
        samples: samples.unwrap_or(d.samples),
        seed,
    };
    let report = py.detach(|| monomorphy::frasnay_sweep(arity, max_size, options)).map_err(err)?;
    to_py(py, &report)
}

/// Runs the command-line tool in-process: `(exit code, stdout, stderr)`.
#[pyfunction]
fn run_cli(py: Python<'_>, args: Vec<String>) -> (i32, String, String) {
    let out = py.detach(|| monostruct_core::cli::run(std::iter::once("monostruct".to_string()).chain(args)));
    (out.code, out.stdout, out.stderr)
}

#[pymodule]
fn monostruct(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("MonostructError", m.py().get_type::<MonostructError>())?;
    m.add_class::<PyStructure>()?;
    m.add_class::<PyOrder>()?;
    m.add_class::<PyFormula>()?;
    m.add_function(wrap_pyfunction!(check_monomorphy, m)?)?;
    m.add_function(wrap_pyfunction!(is_monomorphic, m)?)?;
    m.add_function(wrap_pyfunction!(chains, m)?)?;
    m.add_function(wrap_pyfunction!(find_chains, m)?)?;
    m.add_function(wrap_pyfunction!(classify, m)?)?;
    m.add_function(wrap_pyfunction!(synthesize_def, m)?)?;
    m.add_function(wrap_pyfunction!(derive, m)?)?;
    m.add_function(wrap_pyfunction!(generate, m)?)?;
    m.add_function(wrap_pyfunction!(corpus, m)?)?;
    m.add_function(wrap_pyfunction!(model_check, m)?)?;
    m.add_function(wrap_pyfunction!(build_psi, m)?)?;
    m.add_function(wrap_pyfunction!(build_psi_n, m)?)?;
    m.add_function(wrap_pyfunction!(star_translate, m)?)?;
    m.add_function(wrap_pyfunction!(reduce_signature, m)?)?;
    m.add_function(wrap_pyfunction!(find_isomorphism, m)?)?;
    m.add_function(wrap_pyfunction!(transport, m)?)?;
    m.add_function(wrap_pyfunction!(frasnay_sweep, m)?)?;
    m.add_function(wrap_pyfunction!(run_cli, m)?)?;
    Ok(())
}
