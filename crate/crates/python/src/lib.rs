//! Python bindings. Modules, morphisms and relative contexts wrap the core
//! types; structured results cross the boundary as JSON.

use pyo3::create_exception;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use relstab_core::audit::{run_suite, SuiteOptions};
use relstab_core::constructions::{verify_wrap_lemma, wrap_ses};
use relstab_core::homs::{hom_basis, summand_witness_bruteforce, DEFAULT_SEARCH_BOUND};
use relstab_core::io::{self, Resolver};
use relstab_core::reps::{direct_sum, dual, tensor};
use relstab_core::{catalog, Prime, RelativeContext};

create_exception!(relstab, RelstabError, PyValueError);

fn err(e: relstab_core::Error) -> PyErr {
    RelstabError::new_err(format!("{}: {e}", e.kind()))
}

fn to_py<'py>(py: Python<'py>, v: &serde_json::Value) -> PyResult<Bound<'py, PyAny>> {
    py.import("json")?.call_method1("loads", (v.to_string(),))
}

/// A finite-dimensional module over GF(p)G.
#[pyclass(frozen, skip_from_py_object)]
#[derive(Clone)]
struct Module(relstab_core::Module);

#[pymethods]
impl Module {
    /// Look up a catalog name or load a JSON file.
    #[staticmethod]
    fn load(reference: &str) -> PyResult<Self> {
        Resolver::default().module(reference).map(Module).map_err(err)
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        let v: serde_json::Value =
            serde_json::from_str(text).map_err(|e| RelstabError::new_err(format!("parse_error: {e}")))?;
        Resolver::default().module_value(&v).map(Module).map_err(err)
    }

    fn to_json(&self) -> String {
        serde_json::to_string(&io::module_to_json(&self.0)).expect("json")
    }

    #[getter]
    fn dim(&self) -> usize {
        self.0.dim()
    }

    #[getter]
    fn p(&self) -> u32 {
        self.0.p()
    }

    #[getter]
    fn group_order(&self) -> usize {
        self.0.group().order()
    }

    /// Matrix of the group element with index `g`, as a list of rows.
    fn action(&self, g: usize) -> PyResult<Vec<Vec<u32>>> {
        if g >= self.0.group().order() {
            return Err(RelstabError::new_err(format!("no group element {g}")));
        }
        Ok(self.0.action(g).to_rows())
    }

    fn tensor(&self, other: &Module) -> PyResult<Module> {
        tensor(&self.0, &other.0).map(Module).map_err(err)
    }

    fn dual(&self) -> Module {
        Module(dual(&self.0))
    }

    fn direct_sum(&self, other: &Module) -> PyResult<Module> {
        direct_sum(&self.0, &other.0).map(Module).map_err(err)
    }

    fn hom_dim(&self, other: &Module) -> PyResult<usize> {
        hom_basis(&self.0, &other.0).map(|h| h.dim()).map_err(err)
    }

    /// Whether `self` is isomorphic to a direct summand of `other`.
    #[pyo3(signature = (other, bound = DEFAULT_SEARCH_BOUND))]
    fn is_summand_of(&self, other: &Module, bound: u64) -> PyResult<bool> {
        summand_witness_bruteforce(&self.0, &other.0, bound).map(|w| w.is_some()).map_err(err)
    }

    fn __eq__(&self, other: &Module) -> bool {
        self.0 == other.0
    }

    fn __repr__(&self) -> String {
        format!("Module(dim={}, p={}, group_order={})", self.0.dim(), self.0.p(), self.0.group().order())
    }
}

/// A module homomorphism.
#[pyclass(frozen)]
struct Morphism(relstab_core::Morphism);

#[pymethods]
impl Morphism {
    #[new]
    fn new(source: &Module, target: &Module, matrix: Vec<Vec<i64>>) -> PyResult<Self> {
        let m = relstab_core::FpMatrix::from_rows(source.0.prime(), &matrix).map_err(err)?;
        relstab_core::Morphism::new(source.0.clone(), target.0.clone(), m).map(Morphism).map_err(err)
    }

    #[staticmethod]
    fn load(reference: &str) -> PyResult<Self> {
        Resolver::default().morphism(reference).map(Morphism).map_err(err)
    }

    fn to_json(&self) -> String {
        serde_json::to_string(&io::morphism_to_json(&self.0)).expect("json")
    }

    #[getter]
    fn source(&self) -> Module {
        Module(self.0.source().clone())
    }

    #[getter]
    fn target(&self) -> Module {
        Module(self.0.target().clone())
    }

    #[getter]
    fn matrix(&self) -> Vec<Vec<u32>> {
        self.0.matrix().to_rows()
    }

    fn after(&self, inner: &Morphism) -> PyResult<Morphism> {
        self.0.after(&inner.0).map(Morphism).map_err(err)
    }

    fn rank(&self) -> usize {
        self.0.rank()
    }
}

/// The relative context determined by a module `w`.
#[pyclass(frozen)]
struct Context(RelativeContext);

#[pymethods]
impl Context {
    #[new]
    fn new(w: &Module) -> Self {
        Context(RelativeContext::new(w.0.clone()))
    }

    #[getter]
    fn w(&self) -> Module {
        Module(self.0.w().clone())
    }

    fn is_relatively_projective(&self, x: &Module) -> PyResult<bool> {
        self.0.is_relatively_projective(&x.0).map_err(err)
    }

    fn stable_hom_dim(&self, a: &Module, b: &Module) -> PyResult<usize> {
        self.0.stable_hom_dim(&a.0, &b.0).map_err(err)
    }

    fn is_stably_zero(&self, f: &Morphism) -> PyResult<bool> {
        self.0.is_stably_zero(&f.0).map_err(err)
    }

    fn omega(&self, x: &Module) -> PyResult<Module> {
        self.0.omega(&x.0).map(|(m, _)| Module(m)).map_err(err)
    }

    fn omega_inv(&self, x: &Module) -> PyResult<Module> {
        self.0.omega_inv(&x.0).map(|(m, _)| Module(m)).map_err(err)
    }

    /// Whether the catalog or file sequence `ses` splits after tensoring with `w`.
    fn is_w_split(&self, ses: &str) -> PyResult<bool> {
        let s = Resolver::default().ses(ses).map_err(err)?;
        self.0.is_w_split(&s).map_err(err)
    }
}

#[pyfunction]
fn catalog_names() -> Vec<&'static str> {
    catalog::names().to_vec()
}

/// Wrapped module of the sequence `ses` at prime `p`.
#[pyfunction]
fn wrap(p: u32, ses: &str) -> PyResult<Module> {
    let s = Resolver::default().ses(ses).map_err(err)?;
    let p = Prime::new(p).map_err(err)?;
    wrap_ses(p, &s).map(|w| Module(w.module)).map_err(err)
}

/// `{"split", "rel_proj", "agree"}` for the sequence `ses` at prime `p`.
#[pyfunction]
fn verify_wrap<'py>(py: Python<'py>, p: u32, ses: &str) -> PyResult<Bound<'py, PyAny>> {
    let s = Resolver::default().ses(ses).map_err(err)?;
    let r = verify_wrap_lemma(Prime::new(p).map_err(err)?, &s).map_err(err)?;
    to_py(py, &serde_json::json!({"split": r.split, "rel_proj": r.rel_proj, "agree": r.agree}))
}

/// Runs the full check suite and returns a list of `{"name", "passed", "detail"}`.
#[pyfunction]
#[pyo3(signature = (pmax = 7, seed = 0, bound = DEFAULT_SEARCH_BOUND))]
fn verify_suite<'py>(py: Python<'py>, pmax: u32, seed: u64, bound: u64) -> PyResult<Bound<'py, PyAny>> {
    let opts = SuiteOptions { pmax, bound, seed, fixtures: Vec::new() };
    let checks = py.detach(|| run_suite(&opts));
    to_py(py, &serde_json::to_value(&checks).expect("json"))
}

#[pymodule]
fn relstab(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Module>()?;
    m.add_class::<Morphism>()?;
    m.add_class::<Context>()?;
    m.add("RelstabError", m.py().get_type::<RelstabError>())?;
    m.add_function(wrap_pyfunction!(catalog_names, m)?)?;
    m.add_function(wrap_pyfunction!(wrap, m)?)?;
    m.add_function(wrap_pyfunction!(verify_wrap, m)?)?;
    m.add_function(wrap_pyfunction!(verify_suite, m)?)?;
    Ok(())
}
