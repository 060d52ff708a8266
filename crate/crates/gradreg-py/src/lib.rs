//! Python bindings for `gradreg` over prime fields.
//!
//! Structured results cross the boundary as JSON and arrive as plain Python
//! dicts and lists, with the same shape as the CLI reports.

use std::sync::Arc;

use gradreg::algebra::{TruncatedAlgebra, DEFAULT_CAP};
use gradreg::catalog::{self, Flags, NAMES};
use gradreg::cli::{main_with_args, module_from_spec};
use gradreg::gmod::{ExtendedDegree, GradedModule};
use gradreg::presentation::QuiverPresentation;
use gradreg::regularity::{
    asreg, equalize_parameters as equalize, ext_table, regs_of_module, tor_table, Bounds, CmStrategy, Equalization, ExtOptions,
    RegContext,
};
use gradreg::resolve::Resolution;
use gradreg::scalar::{FieldSpec, Fp};
use gradreg::verify::{run_theorem_suite, ModuleParams, SuiteConfig};
use pyo3::create_exception;
use pyo3::exceptions::PyException;
use pyo3::prelude::*;
use pyo3::types::PyAny;
use serde_json::{json, Value};

create_exception!(gradreg_py, GradregError, PyException, "Raised for every gradreg input or computation error.");

fn py_err(e: gradreg::Error) -> PyErr {
    GradregError::new_err(format!("{}: {e}", e.kind()))
}

fn to_py<'py>(py: Python<'py>, v: &Value) -> PyResult<Bound<'py, PyAny>> {
    py.import("json")?.call_method1("loads", (v.to_string(),))
}

fn field(prime: u32) -> PyResult<Fp> {
    FieldSpec::PrimeField(prime).validate().map_err(py_err)?;
    Fp::new(prime).map_err(py_err)
}

fn strategy(s: Option<&str>, ctx: &RegContext<Fp>) -> PyResult<CmStrategy> {
    match s {
        Some(s) => CmStrategy::parse(s).map_err(py_err),
        None if ctx.gorenstein().is_some() => Ok(CmStrategy::Duality),
        None => Ok(CmStrategy::Limit),
    }
}

/// Names of the built-in algebras.
#[pyfunction]
fn catalog_names() -> Vec<&'static str> {
    NAMES.to_vec()
}

/// Solves for vertex shifts equalizing the Gorenstein parameters.
///
/// Returns `{"p": [...], "ell": [...]}` or `{"infeasible": [...], "reason": str}`.
#[pyfunction]
fn equalize_parameters<'py>(py: Python<'py>, ell: Vec<i64>, sigma: Vec<usize>, m: Vec<Vec<Option<i64>>>) -> PyResult<Bound<'py, PyAny>> {
    let v = match equalize(&ell, &sigma, &m).map_err(py_err)? {
        Equalization::Shifts { p, ell } => json!({"p": p, "ell": ell}),
        Equalization::Infeasible { cycle, reason } => json!({"infeasible": cycle, "reason": reason}),
    };
    to_py(py, &v)
}

/// Runs the command-line tool in-process and returns its exit code.
#[pyfunction]
fn run_cli(args: Vec<String>) -> i32 {
    main_with_args(std::iter::once("gradreg".to_owned()).chain(args))
}

/// A graded quiver algebra truncated at a fixed degree.
#[pyclass(frozen, module = "gradreg_py")]
struct Algebra {
    inner: Arc<TruncatedAlgebra<Fp>>,
}

#[pymethods]
impl Algebra {
    /// A catalog algebra, computed through degree `top`.
    #[staticmethod]
    #[pyo3(signature = (name, top = 8, prime = 32003))]
    fn catalog(name: &str, top: usize, prime: u32) -> PyResult<Self> {
        let f = field(prime)?;
        let p = catalog::presentation(name, FieldSpec::PrimeField(prime)).map_err(py_err)?;
        Ok(Algebra { inner: Arc::new(TruncatedAlgebra::build(&f, &p, top, DEFAULT_CAP).map_err(py_err)?) })
    }

    /// An algebra from presentation JSON text.
    #[staticmethod]
    #[pyo3(signature = (text, top = 8, prime = 32003))]
    fn from_json(text: &str, top: usize, prime: u32) -> PyResult<Self> {
        let f = field(prime)?;
        let p = QuiverPresentation::parse(text).and_then(|p| p.with_field(FieldSpec::PrimeField(prime))).map_err(py_err)?;
        Ok(Algebra { inner: Arc::new(TruncatedAlgebra::build(&f, &p, top, DEFAULT_CAP).map_err(py_err)?) })
    }

    #[getter]
    fn top(&self) -> usize {
        self.inner.top()
    }

    #[getter]
    fn vertices(&self) -> Vec<String> {
        self.inner.vertex_names().to_vec()
    }

    /// `dim A_d` for `d = 0..=top`.
    #[getter]
    fn hilbert(&self) -> Vec<usize> {
        self.inner.hilbert().total.clone()
    }

    /// `blocks[d][i][j] = dim e_i A_d e_j`.
    #[getter]
    fn hilbert_blocks(&self) -> Vec<Vec<Vec<usize>>> {
        self.inner.hilbert().blocks.clone()
    }

    /// True when the quadratic relations certify a Koszul algebra.
    fn koszul_certificate(&self) -> bool {
        self.inner.koszul_certificate()
    }

    fn opposite(&self) -> Self {
        Algebra { inner: Arc::new(self.inner.opposite()) }
    }

    /// The twisted algebra `⊕ e_i A e_j` regraded by vertex shifts.
    fn endo_twist(&self, shifts: Vec<i64>) -> PyResult<Self> {
        Ok(Algebra { inner: Arc::new(self.inner.endo_twist(&shifts).map_err(py_err)?) })
    }

    fn __repr__(&self) -> String {
        format!("Algebra(vertices={}, top={}, hilbert={:?})", self.inner.num_vertices(), self.inner.top(), self.inner.hilbert().total)
    }
}

/// An algebra with the truncation bounds and asserted data used for regularities.
#[pyclass(frozen, module = "gradreg_py")]
struct Context {
    name: String,
    inner: Arc<RegContext<Fp>>,
}

/// A finitely presented graded module over a context's algebra.
#[pyclass(frozen, module = "gradreg_py")]
struct Module {
    spec: String,
    ctx: Arc<RegContext<Fp>>,
    inner: Arc<GradedModule<Fp>>,
}

/// A truncated minimal graded free resolution.
#[pyclass(frozen, module = "gradreg_py")]
struct MinimalResolution {
    inner: Arc<Resolution<Fp>>,
}

#[pymethods]
impl Context {
    /// A catalog algebra (`name`) or a presentation (`presentation`, JSON text).
    ///
    /// `strategy` is `"limit"` or `"duality"`; it only sizes the algebra truncation here.
    #[new]
    #[pyo3(signature = (name = None, presentation = None, h = 8, n = 12, strategy = None, prime = 32003))]
    fn new(name: Option<&str>, presentation: Option<&str>, h: usize, n: i64, strategy: Option<&str>, prime: u32) -> PyResult<Self> {
        let f = field(prime)?;
        let spec = FieldSpec::PrimeField(prime);
        let (label, pres, flags, gor) = match (name, presentation) {
            (Some(name), None) => {
                let e = catalog::entry(name, spec).map_err(py_err)?;
                (e.name, e.presentation, e.flags, e.gorenstein)
            }
            (None, Some(text)) => {
                let p = QuiverPresentation::parse(text).and_then(|p| p.with_field(spec)).map_err(py_err)?;
                let flags = Flags::unasserted(&p);
                ("presentation".to_owned(), p, flags, None)
            }
            _ => return Err(GradregError::new_err("give exactly one of name and presentation")),
        };
        let s = match strategy {
            Some(s) => CmStrategy::parse(s).map_err(py_err)?,
            None if gor.is_some() => CmStrategy::Duality,
            None => CmStrategy::Limit,
        };
        let bounds = Bounds::new(h, n);
        let i_max = gor.as_ref().map_or(bounds.h, |g| g.dim as usize);
        let alg = Arc::new(TruncatedAlgebra::build(&f, &pres, bounds.algebra_top(s, i_max), DEFAULT_CAP).map_err(py_err)?);
        let inner = RegContext::new(alg, flags, gor.as_ref(), bounds).map_err(py_err)?;
        Ok(Context { name: label, inner: Arc::new(inner) })
    }

    #[getter]
    fn name(&self) -> &str {
        &self.name
    }

    fn algebra(&self) -> Algebra {
        Algebra { inner: self.inner.algebra().clone() }
    }

    /// Bounds, flags and verified Gorenstein data.
    fn info<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        to_py(py, &self.inner.to_json())
    }

    /// `trivial | simple | simple:V | regular | projective:V | random:SEED`.
    fn module(&self, spec: &str) -> PyResult<Module> {
        let m = module_from_spec(&self.inner, spec).map_err(py_err)?;
        Ok(Module { spec: spec.to_owned(), ctx: self.inner.clone(), inner: Arc::new(m) })
    }

    fn resolve(&self, module: &Module) -> PyResult<MinimalResolution> {
        Ok(MinimalResolution { inner: Arc::new(self.inner.resolve(&module.inner).map_err(py_err)?) })
    }

    /// All eight regularities of a module, with pdim and depth.
    #[pyo3(signature = (module, strategy = None))]
    fn regularity<'py>(&self, py: Python<'py>, module: &Module, strategy: Option<&str>) -> PyResult<Bound<'py, PyAny>> {
        let s = self::strategy(strategy, &self.inner)?;
        to_py(py, &regs_of_module(&self.inner, &module.inner, s).map_err(py_err)?.to_json())
    }

    /// `ASreg` and `asreg` of the algebra.
    #[pyo3(signature = (strategy = None))]
    fn asreg<'py>(&self, py: Python<'py>, strategy: Option<&str>) -> PyResult<Bound<'py, PyAny>> {
        let s = self::strategy(strategy, &self.inner)?;
        to_py(py, &asreg(&self.inner, s).map_err(py_err)?.to_json())
    }

    /// Table of `gExt^m(module, target)_j`; `target` is a module spec.
    #[pyo3(signature = (module, target = "regular"))]
    fn ext_table<'py>(&self, py: Python<'py>, module: &Module, target: &str) -> PyResult<Bound<'py, PyAny>> {
        let y = module_from_spec(&self.inner, target).map_err(py_err)?;
        let injdim = (target == "regular").then(|| self.inner.gorenstein().filter(|g| g.is_verified()).map(|g| g.dim)).flatten();
        let opts = ExtOptions { injdim, margin: self.inner.bounds().margin, ..Default::default() };
        let res = self.inner.resolve(&module.inner).map_err(py_err)?;
        let t = ext_table(&res, &y, &opts).map_err(py_err)?;
        to_py(py, &table_json(t.to_json(), t.ideg(), t.sdeg()))
    }

    /// Table of `Tor_m(right, module)_j`; `right` is a module spec over the opposite algebra.
    #[pyo3(signature = (module, right = "trivial"))]
    fn tor_table<'py>(&self, py: Python<'py>, module: &Module, right: &str) -> PyResult<Bound<'py, PyAny>> {
        let opp = self.inner.opposite().map_err(py_err)?;
        let y = module_from_spec(&opp, right).map_err(py_err)?;
        let res = self.inner.resolve(&module.inner).map_err(py_err)?;
        let t = tor_table(&res, &y).map_err(py_err)?;
        to_py(py, &table_json(t.to_json(), t.ideg(), t.sdeg()))
    }

    /// Runs the property suite; the result has `summary`, `gated` and `outcomes`.
    #[pyo3(signature = (seed = 42, instances = 25, checks = None, strategy = None))]
    fn verify<'py>(
        &self,
        py: Python<'py>,
        seed: u64,
        instances: usize,
        checks: Option<Vec<u8>>,
        strategy: Option<&str>,
    ) -> PyResult<Bound<'py, PyAny>> {
        let s = self::strategy(strategy, &self.inner)?;
        let checks = checks.unwrap_or_else(|| (1..=13).collect());
        if let Some(c) = checks.iter().find(|c| !(1..=13).contains(*c)) {
            return Err(GradregError::new_err(format!("no check C{c}")));
        }
        let cfg = SuiteConfig { seed, instances, bounds: *self.inner.bounds(), strategy: s, params: ModuleParams::default(), checks };
        let ctx = self.inner.clone();
        let name = self.name.clone();
        let report = py.detach(move || run_theorem_suite(&ctx, &name, &cfg)).map_err(py_err)?;
        to_py(py, &report.to_json())
    }

    fn __repr__(&self) -> String {
        format!("Context({:?}, h={}, n={})", self.name, self.inner.bounds().h, self.inner.bounds().n)
    }
}

fn table_json(table: Value, ideg: gradreg::gmod::Interval, sdeg: gradreg::gmod::Interval) -> Value {
    json!({
        "table": table,
        "ideg": ExtendedDegree::from_interval(ideg).to_json(),
        "sdeg": ExtendedDegree::from_interval(sdeg).to_json(),
    })
}

#[pymethods]
impl Module {
    #[getter]
    fn spec(&self) -> &str {
        &self.spec
    }

    /// Lowest and highest degree of the stored window.
    #[getter]
    fn window(&self) -> (i64, i64) {
        (self.inner.lo(), self.inner.hi())
    }

    /// `dim M_d` over the window.
    #[getter]
    fn dims(&self) -> Vec<usize> {
        self.inner.dims()
    }

    fn is_zero(&self) -> bool {
        self.inner.is_zero()
    }

    /// `{"sdeg": ..., "ideg": ...}` as extended degrees.
    fn degrees<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        let (s, i) = self.inner.sdeg_ideg();
        to_py(py, &json!({"sdeg": s.to_json(), "ideg": i.to_json()}))
    }

    /// `M(l)`, with `M(l)_d = M_{d+l}`.
    fn shift(&self, l: i64) -> Module {
        Module { spec: format!("{}({l})", self.spec), ctx: self.ctx.clone(), inner: Arc::new(self.inner.shift(l)) }
    }

    /// `M_{>=r}`.
    fn truncate_below(&self, r: i64) -> Module {
        Module { spec: format!("{}_>={r}", self.spec), ctx: self.ctx.clone(), inner: Arc::new(self.inner.truncate_below(r)) }
    }

    fn __repr__(&self) -> String {
        format!("Module({:?}, window=({}, {}))", self.spec, self.inner.lo(), self.inner.hi())
    }
}

#[pymethods]
impl MinimalResolution {
    /// Number of computed steps.
    fn __len__(&self) -> usize {
        self.inner.len()
    }

    fn terminated(&self) -> bool {
        self.inner.terminated()
    }

    /// Betti numbers as `[step, degree, vertex, count]` rows.
    fn betti(&self) -> Vec<(usize, i64, usize, usize)> {
        self.inner.betti().entries.iter().map(|(&(m, s, v), &c)| (m, s, v, c)).collect()
    }

    fn pdim<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        to_py(py, &ExtendedDegree::from_interval(self.inner.pdim()).to_json())
    }

    /// `(Torreg, torreg)` as extended degrees.
    fn torreg<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        let (a, b) = self.inner.torreg();
        to_py(py, &json!([ExtendedDegree::from_interval(a).to_json(), ExtendedDegree::from_interval(b).to_json()]))
    }

    /// Complex, exactness and minimality checks on the computed window.
    fn check(&self) -> (bool, bool, bool) {
        (self.inner.check_complex(), self.inner.check_exact(), self.inner.check_minimality())
    }

    fn to_json<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        to_py(py, &self.inner.to_json())
    }
}

#[pymodule]
fn gradreg_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("GradregError", m.py().get_type::<GradregError>())?;
    m.add("__version__", gradreg::report::VERSION)?;
    m.add_class::<Algebra>()?;
    m.add_class::<Context>()?;
    m.add_class::<Module>()?;
    m.add_class::<MinimalResolution>()?;
    m.add_function(wrap_pyfunction!(catalog_names, m)?)?;
    m.add_function(wrap_pyfunction!(equalize_parameters, m)?)?;
    m.add_function(wrap_pyfunction!(run_cli, m)?)?;
    Ok(())
}
