//! Python bindings: exact polynomials, Weierstrass charts, Kodaira
//! classification, and the full resolve/classify job pipeline. Reports
//! cross the boundary as JSON strings; orders cross as `int` or `None`
//! (infinite).

use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;

use crepant::kodaira::{classify, OrderTriple};
use crepant::poly::{Order, Rat, RatPoly};
use crepant::report::{load_job, run_classify, run_resolve, CoordLit, JobError};
use crepant::weierstrass::WeierstrassChart;

/// A point coordinate from Python: an int or a string like `"3/2"`.
#[derive(FromPyObject)]
enum CoordIn {
    Int(i64),
    Text(String),
}

impl CoordIn {
    fn to_rat(&self) -> PyResult<Rat> {
        let lit = match self {
            CoordIn::Int(n) => CoordLit::Int(*n),
            CoordIn::Text(t) => CoordLit::Frac(t.clone()),
        };
        lit.to_rat().map_err(PyValueError::new_err)
    }
}

fn to_point(point: &[CoordIn]) -> PyResult<[Rat; 2]> {
    match point {
        [x, y] => Ok([x.to_rat()?, y.to_rat()?]),
        _ => Err(PyValueError::new_err(format!(
            "a point needs exactly 2 coordinates, got {}",
            point.len()
        ))),
    }
}

fn order_to_py(o: Order) -> Option<u32> {
    o.finite()
}

fn triple_to_py(t: OrderTriple) -> (Option<u32>, Option<u32>, Option<u32>) {
    (order_to_py(t.a), order_to_py(t.b), order_to_py(t.d))
}

/// An exact multivariate polynomial with rational coefficients.
#[pyclass(frozen)]
struct Poly {
    inner: RatPoly,
}

impl Poly {
    fn same_universe(&self, other: &Poly, op: &str) -> PyResult<()> {
        if self.inner.vars() != other.inner.vars() {
            return Err(PyValueError::new_err(format!(
                "{op} needs matching variables, got {:?} and {:?}",
                self.inner.vars(),
                other.inner.vars()
            )));
        }
        Ok(())
    }
}

#[pymethods]
impl Poly {
    /// Parse `text` over the given variables, e.g. Poly("s^2*t", ["s", "t"]).
    #[new]
    fn new(text: &str, variables: Vec<String>) -> PyResult<Self> {
        let vars: Vec<&str> = variables.iter().map(|v| v.as_str()).collect();
        let inner = RatPoly::parse(text, &vars)
            .map_err(|e| PyValueError::new_err(e.to_string()))?;
        Ok(Poly { inner })
    }

    #[getter]
    fn variables(&self) -> Vec<String> {
        self.inner.vars().to_vec()
    }

    fn total_degree(&self) -> Option<u32> {
        self.inner.total_degree()
    }

    fn is_zero(&self) -> bool {
        self.inner.is_zero()
    }

    /// Vanishing order at a point; None means the polynomial is zero.
    fn ord_at(&self, point: Vec<CoordIn>) -> PyResult<Option<u32>> {
        Ok(order_to_py(self.inner.ord_at_point(&to_point(&point)?)))
    }

    /// Vanishing order along a (squarefree) divisor; None means infinite.
    fn ord_along(&self, divisor: &Poly) -> PyResult<Option<u32>> {
        self.same_universe(divisor, "ord_along")?;
        if divisor.inner.is_constant() {
            return Err(PyValueError::new_err("the divisor must not be constant"));
        }
        Ok(order_to_py(self.inner.ord_along(&divisor.inner)))
    }

    fn __add__(&self, other: &Poly) -> PyResult<Poly> {
        self.same_universe(other, "+")?;
        Ok(Poly {
            inner: &self.inner + &other.inner,
        })
    }

    fn __sub__(&self, other: &Poly) -> PyResult<Poly> {
        self.same_universe(other, "-")?;
        Ok(Poly {
            inner: &self.inner - &other.inner,
        })
    }

    fn __mul__(&self, other: &Poly) -> PyResult<Poly> {
        self.same_universe(other, "*")?;
        Ok(Poly {
            inner: &self.inner * &other.inner,
        })
    }

    fn __neg__(&self) -> Poly {
        Poly {
            inner: -&self.inner,
        }
    }

    fn __pow__(&self, exponent: u32, modulo: Option<u32>) -> PyResult<Poly> {
        if modulo.is_some() {
            return Err(PyValueError::new_err("modular exponentiation is not defined"));
        }
        Ok(Poly {
            inner: self.inner.pow(exponent),
        })
    }

    fn __eq__(&self, other: &Bound<'_, PyAny>) -> bool {
        other
            .extract::<PyRef<'_, Poly>>()
            .map_or(false, |o| self.inner == o.inner)
    }

    fn __str__(&self) -> String {
        self.inner.to_string()
    }

    fn __repr__(&self) -> String {
        format!("Poly({:?}, {:?})", self.inner.to_string(), self.inner.vars())
    }
}

/// A Weierstrass model y^2 = x^3 + f x + g over a two-variable base chart.
#[pyclass(frozen)]
struct Chart {
    inner: WeierstrassChart,
}

#[pymethods]
impl Chart {
    #[new]
    fn new(f: &Poly, g: &Poly) -> PyResult<Self> {
        if f.inner.vars() != g.inner.vars() {
            return Err(PyValueError::new_err("f and g need matching variables"));
        }
        let inner = WeierstrassChart::new("base", f.inner.clone(), g.inner.clone())
            .map_err(|e| PyValueError::new_err(e.to_string()))?;
        Ok(Chart { inner })
    }

    #[getter]
    fn f(&self) -> Poly {
        Poly {
            inner: self.inner.f().clone(),
        }
    }

    #[getter]
    fn g(&self) -> Poly {
        Poly {
            inner: self.inner.g().clone(),
        }
    }

    #[getter]
    fn delta(&self) -> Poly {
        Poly {
            inner: self.inner.delta().clone(),
        }
    }

    /// (ord f, ord g, ord delta) at a point; None entries are infinite.
    fn orders_at(&self, point: Vec<CoordIn>) -> PyResult<(Option<u32>, Option<u32>, Option<u32>)> {
        Ok(triple_to_py(self.inner.orders_at(&to_point(&point)?)))
    }

    /// (ord f, ord g, ord delta) along a divisor.
    fn orders_along(&self, divisor: &Poly) -> PyResult<(Option<u32>, Option<u32>, Option<u32>)> {
        if divisor.inner.is_constant() {
            return Err(PyValueError::new_err("the divisor must not be constant"));
        }
        Ok(triple_to_py(self.inner.orders_along(&divisor.inner)))
    }

    /// Strip every full (4, 6) twist along the divisor; returns the
    /// minimal chart and the twist exponent k.
    fn minimalize_along(&self, divisor: &Poly, label: &str) -> PyResult<(Chart, u32)> {
        if divisor.inner.is_constant() {
            return Err(PyValueError::new_err("the divisor must not be constant"));
        }
        let (chart, k) = self.inner.minimalize_along(&divisor.inner, label);
        Ok((Chart { inner: chart }, k))
    }

    /// True when no divisor (given or automatically factored) carries
    /// orders at or above (4, 6).
    fn is_minimal(&self, divisors: Vec<PyRef<'_, Poly>>) -> bool {
        let polys: Vec<RatPoly> = divisors.iter().map(|d| d.inner.clone()).collect();
        self.inner.is_minimal(&polys).0
    }

    fn __repr__(&self) -> String {
        format!("Chart(f={}, g={})", self.inner.f(), self.inner.g())
    }
}

/// Classify a fiber from its (ord f, ord g, ord delta) triple; None means
/// an infinite order. Returns {"type", "components", "root_lattice",
/// "euler"}; raises ValueError for triples outside the table.
#[pyfunction]
#[pyo3(signature = (a, b, d))]
fn classify_triple<'py>(
    py: Python<'py>,
    a: Option<u32>,
    b: Option<u32>,
    d: Option<u32>,
) -> PyResult<Bound<'py, PyDict>> {
    let to_order = |o: Option<u32>| o.map_or(Order::Infinite, Order::Finite);
    let triple = OrderTriple::new(to_order(a), to_order(b), to_order(d));
    if !triple.is_consistent() {
        return Err(PyValueError::new_err(format!(
            "inconsistent orders {triple}: ord delta must be min(3 ord f, 2 ord g) away from ties"
        )));
    }
    let fiber = classify(triple).map_err(|e| PyValueError::new_err(e.to_string()))?;
    let dict = PyDict::new(py);
    dict.set_item("type", fiber.fiber_type.to_string())?;
    dict.set_item("components", fiber.components)?;
    dict.set_item("root_lattice", fiber.root_lattice.to_string())?;
    dict.set_item("euler", order_to_py(fiber.euler))?;
    Ok(dict)
}

fn job_error(e: JobError) -> PyErr {
    match e {
        JobError::Input(_) => PyValueError::new_err(e.to_string()),
        JobError::Semantic(_) => PyRuntimeError::new_err(e.to_string()),
    }
}

/// Run a resolve job (same JSON schema as the CLI) and return the JSON
/// report.
#[pyfunction]
fn resolve_job(job_json: &str) -> PyResult<String> {
    let job = load_job(job_json).map_err(job_error)?;
    Ok(run_resolve(&job).map_err(job_error)?.to_json())
}

/// Run a classify job (same JSON schema as the CLI) and return the JSON
/// report.
#[pyfunction]
fn classify_job(job_json: &str) -> PyResult<String> {
    let job = load_job(job_json).map_err(job_error)?;
    Ok(run_classify(&job).map_err(job_error)?.to_json())
}

/// The fixed-width Kodaira classification table.
#[pyfunction]
fn kodaira_table() -> String {
    crepant::kodaira::table_text()
}

/// Run the built-in checks; returns (all_passed, transcript).
#[pyfunction]
fn selftest() -> (bool, String) {
    let mut transcript = String::new();
    let ok = crepant::selftest::run_selftest(&mut transcript);
    (ok, transcript)
}

#[pymodule]
fn crepant_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Poly>()?;
    m.add_class::<Chart>()?;
    m.add_function(wrap_pyfunction!(classify_triple, m)?)?;
    m.add_function(wrap_pyfunction!(resolve_job, m)?)?;
    m.add_function(wrap_pyfunction!(classify_job, m)?)?;
    m.add_function(wrap_pyfunction!(kodaira_table, m)?)?;
    m.add_function(wrap_pyfunction!(selftest, m)?)?;
    m.add("__version__", env!("CARGO_PKG_VERSION"))?;
    Ok(())
}
