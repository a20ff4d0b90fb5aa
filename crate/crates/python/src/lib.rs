//! Python bindings: series arithmetic, the solvers, the closed forms, the flat
//! oracle and the verification suite. Counts cross over as Python `int`.

use acampo_core::algorithm::{algorithm1_count, algorithm1_table, cross_validate};
use acampo_core::closed_form;
use acampo_core::ledger::route_ledger;
use acampo_core::oracle::{enumerate_flat, validate_diagram, ChordDiagram};
use acampo_core::solver::configuration_table;
use acampo_core::suite::{self, Scale, CHECK_NAMES};
use acampo_core::table::CountTable;
use acampo_core::verify::growth_constant;
use acampo_core::{count_configurations, solve_simple, solve_system, BiSeries, CodimWeight, Count};
use pyo3::exceptions::{PyKeyError, PyValueError};
use pyo3::prelude::*;

fn value_err(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn loads<'py>(py: Python<'py>, text: &str) -> PyResult<Bound<'py, PyAny>> {
    py.import("json")?.call_method1("loads", (text,))
}

fn to_json<T: serde::Serialize>(v: &T) -> String {
    serde_json::to_string(v).expect("serializes")
}

/// Truncated bivariate series over the box `0..=cmax` x `0..=dmax`.
#[pyclass(name = "Series", eq, frozen, skip_from_py_object)]
#[derive(Clone, PartialEq)]
pub struct PySeries(BiSeries);

#[pymethods]
impl PySeries {
    #[new]
    #[pyo3(signature = (cmax, dmax, terms=Vec::new()))]
    fn new(cmax: usize, dmax: usize, terms: Vec<(usize, usize, Count)>) -> Self {
        let mut s = BiSeries::zero(cmax, dmax);
        for (c, d, v) in terms {
            if c <= cmax && d <= dmax {
                s.set(c, d, v);
            }
        }
        PySeries(s)
    }

    #[staticmethod]
    fn one(cmax: usize, dmax: usize) -> Self {
        PySeries(BiSeries::one(cmax, dmax))
    }

    #[getter]
    fn cmax(&self) -> usize {
        self.0.cmax()
    }

    #[getter]
    fn dmax(&self) -> usize {
        self.0.dmax()
    }

    /// Coefficient of `x^c y^d`; zero outside the box.
    fn coeff(&self, c: usize, d: usize) -> Count {
        self.0.get(c, d)
    }

    /// Nonzero coefficients as `(c, d, value)`.
    fn terms(&self) -> Vec<(usize, usize, Count)> {
        self.0
            .nonzero_terms()
            .map(|(c, d, v)| (c, d, v.clone()))
            .collect()
    }

    fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    fn __add__(&self, other: &PySeries) -> PyResult<PySeries> {
        self.0.add(&other.0).map(PySeries).map_err(value_err)
    }

    fn __sub__(&self, other: &PySeries) -> PyResult<PySeries> {
        self.0.sub(&other.0).map(PySeries).map_err(value_err)
    }

    fn __mul__(&self, other: &PySeries) -> PyResult<PySeries> {
        self.0.mul(&other.0).map(PySeries).map_err(value_err)
    }

    fn __neg__(&self) -> PySeries {
        PySeries(self.0.neg())
    }

    fn __pow__(&self, e: u32, _modulo: Option<Py<PyAny>>) -> PySeries {
        PySeries(self.0.pow(e))
    }

    fn shift(&self, dc: usize, dd: usize) -> PySeries {
        PySeries(self.0.shift(dc, dd))
    }

    fn invert(&self) -> PyResult<PySeries> {
        self.0.invert().map(PySeries).map_err(value_err)
    }

    fn row_sums(&self) -> Vec<Count> {
        let s = self.0.row_sums();
        (0..=s.dmax()).map(|d| s.get(0, d)).collect()
    }

    fn __repr__(&self) -> String {
        format!("{:?}", self.0)
    }
}

/// Codimension weight `w(k)` of a meeting point joining `k + 1` lines.
#[pyclass(name = "Weight", eq, frozen, hash, skip_from_py_object)]
#[derive(Clone, PartialEq, Hash)]
pub struct PyWeight(CodimWeight);

#[pymethods]
impl PyWeight {
    /// Explicit weights for `k = 1..=len(prefix)`, then `tail_first + slope * j`.
    #[new]
    fn new(name: &str, prefix: Vec<u32>, tail_first: u32, tail_slope: u32) -> PyResult<Self> {
        CodimWeight::custom(name, prefix, tail_first, tail_slope)
            .map(PyWeight)
            .map_err(value_err)
    }

    #[staticmethod]
    fn thm19() -> Self {
        PyWeight(CodimWeight::thm19())
    }

    #[staticmethod]
    fn remark() -> Self {
        PyWeight(CodimWeight::remark())
    }

    #[staticmethod]
    fn named(name: &str) -> PyResult<Self> {
        name.parse().map(PyWeight).map_err(value_err)
    }

    #[getter]
    fn name(&self) -> String {
        self.0.name().to_string()
    }

    fn weight(&self, k: usize) -> PyResult<usize> {
        if k == 0 {
            return Err(PyValueError::new_err("k must be at least 1"));
        }
        Ok(self.0.weight(k))
    }

    fn __repr__(&self) -> String {
        format!("Weight({})", self.0)
    }
}

fn weight_arg(w: Option<&Bound<'_, PyAny>>) -> PyResult<CodimWeight> {
    match w {
        None => Ok(CodimWeight::thm19()),
        Some(obj) => {
            if let Ok(w) = obj.cast::<PyWeight>() {
                return Ok(w.get().0.clone());
            }
            let name: String = obj.extract()?;
            name.parse().map_err(value_err)
        }
    }
}

/// Count table with route and convention metadata.
#[pyclass(name = "Table", frozen, skip_from_py_object)]
#[derive(Clone)]
pub struct PyTable(CountTable);

#[pymethods]
impl PyTable {
    #[getter]
    fn cmax(&self) -> usize {
        self.0.cmax
    }

    #[getter]
    fn dmax(&self) -> usize {
        self.0.dmax
    }

    #[getter]
    fn route(&self) -> String {
        self.0.route.to_string()
    }

    #[getter]
    fn convention(&self) -> Option<String> {
        self.0.convention.clone()
    }

    /// `values[c][d]`
    #[getter]
    fn values(&self) -> Vec<Vec<Count>> {
        self.0.values.clone()
    }

    fn get(&self, c: usize, d: usize) -> PyResult<Count> {
        if c > self.0.cmax || d > self.0.dmax {
            return Err(PyKeyError::new_err((c, d)));
        }
        Ok(self.0.get(c, d).clone())
    }

    fn disagreements(&self, other: &PyTable) -> Vec<(usize, usize)> {
        self.0.disagreements(&other.0)
    }

    fn to_csv(&self) -> String {
        self.0.to_csv()
    }

    fn to_json(&self) -> String {
        self.0.to_json()
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        CountTable::from_json(text).map(PyTable).map_err(value_err)
    }
}

/// `#N1(c, d)` from the generating-function system.
#[pyfunction]
#[pyo3(signature = (c, d, convention=None))]
fn count(c: usize, d: usize, convention: Option<&Bound<'_, PyAny>>) -> PyResult<Count> {
    count_configurations(c, d, &weight_arg(convention)?).map_err(value_err)
}

#[pyfunction]
#[pyo3(signature = (cmax, dmax, convention=None))]
fn table(cmax: usize, dmax: usize, convention: Option<&Bound<'_, PyAny>>) -> PyResult<PyTable> {
    configuration_table(&weight_arg(convention)?, cmax, dmax)
        .map(PyTable)
        .map_err(value_err)
}

/// `(N1, N2, N3)` solved on the box.
#[pyfunction]
#[pyo3(signature = (cmax, dmax, convention=None))]
fn solve(
    cmax: usize,
    dmax: usize,
    convention: Option<&Bound<'_, PyAny>>,
) -> PyResult<(PySeries, PySeries, PySeries)> {
    let sol = solve_system(&weight_arg(convention)?, cmax, dmax).map_err(value_err)?;
    Ok((PySeries(sol.n1), PySeries(sol.n2), PySeries(sol.n3)))
}

/// The simple-configuration series.
#[pyfunction(name = "solve_simple")]
fn py_solve_simple(cmax: usize, dmax: usize) -> PyResult<PySeries> {
    solve_simple(cmax, dmax).map(PySeries).map_err(value_err)
}

#[pyfunction(name = "algorithm1_count")]
fn py_algorithm1_count(c: usize, d: usize) -> PyResult<Count> {
    algorithm1_count(c, d).map_err(value_err)
}

#[pyfunction(name = "algorithm1_table")]
fn py_algorithm1_table(cmax: usize, dmax: usize) -> PyResult<PyTable> {
    algorithm1_table(cmax, dmax).map(PyTable).map_err(value_err)
}

#[pyfunction]
fn flat_count(d: u64) -> Count {
    closed_form::flat_count(d)
}

#[pyfunction]
fn codim1_count(d: u64) -> Count {
    closed_form::codim1_count(d)
}

#[pyfunction]
fn simple_count(c: u64, d: u64) -> PyResult<Count> {
    closed_form::simple_count(c, d).map_err(value_err)
}

#[pyfunction]
fn fuss_convolution(a: u64, b: u64) -> PyResult<Count> {
    closed_form::fuss_convolution(a, b).map_err(value_err)
}

#[pyfunction]
fn binomial(n: u64, k: u64) -> Count {
    closed_form::binomial(n, k)
}

/// Natural log of the large-degree estimate; finite where the estimate itself overflows.
#[pyfunction]
fn ln_asymptotic_estimate(c: u64, d: u64) -> PyResult<f64> {
    if d == 0 {
        return Err(PyValueError::new_err("estimate defined for d >= 1"));
    }
    Ok(closed_form::ln_asymptotic_estimate(c, d))
}

/// `exact / estimate` for simple configurations, in log space.
#[pyfunction]
fn estimate_ratio(c: u64, d: u64) -> PyResult<f64> {
    let exact = closed_form::simple_count(c, d).map_err(value_err)?;
    if d == 0 || exact == Count::from(0) {
        return Err(PyValueError::new_err("no estimate for an empty cell"));
    }
    Ok(closed_form::estimate_ratio(
        &exact,
        closed_form::ln_asymptotic_estimate(c, d),
    ))
}

/// `1 / y0`.
#[pyfunction(name = "growth_constant")]
fn py_growth_constant() -> PyResult<f64> {
    growth_constant().map(|g| g.inverse).map_err(value_err)
}

/// All flat diagrams of degree `d <= 4`, as dictionaries.
#[pyfunction(name = "enumerate_flat")]
fn py_enumerate_flat(py: Python<'_>, d: usize) -> PyResult<Bound<'_, PyAny>> {
    let all = enumerate_flat(d).map_err(value_err)?;
    loads(py, &to_json(&all))
}

/// `(valid, violations)` for a diagram dictionary shaped like [`enumerate_flat`] output.
#[pyfunction(name = "validate_diagram")]
fn py_validate_diagram<'py>(
    py: Python<'py>,
    diagram: &Bound<'py, PyAny>,
) -> PyResult<(bool, Bound<'py, PyAny>)> {
    let text: String = py
        .import("json")?
        .call_method1("dumps", (diagram,))?
        .extract()?;
    let diag: ChordDiagram = serde_json::from_str(&text).map_err(value_err)?;
    let v = validate_diagram(&diag);
    Ok((v.valid, loads(py, &to_json(&v.violations))?))
}

#[pyfunction(name = "cross_validate")]
fn py_cross_validate(py: Python<'_>, cmax: usize, dmax: usize) -> PyResult<Bound<'_, PyAny>> {
    let cv = cross_validate(cmax, dmax).map_err(value_err)?;
    loads(py, &to_json(&cv))
}

#[pyfunction(name = "route_ledger")]
fn py_route_ledger(py: Python<'_>) -> PyResult<Bound<'_, PyAny>> {
    let l = route_ledger().map_err(value_err)?;
    loads(py, &to_json(&l))
}

/// Runs one check (or all when `check` is None) and returns the report dictionaries.
#[pyfunction]
#[pyo3(signature = (check=None, scale="quick"))]
fn verify<'py>(py: Python<'py>, check: Option<&str>, scale: &str) -> PyResult<Bound<'py, PyAny>> {
    let scale = match scale {
        "quick" => Scale::quick(),
        "full" => Scale::full(),
        other => return Err(PyValueError::new_err(format!("unknown scale '{other}'"))),
    };
    let reports = match check {
        None => suite::run_suite(&scale),
        Some(name) => vec![suite::run_check(name, &scale).ok_or_else(|| {
            PyKeyError::new_err(format!(
                "unknown check '{name}'; known: {}",
                CHECK_NAMES.join(", ")
            ))
        })?],
    };
    loads(py, &to_json(&reports))
}

#[pymodule]
pub fn acampo(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PySeries>()?;
    m.add_class::<PyWeight>()?;
    m.add_class::<PyTable>()?;
    m.add_function(wrap_pyfunction!(count, m)?)?;
    m.add_function(wrap_pyfunction!(table, m)?)?;
    m.add_function(wrap_pyfunction!(solve, m)?)?;
    m.add_function(wrap_pyfunction!(py_solve_simple, m)?)?;
    m.add_function(wrap_pyfunction!(py_algorithm1_count, m)?)?;
    m.add_function(wrap_pyfunction!(py_algorithm1_table, m)?)?;
    m.add_function(wrap_pyfunction!(flat_count, m)?)?;
    m.add_function(wrap_pyfunction!(codim1_count, m)?)?;
    m.add_function(wrap_pyfunction!(simple_count, m)?)?;
    m.add_function(wrap_pyfunction!(fuss_convolution, m)?)?;
    m.add_function(wrap_pyfunction!(binomial, m)?)?;
    m.add_function(wrap_pyfunction!(ln_asymptotic_estimate, m)?)?;
    m.add_function(wrap_pyfunction!(estimate_ratio, m)?)?;
    m.add_function(wrap_pyfunction!(py_growth_constant, m)?)?;
    m.add_function(wrap_pyfunction!(py_enumerate_flat, m)?)?;
    m.add_function(wrap_pyfunction!(py_validate_diagram, m)?)?;
    m.add_function(wrap_pyfunction!(py_cross_validate, m)?)?;
    m.add_function(wrap_pyfunction!(py_route_ledger, m)?)?;
    m.add_function(wrap_pyfunction!(verify, m)?)?;
    m.add("CHECKS", CHECK_NAMES.to_vec())?;
    Ok(())
}
