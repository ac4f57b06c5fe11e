//! Python bindings for `pyramid-core`.
//!
//! Structured results cross the boundary as JSON and are decoded with the
//! `json` module, so callers get plain dicts and lists.

use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyBytes;
use serde::Serialize;

use pyramid_core::lattice::{Parity, Window};
use pyramid_core::pyramid::{self as core_pyramid, ConfigJson};
use pyramid_core::series::{self as core_series, Monomial};
use pyramid_core::shuffle::{self as core_shuffle, fillings};
use pyramid_core::solid::{self as core_solid, YoungDiagram};
use pyramid_core::verify::{self as core_verify, CheckOptions};
use pyramid_core::weights;
use pyramid_core::Error;

fn to_py(e: Error) -> PyErr {
    match e {
        Error::Usage(_) | Error::Validation(_) | Error::WindowTooSmall(_) | Error::Json(_) => {
            PyValueError::new_err(e.to_string())
        }
        _ => PyRuntimeError::new_err(e.to_string()),
    }
}

fn json_err(e: serde_json::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

/// Serializes `value` and hands it to Python's `json.loads`.
fn to_python<'py, T: Serialize>(py: Python<'py>, value: &T) -> PyResult<Bound<'py, PyAny>> {
    let text = serde_json::to_string(value).map_err(json_err)?;
    py.import("json")?.call_method1("loads", (text,))
}

/// A truncated power series with integer coefficients.
#[pyclass(name = "Series", module = "pyramid_partitions", frozen, skip_from_py_object)]
#[derive(Clone)]
pub struct PySeries {
    inner: core_series::TruncatedSeries,
}

#[pymethods]
impl PySeries {
    /// Coefficient of `x^e0 y^e1` as a Python int.
    fn coeff<'py>(&self, py: Python<'py>, e0: i64, e1: i64) -> PyResult<Bound<'py, PyAny>> {
        let c = self.inner.coeff(Monomial::new(e0, e1)).to_string();
        py.import("builtins")?.call_method1("int", (c,))
    }

    /// Nonzero terms as `[(e0, e1, coefficient), ...]`.
    fn terms<'py>(&self, py: Python<'py>) -> PyResult<Vec<(i64, i64, Bound<'py, PyAny>)>> {
        let int = py.import("builtins")?.getattr("int")?;
        self.inner
            .terms()
            .map(|(m, c)| Ok((m.e0, m.e1, int.call1((c.to_string(),))?)))
            .collect()
    }

    fn to_json<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        to_python(py, &self.inner.to_json())
    }

    fn __mul__(&self, other: &PySeries) -> PyResult<PySeries> {
        Ok(PySeries { inner: self.inner.mul(&other.inner).map_err(to_py)? })
    }

    fn __add__(&self, other: &PySeries) -> PyResult<PySeries> {
        Ok(PySeries { inner: self.inner.add(&other.inner).map_err(to_py)? })
    }

    fn __sub__(&self, other: &PySeries) -> PyResult<PySeries> {
        Ok(PySeries { inner: self.inner.sub(&other.inner).map_err(to_py)? })
    }

    /// Divides by a series whose constant term is ±1.
    fn div_unit(&self, other: &PySeries) -> PyResult<PySeries> {
        Ok(PySeries { inner: self.inner.div_unit(&other.inner).map_err(to_py)? })
    }

    fn __eq__(&self, other: &PySeries) -> bool {
        self.inner == other.inner
    }

    fn __len__(&self) -> usize {
        self.inner.len()
    }

    fn __str__(&self) -> String {
        self.inner.to_string()
    }

    fn __repr__(&self) -> String {
        format!("Series({})", self.inner)
    }
}

/// A dimer cover of the plane that agrees with an empty room outside a window.
#[pyclass(name = "DimerConfig", module = "pyramid_partitions", frozen, skip_from_py_object)]
#[derive(Clone)]
pub struct PyDimerConfig {
    inner: core_pyramid::DimerConfig,
}

#[pymethods]
impl PyDimerConfig {
    /// The empty room of length `n`, stored on the centered window of half-width `half_width`.
    #[staticmethod]
    fn empty_room(n: u32, half_width: i32) -> PyResult<Self> {
        let cfg = core_pyramid::empty_room(n, Window::centered(half_width)).map_err(to_py)?;
        Ok(PyDimerConfig { inner: (*cfg).clone() })
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        let json: ConfigJson = serde_json::from_str(text).map_err(json_err)?;
        Ok(PyDimerConfig { inner: core_pyramid::DimerConfig::from_json(&json).map_err(to_py)? })
    }

    fn to_json<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        to_python(py, &self.inner.to_json().map_err(to_py)?)
    }

    #[getter]
    fn n(&self) -> u32 {
        self.inner.n()
    }

    /// `(xmin, ymin, xmax, ymax)`.
    #[getter]
    fn window(&self) -> (i32, i32, i32, i32) {
        let [a, b, c, d] = self.inner.window().as_array();
        (a, b, c, d)
    }

    fn canonical_key<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyBytes>> {
        Ok(PyBytes::new(py, &self.inner.canonical_key().map_err(to_py)?))
    }

    /// Interior dimers as `((x1, y1), (x2, y2))` pairs.
    fn dimers(&self) -> Vec<((i32, i32), (i32, i32))> {
        self.inner
            .interior_dimers()
            .into_iter()
            .map(|d| ((d.u().x, d.u().y), (d.v().x, d.v().y)))
            .collect()
    }

    /// One shuffle step. `fill` is `"all"`, `"vertical"`, or a bit mask over
    /// the created blocks (bit set = horizontal pair).
    #[pyo3(signature = (fill = None))]
    fn shuffle(&self, fill: Option<Bound<'_, PyAny>>) -> PyResult<Vec<PyDimerConfig>> {
        let def = core_shuffle::delete_blocks(&self.inner, Parity::Odd);
        let slid = core_shuffle::slide(&def).map_err(to_py)?;
        let outputs = match fill {
            None => fillings(&slid).map_err(to_py)?.map(|(c, _)| c).collect(),
            Some(f) => {
                if let Ok(mask) = f.extract::<u64>() {
                    let k = slid.missing_count();
                    if k < 64 && mask >> k != 0 {
                        return Err(PyValueError::new_err(format!("mask names blocks beyond the {k} created ones")));
                    }
                    vec![slid.fill(mask)]
                } else {
                    match f.extract::<String>()?.as_str() {
                        "all" => fillings(&slid).map_err(to_py)?.map(|(c, _)| c).collect(),
                        "vertical" => vec![slid.fill_vertical()],
                        other => return Err(PyValueError::new_err(format!("unknown fill '{other}'"))),
                    }
                }
            }
        };
        Ok(outputs.into_iter().map(|inner| PyDimerConfig { inner }).collect())
    }

    /// `(deleted, created)` block counts of one shuffle step.
    fn shuffle_counts(&self) -> PyResult<(usize, usize)> {
        let s = core_shuffle::shuffle_summary(&self.inner).map_err(to_py)?;
        Ok((s.deleted, s.created))
    }

    fn __eq__(&self, other: &PyDimerConfig) -> bool {
        self.inner == other.inner
    }

    fn __repr__(&self) -> String {
        format!("DimerConfig(n={}, window={:?})", self.inner.n(), self.inner.window().as_array())
    }
}

/// Pyramid partitions of length `n` with weight degree at most `max_degree`,
/// as `[(config, (e0, e1)), ...]`.
#[pyfunction]
fn enumerate_partitions(py: Python<'_>, n: u32, max_degree: u32) -> PyResult<Vec<(PyDimerConfig, (i64, i64))>> {
    let items = py.detach(|| core_pyramid::enumerate_partitions(n, max_degree)).map_err(to_py)?;
    Ok(items
        .into_iter()
        .map(|e| (PyDimerConfig { inner: e.config }, (e.weight.e0, e.weight.e1)))
        .collect())
}

/// Generating function of pyramid partitions of length `n` by enumeration.
#[pyfunction]
fn partition_series(py: Python<'_>, n: u32, max_degree: u32) -> PyResult<PySeries> {
    let inner = py.detach(|| core_pyramid::partition_series(n, max_degree)).map_err(to_py)?;
    Ok(PySeries { inner })
}

/// The product formula for the length-`n` generating function.
#[pyfunction]
fn product_formula(n: u32, max_degree: u32) -> PyResult<PySeries> {
    Ok(PySeries { inner: core_series::formula_z(n, max_degree).map_err(to_py)? })
}

/// MacMahon's function in `(q0, q1)` at `x = 1`, `q = q0 q1`.
#[pyfunction]
fn macmahon(max_degree: u32) -> PyResult<PySeries> {
    Ok(PySeries { inner: core_series::macmahon_q(max_degree).map_err(to_py)? })
}

/// Ids accepted by `verify`.
#[pyfunction]
fn check_ids() -> Vec<&'static str> {
    core_verify::CHECK_IDS.to_vec()
}

/// Runs one identity check (or `"all"`) and returns its reports as dicts.
#[pyfunction]
#[pyo3(signature = (check, degree = None, n = None, k = None, shape = None))]
fn verify<'py>(
    py: Python<'py>,
    check: &str,
    degree: Option<u32>,
    n: Option<u32>,
    k: Option<u32>,
    shape: Option<Vec<u32>>,
) -> PyResult<Bound<'py, PyAny>> {
    let lambda = shape.map(YoungDiagram::new).transpose().map_err(to_py)?;
    let opts = CheckOptions { degree, n, k, lambda };
    let reports = py.detach(|| core_verify::run(check, &opts)).map_err(to_py)?;
    let values: Vec<serde_json::Value> = reports.iter().map(|r| r.to_json()).collect();
    to_python(py, &values)
}

/// Horizontal edge weights of the level-`level` field for length `n` on the
/// centered window of half-width `half_width`.
#[pyfunction]
fn weight_field<'py>(py: Python<'py>, n: u32, level: u32, half_width: i32) -> PyResult<Bound<'py, PyAny>> {
    let f = weights::field_for(n, level, Window::centered(half_width)).map_err(to_py)?;
    to_python(py, &f.to_json())
}

/// Super-rigid triples with `N(n) <= max_n`, as dicts with keys
/// `triple`, `z` and `q`.
#[pyfunction]
#[pyo3(signature = (max_n, n = 1))]
fn enumerate_superrigid<'py>(py: Python<'py>, max_n: u32, n: u32) -> PyResult<Bound<'py, PyAny>> {
    let items = py.detach(|| core_solid::enumerate_superrigid(max_n, n)).map_err(to_py)?;
    let rows: Vec<serde_json::Value> = items
        .iter()
        .map(|(sr, w)| serde_json::json!({"triple": sr.to_json(), "z": w.e0, "q": w.e1}))
        .collect();
    to_python(py, &rows)
}

/// Generating function of super-rigid triples in `(z, q)`.
#[pyfunction]
fn superrigid_series(py: Python<'_>, z_degree: u32, q_degree: u32) -> PyResult<PySeries> {
    let inner = py.detach(|| core_solid::superrigid_series(z_degree, q_degree)).map_err(to_py)?;
    Ok(PySeries { inner })
}

/// Sum over plane partitions with one leg of shape `shape`, in `q`.
#[pyfunction]
fn one_leg_sum(shape: Vec<u32>, max_degree: u32) -> PyResult<PySeries> {
    let l = YoungDiagram::new(shape).map_err(to_py)?;
    Ok(PySeries { inner: core_solid::one_leg_sum(&l, max_degree).map_err(to_py)? })
}

/// Closed form of the one-leg sum.
#[pyfunction]
fn one_leg_closed_form(shape: Vec<u32>, max_degree: u32) -> PyResult<PySeries> {
    let l = YoungDiagram::new(shape).map_err(to_py)?;
    Ok(PySeries { inner: core_solid::one_leg_closed_form(&l, max_degree).map_err(to_py)? })
}

#[pymodule]
fn pyramid_partitions(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PySeries>()?;
    m.add_class::<PyDimerConfig>()?;
    m.add_function(wrap_pyfunction!(enumerate_partitions, m)?)?;
    m.add_function(wrap_pyfunction!(partition_series, m)?)?;
    m.add_function(wrap_pyfunction!(product_formula, m)?)?;
    m.add_function(wrap_pyfunction!(macmahon, m)?)?;
    m.add_function(wrap_pyfunction!(check_ids, m)?)?;
    m.add_function(wrap_pyfunction!(verify, m)?)?;
    m.add_function(wrap_pyfunction!(weight_field, m)?)?;
    m.add_function(wrap_pyfunction!(enumerate_superrigid, m)?)?;
    m.add_function(wrap_pyfunction!(superrigid_series, m)?)?;
    m.add_function(wrap_pyfunction!(one_leg_sum, m)?)?;
    m.add_function(wrap_pyfunction!(one_leg_closed_form, m)?)?;
    Ok(())
}
