//! Python bindings: ordinals, spaces, step functions, the Orlicz norm, the
//! Talagrand operator and the seeded property suites.

use ckrenorm::admissible::{hull as core_hull, AdmissibleSet};
use ckrenorm::orlicz::{OrliczConfig, OrliczNorm as CoreNorm};
use ckrenorm::stepfn::StepFunction as CoreFn;
use ckrenorm::suites::{self, RunOptions};
use ckrenorm::talagrand::{
    SupportEntry, Talagrand as CoreTalagrand, TalagrandIndex, Triple,
};
use ckrenorm::topology::{ClosedSet, OrdinalSpace};
use ckrenorm::Ordinal as CoreOrdinal;
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::{PyDict, PyList};
use serde_json::Value;

fn err(e: ckrenorm::Error) -> PyErr {
    use ckrenorm::Error as E;
    match e {
        E::Numeric(_) | E::NoWitness(_) | E::DegenerateGradient(_) | E::Internal(_) => {
            PyRuntimeError::new_err(e.to_string())
        }
        _ => PyValueError::new_err(e.to_string()),
    }
}

fn parse_ordinal(text: &str) -> PyResult<CoreOrdinal> {
    text.parse().map_err(|e: ckrenorm::ordinal::ParseError| PyValueError::new_err(e.to_string()))
}

/// An ordinal below epsilon_0, parsed from text such as `"w^2*3 + w + 1"`.
#[pyclass(module = "pyckrenorm", frozen, eq, ord, hash, skip_from_py_object)]
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
struct Ordinal(CoreOrdinal);

#[pymethods]
impl Ordinal {
    #[new]
    fn new(text: &str) -> PyResult<Self> {
        parse_ordinal(text).map(Ordinal)
    }

    fn rank(&self) -> Ordinal {
        Ordinal(self.0.nu_rank())
    }

    fn is_limit(&self) -> bool {
        self.0.is_limit()
    }

    fn is_successor(&self) -> bool {
        self.0.is_successor()
    }

    fn successor(&self) -> Ordinal {
        Ordinal(self.0.successor())
    }

    fn __add__(&self, other: &Ordinal) -> Ordinal {
        Ordinal(&self.0 + &other.0)
    }

    fn __str__(&self) -> String {
        self.0.to_string()
    }

    fn __repr__(&self) -> String {
        format!("Ordinal('{}')", self.0)
    }
}

/// Accepts an `Ordinal`, a string literal or a non-negative int.
fn ordinal_arg(obj: &Bound<'_, PyAny>) -> PyResult<CoreOrdinal> {
    if let Ok(o) = obj.cast::<Ordinal>() {
        return Ok(o.get().0.clone());
    }
    if let Ok(n) = obj.extract::<u64>() {
        return Ok(CoreOrdinal::from(n));
    }
    parse_ordinal(&obj.extract::<String>()?)
}

fn strings(points: &[CoreOrdinal]) -> Vec<String> {
    points.iter().map(CoreOrdinal::to_string).collect()
}

/// The compact space `[0, gamma]`.
#[pyclass(module = "pyckrenorm", frozen, skip_from_py_object)]
#[derive(Clone)]
struct Space(OrdinalSpace);

#[pymethods]
impl Space {
    #[new]
    fn new(gamma: &Bound<'_, PyAny>) -> PyResult<Self> {
        Ok(Space(OrdinalSpace::new(ordinal_arg(gamma)?)))
    }

    #[getter]
    fn gamma(&self) -> Ordinal {
        Ordinal(self.0.gamma().clone())
    }

    fn contains(&self, t: &Bound<'_, PyAny>) -> PyResult<bool> {
        Ok(self.0.contains(&ordinal_arg(t)?))
    }

    fn in_derived(&self, t: &Bound<'_, PyAny>, alpha: &Bound<'_, PyAny>) -> PyResult<bool> {
        self.0.in_derived(&ordinal_arg(t)?, &ordinal_arg(alpha)?).map_err(err)
    }

    /// `V_t` as text, e.g. `"(w, w*2]"`.
    fn vt(&self, t: &Bound<'_, PyAny>) -> PyResult<String> {
        Ok(self.0.canonical_vt(&ordinal_arg(t)?).map_err(err)?.to_string())
    }

    /// Admissible hull of a closed set given as text, e.g. `"[0, 5] u {w^2}"`.
    fn hull(&self, set: &str) -> PyResult<Vec<String>> {
        let h: ClosedSet = set.parse().map_err(err)?;
        Ok(strings(core_hull(&self.0, &h).map_err(err)?.points()))
    }

    fn lemma1_check(&self, points: Vec<Bound<'_, PyAny>>) -> PyResult<bool> {
        let pts = points.iter().map(ordinal_arg).collect::<PyResult<Vec<_>>>()?;
        self.0.lemma1_check(&pts).map_err(err)
    }

    fn __repr__(&self) -> String {
        format!("Space('{}')", self.0.gamma())
    }
}

fn space_arg(obj: &Bound<'_, PyAny>) -> PyResult<OrdinalSpace> {
    if let Ok(s) = obj.cast::<Space>() {
        return Ok(s.get().0.clone());
    }
    Ok(OrdinalSpace::new(ordinal_arg(obj)?))
}

/// A continuous step function on `[0, gamma]` built from
/// `(start, value)` pairs; every start after the first is a successor.
#[pyclass(module = "pyckrenorm", frozen, skip_from_py_object)]
#[derive(Clone)]
struct StepFunction(CoreFn);

#[pymethods]
impl StepFunction {
    #[new]
    fn new(space: &Bound<'_, PyAny>, pieces: Vec<(Bound<'_, PyAny>, f64)>) -> PyResult<Self> {
        let starts = pieces
            .iter()
            .map(|(s, v)| Ok((ordinal_arg(s)?, *v)))
            .collect::<PyResult<Vec<_>>>()?;
        CoreFn::from_starts(space_arg(space)?, starts).map(StepFunction).map_err(err)
    }

    #[staticmethod]
    fn constant(space: &Bound<'_, PyAny>, value: f64) -> PyResult<Self> {
        Ok(StepFunction(CoreFn::constant(space_arg(space)?, value)))
    }

    #[getter]
    fn space(&self) -> Space {
        Space(self.0.space().clone())
    }

    /// `(start, end, value)` for each piece.
    fn pieces(&self) -> Vec<(String, String, f64)> {
        self.0
            .pieces()
            .iter()
            .map(|p| (p.start.to_string(), p.end.to_string(), p.value))
            .collect()
    }

    fn eval(&self, t: &Bound<'_, PyAny>) -> PyResult<f64> {
        self.0.eval(&ordinal_arg(t)?).map_err(err)
    }

    fn sup_norm(&self) -> f64 {
        self.0.sup_norm()
    }

    fn scale(&self, c: f64) -> StepFunction {
        StepFunction(self.0.scale(c))
    }

    fn __add__(&self, other: &StepFunction) -> PyResult<StepFunction> {
        self.0.add(&other.0).map(StepFunction).map_err(err)
    }

    fn __mul__(&self, other: &StepFunction) -> PyResult<StepFunction> {
        self.0.mul(&other.0).map(StepFunction).map_err(err)
    }

    fn __str__(&self) -> String {
        self.0.to_string()
    }

    fn __repr__(&self) -> String {
        format!("StepFunction({})", self.0)
    }
}

fn config(a: f64, margin: f64, root_tol: f64) -> PyResult<OrliczConfig> {
    let c = OrliczConfig { a, margin, root_tol };
    c.validate().map_err(err)?;
    Ok(c)
}

/// The smooth generalized Orlicz norm on `C([0, gamma])`.
#[pyclass(module = "pyckrenorm", frozen)]
struct OrliczNorm(CoreNorm);

#[pymethods]
impl OrliczNorm {
    #[new]
    #[pyo3(signature = (space, a = 0.9, margin = 0.5, root_tol = 1e-10))]
    fn new(space: &Bound<'_, PyAny>, a: f64, margin: f64, root_tol: f64) -> PyResult<Self> {
        CoreNorm::new(config(a, margin, root_tol)?, &space_arg(space)?)
            .map(OrliczNorm)
            .map_err(err)
    }

    fn norm(&self, f: &StepFunction) -> PyResult<f64> {
        self.0.norm(&f.0).map_err(err)
    }

    /// Partial derivatives in the piece values of `f`.
    fn gradient(&self, f: &StepFunction) -> PyResult<Vec<f64>> {
        self.0.gradient(&f.0).map_err(err)
    }

    fn alpha(&self, rank: usize) -> PyResult<f64> {
        self.check_rank(rank)?;
        Ok(self.0.alpha_k(rank))
    }

    fn beta(&self, rank: usize) -> PyResult<f64> {
        self.check_rank(rank)?;
        Ok(self.0.beta_k(rank))
    }
}

impl OrliczNorm {
    fn check_rank(&self, rank: usize) -> PyResult<()> {
        if rank > self.0.height() {
            return Err(PyValueError::new_err(format!(
                "rank {rank} exceeds the space height {}",
                self.0.height()
            )));
        }
        Ok(())
    }
}

fn entry_dict<'py>(py: Python<'py>, e: &SupportEntry) -> PyResult<Bound<'py, PyDict>> {
    let d = PyDict::new(py);
    d.set_item("n", e.n)?;
    d.set_item("s", e.index.s.to_string())?;
    d.set_item("triple", e.index.triple.to_string())?;
    d.set_item("set", strings(e.index.set.points()))?;
    d.set_item("value", e.value)?;
    Ok(d)
}

/// The non-linear Talagrand operator built on the Orlicz bump.
#[pyclass(module = "pyckrenorm", frozen)]
struct Talagrand(CoreTalagrand);

#[pymethods]
impl Talagrand {
    #[new]
    #[pyo3(signature = (space, a = 0.9, margin = 0.5, root_tol = 1e-10))]
    fn new(space: &Bound<'_, PyAny>, a: f64, margin: f64, root_tol: f64) -> PyResult<Self> {
        CoreTalagrand::new(&space_arg(space)?, config(a, margin, root_tol)?)
            .map(Talagrand)
            .map_err(err)
    }

    /// Coordinate at `(s, (xi, eta, zeta), A)`; the triple entries are
    /// dyadic rationals such as `"3/8"`.
    fn coordinate(
        &self,
        f: &StepFunction,
        s: &Bound<'_, PyAny>,
        triple: (String, String, String),
        set: Vec<Bound<'_, PyAny>>,
    ) -> PyResult<f64> {
        let d = |t: &str| t.parse().map_err(err);
        let triple = Triple::new(d(&triple.0)?, d(&triple.1)?, d(&triple.2)?).map_err(err)?;
        let points = set.iter().map(ordinal_arg).collect::<PyResult<Vec<_>>>()?;
        let idx = TalagrandIndex {
            s: ordinal_arg(s)?,
            triple,
            set: AdmissibleSet::new(points).map_err(err)?,
        };
        self.0.coordinate(&f.0, &idx).map_err(err)
    }

    fn support<'py>(&self, py: Python<'py>, f: &StepFunction, eps: f64) -> PyResult<Bound<'py, PyList>> {
        let entries = self.0.support(&f.0, eps, None).map_err(err)?;
        let dicts = entries.iter().map(|e| entry_dict(py, e)).collect::<PyResult<Vec<_>>>()?;
        PyList::new(py, dicts)
    }

    fn witness<'py>(&self, py: Python<'py>, f: &StepFunction) -> PyResult<Bound<'py, PyDict>> {
        entry_dict(py, &self.0.witness(&f.0).map_err(err)?)
    }

    fn improved_bump(&self, xi: f64, eta: f64, f: &StepFunction) -> PyResult<f64> {
        self.0.improved_bump(xi, eta, &f.0).map_err(err)
    }

    /// `{"err", "m0", "lambda", "support_size", "ok"}` for `R_F f`.
    fn reconstruct<'py>(&self, py: Python<'py>, f: &StepFunction, eps: f64) -> PyResult<Bound<'py, PyDict>> {
        let r = self.0.verify_reconstruction(&f.0, eps).map_err(err)?;
        let d = PyDict::new(py);
        d.set_item("err", r.err)?;
        d.set_item("m0", r.m0)?;
        d.set_item("lambda", r.lambda)?;
        d.set_item("support_size", r.support.len())?;
        d.set_item("ok", r.err < eps)?;
        Ok(d)
    }
}

fn to_py<'py>(py: Python<'py>, v: &Value) -> PyResult<Bound<'py, PyAny>> {
    Ok(match v {
        Value::Null => py.None().into_bound(py),
        Value::Bool(b) => b.into_pyobject(py)?.to_owned().into_any(),
        Value::Number(n) => match n.as_u64() {
            Some(u) => u.into_pyobject(py)?.into_any(),
            None => match n.as_i64() {
                Some(i) => i.into_pyobject(py)?.into_any(),
                None => n.as_f64().unwrap_or(f64::NAN).into_pyobject(py)?.into_any(),
            },
        },
        Value::String(s) => s.into_pyobject(py)?.into_any(),
        Value::Array(xs) => {
            let items = xs.iter().map(|x| to_py(py, x)).collect::<PyResult<Vec<_>>>()?;
            PyList::new(py, items)?.into_any()
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

#[pyfunction]
fn rank(point: &Bound<'_, PyAny>) -> PyResult<String> {
    Ok(ordinal_arg(point)?.nu_rank().to_string())
}

#[pyfunction]
#[pyo3(signature = (set, space = None))]
fn hull(set: &str, space: Option<&Bound<'_, PyAny>>) -> PyResult<Vec<String>> {
    let h: ClosedSet = set.parse().map_err(err)?;
    let k = match space {
        Some(s) => space_arg(s)?,
        None => OrdinalSpace::new(h.max_point().cloned().ok_or_else(|| err(ckrenorm::Error::EmptySet))?),
    };
    Ok(strings(core_hull(&k, &h).map_err(err)?.points()))
}

#[pyfunction]
fn suite_names() -> Vec<&'static str> {
    suites::suite_names()
}

/// Runs a seeded property suite and returns its reports as dicts.
#[pyfunction]
#[pyo3(signature = (suite, seed = 0, cases = None, a = 0.9))]
fn check<'py>(
    py: Python<'py>,
    suite: &str,
    seed: u64,
    cases: Option<u64>,
    a: f64,
) -> PyResult<Bound<'py, PyAny>> {
    let opts = RunOptions {
        seed,
        cases,
        config: OrliczConfig::with_a(a),
        parallel: true,
    };
    let reports = py.detach(|| suites::run(suite, &opts)).map_err(err)?;
    to_py(py, &serde_json::to_value(reports).expect("reports serialize"))
}

#[pymodule]
fn pyckrenorm(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Ordinal>()?;
    m.add_class::<Space>()?;
    m.add_class::<StepFunction>()?;
    m.add_class::<OrliczNorm>()?;
    m.add_class::<Talagrand>()?;
    m.add_function(wrap_pyfunction!(rank, m)?)?;
    m.add_function(wrap_pyfunction!(hull, m)?)?;
    m.add_function(wrap_pyfunction!(suite_names, m)?)?;
    m.add_function(wrap_pyfunction!(check, m)?)?;
    Ok(())
}
