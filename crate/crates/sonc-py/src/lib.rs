//! Python bindings for the dual-cone bounding library.
//!
//! Exposes one class, [`Instance`], plus free functions that mirror the CLI
//! verbs: `bound`, `relaxed`, `check_dual`, `check_circuit`, `oracle_min`.
//! Reports come back as plain dictionaries keyed the same way as the CLI's
//! JSON output; exponent keys are tuples of floats.

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::{PyDict, PyTuple};

use sonc_core::{
    check_membership_lambda, check_membership_tau, circuit_nonnegative, circuit_number,
    dual_sonc_bound, lambda_feasible, parse_instance, relaxed_bound, sample_min, sign_split,
    BoundOutcome, CircuitError, CircuitInstance, DualMembershipCertificate, DualVector, Exponent,
    ExponentialSum, Kind, OracleConfig,
};

fn value_err(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

/// A sparse exponential sum or positive-orthant polynomial.
#[pyclass(frozen, skip_from_py_object)]
#[derive(Clone)]
struct Instance {
    inner: ExponentialSum,
}

#[pymethods]
impl Instance {
    /// Build from raw parts: dimension, "polynomial" | "exponential", and
    /// a list of (exponent, coefficient) pairs.
    #[new]
    fn new(n: usize, kind: &str, terms: Vec<(Vec<f64>, f64)>) -> PyResult<Self> {
        let kind = match kind {
            "polynomial" => Kind::Polynomial,
            "exponential" => Kind::Exponential,
            other => {
                return Err(PyValueError::new_err(format!(
                    "unknown kind {other:?}; expected \"polynomial\" or \"exponential\""
                )))
            }
        };
        let parsed: Vec<(Exponent, f64)> = terms
            .into_iter()
            .map(|(exp, coef)| Exponent::new(exp).map(|e| (e, coef)))
            .collect::<Result<_, _>>()
            .map_err(value_err)?;
        Ok(Self { inner: ExponentialSum::new(n, kind, parsed).map_err(value_err)? })
    }

    /// Parse the same JSON document format the CLI and `instances/` use.
    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        Ok(Self { inner: parse_instance(text).map_err(value_err)? })
    }

    #[getter]
    fn n(&self) -> usize {
        self.inner.n()
    }

    #[getter]
    fn kind(&self) -> String {
        self.inner.kind().to_string()
    }

    /// The nonzero terms as (exponent, coefficient) pairs, sorted by exponent.
    fn terms(&self) -> Vec<(Vec<f64>, f64)> {
        self.inner.iter().map(|(e, c)| (e.to_vec(), c)).collect()
    }

    /// Evaluate at a point of R^n (polynomials are evaluated on the positive
    /// orthant through the substitution y = e^x).
    fn evaluate(&self, x: Vec<f64>) -> PyResult<f64> {
        if x.len() != self.inner.n() {
            return Err(PyValueError::new_err(format!(
                "point has dimension {}, instance has {}",
                x.len(),
                self.inner.n()
            )));
        }
        Ok(self.inner.evaluate(&x))
    }

    fn __repr__(&self) -> String {
        format!(
            "Instance(n={}, kind=\"{}\", terms={})",
            self.inner.n(),
            self.inner.kind(),
            self.inner.len()
        )
    }
}

fn cert_dict<'py>(
    py: Python<'py>,
    cert: &DualMembershipCertificate,
) -> PyResult<Bound<'py, PyDict>> {
    let dict = PyDict::new(py);
    for (beta, tau) in cert.iter() {
        dict.set_item(PyTuple::new(py, beta.to_vec())?, tau.to_vec())?;
    }
    Ok(dict)
}

/// Certified lower bound through the dual cone. Returns a dict with keys
/// `status`, and when bounded: `opt` (the certified shift), `lower_bound`,
/// `branch`, `certificate`.
#[pyfunction]
fn bound<'py>(py: Python<'py>, instance: &Instance) -> PyResult<Bound<'py, PyDict>> {
    let report = PyDict::new(py);
    match dual_sonc_bound(&instance.inner).map_err(value_err)? {
        BoundOutcome::Bounded(b) => {
            report.set_item("status", "bounded")?;
            report.set_item("opt", b.gamma_star)?;
            report.set_item("lower_bound", b.lower_bound)?;
            report.set_item("branch", b.branch.to_string())?;
            report.set_item("certificate", cert_dict(py, &b.certificate)?)?;
        }
        BoundOutcome::Infeasible => {
            report.set_item("status", "infeasible")?;
        }
    }
    Ok(report)
}

/// Violation-tolerant bound. Adds `tol` and `epsilon` to the report; the
/// verdict is only a certificate when `tol` vanishes (`status == "bounded"`).
#[pyfunction]
fn relaxed<'py>(
    py: Python<'py>,
    instance: &Instance,
    epsilon: f64,
) -> PyResult<Bound<'py, PyDict>> {
    let r = relaxed_bound(&instance.inner, epsilon).map_err(value_err)?;
    let report = PyDict::new(py);
    report.set_item("status", if r.is_certified() { "bounded" } else { "uncertified" })?;
    report.set_item("opt", r.gamma_star)?;
    report.set_item("lower_bound", r.lower_bound)?;
    report.set_item("branch", r.branch.to_string())?;
    report.set_item("tol", r.tol)?;
    report.set_item("epsilon", r.epsilon)?;
    report.set_item("certificate", cert_dict(py, &r.certificate)?)?;
    Ok(report)
}

/// Test membership of the coefficient vector in the dual cone, in both
/// inequality representations. The two verdicts always agree.
#[pyfunction]
fn check_dual<'py>(py: Python<'py>, instance: &Instance) -> PyResult<Bound<'py, PyDict>> {
    let dec = sign_split(&instance.inner).map_err(value_err)?;
    let w = DualVector::from_sum(&instance.inner);
    let tau = check_membership_tau(&w, &dec);
    let lambda = check_membership_lambda(&w, &dec);
    let verdict = |m: bool| if m { "member" } else { "not_member" };
    let report = PyDict::new(py);
    report.set_item("member", tau.is_member() && lambda.is_member())?;
    report.set_item("tau_form", verdict(tau.is_member()))?;
    report.set_item("lambda_form", verdict(lambda.is_member()))?;
    if let Some(cert) = tau.certificate() {
        report.set_item("certificate", cert_dict(py, cert)?)?;
    }
    Ok(report)
}

/// Circuit-number certificate for an instance with at most one negative term.
/// Returns `certified`, and for a genuine circuit also `theta` and `lambda`.
#[pyfunction]
fn check_circuit<'py>(py: Python<'py>, instance: &Instance) -> PyResult<Bound<'py, PyDict>> {
    let report = PyDict::new(py);
    let inst = match CircuitInstance::from_sum(&instance.inner) {
        Ok(inst) => inst,
        Err(CircuitError::NegativeTermCount(0)) => {
            report.set_item("certified", true)?;
            report.set_item("note", "no negative terms")?;
            return Ok(report);
        }
        Err(e) => return Err(value_err(e)),
    };
    let certified = circuit_nonnegative(&inst).map_err(value_err)?;
    let points: Vec<Exponent> = inst.outer().iter().map(|(p, _)| p.clone()).collect();
    let (inner_point, _) = inst.inner();
    let lambda = lambda_feasible(&points, inner_point)
        .ok_or_else(|| value_err("inner point left the hull after validation"))?;
    let theta = circuit_number(&inst, &lambda).map_err(value_err)?.theta;
    report.set_item("certified", certified)?;
    report.set_item("theta", theta)?;
    let weights = PyDict::new(py);
    for (point, weight) in lambda.iter() {
        weights.set_item(PyTuple::new(py, point.to_vec())?, weight)?;
    }
    report.set_item("lambda", weights)?;
    Ok(report)
}

/// Brute-force sampled minimum over a grid on [-radius, radius]^n with local
/// descent. An upper estimate of the infimum, not a certified bound.
#[pyfunction]
#[pyo3(signature = (instance, grid = 101, radius = 5.0))]
fn oracle_min<'py>(
    py: Python<'py>,
    instance: &Instance,
    grid: usize,
    radius: f64,
) -> PyResult<Bound<'py, PyDict>> {
    let config = OracleConfig { grid_points: grid, radius, ..Default::default() };
    let min = sample_min(&instance.inner, &config).map_err(value_err)?;
    let report = PyDict::new(py);
    report.set_item("value", min.value)?;
    report.set_item("point", min.point)?;
    report.set_item("evaluations", min.evaluations)?;
    Ok(report)
}

#[pymodule]
fn sonc_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Instance>()?;
    m.add_function(wrap_pyfunction!(bound, m)?)?;
    m.add_function(wrap_pyfunction!(relaxed, m)?)?;
    m.add_function(wrap_pyfunction!(check_dual, m)?)?;
    m.add_function(wrap_pyfunction!(check_circuit, m)?)?;
    m.add_function(wrap_pyfunction!(oracle_min, m)?)?;
    Ok(())
}
