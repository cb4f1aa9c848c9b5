//! Python bindings. Plans and configurations cross the boundary as JSON text.

use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;

use xmon_fsim::config::RunConfig;
use xmon_fsim::experiments::{average_gate_fidelity, parse_initial_state, run_population_trace};
use xmon_fsim::metrics::FidelityMethod;
use xmon_fsim::synthesis::{GatePlan, PathKind};
use xmon_fsim::Error;

fn to_py(e: Error) -> PyErr {
    match e.exit_code() {
        3 => PyRuntimeError::new_err(e.to_string()),
        _ => PyValueError::new_err(e.to_string()),
    }
}

fn config(config_json: Option<&str>) -> PyResult<RunConfig> {
    match config_json {
        Some(text) => RunConfig::from_json(text).map_err(to_py),
        None => Ok(RunConfig::dimensionless_reference()),
    }
}

fn json_to_py(py: Python<'_>, value: &impl serde::Serialize) -> PyResult<PyObject> {
    let text = serde_json::to_string(value).map_err(|e| PyRuntimeError::new_err(e.to_string()))?;
    Ok(py.import_bound("json")?.call_method1("loads", (text,))?.unbind())
}

/// Parallel fSim plan for `scheme` (`"nngqc"` or `"ngqc"`), returned as JSON.
#[pyfunction]
#[pyo3(signature = (scheme, config_json=None))]
fn synthesize(scheme: &str, config_json: Option<&str>) -> PyResult<String> {
    let kind: PathKind = scheme.parse().map_err(to_py)?;
    let plan = config(config_json)?.synthesize(kind).map_err(to_py)?;
    plan.to_json().map_err(to_py)
}

/// `(mean, std_error)` of the average gate fidelity; `std_error` is `None` for grids.
#[pyfunction]
#[pyo3(signature = (plan_json, method="grid", seed=0, config_json=None))]
fn average_fidelity(py: Python<'_>, plan_json: &str, method: &str, seed: u64, config_json: Option<&str>) -> PyResult<(f64, Option<f64>)> {
    let plan = GatePlan::from_json(plan_json).map_err(to_py)?;
    let method = FidelityMethod::parse(method, seed).map_err(to_py)?;
    let setup = config(config_json)?.setup().map_err(to_py)?;
    let (report, _) = py.allow_threads(|| average_gate_fidelity(&plan, &setup, &method)).map_err(to_py)?;
    Ok((report.mean, report.std_error))
}

/// Population samples as a list of dicts.
#[pyfunction]
#[pyo3(signature = (plan_json, init="10+11", samples=201, config_json=None))]
fn population_trace(py: Python<'_>, plan_json: &str, init: &str, samples: usize, config_json: Option<&str>) -> PyResult<PyObject> {
    let plan = GatePlan::from_json(plan_json).map_err(to_py)?;
    let setup = config(config_json)?.setup().map_err(to_py)?;
    let psi = parse_initial_state(init).map_err(to_py)?;
    let rows = py.allow_threads(|| run_population_trace(&plan, &setup, &psi, samples)).map_err(to_py)?;
    json_to_py(py, &rows)
}

/// Row-major 4×4 fSim matrix as nested lists of complex numbers.
#[pyfunction]
fn fsim(vartheta: f64, xi: f64) -> Vec<Vec<num_complex::Complex64>> {
    let m = xmon_fsim::synthesis::fsim_matrix(vartheta, xi);
    (0..4).map(|r| (0..4).map(|c| m[(r, c)]).collect()).collect()
}

#[pyfunction]
fn bessel_j1(x: f64) -> f64 {
    xmon_fsim::bessel::bessel_j1(x)
}

#[pymodule]
fn xmon_fsim_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_function(wrap_pyfunction!(synthesize, m)?)?;
    m.add_function(wrap_pyfunction!(average_fidelity, m)?)?;
    m.add_function(wrap_pyfunction!(population_trace, m)?)?;
    m.add_function(wrap_pyfunction!(fsim, m)?)?;
    m.add_function(wrap_pyfunction!(bessel_j1, m)?)?;
    Ok(())
}
