//! Python module `starters`: thin wrappers over `starter-core`.

use pyo3::create_exception;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyDict;

use starter_core::enumerate::{enumerate_strong_starters, EnumerationOptions};
use starter_core::format::{parse_starters, to_json, to_text};
use starter_core::harness::run_inverse_sampling;
use starter_core::inverse::{inverse_test as core_inverse_test, InverseVerdict};
use starter_core::pipeline::{triplicate as core_triplicate, PipelineOutcome, PipelineReport, TriplicateOptions};
use starter_core::table::admissible_keys as core_admissible_keys;
use starter_core::{build_table, crt::crt as core_crt, dimacs::export_dimacs, encode, Error};

create_exception!(starters, StarterError, PyValueError);
create_exception!(starters, RefusedError, StarterError, "The request is well formed but cannot succeed.");

fn to_py(e: Error) -> PyErr {
    match e {
        Error::InadmissibleKey { .. }
        | Error::NotStrong
        | Error::NotAStarter
        | Error::NoStrongStarter(_)
        | Error::AboveEnumerationBound { .. }
        | Error::HillClimbExhausted { .. } => RefusedError::new_err(e.to_string()),
        other => StarterError::new_err(other.to_string()),
    }
}

/// A set of ordered pairs over `Z_n`.
#[pyclass(name = "Pairing", module = "starters", frozen, eq, skip_from_py_object)]
#[derive(Clone, PartialEq)]
pub struct PyPairing(pub starter_core::Pairing);

#[pymethods]
impl PyPairing {
    #[new]
    fn new(order: u32, pairs: Vec<(u32, u32)>) -> PyResult<Self> {
        starter_core::Pairing::from_tuples(order, &pairs).map(Self).map_err(to_py)
    }

    /// Parses JSON or plain text holding exactly one starter.
    #[staticmethod]
    fn parse(text: &str) -> PyResult<Self> {
        let mut all = parse_starters(text).map_err(to_py)?;
        if all.len() != 1 {
            return Err(StarterError::new_err(format!("expected one starter, found {}", all.len())));
        }
        Ok(Self(all.remove(0)))
    }

    #[getter]
    fn order(&self) -> u32 {
        self.0.modulus()
    }

    #[getter]
    fn pairs(&self) -> Vec<(u32, u32)> {
        self.0.iter().map(|p| (p.first, p.second)).collect()
    }

    fn pair_sums(&self) -> Vec<u32> {
        self.0.pair_sums()
    }

    fn normalized(&self) -> Self {
        Self(self.0.normalized())
    }

    fn same_set(&self, other: &PyPairing) -> bool {
        self.0.same_set(&other.0)
    }

    fn verify(&self) -> PyVerification {
        verify(self)
    }

    fn to_json(&self) -> String {
        to_json(&self.0)
    }

    fn to_text(&self) -> String {
        to_text(&self.0)
    }

    fn __len__(&self) -> usize {
        self.0.half()
    }

    fn __repr__(&self) -> String {
        format!("Pairing({}, {:?})", self.0.modulus(), self.pairs())
    }
}

#[pyclass(name = "VerificationReport", module = "starters", frozen, get_all)]
pub struct PyVerification {
    order: u32,
    is_partition: bool,
    is_starter: bool,
    is_strong: bool,
    pair_sums: Vec<u32>,
    diagnostics: Vec<String>,
}

#[pymethods]
impl PyVerification {
    fn __bool__(&self) -> bool {
        self.is_strong
    }

    fn __repr__(&self) -> String {
        format!(
            "VerificationReport(order={}, is_starter={}, is_strong={})",
            self.order, self.is_starter, self.is_strong
        )
    }
}

/// Outcome of one triplication run.
#[pyclass(name = "Triplication", module = "starters", frozen, get_all)]
pub struct PyTriplication {
    status: String,
    key: u32,
    starter_a: Option<PyPairing>,
    starter_b: Option<PyPairing>,
    /// `(U, V)` residues mod 3 per extension entry.
    solution: Option<Vec<(u8, u8)>>,
    cause: Option<String>,
    decisions: u64,
    backtracks: u64,
    report_json: String,
}

#[pymethods]
impl PyTriplication {
    fn __repr__(&self) -> String {
        format!("Triplication(status={:?}, key={})", self.status, self.key)
    }
}

#[pyclass(name = "InverseVerdict", module = "starters", frozen, get_all)]
pub struct PyVerdict {
    status: String,
    key: Option<u32>,
    failing_rows: Vec<u32>,
    /// `(base, key, strong)` per validated reconstruction.
    candidates: Vec<(PyPairing, u32, bool)>,
}

impl From<InverseVerdict> for PyVerdict {
    fn from(v: InverseVerdict) -> Self {
        Self {
            status: v.status.label().to_string(),
            key: v.key,
            failing_rows: v.failing_rows,
            candidates: v
                .candidates
                .into_iter()
                .map(|c| (PyPairing(c.base), c.key, c.report.is_strong))
                .collect(),
        }
    }
}

#[pymethods]
impl PyVerdict {
    fn __repr__(&self) -> String {
        format!("InverseVerdict(status={:?}, key={:?})", self.status, self.key)
    }
}

#[pyfunction]
fn verify(pairing: &PyPairing) -> PyVerification {
    let r = starter_core::verify_pairing(&pairing.0);
    PyVerification {
        order: r.order,
        is_partition: r.is_partition,
        is_starter: r.is_starter,
        is_strong: r.is_strong,
        pair_sums: r.pair_sums,
        diagnostics: r.diagnostics.iter().map(ToString::to_string).collect(),
    }
}

#[pyfunction]
#[pyo3(signature = (order, seed = 0))]
fn hill_climb(py: Python<'_>, order: u32, seed: u64) -> PyResult<PyPairing> {
    py.detach(|| starter_core::hillclimb::hill_climb(order, seed))
        .map(PyPairing)
        .map_err(to_py)
}

/// All strong starters of a small order, each listed once as a set.
#[pyfunction]
fn enumerate(py: Python<'_>, order: u32) -> PyResult<Vec<PyPairing>> {
    let options = EnumerationOptions {
        cap: None,
        ..Default::default()
    };
    let found = py.detach(|| enumerate_strong_starters(order, options)).map_err(to_py)?;
    Ok(found.starters.into_iter().map(PyPairing).collect())
}

#[pyfunction]
fn admissible_keys(base: &PyPairing) -> Vec<u32> {
    core_admissible_keys(&base.0)
}

/// The `x` in `[0, 3p)` with `x = a (mod p)` and `x = u (mod 3)`.
#[pyfunction]
fn crt(a: u32, u: u8, p: u32) -> PyResult<u32> {
    if u > 2 {
        return Err(StarterError::new_err(format!("{u} is not a residue mod 3")));
    }
    core_crt(a, u, p).map_err(to_py)
}

#[pyfunction]
#[pyo3(signature = (base, key, force = false, allow_nonstrong = false))]
fn triplicate(py: Python<'_>, base: &PyPairing, key: u32, force: bool, allow_nonstrong: bool) -> PyResult<PyTriplication> {
    let options = TriplicateOptions {
        force,
        allow_nonstrong,
        ..Default::default()
    };
    let outcome = py.detach(|| core_triplicate(&base.0, key, &options)).map_err(to_py)?;
    let report = PipelineReport::new(&outcome);
    let result = outcome.result();
    Ok(PyTriplication {
        status: outcome.label().to_string(),
        key,
        starter_a: result.map(|r| PyPairing(r.starter_a.clone())),
        starter_b: result.map(|r| PyPairing(r.starter_b.clone())),
        solution: report.solution.clone(),
        cause: match &outcome {
            PipelineOutcome::Unsat { cause, .. } => cause.as_ref().map(ToString::to_string),
            _ => None,
        },
        decisions: report.decisions,
        backtracks: report.backtracks,
        report_json: report.to_json_pretty(),
    })
}

#[pyfunction]
fn inverse_test(starter: &PyPairing) -> PyResult<PyVerdict> {
    core_inverse_test(&starter.0).map(Into::into).map_err(to_py)
}

/// DIMACS CNF text for the mod-3 problem of `(base, key)`.
#[pyfunction]
fn encode_dimacs(base: &PyPairing, key: u32) -> PyResult<String> {
    let table = build_table(&base.0, key).map_err(to_py)?;
    Ok(export_dimacs(&encode(&table)).to_dimacs_string())
}

#[pyfunction]
#[pyo3(signature = (order, samples, seed = 0))]
fn inverse_sampling<'py>(py: Python<'py>, order: u32, samples: u64, seed: u64) -> PyResult<Bound<'py, PyDict>> {
    let s = py.detach(|| run_inverse_sampling(order, samples, seed)).map_err(to_py)?;
    let d = PyDict::new(py);
    d.set_item("order", s.order)?;
    d.set_item("samples", s.samples)?;
    d.set_item("seed", s.seed)?;
    d.set_item("inconclusive", s.inconclusive)?;
    d.set_item("false", s.false_count)?;
    d.set_item("generation_failures", s.generation_failures)?;
    d.set_item("fraction", s.fraction)?;
    Ok(d)
}

#[pymodule]
fn starters(m: &Bound<'_, PyModule>) -> PyResult<()> {
    init_module(m)
}

/// Registers everything on `m`; also used to embed the module in tests.
pub fn init_module(m: &Bound<'_, PyModule>) -> PyResult<()> {
    let py = m.py();
    m.add("StarterError", py.get_type::<StarterError>())?;
    m.add("RefusedError", py.get_type::<RefusedError>())?;
    m.add_class::<PyPairing>()?;
    m.add_class::<PyVerification>()?;
    m.add_class::<PyTriplication>()?;
    m.add_class::<PyVerdict>()?;
    m.add_function(wrap_pyfunction!(verify, m)?)?;
    m.add_function(wrap_pyfunction!(hill_climb, m)?)?;
    m.add_function(wrap_pyfunction!(enumerate, m)?)?;
    m.add_function(wrap_pyfunction!(admissible_keys, m)?)?;
    m.add_function(wrap_pyfunction!(crt, m)?)?;
    m.add_function(wrap_pyfunction!(triplicate, m)?)?;
    m.add_function(wrap_pyfunction!(inverse_test, m)?)?;
    m.add_function(wrap_pyfunction!(encode_dimacs, m)?)?;
    m.add_function(wrap_pyfunction!(inverse_sampling, m)?)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn refusals_map_to_their_own_exception() {
        Python::attach(|py| {
            let e = to_py(Error::NotStrong);
            assert!(e.is_instance_of::<RefusedError>(py));
            assert!(e.is_instance_of::<StarterError>(py));
            let e = to_py(Error::BadModulus(4));
            assert!(!e.is_instance_of::<RefusedError>(py));
            assert!(e.is_instance_of::<PyValueError>(py));
        });
    }
}
