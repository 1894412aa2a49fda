//! Python bindings for `singleton_core`.
//!
//! Matrices cross the boundary as lists of rows. Symmetric matrices must be exactly symmetric.
//! Input errors raise `ValueError`; solver failures raise `RuntimeError`.

use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;

use singleton_core::ensembles::Seed;
use singleton_core::expander::{self, ExpanderReport, ExpansionMode, ExpansionVerdict};
use singleton_core::experiments::{self, ExperimentConfig};
use singleton_core::psd::{self, PsdProbeOptions, PsdSingletonVerdict};
use singleton_core::records::Record;
use singleton_core::sdp::{SdpSolver, SymOperator};
use singleton_core::vector::{self, L1Recovery, MPlusCertificate, SingletonVerdict};
use singleton_core::{DenseMatrix, Error, SymMatrix};

fn py_err(e: Error) -> PyErr {
    match e {
        Error::Contract(_) | Error::Dimension(_) | Error::Config(_) | Error::Parse { .. } | Error::TooLarge { .. } => {
            PyValueError::new_err(e.to_string())
        }
        _ => PyRuntimeError::new_err(e.to_string()),
    }
}

fn dense(rows: Vec<Vec<f64>>) -> PyResult<DenseMatrix> {
    DenseMatrix::from_rows(&rows).map_err(py_err)
}

fn sym(rows: Vec<Vec<f64>>) -> PyResult<SymMatrix> {
    SymMatrix::from_dense(&dense(rows)?).map_err(py_err)
}

fn sym_rows(s: &SymMatrix) -> Vec<Vec<f64>> {
    let n = s.dim();
    (0..n).map(|i| (0..n).map(|j| s.get(i, j)).collect()).collect()
}

fn operator(mats: Vec<Vec<Vec<f64>>>, n: usize) -> PyResult<SymOperator> {
    let mats = mats.into_iter().map(sym).collect::<PyResult<Vec<_>>>()?;
    SymOperator::new(n, mats).map_err(py_err)
}

/// Outcome of a singleton check on `{x ≥ 0 : Ax = Ax₀}` or `{X ⪰ 0 : 𝒜(X) = 𝒜(X₀)}`.
#[pyclass(frozen, get_all)]
struct Verdict {
    /// `certified-singleton`, `refuted`, `probable-singleton` or `inconclusive`.
    kind: String,
    singleton: bool,
    /// Second feasible point when refuted: a vector, or a matrix as a list of rows.
    witness: Option<PyObject>,
    probes_used: usize,
    gap: f64,
    /// Non-converged SDP solves (always 0 for vectors).
    inconclusive: usize,
}

#[pymethods]
impl Verdict {
    fn __repr__(&self) -> String {
        format!("Verdict(kind='{}', probes_used={}, gap={:e})", self.kind, self.probes_used, self.gap)
    }
}

impl Verdict {
    fn vector(py: Python<'_>, v: SingletonVerdict) -> PyResult<Self> {
        Ok(Self {
            kind: v.kind.as_str().to_string(),
            singleton: v.kind.is_singleton(),
            witness: v.witness.map(|w| w.into_pyobject(py).map(|o| o.unbind())).transpose()?,
            probes_used: v.probes_used,
            gap: v.gap,
            inconclusive: 0,
        })
    }

    fn matrix(py: Python<'_>, v: PsdSingletonVerdict) -> PyResult<Self> {
        Ok(Self {
            kind: v.kind.as_str().to_string(),
            singleton: v.kind.is_singleton(),
            witness: v.witness.map(|w| sym_rows(&w).into_pyobject(py).map(|o| o.unbind())).transpose()?,
            probes_used: v.probes_used,
            gap: v.gap,
            inconclusive: v.inconclusive,
        })
    }
}

/// Returns `(member, certificate)`: `h` with `hᵀA ≥ 1` when the row span meets the positive
/// orthant, otherwise a convex combination `λ` of the columns equal to zero.
#[pyfunction]
fn mplus_membership(a: Vec<Vec<f64>>) -> PyResult<(bool, Vec<f64>)> {
    Ok(match vector::mplus_membership(&dense(a)?).map_err(py_err)? {
        MPlusCertificate::Member { h } => (true, h),
        MPlusCertificate::NonMember { lambda } => (false, lambda),
    })
}

#[pyfunction]
#[pyo3(signature = (a, x0, probes = vector::DEFAULT_PROBES, seed = 0))]
fn probe_singleton(py: Python<'_>, a: Vec<Vec<f64>>, x0: Vec<f64>, probes: usize, seed: u64) -> PyResult<Verdict> {
    let v = py.allow_threads(|| vector::probe_singleton(&dense(a)?, &x0, probes, Seed::new(seed, 0)).map_err(py_err))?;
    Verdict::vector(py, v)
}

#[pyfunction]
fn exact_singleton(py: Python<'_>, a: Vec<Vec<f64>>, x0: Vec<f64>) -> PyResult<Verdict> {
    let v = py.allow_threads(|| vector::exact_singleton(&dense(a)?, &x0).map_err(py_err))?;
    Verdict::vector(py, v)
}

/// Minimum-L1 nonnegative solution of `Ax = y`, or `None` when infeasible.
#[pyfunction]
#[pyo3(signature = (a, y, seed = 0))]
fn l1_recover(a: Vec<Vec<f64>>, y: Vec<f64>, seed: u64) -> PyResult<Option<Vec<f64>>> {
    Ok(match vector::l1_recover(&dense(a)?, &y, Seed::new(seed, 0)).map_err(py_err)? {
        L1Recovery::Recovered { x, .. } => Some(x),
        L1Recovery::Infeasible => None,
    })
}

/// `(holds, violating_set)` for the one-sided null-space property of order `k`.
#[pyfunction]
fn null_space_support_property(a: Vec<Vec<f64>>, k: usize) -> PyResult<(bool, Option<Vec<usize>>)> {
    let r = vector::null_space_support_property(&dense(a)?, k).map_err(py_err)?;
    Ok((r.holds, r.violating_set))
}

#[pyfunction]
fn neighborliness_check(a: Vec<Vec<f64>>, k: usize) -> PyResult<(bool, Option<Vec<usize>>)> {
    let r = vector::neighborliness_check(&dense(a)?, k).map_err(py_err)?;
    Ok((r.holds, r.violating_set))
}

#[pyfunction]
fn min_rows_bound(p: usize) -> usize {
    vector::min_rows_bound(p)
}

#[pyfunction]
fn wendel_probability(m: usize, n: usize) -> PyResult<f64> {
    vector::wendel_probability(m, n).map_err(py_err)
}

/// `(d_l, d_u, rho)` of a 0-1 matrix read as a bipartite graph.
#[pyfunction]
fn degree_profile(a: Vec<Vec<f64>>) -> PyResult<(usize, usize, f64)> {
    let p = expander::degree_profile(&dense(a)?).map_err(py_err)?;
    Ok((p.d_l, p.d_u, p.rho))
}

/// Checks `|Γ(S)| ≥ δ|E(S)|` for all `|S| ≤ αn`, exhaustively or on `samples` random sets.
/// Returns a dict with `status` (`certified`, `violated`, `no-violation-found`) and, when
/// violated, the offending `set`.
#[pyfunction]
#[pyo3(signature = (a, alpha, delta, samples = None, seed = 0))]
fn verify_expansion<'py>(
    py: Python<'py>,
    a: Vec<Vec<f64>>,
    alpha: f64,
    delta: f64,
    samples: Option<usize>,
    seed: u64,
) -> PyResult<Bound<'py, PyDict>> {
    let mode = match samples {
        Some(count) => ExpansionMode::Sampled { count, seed: Seed::new(seed, 0) },
        None => ExpansionMode::Exhaustive,
    };
    let a = dense(a)?;
    let verdict = py.allow_threads(|| expander::verify_expansion(&a, alpha, delta, mode).map_err(py_err))?;
    let d = PyDict::new(py);
    match verdict {
        ExpansionVerdict::Certified => d.set_item("status", "certified")?,
        ExpansionVerdict::Violated { set, neighbours, edges } => {
            d.set_item("status", "violated")?;
            d.set_item("set", set)?;
            d.set_item("neighbours", neighbours)?;
            d.set_item("edges", edges)?;
        }
        ExpansionVerdict::NoViolationFound { samples } => {
            d.set_item("status", "no-violation-found")?;
            d.set_item("samples", samples)?;
        }
    }
    Ok(d)
}

/// Guaranteed uniqueness sparsity, or `None` when `δρ` is at most the golden threshold.
#[pyfunction]
fn uniqueness_threshold(alpha: f64, delta: f64, rho: f64, n: usize) -> PyResult<Option<usize>> {
    Ok(expander::uniqueness_threshold(alpha, delta, rho, n).map_err(py_err)?.sparsity())
}

/// Degree profile, exhaustive expansion check and threshold as `key=value` text.
#[pyfunction]
fn expander_report(a: Vec<Vec<f64>>, alpha: f64, delta: f64) -> PyResult<String> {
    let r = ExpanderReport::build(&dense(a)?, alpha, delta, ExpansionMode::Exhaustive).map_err(py_err)?;
    Ok(r.to_record().to_string())
}

/// Applies `X ↦ (⟨A_i, X⟩)_i`.
#[pyfunction]
fn apply_operator(mats: Vec<Vec<Vec<f64>>>, x: Vec<Vec<f64>>) -> PyResult<Vec<f64>> {
    let x = sym(x)?;
    psd::apply_operator(&operator(mats, x.dim())?, &x).map_err(py_err)
}

#[pyfunction]
#[pyo3(signature = (mats, x0, probes = vector::DEFAULT_PROBES, seed = 0))]
fn probe_singleton_psd(
    py: Python<'_>,
    mats: Vec<Vec<Vec<f64>>>,
    x0: Vec<Vec<f64>>,
    probes: usize,
    seed: u64,
) -> PyResult<Verdict> {
    let x0 = sym(x0)?;
    let solver = SdpSolver::new(operator(mats, x0.dim())?);
    let v = py.allow_threads(|| {
        psd::probe_singleton_psd(&solver, &x0, probes, Seed::new(seed, 0), &PsdProbeOptions::default()).map_err(py_err)
    })?;
    Verdict::matrix(py, v)
}

#[pyfunction]
fn exact_singleton_psd(py: Python<'_>, mats: Vec<Vec<Vec<f64>>>, x0: Vec<Vec<f64>>) -> PyResult<Verdict> {
    let x0 = sym(x0)?;
    let solver = SdpSolver::new(operator(mats, x0.dim())?);
    let v = py.allow_threads(|| psd::exact_singleton_psd(&solver, &x0, &PsdProbeOptions::default()).map_err(py_err))?;
    Verdict::matrix(py, v)
}

/// Two distinct PSD matrices `(X, X + Y)` with rank `r` whose difference is `Y`.
#[pyfunction]
fn construct_second_solution(y: Vec<Vec<f64>>, r: usize) -> PyResult<(Vec<Vec<f64>>, Vec<Vec<f64>>)> {
    let (x, x2) = psd::construct_second_solution(&sym(y)?, r).map_err(py_err)?;
    Ok((sym_rows(&x), sym_rows(&x2)))
}

#[pyfunction]
fn semicircle_alpha(c: f64) -> f64 {
    psd::semicircle_alpha(c)
}

#[pyfunction]
fn semicircle_c(alpha1: f64) -> PyResult<f64> {
    psd::semicircle_c(alpha1).map_err(py_err)
}

/// Runs an experiment from `key=value` settings (`kind` is required) and returns the CSV text.
#[pyfunction]
fn run_experiment(py: Python<'_>, settings: Vec<(String, String)>) -> PyResult<String> {
    let mut rec = Record::new();
    for (k, v) in &settings {
        rec.push(k, v);
    }
    let cfg = ExperimentConfig::from_record(&rec).map_err(py_err)?;
    py.allow_threads(|| experiments::run(&cfg).map(|t| t.to_csv()).map_err(py_err))
}

#[pymodule]
fn singleton_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Verdict>()?;
    m.add_function(wrap_pyfunction!(mplus_membership, m)?)?;
    m.add_function(wrap_pyfunction!(probe_singleton, m)?)?;
    m.add_function(wrap_pyfunction!(exact_singleton, m)?)?;
    m.add_function(wrap_pyfunction!(l1_recover, m)?)?;
    m.add_function(wrap_pyfunction!(null_space_support_property, m)?)?;
    m.add_function(wrap_pyfunction!(neighborliness_check, m)?)?;
    m.add_function(wrap_pyfunction!(min_rows_bound, m)?)?;
    m.add_function(wrap_pyfunction!(wendel_probability, m)?)?;
    m.add_function(wrap_pyfunction!(degree_profile, m)?)?;
    m.add_function(wrap_pyfunction!(verify_expansion, m)?)?;
    m.add_function(wrap_pyfunction!(uniqueness_threshold, m)?)?;
    m.add_function(wrap_pyfunction!(expander_report, m)?)?;
    m.add_function(wrap_pyfunction!(apply_operator, m)?)?;
    m.add_function(wrap_pyfunction!(probe_singleton_psd, m)?)?;
    m.add_function(wrap_pyfunction!(exact_singleton_psd, m)?)?;
    m.add_function(wrap_pyfunction!(construct_second_solution, m)?)?;
    m.add_function(wrap_pyfunction!(semicircle_alpha, m)?)?;
    m.add_function(wrap_pyfunction!(semicircle_c, m)?)?;
    m.add_function(wrap_pyfunction!(run_experiment, m)?)?;
    Ok(())
}
