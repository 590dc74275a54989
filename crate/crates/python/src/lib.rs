use std::collections::BTreeMap;

use pyo3::exceptions::{PyIndexError, PyOSError, PyValueError};
use pyo3::prelude::*;

use primesg_core::goldbach::{self, Counting, RepSeries};
use primesg_core::invariant_suite as suite;
use primesg_core::semigroup;
use primesg_core::{report, Error, WindowSpec};

fn to_py(e: Error) -> PyErr {
    match e {
        Error::Range { .. } => PyIndexError::new_err(e.to_string()),
        Error::Io { .. } => PyOSError::new_err(e.to_string()),
        _ => PyValueError::new_err(e.to_string()),
    }
}

#[pyclass(frozen, name = "PrimeTable")]
struct PyPrimeTable(primesg_core::PrimeTable);

#[pymethods]
impl PyPrimeTable {
    #[new]
    fn new(limit: u64) -> PyResult<Self> {
        primesg_core::PrimeTable::sieve(limit)
            .map(Self)
            .map_err(to_py)
    }

    #[getter]
    fn limit(&self) -> u64 {
        self.0.limit()
    }

    fn is_prime(&self, m: u64) -> bool {
        self.0.is_prime(m)
    }

    fn nth_prime(&self, n: u64) -> PyResult<u64> {
        self.0.nth_prime(n).map_err(to_py)
    }

    fn prime_pi(&self, x: u64) -> PyResult<u64> {
        self.0.prime_pi(x).map_err(to_py)
    }

    fn primes_in_range(&self, lo: u64, hi: u64) -> PyResult<Vec<u64>> {
        self.0
            .primes_in_range(lo, hi)
            .map(<[u64]>::to_vec)
            .map_err(to_py)
    }

    fn __len__(&self) -> usize {
        self.0.primes().len()
    }
}

#[pyclass(frozen, name = "Semigroup")]
struct PySemigroup(semigroup::SemigroupInstance);

#[pymethods]
impl PySemigroup {
    #[new]
    fn new(n: u64, table: &PyPrimeTable) -> PyResult<Self> {
        semigroup::SemigroupInstance::build(n, &table.0)
            .map(Self)
            .map_err(to_py)
    }

    #[getter]
    fn n(&self) -> u64 {
        self.0.n
    }
    #[getter]
    fn p(&self) -> u64 {
        self.0.p
    }
    #[getter]
    fn bound(&self) -> u64 {
        self.0.bound
    }
    #[getter]
    fn frobenius(&self) -> u64 {
        self.0.frobenius
    }
    #[getter]
    fn genus(&self) -> u64 {
        self.0.genus
    }
    #[getter]
    fn sporadic(&self) -> u64 {
        self.0.sporadic
    }
    #[getter]
    fn atoms(&self) -> Vec<u64> {
        self.0.atoms.clone()
    }
    #[getter]
    fn embedding_dim(&self) -> u64 {
        self.0.embedding_dim
    }
    #[getter]
    fn largest_atom(&self) -> u64 {
        self.0.largest_atom
    }

    fn is_member(&self, m: u64) -> bool {
        self.0.is_member(m)
    }

    fn gaps(&self) -> Vec<u64> {
        self.0.gaps()
    }

    fn __repr__(&self) -> String {
        let s = &self.0;
        format!(
            "Semigroup(n={}, p={}, f={}, g={}, e={}, u={}, s={})",
            s.n, s.p, s.frobenius, s.genus, s.embedding_dim, s.largest_atom, s.sporadic
        )
    }
}

/// (n, p, f, g, e, u, s) for S(n).
#[pyfunction]
fn record(n: u64, table: &PyPrimeTable) -> PyResult<(u64, u64, u64, u64, u64, u64, u64)> {
    let r = suite::record(n, &table.0).map_err(to_py)?;
    Ok((r.n, r.p, r.f, r.g, r.e, r.u, r.s))
}

/// One dict per assertion: label, description, pass, witnesses (failing n), equality_at.
#[pyfunction]
fn run_appendix_assertions(
    py: Python<'_>,
    n_lo: u64,
    n_hi: u64,
    table: &PyPrimeTable,
) -> PyResult<Vec<Py<pyo3::types::PyDict>>> {
    let rep = py
        .detach(|| suite::run_appendix_assertions(n_lo, n_hi, &table.0, None))
        .map_err(to_py)?;
    rep.results
        .iter()
        .map(|r| {
            let d = pyo3::types::PyDict::new(py);
            d.set_item("label", r.label)?;
            d.set_item("description", r.description)?;
            d.set_item("pass", r.pass)?;
            d.set_item(
                "witnesses",
                r.witnesses.iter().map(|w| w.n).collect::<Vec<_>>(),
            )?;
            d.set_item("equality_at", r.equality_at.clone())?;
            Ok(d.unbind())
        })
        .collect()
}

/// `{ratio: ((min_num, min_den), argmin, (max_num, max_den), argmax)}`.
#[pyfunction]
#[allow(clippy::type_complexity)]
fn ratio_extremes(
    py: Python<'_>,
    n_lo: u64,
    n_hi: u64,
    table: &PyPrimeTable,
) -> PyResult<BTreeMap<&'static str, ((u64, u64), u64, (u64, u64), u64)>> {
    let recs = py
        .detach(|| suite::records(n_lo, n_hi, &table.0, None))
        .map_err(to_py)?;
    Ok(suite::ratio_extremes(&recs)
        .into_iter()
        .map(|e| {
            (
                e.ratio.label(),
                (
                    (e.min.num(), e.min.den()),
                    e.argmin,
                    (e.max.num(), e.max.den()),
                    e.argmax,
                ),
            )
        })
        .collect())
}

#[pyfunction]
fn lambda_fn(x: f64) -> PyResult<f64> {
    suite::lambda_fn(x).map_err(to_py)
}

#[pyfunction]
fn delta_fn(p: u64) -> f64 {
    suite::delta_fn(p)
}

#[pyfunction]
fn oracle_membership(m: u64, p: u64) -> bool {
    semigroup::oracle_membership(m, p)
}

fn window(t_num: u64, t_den: u64, closed: bool) -> PyResult<WindowSpec> {
    WindowSpec::with_closed(t_num, t_den, closed).map_err(to_py)
}

#[pyfunction]
#[pyo3(signature = (n, t_num, table, t_den = 1, closed = true))]
fn window_reps(
    n: u64,
    t_num: u64,
    table: &PyPrimeTable,
    t_den: u64,
    closed: bool,
) -> PyResult<Vec<(u64, u64, u64)>> {
    let w = window(t_num, t_den, closed)?;
    let reps = goldbach::window_reps(n, &w, &table.0).map_err(to_py)?;
    Ok(reps.into_iter().map(|r| (r.q1, r.q2, r.q3)).collect())
}

#[pyfunction]
#[pyo3(signature = (k, limit, t_num, table, t_den = 1, closed = true))]
fn h_exceptions(
    py: Python<'_>,
    k: u64,
    limit: u64,
    t_num: u64,
    table: &PyPrimeTable,
    t_den: u64,
    closed: bool,
) -> PyResult<Vec<u64>> {
    let w = window(t_num, t_den, closed)?;
    py.detach(|| goldbach::h_exceptions(k, &w, limit, &table.0))
        .map_err(to_py)
}

/// `{N: r(N)}` for odd N in `[n_lo, n_hi]`.
#[pyfunction]
#[pyo3(signature = (n_lo, n_hi, table, t_num = 6, t_den = 1, ordered = false))]
fn rep_count_series(
    py: Python<'_>,
    n_lo: u64,
    n_hi: u64,
    table: &PyPrimeTable,
    t_num: u64,
    t_den: u64,
    ordered: bool,
) -> PyResult<BTreeMap<u64, u64>> {
    let w = window(t_num, t_den, true)?;
    let counting = if ordered {
        Counting::Ordered
    } else {
        Counting::Unordered
    };
    py.detach(|| goldbach::count_series(n_lo, n_hi, &w, counting, &table.0))
        .map(|s| s.counts)
        .map_err(to_py)
}

#[pyfunction]
fn sqrt_window_reps(n: u64, table: &PyPrimeTable) -> PyResult<Vec<(u64, u64, u64)>> {
    let reps = goldbach::sqrt_window_reps(n, &table.0).map_err(to_py)?;
    Ok(reps.into_iter().map(|r| (r.q1, r.q2, r.q3)).collect())
}

/// Least squares on (ln N, ln r); returns (slope, intercept, n_points, prime_subset_mean_residual).
#[pyfunction]
fn fit_loglog(
    counts: BTreeMap<u64, u64>,
    n_lo: u64,
    n_hi: u64,
    table: &PyPrimeTable,
) -> PyResult<(f64, f64, usize, f64)> {
    let series = RepSeries { n_lo, n_hi, counts };
    let fit = report::fit_loglog(&series, n_lo, n_hi, |n| table.0.is_prime(n)).map_err(to_py)?;
    Ok((
        fit.slope,
        fit.intercept,
        fit.n_points,
        fit.prime_subset_mean_residual,
    ))
}

#[pymodule]
fn primesg(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyPrimeTable>()?;
    m.add_class::<PySemigroup>()?;
    m.add_function(wrap_pyfunction!(record, m)?)?;
    m.add_function(wrap_pyfunction!(run_appendix_assertions, m)?)?;
    m.add_function(wrap_pyfunction!(ratio_extremes, m)?)?;
    m.add_function(wrap_pyfunction!(lambda_fn, m)?)?;
    m.add_function(wrap_pyfunction!(delta_fn, m)?)?;
    m.add_function(wrap_pyfunction!(oracle_membership, m)?)?;
    m.add_function(wrap_pyfunction!(window_reps, m)?)?;
    m.add_function(wrap_pyfunction!(h_exceptions, m)?)?;
    m.add_function(wrap_pyfunction!(rep_count_series, m)?)?;
    m.add_function(wrap_pyfunction!(sqrt_window_reps, m)?)?;
    m.add_function(wrap_pyfunction!(fit_loglog, m)?)?;
    m.add("__version__", env!("CARGO_PKG_VERSION"))?;
    Ok(())
}
