//! Python bindings for the threshold solver, interpolation and scans.

use mvthresh::cheb::RootOpts;
use mvthresh::gfun::{self, ConjugateOperator};
use mvthresh::interp;
use mvthresh::scan::{self, ScanConfig, SignMode};
use mvthresh::solver::{self, Direction, Parity, ThresholdSolution};
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;

fn to_py(e: mvthresh::Error) -> PyErr {
    if e.is_numerical() {
        PyRuntimeError::new_err(e.to_string())
    } else {
        PyValueError::new_err(e.to_string())
    }
}

/// Conjugate operator `sum rho_q A_{sigma_q kappa}`.
#[pyclass(name = "Operator", module = "mvthresh_py", skip_from_py_object)]
struct PyOperator {
    inner: ConjugateOperator,
}

#[pymethods]
impl PyOperator {
    #[new]
    fn new(kappa: u32, sigma: Vec<u32>, rho: Vec<f64>) -> PyResult<Self> {
        let inner = ConjugateOperator::new(kappa, sigma, rho).map_err(to_py)?;
        Ok(PyOperator { inner })
    }

    #[staticmethod]
    fn trivial(kappa: u32) -> PyResult<Self> {
        let inner = ConjugateOperator::trivial(kappa).map_err(to_py)?;
        Ok(PyOperator { inner })
    }

    #[getter]
    fn kappa(&self) -> u32 {
        self.inner.kappa
    }

    #[getter]
    fn sigma(&self) -> Vec<u32> {
        self.inner.sigma.clone()
    }

    #[getter]
    fn rho(&self) -> Vec<f64> {
        self.inner.rho.clone()
    }

    /// `G^E(x)` in dimension 2.
    fn g(&self, e: f64, x: f64) -> PyResult<f64> {
        gfun::big_g(&self.inner, e, x).map_err(to_py)
    }

    /// `dG^E/dx` in dimension 2.
    fn g_prime(&self, e: f64, x: f64) -> PyResult<f64> {
        gfun::big_g_prime(&self.inner, e, x).map_err(to_py)
    }

    /// `G^E(x, y)` in dimension 3.
    fn g3(&self, e: f64, x: f64, y: f64) -> PyResult<f64> {
        gfun::big_g3(&self.inner, e, x, y).map_err(to_py)
    }

    fn scaled(&self, lambda: f64) -> Self {
        PyOperator {
            inner: self.inner.scaled(lambda),
        }
    }

    fn __repr__(&self) -> String {
        format!(
            "Operator(kappa={}, sigma={:?}, rho={:?})",
            self.inner.kappa, self.inner.sigma, self.inner.rho
        )
    }
}

/// A solved threshold energy with its coordinate chain and weights.
#[pyclass(name = "Threshold", module = "mvthresh_py", frozen)]
struct PyThreshold {
    inner: ThresholdSolution,
}

#[pymethods]
impl PyThreshold {
    #[getter]
    fn kappa(&self) -> u32 {
        self.inner.kappa
    }

    #[getter]
    fn n(&self) -> usize {
        self.inner.n
    }

    #[getter]
    fn energy(&self) -> f64 {
        self.inner.energy
    }

    #[getter]
    fn coords(&self) -> Vec<f64> {
        self.inner.coords.clone()
    }

    #[getter]
    fn omegas(&self) -> Vec<f64> {
        self.inner.omegas.clone()
    }

    #[getter]
    fn family(&self) -> String {
        format!("{:?}", self.inner.family)
    }

    #[getter]
    fn certified(&self) -> bool {
        self.inner.status == solver::Status::Certified
    }

    /// `|g(X_m) - sum omega_q g(X_q)|` for frequency `j kappa`.
    fn relation_defect(&self, j: u32) -> PyResult<f64> {
        solver::linear_relation_defect(&self.inner, j).map_err(to_py)
    }

    /// Weights from the matrix system for the given frequency multipliers.
    fn omega_oracle(&self, js: Vec<u32>) -> PyResult<Vec<f64>> {
        solver::omega_matrix_oracle(&self.inner, &js).map_err(to_py)
    }

    fn __repr__(&self) -> String {
        format!(
            "Threshold(kappa={}, n={}, energy={}, family={:?})",
            self.inner.kappa, self.inner.n, self.inner.energy, self.inner.family
        )
    }
}

fn wrap(r: mvthresh::Result<ThresholdSolution>) -> PyResult<PyThreshold> {
    r.map(|inner| PyThreshold { inner }).map_err(to_py)
}

#[pyfunction]
fn solve_j2(kappa: u32, n: usize) -> PyResult<PyThreshold> {
    wrap(solver::solve_j2(kappa, n, RootOpts::default()))
}

#[pyfunction]
fn solve_f(kappa: u32, n: usize) -> PyResult<PyThreshold> {
    wrap(solver::solve_f(kappa, n, RootOpts::default()))
}

#[pyfunction]
#[pyo3(signature = (kappa, j, n, increasing = false))]
fn solve_well(kappa: u32, j: u32, n: usize, increasing: bool) -> PyResult<PyThreshold> {
    let dir = if increasing {
        Direction::Increasing
    } else {
        Direction::Decreasing
    };
    wrap(solver::solve_well(kappa, j, n, dir, RootOpts::default()))
}

/// `E_{2n}` (even) or `E_{2n-1}` from the single-equation form.
#[pyfunction]
#[pyo3(signature = (kappa, n, even = true))]
fn continued_fraction(kappa: u32, n: usize, even: bool) -> PyResult<f64> {
    let parity = if even { Parity::Even } else { Parity::Odd };
    solver::continued_fraction_solve(kappa, n, parity).map_err(to_py)
}

/// `(slope, intercept)` of the log-log fit over `n = 10, 20, .., n_max`.
#[pyfunction]
fn convergence(kappa: u32, n_max: usize) -> PyResult<(f64, f64)> {
    let s = solver::convergence_study(kappa, n_max).map_err(to_py)?;
    Ok((s.slope, s.intercept))
}

/// `(E_n, E_{n-1})` for band `n`.
#[pyfunction]
fn band_endpoints(kappa: u32, n: usize) -> PyResult<(f64, f64)> {
    let (l, r) = interp::band_endpoints(kappa, n, RootOpts::default()).map_err(to_py)?;
    Ok((l.energy, r.energy))
}

/// Operator of band `n`; `sigma` defaults to the reference index set.
#[pyfunction]
#[pyo3(signature = (kappa, n, sigma = None))]
fn interpolate(kappa: u32, n: usize, sigma: Option<Vec<u32>>) -> PyResult<PyOperator> {
    let sigma = sigma
        .or_else(|| interp::reference_sigma(kappa, n))
        .ok_or_else(|| PyValueError::new_err("no reference index set; pass sigma"))?;
    let (inner, _) = interp::interpolate_band(kappa, n, &sigma, RootOpts::default()).map_err(to_py)?;
    Ok(PyOperator { inner })
}

fn scan_config(n_e: usize, n_x: usize, n_y: usize, either_sign: bool) -> ScanConfig {
    ScanConfig {
        n_e,
        n_x,
        n_y,
        sign_mode: if either_sign {
            SignMode::EitherSign
        } else {
            SignMode::Positive
        },
        ..ScanConfig::default()
    }
}

/// First index set of `pool` whose operator is positive on band `n`.
/// Returns the operator and the rejected index sets.
#[pyfunction]
#[pyo3(signature = (kappa, n, pool, n_e = 201, n_x = 2001))]
fn search_sigma(
    kappa: u32,
    n: usize,
    pool: Vec<Vec<u32>>,
    n_e: usize,
    n_x: usize,
) -> PyResult<(PyOperator, Vec<Vec<u32>>)> {
    let cfg = scan_config(n_e, n_x, 3, false);
    let found = interp::search_sigma(kappa, n, &pool, &cfg, RootOpts::default()).map_err(to_py)?;
    let rejected = found.rejected.into_iter().map(|c| c.sigma).collect();
    Ok((PyOperator { inner: found.operator }, rejected))
}

/// `(min G, argmin)` over the surface at energy `e`.
#[pyfunction]
#[pyo3(signature = (op, e, dim = 2, n_x = 4001, n_y = 801))]
fn min_g(op: PyRef<'_, PyOperator>, e: f64, dim: u32, n_x: usize, n_y: usize) -> PyResult<(f64, Vec<f64>)> {
    let cfg = scan_config(1, n_x, n_y, false);
    let s = scan::sample_energy(&op.inner, dim, e, &cfg).map_err(to_py)?;
    Ok((s.min.value, s.min.point))
}

/// Bands of strict sign in `(lo, hi)` as `(left, right, sign)` triples.
#[pyfunction]
#[pyo3(signature = (op, dim = 2, lo = 0.0, hi = 1.0, n_e = 2001, n_x = 4001, n_y = 801, either_sign = false))]
#[allow(clippy::too_many_arguments)]
fn bands(
    op: PyRef<'_, PyOperator>,
    dim: u32,
    lo: f64,
    hi: f64,
    n_e: usize,
    n_x: usize,
    n_y: usize,
    either_sign: bool,
) -> PyResult<Vec<(f64, f64, i8)>> {
    let cfg = scan_config(n_e, n_x, n_y, either_sign);
    let rep = scan::find_bands(&op.inner, dim, (lo, hi), &cfg).map_err(to_py)?;
    Ok(rep.bands.iter().map(|b| (b.left, b.right, b.sign)).collect())
}

#[pymodule]
pub fn mvthresh_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyOperator>()?;
    m.add_class::<PyThreshold>()?;
    m.add_function(wrap_pyfunction!(solve_j2, m)?)?;
    m.add_function(wrap_pyfunction!(solve_f, m)?)?;
    m.add_function(wrap_pyfunction!(solve_well, m)?)?;
    m.add_function(wrap_pyfunction!(continued_fraction, m)?)?;
    m.add_function(wrap_pyfunction!(convergence, m)?)?;
    m.add_function(wrap_pyfunction!(band_endpoints, m)?)?;
    m.add_function(wrap_pyfunction!(interpolate, m)?)?;
    m.add_function(wrap_pyfunction!(search_sigma, m)?)?;
    m.add_function(wrap_pyfunction!(min_g, m)?)?;
    m.add_function(wrap_pyfunction!(bands, m)?)?;
    Ok(())
}
