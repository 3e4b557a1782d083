//! Python bindings: configs, asymptotic moments, the fitted law, BER and
//! outage curves, and the Monte Carlo sampler.

use std::collections::BTreeMap;

use pyo3::exceptions::{PyArithmeticError, PyValueError};
use pyo3::prelude::*;

use ::lmmse_snr as snr;

fn to_py(e: snr::Error) -> PyErr {
    if e.is_validation() {
        PyValueError::new_err(e.to_string())
    } else {
        PyArithmeticError::new_err(e.to_string())
    }
}

#[pyclass(name = "SystemConfig", module = "lmmse_snr", frozen, from_py_object)]
#[derive(Clone)]
pub struct PySystemConfig {
    inner: snr::SystemConfig,
}

#[pymethods]
impl PySystemConfig {
    /// `powers=None` selects the preset profile for `k`, scaled by `p0`.
    #[new]
    #[pyo3(signature = (n, k, a, snr_db, p0 = 1.0, powers = None))]
    fn new(
        n: usize,
        k: usize,
        a: f64,
        snr_db: f64,
        p0: f64,
        powers: Option<Vec<f64>>,
    ) -> PyResult<Self> {
        let powers = match powers {
            Some(p) => p,
            None => snr::power_profile(k, p0).map_err(to_py)?,
        };
        let inner = snr::SystemConfig::from_snr_db(n, k, a, snr_db, p0, powers);
        snr::validate_config(&inner).map_err(to_py)?;
        Ok(Self { inner })
    }

    #[getter]
    fn n_rx(&self) -> usize {
        self.inner.n_rx
    }

    #[getter]
    fn k_users(&self) -> usize {
        self.inner.k_users
    }

    #[getter]
    fn rho(&self) -> f64 {
        self.inner.rho
    }

    #[getter]
    fn p0(&self) -> f64 {
        self.inner.p0
    }

    #[getter]
    fn corr_a(&self) -> f64 {
        self.inner.corr_a
    }

    #[getter]
    fn powers(&self) -> Vec<f64> {
        self.inner.powers.clone()
    }

    #[getter]
    fn snr_db(&self) -> f64 {
        self.inner.snr_db()
    }

    fn with_snr_db(&self, snr_db: f64) -> Self {
        Self {
            inner: self.inner.with_snr_db(snr_db),
        }
    }

    /// Eigenvalues of the correlation matrix.
    fn spectrum(&self) -> PyResult<Vec<f64>> {
        Ok(snr::correlation_spectrum(&self.inner)
            .map_err(to_py)?
            .d()
            .to_vec())
    }

    fn __repr__(&self) -> String {
        format!(
            "SystemConfig(n={}, k={}, a={}, snr_db={}, p0={})",
            self.inner.n_rx,
            self.inner.k_users,
            self.inner.corr_a,
            self.inner.snr_db(),
            self.inner.p0
        )
    }
}

#[pyclass(name = "GenGamma", module = "lmmse_snr", frozen, from_py_object)]
#[derive(Clone)]
pub struct PyGenGamma {
    inner: snr::GenGammaParams,
}

#[pymethods]
impl PyGenGamma {
    #[new]
    fn new(alpha: f64, b: f64, xi: f64) -> PyResult<Self> {
        Ok(Self {
            inner: snr::GenGammaParams::new(alpha, b, xi).map_err(to_py)?,
        })
    }

    #[getter]
    fn alpha(&self) -> f64 {
        self.inner.alpha
    }

    #[getter]
    fn b(&self) -> f64 {
        self.inner.b
    }

    #[getter]
    fn xi(&self) -> f64 {
        self.inner.xi
    }

    fn mean(&self) -> f64 {
        self.inner.mean()
    }

    fn variance(&self) -> f64 {
        self.inner.variance()
    }

    fn third_central(&self) -> f64 {
        self.inner.third_central()
    }

    fn log_mgf(&self, s: f64) -> PyResult<f64> {
        self.inner.log_mgf(s).map_err(to_py)
    }

    fn mgf(&self, s: f64) -> PyResult<f64> {
        self.inner.mgf(s).map_err(to_py)
    }

    /// `(K(t), K'(t), K''(t))`.
    fn cumulants(&self, t: f64) -> PyResult<(f64, f64, f64)> {
        let c = self.inner.cumulants(t).map_err(to_py)?;
        Ok((c.k0, c.k1, c.k2))
    }

    fn outage(&self, y: f64) -> PyResult<f64> {
        snr::outage_probability(&self.inner, y).map_err(to_py)
    }

    #[pyo3(signature = (nodes = snr::metrics::DEFAULT_NODES))]
    fn ber_qpsk(&self, nodes: usize) -> PyResult<f64> {
        let q = snr::QuadratureSpec::new(nodes).map_err(to_py)?;
        snr::ber_qpsk(&self.inner, &q).map_err(to_py)
    }

    fn __repr__(&self) -> String {
        format!(
            "GenGamma(alpha={}, b={}, xi={})",
            self.inner.alpha, self.inner.b, self.inner.xi
        )
    }
}

#[pyfunction]
#[pyo3(signature = (k, base_power = 1.0))]
fn power_profile(k: usize, base_power: f64) -> PyResult<Vec<f64>> {
    snr::power_profile(k, base_power).map_err(to_py)
}

/// Asymptotic quantities as a dict.
#[pyfunction]
fn asymptotic_moments(config: &PySystemConfig) -> PyResult<BTreeMap<&'static str, f64>> {
    let m = snr::asymptotic_moments(&config.inner).map_err(to_py)?;
    Ok(BTreeMap::from([
        ("delta", m.delta),
        ("delta_tilde", m.delta_tilde),
        ("gamma", m.gamma),
        ("gamma_tilde", m.gamma_tilde),
        ("mean_norm", m.mean_norm),
        ("omega_sq", m.omega_sq),
        ("nu", m.nu),
        ("mean", m.mean),
        ("variance", m.variance),
        ("third_central", m.third_central),
    ]))
}

#[pyfunction]
fn fit_from_moments(mean: f64, variance: f64, third_central: f64) -> PyResult<PyGenGamma> {
    Ok(PyGenGamma {
        inner: snr::fit_from_moments(mean, variance, third_central).map_err(to_py)?,
    })
}

#[pyfunction]
fn fitted_law(config: &PySystemConfig) -> PyResult<PyGenGamma> {
    let (_, inner) = snr::fitted_law(&config.inner).map_err(to_py)?;
    Ok(PyGenGamma { inner })
}

/// Rows of `(snr_db, ber_theory, ber_empirical or None)`.
#[pyfunction]
#[pyo3(signature = (config, snr_grid_db, trials = None, seed = 0, nodes = snr::metrics::DEFAULT_NODES))]
fn ber_curve(
    py: Python<'_>,
    config: &PySystemConfig,
    snr_grid_db: Vec<f64>,
    trials: Option<usize>,
    seed: u64,
    nodes: usize,
) -> PyResult<Vec<(f64, f64, Option<f64>)>> {
    let q = snr::QuadratureSpec::new(nodes).map_err(to_py)?;
    let empirical = trials.map(|trials| snr::EmpiricalSpec { trials, seed });
    let rows = py
        .detach(|| snr::ber_curve(&config.inner, &snr_grid_db, &q, empirical))
        .map_err(to_py)?;
    Ok(rows
        .into_iter()
        .map(|r| (r.snr_db, r.ber_theory, r.ber_empirical))
        .collect())
}

#[pyfunction]
fn run_trials(
    py: Python<'_>,
    config: &PySystemConfig,
    trials: usize,
    seed: u64,
) -> PyResult<Vec<f64>> {
    let set = py
        .detach(|| snr::run_trials(&config.inner, trials, seed))
        .map_err(to_py)?;
    Ok(set.samples)
}

/// `(mean, variance, third_central)` with the `1/n` convention.
#[pyfunction]
fn central_moments(samples: Vec<f64>) -> PyResult<(f64, f64, f64)> {
    let m = snr::central_moments(&samples).map_err(to_py)?;
    Ok((m.mean, m.variance, m.third_central))
}

#[pymodule]
#[pyo3(name = "lmmse_snr")]
fn lmmse_snr_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PySystemConfig>()?;
    m.add_class::<PyGenGamma>()?;
    m.add_function(wrap_pyfunction!(power_profile, m)?)?;
    m.add_function(wrap_pyfunction!(asymptotic_moments, m)?)?;
    m.add_function(wrap_pyfunction!(fit_from_moments, m)?)?;
    m.add_function(wrap_pyfunction!(fitted_law, m)?)?;
    m.add_function(wrap_pyfunction!(ber_curve, m)?)?;
    m.add_function(wrap_pyfunction!(run_trials, m)?)?;
    m.add_function(wrap_pyfunction!(central_moments, m)?)?;
    m.add("__version__", env!("CARGO_PKG_VERSION"))?;
    Ok(())
}
