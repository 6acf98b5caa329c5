//! Python module `mblchain`: configs, ensemble runs, validation and the single-sample engines.

use pyo3::create_exception;
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;

use mbl_core::disorder::{sample_field, DisorderSpec, FieldRealization, SeedPlan};
use mbl_core::experiments::{self as ex, ExperimentConfig, ExperimentKind};
use mbl_core::linalg::Selection;
use mbl_core::xxz::{self, XxzParams};
use mbl_core::{xy, Error};

create_exception!(mblchain, ConfigError, PyValueError);
create_exception!(mblchain, NumericalError, PyRuntimeError);

fn py_err(e: Error) -> PyErr {
    match e {
        Error::Config(m) => ConfigError::new_err(m),
        other => NumericalError::new_err(other.to_string()),
    }
}

trait OrPy<T> {
    fn py(self) -> PyResult<T>;
}

impl<T> OrPy<T> for mbl_core::Result<T> {
    fn py(self) -> PyResult<T> {
        self.map_err(py_err)
    }
}

/// Experiment configuration. Keys and values follow the `key = value` config format.
#[pyclass(name = "Config", module = "mblchain", from_py_object)]
#[derive(Clone)]
struct PyConfig {
    inner: ExperimentConfig,
}

#[pymethods]
impl PyConfig {
    #[new]
    #[pyo3(signature = (kind, **settings))]
    fn new(kind: &str, settings: Option<&Bound<'_, PyDict>>) -> PyResult<Self> {
        let kind: ExperimentKind = kind.parse().py()?;
        let mut inner = ExperimentConfig::new(kind);
        if let Some(s) = settings {
            for (k, v) in s.iter() {
                let key: String = k.extract()?;
                inner.set(&key, &v.str()?.to_cow()?).py()?;
            }
        }
        Ok(PyConfig { inner })
    }

    #[getter]
    fn kind(&self) -> &'static str {
        self.inner.kind.name()
    }

    fn set(&mut self, key: &str, value: &Bound<'_, PyAny>) -> PyResult<()> {
        self.inner.set(key, &value.str()?.to_cow()?).py()
    }

    /// Applies `key = value` lines.
    fn apply_text(&mut self, text: &str) -> PyResult<()> {
        self.inner.apply_text(text).py()
    }

    fn validate(&self) -> PyResult<()> {
        self.inner.validate().py()
    }

    fn pairs(&self) -> Vec<(&'static str, String)> {
        self.inner.to_pairs()
    }

    fn to_text(&self) -> String {
        ex::config_text(&self.inner)
    }

    fn sha256(&self) -> String {
        ex::config_hash(&self.inner)
    }

    fn __repr__(&self) -> String {
        format!("Config({:?}, realizations={})", self.inner.kind.name(), self.inner.realizations)
    }
}

/// Ensemble result.
#[pyclass(name = "Summary", module = "mblchain", frozen)]
struct PySummary {
    inner: ex::EnsembleSummary,
}

#[pymethods]
impl PySummary {
    #[getter]
    fn realizations(&self) -> usize {
        self.inner.realizations
    }

    #[getter]
    fn substitutions(&self) -> usize {
        self.inner.substitutions
    }

    #[getter]
    fn abscissa(&self) -> &'static str {
        self.inner.abscissa
    }

    fn series_names(&self) -> Vec<String> {
        self.inner.series.iter().map(|s| s.name.clone()).collect()
    }

    /// `(x, mean, std_err, count)` rows of one series.
    fn series(&self, name: &str) -> PyResult<Vec<(f64, f64, f64, usize)>> {
        Ok(self.inner.series(name).py()?.points.iter().map(|p| (p.x, p.mean, p.std_err, p.count)).collect())
    }

    /// Per-realization values of one series at one abscissa.
    fn values_at(&self, name: &str, x: f64) -> Vec<f64> {
        self.inner.values_at(name, x)
    }

    /// Exponential decay fit of a series' means: `rate`, `ci`, `r_squared`, `points_used`.
    fn decay_fit<'py>(&self, py: Python<'py>, name: &str) -> PyResult<Bound<'py, PyDict>> {
        let f = self.inner.decay_fit(name).py()?;
        let d = PyDict::new(py);
        d.set_item("rate", f.rate)?;
        d.set_item("ci", f.ci())?;
        d.set_item("r_squared", f.r_squared)?;
        d.set_item("points_used", f.points_used)?;
        d.set_item("floor_applied", f.floor_applied)?;
        Ok(d)
    }

    fn seeds(&self) -> Vec<(usize, u64, u32)> {
        self.inner.seeds.iter().map(|s| (s.index, s.seed, s.attempt)).collect()
    }

    fn summary_csv(&self) -> PyResult<String> {
        ex::summary_csv(&self.inner).py()
    }

    fn samples_csv(&self) -> PyResult<String> {
        ex::samples_csv(&self.inner).py()
    }

    fn summary_dat(&self) -> String {
        ex::summary_dat(&self.inner)
    }
}

/// Runs the ensemble described by `config`. The GIL is released while it runs.
#[pyfunction]
fn run(py: Python<'_>, config: PyConfig) -> PyResult<PySummary> {
    let inner = py.detach(|| ex::run_ensemble(&config.inner)).py()?;
    Ok(PySummary { inner })
}

/// Log-law coefficient of an entropy scan: `coefficient`, `ci`, `r_squared` and the
/// per-realization slope when available.
#[pyfunction]
fn area_law<'py>(py: Python<'py>, config: PyConfig) -> PyResult<Bound<'py, PyDict>> {
    let scan = py.detach(|| ex::scan_area_law(&config.inner)).py()?;
    let d = PyDict::new(py);
    d.set_item("series", scan.series)?;
    d.set_item("coefficient", scan.fit.slope)?;
    d.set_item("ci", scan.fit.ci())?;
    d.set_item("r_squared", scan.fit.r_squared)?;
    d.set_item("slope", scan.slope.map(|m| (m.mean, m.ci())))?;
    Ok(d)
}

/// Oracle-equivalence checks as `(name, value, tolerance, passed)`.
#[pyfunction]
fn validate(py: Python<'_>) -> PyResult<Vec<(&'static str, f64, f64, bool)>> {
    let checks = py.detach(mbl_core::validation::run_suite).py()?;
    Ok(checks.iter().map(|c| (c.name, c.value, c.tolerance, c.passed())).collect())
}

/// One disorder realization from the ensemble seed plan.
#[pyfunction]
#[pyo3(signature = (sites, seed, index=0, low=0.0, high=1.0))]
fn field(sites: usize, seed: u64, index: u64, low: f64, high: f64) -> PyResult<Vec<f64>> {
    Ok(sample_field(&DisorderSpec::uniform(low, high), sites, &SeedPlan::new(seed), index).py()?.values)
}

/// Eigenvalues of the one-body matrix of the XY chain with the given field, and the
/// ground-state energy.
#[pyfunction]
fn xy_spectrum(field: Vec<f64>) -> PyResult<(Vec<f64>, f64)> {
    let m = xy::build_m(&FieldRealization::from_values(field)).py()?;
    let es = xy::diagonalize(&m).py()?;
    let ground = xy::eigenstate_energy(&es, &xy::ground_state_pattern(&es), m.ground_offset).py()?;
    Ok((es.values, ground))
}

/// Ground-state entanglement entropy (nats) of the leftmost `ell` sites.
#[pyfunction]
fn xy_ground_entropy(field: Vec<f64>, ell: usize) -> PyResult<f64> {
    let es = xy::diagonalize(&xy::build_m(&FieldRealization::from_values(field)).py()?).py()?;
    let g = xy::eigenstate_two_point(&es, &xy::ground_state_pattern(&es)).py()?;
    xy::entanglement_entropy(&xy::restrict_upper_block(&g, ell).py()?).py()
}

fn params(anisotropy: f64, boundary: Option<f64>) -> PyResult<XxzParams> {
    let p = XxzParams { anisotropy, boundary: boundary.unwrap_or_else(|| XxzParams::min_boundary(anisotropy)) };
    p.validate().py()?;
    Ok(p)
}

/// Spectrum of the `particles`-sector of the XXZ chain on sites `-L..L`;
/// `field` has `2L+1` entries.
#[pyfunction]
#[pyo3(signature = (particles, half_length, anisotropy, field, boundary=None))]
fn xxz_sector_spectrum(
    py: Python<'_>,
    particles: usize,
    half_length: usize,
    anisotropy: f64,
    field: Vec<f64>,
    boundary: Option<f64>,
) -> PyResult<Vec<f64>> {
    let p = params(anisotropy, boundary)?;
    py.detach(|| {
        let h = xxz::build_h_sector(particles, half_length, &p, &FieldRealization::from_values(field))?;
        Ok(h.eigen(Selection::All, false)?.values)
    })
    .py()
}

/// Closed-form droplet band of the clean chain.
#[pyfunction]
fn droplet_band(particles: usize, anisotropy: f64) -> PyResult<(f64, f64)> {
    let w = xxz::droplet_band(particles, anisotropy).py()?;
    Ok((w.lower, w.upper))
}

/// Band table as `(N, band_lower, band_upper, measured)` with `measured` the clean
/// spectrum edges below the threshold, or None.
#[pyfunction]
#[pyo3(signature = (particles, anisotropy, half_length=None, boundary=None))]
fn band_table(
    particles: Vec<usize>,
    anisotropy: f64,
    half_length: Option<usize>,
    boundary: Option<f64>,
) -> PyResult<Vec<(usize, f64, f64, Option<(f64, f64)>)>> {
    let rows = ex::band_table(&particles, half_length, &params(anisotropy, boundary)?).py()?;
    Ok(rows.into_iter().map(|r| (r.particles, r.band.lower, r.band.upper, r.measured)).collect())
}

/// Prefactor and base of the exponential resolvent bound.
#[pyfunction]
fn ct_constants(anisotropy: f64, delta: f64) -> (f64, f64) {
    xxz::ct_constants(anisotropy, delta)
}

#[pymodule]
fn mblchain(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("__version__", env!("CARGO_PKG_VERSION"))?;
    m.add("ConfigError", m.py().get_type::<ConfigError>())?;
    m.add("NumericalError", m.py().get_type::<NumericalError>())?;
    m.add("KINDS", ExperimentKind::ALL.iter().map(|k| k.name()).collect::<Vec<_>>())?;
    m.add_class::<PyConfig>()?;
    m.add_class::<PySummary>()?;
    m.add_function(wrap_pyfunction!(run, m)?)?;
    m.add_function(wrap_pyfunction!(area_law, m)?)?;
    m.add_function(wrap_pyfunction!(validate, m)?)?;
    m.add_function(wrap_pyfunction!(field, m)?)?;
    m.add_function(wrap_pyfunction!(xy_spectrum, m)?)?;
    m.add_function(wrap_pyfunction!(xy_ground_entropy, m)?)?;
    m.add_function(wrap_pyfunction!(xxz_sector_spectrum, m)?)?;
    m.add_function(wrap_pyfunction!(droplet_band, m)?)?;
    m.add_function(wrap_pyfunction!(band_table, m)?)?;
    m.add_function(wrap_pyfunction!(ct_constants, m)?)?;
    Ok(())
}
