//! Python bindings for the retvol toolkit.
//!
//! Series and curves are exposed as small wrapper classes; enum-like arguments
//! are plain strings (`"below"`, `"positive"`, `"global"`, ...). Every library
//! error is raised as `ValueError`.

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use retvol::estimators::DEFAULT_BINS_PER_DECADE;
use retvol::retarded;
use retvol::{
    GeneratorKind, GeneratorSpec, KernelForm, Origin, PersistenceSide, Side, ZNormalization,
};

fn err(e: retvol::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn bad(msg: String) -> PyErr {
    PyValueError::new_err(msg)
}

#[pyclass(name = "ReturnSeries", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyReturnSeries {
    inner: retvol::ReturnSeries,
}

#[pymethods]
impl PyReturnSeries {
    /// Normalizes `values` to zero mean and unit variance.
    #[new]
    fn new(values: Vec<f64>) -> PyResult<Self> {
        Ok(Self {
            inner: retvol::normalize(&values).map_err(err)?,
        })
    }

    #[getter]
    fn values(&self) -> Vec<f64> {
        self.inner.values().to_vec()
    }

    #[getter]
    fn mean_removed(&self) -> f64 {
        self.inner.mean_removed()
    }

    #[getter]
    fn sigma(&self) -> f64 {
        self.inner.sigma()
    }

    #[getter]
    fn origin(&self) -> &'static str {
        match self.inner.origin() {
            Origin::Observed => "observed",
            Origin::Simulated => "simulated",
            Origin::Decoupled => "decoupled",
        }
    }

    fn __len__(&self) -> usize {
        self.inner.len()
    }

    fn __repr__(&self) -> String {
        format!(
            "ReturnSeries(len={}, origin={})",
            self.inner.len(),
            self.origin()
        )
    }
}

#[pyclass(name = "LagCurve", frozen, from_py_object)]
#[derive(Clone)]
struct PyLagCurve {
    inner: retvol::LagCurve,
}

#[pymethods]
impl PyLagCurve {
    #[getter]
    fn kind(&self) -> &'static str {
        self.inner.kind.name()
    }

    #[getter]
    fn values(&self) -> Vec<f64> {
        self.inner.values.clone()
    }

    #[getter]
    fn counts(&self) -> Vec<usize> {
        self.inner.counts.clone()
    }

    #[getter]
    fn stderr(&self) -> Vec<f64> {
        self.inner.stderr.clone()
    }

    #[getter]
    fn max_lag(&self) -> usize {
        self.inner.max_lag()
    }

    /// Value at lag `t`, starting from 1.
    fn at(&self, t: usize) -> PyResult<f64> {
        if t == 0 || t > self.inner.max_lag() {
            return Err(bad(format!("lag {t} outside 1..={}", self.inner.max_lag())));
        }
        Ok(self.inner.at(t))
    }

    #[staticmethod]
    fn average(curves: Vec<PyLagCurve>) -> PyResult<Self> {
        let curves: Vec<_> = curves.into_iter().map(|c| c.inner).collect();
        Ok(Self {
            inner: retvol::LagCurve::average(&curves).map_err(err)?,
        })
    }

    fn __len__(&self) -> usize {
        self.inner.max_lag()
    }

    fn __repr__(&self) -> String {
        format!(
            "LagCurve(kind={}, max_lag={})",
            self.kind(),
            self.inner.max_lag()
        )
    }
}

#[pyclass(name = "TailHistogram", frozen)]
struct PyTailHistogram {
    inner: retvol::TailHistogram,
}

#[pymethods]
impl PyTailHistogram {
    #[getter]
    fn side(&self) -> &'static str {
        match self.inner.side {
            Side::Positive => "positive",
            Side::Negative => "negative",
        }
    }

    #[getter]
    fn bin_edges(&self) -> Vec<f64> {
        self.inner.bin_edges.clone()
    }

    #[getter]
    fn densities(&self) -> Vec<f64> {
        self.inner.densities.clone()
    }

    #[getter]
    fn counts(&self) -> Vec<usize> {
        self.inner.counts.clone()
    }

    #[getter]
    fn total_count(&self) -> usize {
        self.inner.total_count
    }

    fn centers(&self) -> Vec<f64> {
        self.inner.centers()
    }
}

#[pyclass(name = "PowerLawFit", frozen, get_all)]
struct PyPowerLawFit {
    exponent: f64,
    stderr: f64,
    fit_range: (f64, f64),
    n_points_used: usize,
}

#[pyclass(name = "DecayFit", frozen, get_all)]
struct PyDecayFit {
    amplitude: f64,
    decay_time: f64,
    stderr: f64,
    fit_range: (f64, f64),
    n_points_used: usize,
}

#[pyclass(name = "Kernel", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyKernel {
    inner: retvol::Kernel,
}

#[pymethods]
impl PyKernel {
    /// Kernel with `values[t - 1] = K(t)`.
    #[new]
    fn new(values: Vec<f64>) -> PyResult<Self> {
        Ok(Self {
            inner: retvol::Kernel::from_values(values).map_err(err)?,
        })
    }

    #[getter]
    fn values(&self) -> Vec<f64> {
        self.inner.values().to_vec()
    }

    #[getter]
    fn t_max(&self) -> usize {
        self.inner.t_max()
    }

    #[getter]
    fn form(&self) -> String {
        match self.inner.form() {
            KernelForm::Exponential { m, tau } => format!("exponential(m={m}, tau={tau})"),
            KernelForm::FromCurve { c } => format!("from_curve(C={c})"),
            KernelForm::Explicit => "explicit".into(),
        }
    }

    fn at(&self, t: usize) -> f64 {
        self.inner.at(t)
    }

    fn __repr__(&self) -> String {
        format!("Kernel({}, t_max={})", self.form(), self.inner.t_max())
    }
}

#[pyclass(name = "PerturbationAudit", frozen, get_all)]
struct PyPerturbationAudit {
    frac_large_terms: f64,
    frac_factor_nonpositive: f64,
    max_abs_sum: f64,
}

#[pyclass(name = "DecoupleReport", frozen, get_all, skip_from_py_object)]
#[derive(Clone)]
struct PyDecoupleReport {
    series: PyReturnSeries,
    c_used: Option<f64>,
    frac_large_terms: f64,
    frac_factor_nonpositive: f64,
    max_abs_sum: f64,
    mean_decoupled: f64,
}

impl From<retarded::DecoupleReport> for PyDecoupleReport {
    fn from(r: retarded::DecoupleReport) -> Self {
        Self {
            series: PyReturnSeries { inner: r.series },
            c_used: r.c_used,
            frac_large_terms: r.frac_large_terms,
            frac_factor_nonpositive: r.frac_factor_nonpositive,
            max_abs_sum: r.max_abs_sum,
            mean_decoupled: r.mean_decoupled,
        }
    }
}

#[pyclass(name = "Calibration", frozen, get_all)]
struct PyCalibration {
    c: f64,
    report: PyDecoupleReport,
    scores: Vec<(f64, f64)>,
}

fn curve(inner: retvol::Result<retvol::LagCurve>) -> PyResult<PyLagCurve> {
    inner.map(|inner| PyLagCurve { inner }).map_err(err)
}

/// `ln P(i + delta) - ln P(i)` for a list of `(timestamp, price)` pairs.
#[pyfunction]
#[pyo3(signature = (prices, delta=1))]
fn log_returns(prices: Vec<(i64, f64)>, delta: usize) -> PyResult<Vec<f64>> {
    let series = retvol::PriceSeries::new(prices).map_err(err)?;
    retvol::log_returns(&series, delta).map_err(err)
}

/// Reads a `timestamp,price` file and returns its `(timestamp, price)` pairs.
#[pyfunction]
fn load_prices(path: &str) -> PyResult<Vec<(i64, f64)>> {
    let file = std::fs::File::open(path).map_err(|e| bad(format!("{path}: {e}")))?;
    let series = retvol::load_prices(std::io::BufReader::new(file)).map_err(err)?;
    Ok(series.observations().to_vec())
}

#[pyfunction]
fn normalize(values: Vec<f64>) -> PyResult<PyReturnSeries> {
    PyReturnSeries::new(values)
}

#[pyfunction]
fn leverage_curve(r: Vec<f64>, max_lag: usize) -> PyResult<PyLagCurve> {
    curve(retvol::leverage_curve(&r, max_lag))
}

#[pyfunction]
#[pyo3(signature = (r, max_lag, threshold, z_norm="restricted"))]
fn leverage_curve_conditional(
    r: Vec<f64>,
    max_lag: usize,
    threshold: f64,
    z_norm: &str,
) -> PyResult<PyLagCurve> {
    let z = match z_norm {
        "restricted" => ZNormalization::Restricted,
        "global" => ZNormalization::Global,
        other => {
            return Err(bad(format!(
                "z_norm must be restricted or global, not {other:?}"
            )))
        }
    };
    curve(retvol::leverage_curve_conditional(
        &r, max_lag, threshold, z,
    ))
}

#[pyfunction]
fn volatility_autocorrelation(r: Vec<f64>, max_lag: usize) -> PyResult<PyLagCurve> {
    curve(retvol::volatility_autocorrelation(&r, max_lag))
}

#[pyfunction]
#[pyo3(signature = (r, max_lag, side="below"))]
fn persistence_curve(r: Vec<f64>, max_lag: usize, side: &str) -> PyResult<PyLagCurve> {
    let side = match side {
        "below" => PersistenceSide::Below,
        "above" => PersistenceSide::Above,
        other => return Err(bad(format!("side must be below or above, not {other:?}"))),
    };
    curve(retvol::persistence_curve(&r, max_lag, side))
}

#[pyfunction]
fn smooth_lag_window(c: &PyLagCurve, window: usize) -> PyResult<PyLagCurve> {
    curve(retvol::smooth_lag_window(&c.inner, window))
}

#[pyfunction]
#[pyo3(signature = (r, side, bins_per_decade=DEFAULT_BINS_PER_DECADE))]
fn tail_histogram(r: Vec<f64>, side: &str, bins_per_decade: usize) -> PyResult<PyTailHistogram> {
    let side = match side {
        "positive" => Side::Positive,
        "negative" => Side::Negative,
        other => {
            return Err(bad(format!(
                "side must be positive or negative, not {other:?}"
            )))
        }
    };
    Ok(PyTailHistogram {
        inner: retvol::tail_histogram(&r, side, bins_per_decade).map_err(err)?,
    })
}

/// Fits `y ~ x^(-exponent)` to a `LagCurve`, a `TailHistogram` or a list of
/// `(x, y)` points.
#[pyfunction]
fn fit_power_law(data: &Bound<'_, PyAny>, fit_range: (f64, f64)) -> PyResult<PyPowerLawFit> {
    let fit = if let Ok(c) = data.cast::<PyLagCurve>() {
        retvol::fit_power_law(&c.get().inner, fit_range)
    } else if let Ok(h) = data.cast::<PyTailHistogram>() {
        retvol::fit_power_law(&h.get().inner, fit_range)
    } else {
        let points: Vec<(f64, f64)> = data.extract()?;
        retvol::fit_power_law(points.as_slice(), fit_range)
    }
    .map_err(err)?;
    Ok(PyPowerLawFit {
        exponent: fit.exponent,
        stderr: fit.stderr,
        fit_range: fit.fit_range,
        n_points_used: fit.n_points_used,
    })
}

#[pyfunction]
#[pyo3(signature = (c, fit_range, sign=-1.0))]
fn fit_exponential_decay(c: &PyLagCurve, fit_range: (f64, f64), sign: f64) -> PyResult<PyDecayFit> {
    let fit = retvol::fit_exponential_decay(&c.inner, fit_range, sign).map_err(err)?;
    Ok(PyDecayFit {
        amplitude: fit.amplitude,
        decay_time: fit.decay_time,
        stderr: fit.stderr,
        fit_range: fit.fit_range,
        n_points_used: fit.n_points_used,
    })
}

#[pyfunction]
fn kernel_exponential(m: f64, tau: f64, t_max: usize) -> PyResult<PyKernel> {
    Ok(PyKernel {
        inner: retvol::kernel_exponential(m, tau, t_max).map_err(err)?,
    })
}

#[pyfunction]
fn kernel_from_leverage(leverage: &PyLagCurve, c: f64) -> PyResult<PyKernel> {
    Ok(PyKernel {
        inner: retvol::kernel_from_leverage(&leverage.inner, c).map_err(err)?,
    })
}

#[pyfunction]
#[pyo3(signature = (kernel, sigma_ref, seed, burn_in=true))]
fn simulate_feedback(
    kernel: &PyKernel,
    sigma_ref: Vec<f64>,
    seed: u64,
    burn_in: bool,
) -> PyResult<PyReturnSeries> {
    Ok(PyReturnSeries {
        inner: retvol::simulate_feedback(&kernel.inner, &sigma_ref, seed, burn_in).map_err(err)?,
    })
}

#[pyfunction]
fn decouple(r: &PyReturnSeries, kernel: &PyKernel) -> PyResult<PyDecoupleReport> {
    Ok(retvol::decouple(&r.inner, &kernel.inner)
        .map_err(err)?
        .into())
}

#[pyfunction]
#[pyo3(signature = (r, leverage, c_grid=None))]
fn calibrate_c(
    r: &PyReturnSeries,
    leverage: &PyLagCurve,
    c_grid: Option<Vec<f64>>,
) -> PyResult<PyCalibration> {
    let grid = c_grid.unwrap_or_else(retarded::default_c_grid);
    let cal = retvol::calibrate_c(&r.inner, &leverage.inner, &grid).map_err(err)?;
    Ok(PyCalibration {
        c: cal.c,
        report: cal.report.into(),
        scores: cal.scores,
    })
}

#[pyfunction]
fn audit_perturbation(r: Vec<f64>, kernel: &PyKernel) -> PyResult<PyPerturbationAudit> {
    let a = retvol::audit_perturbation(&r, &kernel.inner).map_err(err)?;
    Ok(PyPerturbationAudit {
        frac_large_terms: a.frac_large_terms,
        frac_factor_nonpositive: a.frac_factor_nonpositive,
        max_abs_sum: a.max_abs_sum,
    })
}

/// Reference volatility of `length` steps with unit mean. `kind` is one of
/// `"gaussian"`, `"ez"` or `"long_memory"`.
#[pyfunction]
#[pyo3(signature = (
    kind,
    length,
    seed,
    n_agents=retvol::generators::DEFAULT_EZ_AGENTS,
    a=retvol::generators::DEFAULT_EZ_ACTIVITY,
    hurst=0.85,
    vol_of_logvol=0.6,
))]
fn generate_sigma(
    kind: &str,
    length: usize,
    seed: u64,
    n_agents: usize,
    a: f64,
    hurst: f64,
    vol_of_logvol: f64,
) -> PyResult<Vec<f64>> {
    let kind = match kind {
        "gaussian" | "gaussian_unit" => GeneratorKind::GaussianUnit,
        "ez" | "ez_model" => GeneratorKind::EzModel { n_agents, a },
        "long_memory" => GeneratorKind::LongMemory {
            hurst,
            vol_of_logvol,
        },
        other => return Err(bad(format!("unknown generator {other:?}"))),
    };
    retvol::generate_sigma(&GeneratorSpec { kind, length, seed }).map_err(err)
}

#[pymodule]
#[pyo3(name = "retvol")]
fn retvol_module(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyReturnSeries>()?;
    m.add_class::<PyLagCurve>()?;
    m.add_class::<PyTailHistogram>()?;
    m.add_class::<PyPowerLawFit>()?;
    m.add_class::<PyDecayFit>()?;
    m.add_class::<PyKernel>()?;
    m.add_class::<PyPerturbationAudit>()?;
    m.add_class::<PyDecoupleReport>()?;
    m.add_class::<PyCalibration>()?;
    m.add_function(wrap_pyfunction!(load_prices, m)?)?;
    m.add_function(wrap_pyfunction!(log_returns, m)?)?;
    m.add_function(wrap_pyfunction!(normalize, m)?)?;
    m.add_function(wrap_pyfunction!(leverage_curve, m)?)?;
    m.add_function(wrap_pyfunction!(leverage_curve_conditional, m)?)?;
    m.add_function(wrap_pyfunction!(volatility_autocorrelation, m)?)?;
    m.add_function(wrap_pyfunction!(persistence_curve, m)?)?;
    m.add_function(wrap_pyfunction!(smooth_lag_window, m)?)?;
    m.add_function(wrap_pyfunction!(tail_histogram, m)?)?;
    m.add_function(wrap_pyfunction!(fit_power_law, m)?)?;
    m.add_function(wrap_pyfunction!(fit_exponential_decay, m)?)?;
    m.add_function(wrap_pyfunction!(kernel_exponential, m)?)?;
    m.add_function(wrap_pyfunction!(kernel_from_leverage, m)?)?;
    m.add_function(wrap_pyfunction!(simulate_feedback, m)?)?;
    m.add_function(wrap_pyfunction!(decouple, m)?)?;
    m.add_function(wrap_pyfunction!(calibrate_c, m)?)?;
    m.add_function(wrap_pyfunction!(audit_perturbation, m)?)?;
    m.add_function(wrap_pyfunction!(generate_sigma, m)?)?;
    m.add("NOISE_GENERATOR", retvol::noise::GENERATOR_ID)?;
    m.add("LONG_MEMORY_METHOD", retvol::generators::LONG_MEMORY_METHOD)?;
    Ok(())
}
