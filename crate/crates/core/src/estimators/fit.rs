use serde::{Deserialize, Serialize};

use super::{LagCurve, TailHistogram};
use crate::error::{Error, Result};
use crate::numeric;

/// Power-law fit `y ~ x^(-exponent)` by least squares on `(ln x, ln y)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TailFit {
    pub exponent: f64,
    pub stderr: f64,
    #[serde(rename = "range")]
    pub fit_range: (f64, f64),
    #[serde(rename = "n")]
    pub n_points_used: usize,
}

/// Anything that can be read as `(x, y)` samples for a log-log fit.
pub trait LogLogSamples {
    fn samples(&self) -> Vec<(f64, f64)>;
}

impl LogLogSamples for LagCurve {
    fn samples(&self) -> Vec<(f64, f64)> {
        self.lags()
            .map(|t| t as f64)
            .zip(self.values.iter().copied())
            .collect()
    }
}

impl LogLogSamples for TailHistogram {
    fn samples(&self) -> Vec<(f64, f64)> {
        self.centers()
            .into_iter()
            .zip(self.densities.iter().copied())
            .collect()
    }
}

impl LogLogSamples for [(f64, f64)] {
    fn samples(&self) -> Vec<(f64, f64)> {
        self.to_vec()
    }
}

fn in_range(samples: &[(f64, f64)], range: (f64, f64)) -> Result<(Vec<f64>, Vec<f64>)> {
    let (low, high) = range;
    if !(low < high) || !(low > 0.0) {
        return Err(Error::BadParameters(format!(
            "fit range ({low}, {high}) must satisfy 0 < low < high"
        )));
    }
    Ok(samples
        .iter()
        .filter(|&&(x, y)| x >= low && x <= high && y > 0.0 && y.is_finite())
        .map(|&(x, y)| (x.ln(), y))
        .unzip())
}

/// Fits `y ~ x^(-exponent)` over `x` in `[low, high]`. Points with `y <= 0`
/// are skipped; at least three must remain.
pub fn fit_power_law<S: LogLogSamples + ?Sized>(
    data: &S,
    fit_range: (f64, f64),
) -> Result<TailFit> {
    let (x, y) = in_range(&data.samples(), fit_range)?;
    if x.len() < 3 {
        return Err(Error::InsufficientPoints { found: x.len() });
    }
    let log_y: Vec<f64> = y.iter().map(|v| v.ln()).collect();
    let (_, slope, stderr) = numeric::linear_regression(&x, &log_y);
    Ok(TailFit {
        exponent: if slope == 0.0 { 0.0 } else { -slope },
        stderr,
        fit_range,
        n_points_used: x.len(),
    })
}

/// Exponential decay fit `sign * y ~ amplitude * exp(-x / decay_time)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DecayFit {
    pub amplitude: f64,
    pub decay_time: f64,
    pub stderr: f64,
    #[serde(rename = "range")]
    pub fit_range: (f64, f64),
    #[serde(rename = "n")]
    pub n_points_used: usize,
}

/// Least squares of `ln(sign * y)` on lag. `sign` selects which branch of a
/// signed curve is fitted (`-1.0` for a leverage curve that is negative).
pub fn fit_exponential_decay(
    curve: &LagCurve,
    fit_range: (f64, f64),
    sign: f64,
) -> Result<DecayFit> {
    let (low, high) = fit_range;
    if !(low < high) {
        return Err(Error::BadParameters("fit range must be increasing".into()));
    }
    let (x, log_y): (Vec<f64>, Vec<f64>) = curve
        .lags()
        .zip(&curve.values)
        .map(|(t, &v)| (t as f64, sign * v))
        .filter(|&(t, v)| t >= low && t <= high && v > 0.0 && v.is_finite())
        .map(|(t, v)| (t, v.ln()))
        .unzip();
    if x.len() < 3 {
        return Err(Error::InsufficientPoints { found: x.len() });
    }
    let (intercept, slope, slope_err) = numeric::linear_regression(&x, &log_y);
    Ok(DecayFit {
        amplitude: intercept.exp(),
        decay_time: -1.0 / slope,
        stderr: slope_err / (slope * slope),
        fit_range,
        n_points_used: x.len(),
    })
}
