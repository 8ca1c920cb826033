//! Lag statistics and return distributions.
//!
//! Every lag curve is indexed from lag 1: `values[0]` holds the statistic at
//! lag 1 and `values[max_lag - 1]` the one at `max_lag`. Averages use
//! compensated summation in index order, so repeated runs are bit-identical.

mod autocorr;
mod fit;
mod leverage;
mod persistence;
mod smooth;
mod tails;

use serde::{Deserialize, Serialize};

pub use autocorr::volatility_autocorrelation;
pub use fit::{fit_exponential_decay, fit_power_law, DecayFit, LogLogSamples, TailFit};
pub use leverage::{leverage_curve, leverage_curve_conditional, ZNormalization};
pub use persistence::{persistence_curve, PersistenceSide};
pub use smooth::smooth_lag_window;
pub use tails::{tail_histogram, Side, TailHistogram};

use crate::error::{Error, Result};

/// Default lag range for the volatility autocorrelation exponent.
pub const DEFAULT_BETA_FIT_RANGE: (f64, f64) = (10.0, 300.0);
/// Default lag range for the persistence exponent.
pub const DEFAULT_PERSISTENCE_FIT_RANGE: (f64, f64) = (1.0, 50.0);
/// Default range of `|r|`, in units of the standard deviation, for tail fits.
pub const DEFAULT_TAIL_FIT_RANGE: (f64, f64) = (2.0, 20.0);
/// Default histogram resolution for return tails.
pub const DEFAULT_BINS_PER_DECADE: usize = 10;

/// Which statistic a [`LagCurve`] holds.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CurveKind {
    Leverage,
    Autocorrelation,
    PersistenceBelow,
    PersistenceAbove,
}

impl CurveKind {
    pub fn name(self) -> &'static str {
        match self {
            CurveKind::Leverage => "leverage",
            CurveKind::Autocorrelation => "autocorrelation",
            CurveKind::PersistenceBelow => "persistence_below",
            CurveKind::PersistenceAbove => "persistence_above",
        }
    }
}

/// A statistic as a function of integer lag, with per-lag sample counts and
/// standard errors.
///
/// The standard error is the population standard deviation of the per-sample
/// summand divided by `sqrt(count)`; for persistence curves it is the
/// binomial error `sqrt(p (1 - p) / count)`.
#[derive(Debug, Clone, PartialEq)]
pub struct LagCurve {
    pub kind: CurveKind,
    pub values: Vec<f64>,
    pub counts: Vec<usize>,
    pub stderr: Vec<f64>,
}

impl LagCurve {
    pub fn new(
        kind: CurveKind,
        values: Vec<f64>,
        counts: Vec<usize>,
        stderr: Vec<f64>,
    ) -> Result<Self> {
        if values.is_empty() || values.len() != counts.len() || values.len() != stderr.len() {
            return Err(Error::BadParameters(format!(
                "lag curve columns differ in length ({}, {}, {})",
                values.len(),
                counts.len(),
                stderr.len()
            )));
        }
        Ok(Self {
            kind,
            values,
            counts,
            stderr,
        })
    }

    pub fn max_lag(&self) -> usize {
        self.values.len()
    }

    /// Value at lag `t` (1-based).
    pub fn at(&self, t: usize) -> f64 {
        self.values[t - 1]
    }

    pub fn lags(&self) -> impl Iterator<Item = usize> {
        1..=self.values.len()
    }

    /// Pointwise mean of curves of the same kind and length. Counts are summed
    /// and standard errors combined as independent.
    pub fn average(curves: &[LagCurve]) -> Result<LagCurve> {
        let first = curves
            .first()
            .ok_or_else(|| Error::BadParameters("no curves to average".into()))?;
        if curves
            .iter()
            .any(|c| c.kind != first.kind || c.max_lag() != first.max_lag())
        {
            return Err(Error::BadParameters(
                "averaged curves must share kind and max lag".into(),
            ));
        }
        let k = curves.len() as f64;
        let n = first.max_lag();
        let values = (0..n)
            .map(|i| crate::numeric::sum(curves.iter().map(|c| c.values[i])) / k)
            .collect();
        let counts = (0..n)
            .map(|i| curves.iter().map(|c| c.counts[i]).sum())
            .collect();
        let stderr = (0..n)
            .map(|i| crate::numeric::sum(curves.iter().map(|c| c.stderr[i].powi(2))).sqrt() / k)
            .collect();
        LagCurve::new(first.kind, values, counts, stderr)
    }
}

pub(crate) fn check_lag(len: usize, max_lag: usize) -> Result<()> {
    if max_lag == 0 {
        return Err(Error::BadParameters("max_lag must be positive".into()));
    }
    if max_lag >= len || len - max_lag < 2 {
        return Err(Error::LagTooLarge { max_lag, len });
    }
    Ok(())
}
