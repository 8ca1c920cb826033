use serde::{Deserialize, Serialize};

use super::{check_lag, CurveKind, LagCurve};
use crate::error::{Error, Result};
use crate::numeric::Accumulator;

/// Which sample set defines `Z` in a threshold-conditioned leverage curve.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ZNormalization {
    /// `Z` is computed over the same thresholded set as the numerator.
    #[default]
    Restricted,
    /// `Z` is computed over the whole series.
    Global,
}

/// Return-volatility correlation `L(t) = <r(t') |r(t'+t)|^2> / Z` with
/// `Z = <|r(t')|^2>^2`, for `t = 1..=max_lag`.
pub fn leverage_curve(r: &[f64], max_lag: usize) -> Result<LagCurve> {
    conditional(r, max_lag, f64::INFINITY, ZNormalization::Restricted)
}

/// [`leverage_curve`] with the average over `t'` restricted to `|r(t')| < threshold`.
///
/// An infinite threshold reproduces [`leverage_curve`] bit for bit.
pub fn leverage_curve_conditional(
    r: &[f64],
    max_lag: usize,
    threshold: f64,
    z_norm: ZNormalization,
) -> Result<LagCurve> {
    if !(threshold > 0.0) {
        return Err(Error::BadParameters("threshold must be positive".into()));
    }
    conditional(r, max_lag, threshold, z_norm)
}

fn conditional(
    r: &[f64],
    max_lag: usize,
    threshold: f64,
    z_norm: ZNormalization,
) -> Result<LagCurve> {
    check_lag(r.len(), max_lag)?;
    let admitted = |x: f64| x.abs() < threshold;

    let mut sq = Accumulator::new();
    let mut n_z = 0usize;
    for &x in r {
        if z_norm == ZNormalization::Global || admitted(x) {
            sq.add(x * x);
            n_z += 1;
        }
    }
    if n_z == 0 {
        return Err(Error::EmptyCondition { lag: 0 });
    }
    let second_moment = sq.total() / n_z as f64;
    let z = second_moment * second_moment;
    if !(z > 0.0) {
        return Err(Error::EmptyCondition { lag: 0 });
    }

    let mut values = Vec::with_capacity(max_lag);
    let mut counts = Vec::with_capacity(max_lag);
    let mut stderr = Vec::with_capacity(max_lag);
    for t in 1..=max_lag {
        let summand = |i: usize| {
            let v = r[i + t];
            r[i] * (v * v) / z
        };
        let mut acc = Accumulator::new();
        let mut count = 0usize;
        for i in 0..r.len() - t {
            if admitted(r[i]) {
                acc.add(summand(i));
                count += 1;
            }
        }
        if count == 0 {
            return Err(Error::EmptyCondition { lag: t });
        }
        let mean = acc.total() / count as f64;
        let mut dev = Accumulator::new();
        for i in 0..r.len() - t {
            if admitted(r[i]) {
                let d = summand(i) - mean;
                dev.add(d * d);
            }
        }
        values.push(mean);
        counts.push(count);
        stderr.push((dev.total() / count as f64).sqrt() / (count as f64).sqrt());
    }
    LagCurve::new(CurveKind::Leverage, values, counts, stderr)
}
