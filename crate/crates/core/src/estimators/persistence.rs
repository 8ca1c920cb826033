use serde::{Deserialize, Serialize};

use super::{CurveKind, LagCurve};
use crate::error::{Error, Result};

/// Direction of a volatility persistence probability.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PersistenceSide {
    /// `|r(t'+k)| < |r(t')|` for every `k = 1..=t`.
    Below,
    /// `|r(t'+k)| > |r(t')|` for every `k = 1..=t`.
    Above,
}

/// Persistence probability `P-(t)` or `P+(t)` of the volatility `|r|`.
///
/// At lag `t` the admissible origins are `t' = 0..N-t`, so `counts[t] = N - t`.
/// Ties fail on both sides. The number of surviving origins never grows with
/// `t`; the fraction can rise by at most the factor `(N - t) / (N - t - 1)`
/// when the origin that leaves the admissible window was already dead.
pub fn persistence_curve(r: &[f64], max_lag: usize, side: PersistenceSide) -> Result<LagCurve> {
    if max_lag == 0 {
        return Err(Error::BadParameters("max_lag must be positive".into()));
    }
    if max_lag >= r.len() {
        return Err(Error::LagTooLarge {
            max_lag,
            len: r.len(),
        });
    }
    let abs: Vec<f64> = r.iter().map(|x| x.abs()).collect();
    let n = abs.len();
    let holds = |origin: f64, later: f64| match side {
        PersistenceSide::Below => later < origin,
        PersistenceSide::Above => later > origin,
    };

    // survived[t] = number of origins whose run reaches lag t
    let mut survived = vec![0usize; max_lag + 1];
    for start in 0..n - 1 {
        let horizon = max_lag.min(n - 1 - start);
        let mut run = 0;
        while run < horizon && holds(abs[start], abs[start + run + 1]) {
            run += 1;
        }
        survived[run] += 1;
    }
    // cumulative from the top: origins with run >= t
    let mut reach = vec![0usize; max_lag + 2];
    for t in (1..=max_lag).rev() {
        reach[t] = reach[t + 1] + survived[t];
    }

    let kind = match side {
        PersistenceSide::Below => CurveKind::PersistenceBelow,
        PersistenceSide::Above => CurveKind::PersistenceAbove,
    };
    let mut values = Vec::with_capacity(max_lag);
    let mut counts = Vec::with_capacity(max_lag);
    let mut stderr = Vec::with_capacity(max_lag);
    for t in 1..=max_lag {
        let count = n - t;
        let p = reach[t] as f64 / count as f64;
        values.push(p);
        counts.push(count);
        stderr.push((p * (1.0 - p) / count as f64).sqrt());
    }
    LagCurve::new(kind, values, counts, stderr)
}
