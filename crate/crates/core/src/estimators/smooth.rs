use super::LagCurve;
use crate::error::{Error, Result};
use crate::numeric;

/// Centered moving average along the lag axis.
///
/// Near the ends the window is truncated to the lags that exist, so the first
/// and last points are one-sided averages. Counts become the minimum count in
/// the window; standard errors are combined as independent.
pub fn smooth_lag_window(curve: &LagCurve, window: usize) -> Result<LagCurve> {
    let n = curve.max_lag();
    if window == 0 || window % 2 == 0 || window > n {
        return Err(Error::WindowTooLarge { window, max_lag: n });
    }
    let half = window / 2;
    let mut values = Vec::with_capacity(n);
    let mut counts = Vec::with_capacity(n);
    let mut stderr = Vec::with_capacity(n);
    for i in 0..n {
        let lo = i.saturating_sub(half);
        let hi = (i + half).min(n - 1);
        let width = (hi - lo + 1) as f64;
        values.push(numeric::sum(curve.values[lo..=hi].iter().copied()) / width);
        counts.push(curve.counts[lo..=hi].iter().copied().min().unwrap_or(0));
        stderr.push(numeric::sum(curve.stderr[lo..=hi].iter().map(|s| s * s)).sqrt() / width);
    }
    LagCurve::new(curve.kind, values, counts, stderr)
}
