use super::{check_lag, CurveKind, LagCurve};
use crate::error::{Error, Result};
use crate::numeric::{self, Accumulator};

/// Volatility autocorrelation
/// `A(t) = (<|r(t')| |r(t'+t)|> - <|r|>^2) / (<|r|^2> - <|r|>^2)`,
/// with the one-point moments taken over the full series.
pub fn volatility_autocorrelation(r: &[f64], max_lag: usize) -> Result<LagCurve> {
    check_lag(r.len(), max_lag)?;
    let abs: Vec<f64> = r.iter().map(|x| x.abs()).collect();
    let m1 = numeric::mean(&abs);
    let m2 = numeric::sum(abs.iter().map(|a| a * a)) / abs.len() as f64;
    let a0 = m2 - m1 * m1;
    if !(a0 > m2 * 1e-12) {
        return Err(Error::ZeroVariance);
    }
    let offset = m1 * m1;

    let mut values = Vec::with_capacity(max_lag);
    let mut counts = Vec::with_capacity(max_lag);
    let mut stderr = Vec::with_capacity(max_lag);
    for t in 1..=max_lag {
        let n = abs.len() - t;
        let mut acc = Accumulator::new();
        for i in 0..n {
            acc.add(abs[i] * abs[i + t]);
        }
        let mean_product = acc.total() / n as f64;
        let mut dev = Accumulator::new();
        for i in 0..n {
            let d = abs[i] * abs[i + t] - mean_product;
            dev.add(d * d);
        }
        values.push((mean_product - offset) / a0);
        counts.push(n);
        stderr.push((dev.total() / n as f64).sqrt() / a0 / (n as f64).sqrt());
    }
    LagCurve::new(CurveKind::Autocorrelation, values, counts, stderr)
}
