//! The retarded volatility model.
//!
//! Feedback direction: `r(t') = [1 - sum_t K(t) r(t'-t)] sigma(t') eps(t')`
//! generates a return-volatility correlation `L(t)` of roughly `-2 K(t)`.
//! Decoupling direction: `r0(t') = [1 + sum_t K(t) r(t'-t)] r(t')` with
//! `K(t) = -(C/2) L(t)` removes it from an observed series.
//!
//! Kernels have finite support `t = 1..=t_max`, and returns before the start
//! of the series are taken as zero in both directions.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::estimators::{leverage_curve, CurveKind, LagCurve};
use crate::noise::Noise;
use crate::numeric;
use crate::series::{normalize, Origin, ReturnSeries};

/// Lower end of the default calibration grid.
pub const DEFAULT_C_MIN: f64 = 0.05;
/// Upper end of the default calibration grid.
pub const DEFAULT_C_MAX: f64 = 0.5;

/// `0.05, 0.10, ..., 0.50`.
pub fn default_c_grid() -> Vec<f64> {
    (1..=10).map(|i| i as f64 * DEFAULT_C_MIN).collect()
}

/// How a kernel was built.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum KernelForm {
    /// `K(t) = m exp(-t / tau)`.
    Exponential { m: f64, tau: f64 },
    /// `K(t) = -(C/2) L(t)` from a measured leverage curve.
    FromCurve { c: f64 },
    /// Values given directly, e.g. read back from a kernel file.
    Explicit,
}

/// Coupling kernel `K(t)`, `t = 1..=t_max`; zero beyond `t_max`.
#[derive(Debug, Clone, PartialEq)]
pub struct Kernel {
    values: Vec<f64>,
    form: KernelForm,
}

impl Kernel {
    pub fn from_values(values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::BadParameters("kernel needs at least one lag".into()));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::BadParameters("kernel values must be finite".into()));
        }
        Ok(Self {
            values,
            form: KernelForm::Explicit,
        })
    }

    /// `values()[t - 1]` is `K(t)`.
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn form(&self) -> KernelForm {
        self.form
    }

    pub fn t_max(&self) -> usize {
        self.values.len()
    }

    pub fn at(&self, t: usize) -> f64 {
        if t == 0 || t > self.values.len() {
            0.0
        } else {
            self.values[t - 1]
        }
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|&v| v == 0.0)
    }

    pub fn negated(&self) -> Kernel {
        let form = match self.form {
            KernelForm::Exponential { m, tau } => KernelForm::Exponential { m: -m, tau },
            _ => KernelForm::Explicit,
        };
        Kernel {
            values: self.values.iter().map(|v| -v).collect(),
            form,
        }
    }

    /// `sum_{t=1}^{min(t_max, i)} K(t) x(i - t)`, in increasing `t`.
    #[inline]
    fn retarded_sum(&self, x: &[f64], i: usize) -> f64 {
        let reach = self.values.len().min(i);
        let mut s = 0.0;
        for t in 1..=reach {
            s += self.values[t - 1] * x[i - t];
        }
        s
    }
}

/// `K(t) = m exp(-t / tau)` for `t = 1..=t_max`. Positive `m` produces a
/// leverage effect, negative `m` an anti-leverage effect.
pub fn kernel_exponential(m: f64, tau: f64, t_max: usize) -> Result<Kernel> {
    if !(tau > 0.0) || !m.is_finite() {
        return Err(Error::BadParameters(format!(
            "exponential kernel needs finite m and tau > 0 (m = {m}, tau = {tau})"
        )));
    }
    if t_max == 0 {
        return Err(Error::BadParameters("t_max must be positive".into()));
    }
    Ok(Kernel {
        values: (1..=t_max).map(|t| m * (-(t as f64) / tau).exp()).collect(),
        form: KernelForm::Exponential { m, tau },
    })
}

/// `K(t) = -(C/2) L(t)` over the lags of a measured leverage curve.
pub fn kernel_from_leverage(leverage: &LagCurve, c: f64) -> Result<Kernel> {
    if leverage.kind != CurveKind::Leverage {
        return Err(Error::WrongCurveKind {
            expected: CurveKind::Leverage.name(),
            got: leverage.kind.name(),
        });
    }
    if !(c > 0.0) || !c.is_finite() {
        return Err(Error::BadParameters(format!("C must be positive, got {c}")));
    }
    Ok(Kernel {
        values: leverage.values.iter().map(|l| -0.5 * c * l).collect(),
        form: KernelForm::FromCurve { c },
    })
}

/// Generates returns with the feedback model, driving it with standard
/// normal noise drawn from `seed`.
///
/// The output is normalized. With `burn_in` the first `t_max` points, which
/// feel the zero initial condition, are dropped before normalizing.
pub fn simulate_feedback(
    kernel: &Kernel,
    sigma_ref: &[f64],
    seed: u64,
    burn_in: bool,
) -> Result<ReturnSeries> {
    let t_max = kernel.t_max();
    if sigma_ref.len() < t_max + 2 {
        return Err(Error::RefTooShort {
            len: sigma_ref.len(),
            t_max,
        });
    }
    if sigma_ref.iter().any(|s| !(*s > 0.0) || !s.is_finite()) {
        return Err(Error::BadParameters(
            "reference volatility must be positive and finite".into(),
        ));
    }
    let mut noise = Noise::new(seed);
    let mut r = vec![0.0; sigma_ref.len()];
    for i in 0..r.len() {
        let eps = noise.normal();
        r[i] = (1.0 - kernel.retarded_sum(&r, i)) * sigma_ref[i] * eps;
    }
    let kept = if burn_in { &r[t_max..] } else { &r[..] };
    Ok(normalize(kept)?.with_origin(Origin::Simulated))
}

/// Size of the decoupling correction relative to the returns it multiplies.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PerturbationAudit {
    /// Fraction of evaluated `(t', t)` terms with `K(t) |r(t'-t)| > 1`.
    pub frac_large_terms: f64,
    /// Fraction of `t'` where `1 + sum_t K(t) r(t'-t) <= 0`.
    pub frac_factor_nonpositive: f64,
    /// Largest `|sum_t K(t) r(t'-t)|`.
    pub max_abs_sum: f64,
}

struct Decoupled {
    values: Vec<f64>,
    audit: PerturbationAudit,
}

fn apply_decoupling(r: &[f64], kernel: &Kernel) -> Result<Decoupled> {
    let t_max = kernel.t_max();
    if r.len() <= t_max {
        return Err(Error::SeriesTooShort {
            len: r.len(),
            t_max,
        });
    }
    let mut values = Vec::with_capacity(r.len());
    let mut large = 0usize;
    let mut evaluated = 0usize;
    let mut nonpositive = 0usize;
    let mut max_abs_sum = 0.0f64;
    for i in 0..r.len() {
        let reach = t_max.min(i);
        for t in 1..=reach {
            if kernel.values[t - 1] * r[i - t].abs() > 1.0 {
                large += 1;
            }
        }
        evaluated += reach;
        let s = kernel.retarded_sum(r, i);
        let factor = 1.0 + s;
        if factor <= 0.0 {
            nonpositive += 1;
        }
        max_abs_sum = max_abs_sum.max(s.abs());
        values.push(factor * r[i]);
    }
    let audit = PerturbationAudit {
        frac_large_terms: if evaluated == 0 {
            0.0
        } else {
            large as f64 / evaluated as f64
        },
        frac_factor_nonpositive: nonpositive as f64 / r.len() as f64,
        max_abs_sum,
    };
    Ok(Decoupled { values, audit })
}

/// Perturbation statistics of decoupling `r` with `kernel`, without building
/// the decoupled series.
pub fn audit_perturbation(r: &[f64], kernel: &Kernel) -> Result<PerturbationAudit> {
    Ok(apply_decoupling(r, kernel)?.audit)
}

/// Outcome of [`decouple`].
#[derive(Debug, Clone, PartialEq)]
pub struct DecoupleReport {
    /// The re-normalized decoupled returns.
    pub series: ReturnSeries,
    /// `C` of a kernel built from a leverage curve.
    pub c_used: Option<f64>,
    pub frac_large_terms: f64,
    pub frac_factor_nonpositive: f64,
    pub max_abs_sum: f64,
    /// Mean of the decoupled returns before re-normalization.
    pub mean_decoupled: f64,
}

/// Applies `r0(t') = [1 + sum_t K(t) r(t'-t)] r(t')` and re-normalizes.
///
/// When every factor is exactly one (a zero kernel) the input is returned
/// unchanged apart from its origin.
pub fn decouple(r: &ReturnSeries, kernel: &Kernel) -> Result<DecoupleReport> {
    let Decoupled { values, audit } = apply_decoupling(r.values(), kernel)?;
    let mean_decoupled = numeric::mean(&values);
    let unchanged = values
        .iter()
        .zip(r.values())
        .all(|(a, b)| a.to_bits() == b.to_bits());
    let series = if unchanged {
        r.clone()
    } else {
        normalize(&values)?
    }
    .with_origin(Origin::Decoupled);
    let c_used = match kernel.form() {
        KernelForm::FromCurve { c } => Some(c),
        _ => None,
    };
    Ok(DecoupleReport {
        series,
        c_used,
        frac_large_terms: audit.frac_large_terms,
        frac_factor_nonpositive: audit.frac_factor_nonpositive,
        max_abs_sum: audit.max_abs_sum,
        mean_decoupled,
    })
}

/// Result of a grid search over `C`.
#[derive(Debug, Clone, PartialEq)]
pub struct Calibration {
    pub c: f64,
    pub report: DecoupleReport,
    /// `(C, score)` for every grid point, in ascending `C`.
    pub scores: Vec<(f64, f64)>,
}

/// Residual leverage score `sum_t (L0(t) / stderr(t))^2` of a decoupled series.
pub fn residual_score(residual: &LagCurve) -> f64 {
    numeric::sum(
        residual
            .values
            .iter()
            .zip(&residual.stderr)
            .map(|(&l, &se)| {
                if se > 0.0 {
                    (l / se).powi(2)
                } else if l == 0.0 {
                    0.0
                } else {
                    f64::INFINITY
                }
            }),
    )
}

/// Picks the `C` in `c_grid` whose decoupled series has the smallest residual
/// leverage score over lags `1..=leverage.max_lag()`. Ties go to the smaller `C`.
pub fn calibrate_c(r: &ReturnSeries, leverage: &LagCurve, c_grid: &[f64]) -> Result<Calibration> {
    if c_grid.is_empty() {
        return Err(Error::BadParameters("C grid is empty".into()));
    }
    if c_grid.iter().any(|c| !(*c > 0.0) || !c.is_finite()) {
        return Err(Error::BadParameters(
            "C grid values must be positive".into(),
        ));
    }
    let mut grid = c_grid.to_vec();
    grid.sort_by(f64::total_cmp);
    grid.dedup();

    let mut best: Option<(f64, f64, DecoupleReport)> = None;
    let mut scores = Vec::with_capacity(grid.len());
    for &c in &grid {
        let kernel = kernel_from_leverage(leverage, c)?;
        let report = decouple(r, &kernel)?;
        let residual = leverage_curve(report.series.values(), leverage.max_lag())?;
        let score = residual_score(&residual);
        scores.push((c, score));
        let better = match &best {
            None => true,
            Some((_, s, _)) => score < *s,
        };
        if better {
            best = Some((c, score, report));
        }
    }
    let (c, _, report) = best.expect("grid is non-empty");
    Ok(Calibration { c, report, scores })
}
