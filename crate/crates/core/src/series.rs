//! Price ingestion, log returns and the normalized return representation.

use std::io::BufRead;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numeric;

/// Smallest admissible intraday profile entry.
pub const DEFAULT_PROFILE_FLOOR: f64 = 1e-8;

/// Sampling interval of a price series.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Interval {
    Daily,
    Minutely { step_minutes: u32 },
}

/// Timestamped positive prices in strictly increasing time order.
#[derive(Debug, Clone, PartialEq)]
pub struct PriceSeries {
    observations: Vec<(i64, f64)>,
    interval: Interval,
    minutes_per_day: Option<u32>,
}

impl PriceSeries {
    /// Builds a daily series, validating the ordering and positivity invariants.
    pub fn new(observations: Vec<(i64, f64)>) -> Result<Self> {
        if observations.len() < 2 {
            return Err(Error::TooShort {
                needed: 2,
                got: observations.len(),
            });
        }
        for (i, &(ts, price)) in observations.iter().enumerate() {
            if !(price > 0.0) {
                return Err(Error::NonPositivePrice { line: i + 1, price });
            }
            if i > 0 && ts <= observations[i - 1].0 {
                return Err(Error::NonMonotonicTimestamp {
                    line: i + 1,
                    timestamp: ts,
                });
            }
        }
        Ok(Self {
            observations,
            interval: Interval::Daily,
            minutes_per_day: None,
        })
    }

    /// Relabels the series as intraday data sampled every `step_minutes`.
    pub fn into_minutely(mut self, step_minutes: u32, minutes_per_day: u32) -> Result<Self> {
        if step_minutes == 0 || minutes_per_day == 0 || minutes_per_day % step_minutes != 0 {
            return Err(Error::BadParameters(format!(
                "minutes per day ({minutes_per_day}) must be a positive multiple of the step ({step_minutes})"
            )));
        }
        self.interval = Interval::Minutely { step_minutes };
        self.minutes_per_day = Some(minutes_per_day);
        Ok(self)
    }

    pub fn observations(&self) -> &[(i64, f64)] {
        &self.observations
    }

    pub fn prices(&self) -> impl Iterator<Item = f64> + '_ {
        self.observations.iter().map(|&(_, p)| p)
    }

    pub fn interval(&self) -> Interval {
        self.interval
    }

    pub fn minutes_per_day(&self) -> Option<u32> {
        self.minutes_per_day
    }

    /// Number of sampling steps in one trading day, for intraday data.
    pub fn steps_per_day(&self) -> Option<usize> {
        match (self.interval, self.minutes_per_day) {
            (Interval::Minutely { step_minutes }, Some(mpd)) => Some((mpd / step_minutes) as usize),
            _ => None,
        }
    }

    pub fn len(&self) -> usize {
        self.observations.len()
    }

    pub fn is_empty(&self) -> bool {
        self.observations.is_empty()
    }
}

/// Reads header-less `timestamp,price` lines. Blank lines and lines starting
/// with `#` are skipped; CRLF line endings are accepted.
pub fn load_prices<R: BufRead>(source: R) -> Result<PriceSeries> {
    let mut observations = Vec::new();
    for (idx, line) in source.lines().enumerate() {
        let lineno = idx + 1;
        let line = line?;
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = line.split(',').map(str::trim).collect();
        if fields.len() != 2 {
            return Err(Error::MalformedRow {
                line: lineno,
                reason: format!("expected 2 fields, found {}", fields.len()),
            });
        }
        let timestamp: i64 = fields[0].parse().map_err(|_| Error::MalformedRow {
            line: lineno,
            reason: format!("bad timestamp {:?}", fields[0]),
        })?;
        let price: f64 = fields[1].parse().map_err(|_| Error::MalformedRow {
            line: lineno,
            reason: format!("bad price {:?}", fields[1]),
        })?;
        if !price.is_finite() {
            return Err(Error::MalformedRow {
                line: lineno,
                reason: format!("non-finite price {:?}", fields[1]),
            });
        }
        if price <= 0.0 {
            return Err(Error::NonPositivePrice {
                line: lineno,
                price,
            });
        }
        if let Some(&(prev, _)) = observations.last() {
            if timestamp <= prev {
                return Err(Error::NonMonotonicTimestamp {
                    line: lineno,
                    timestamp,
                });
            }
        }
        observations.push((timestamp, price));
    }
    PriceSeries::new(observations)
}

/// `ln P(i + delta) - ln P(i)` for every admissible `i`.
pub fn log_returns(prices: &PriceSeries, delta_steps: usize) -> Result<Vec<f64>> {
    if delta_steps == 0 {
        return Err(Error::BadParameters("delta_steps must be positive".into()));
    }
    if delta_steps >= prices.len() {
        return Err(Error::DeltaTooLarge {
            delta: delta_steps,
            len: prices.len(),
        });
    }
    let logs: Vec<f64> = prices.prices().map(f64::ln).collect();
    Ok(logs
        .iter()
        .zip(&logs[delta_steps..])
        .map(|(a, b)| b - a)
        .collect())
}

/// Where a return series came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Origin {
    Observed,
    Simulated,
    Decoupled,
}

/// Returns shifted to zero mean and scaled to unit population variance.
#[derive(Debug, Clone, PartialEq)]
pub struct ReturnSeries {
    values: Vec<f64>,
    mean_removed: f64,
    sigma: f64,
    origin: Origin,
}

impl ReturnSeries {
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    /// The mean subtracted from the raw input.
    pub fn mean_removed(&self) -> f64 {
        self.mean_removed
    }

    /// The population standard deviation the input was divided by.
    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    pub fn origin(&self) -> Origin {
        self.origin
    }

    pub fn with_origin(mut self, origin: Origin) -> Self {
        self.origin = origin;
        self
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

impl AsRef<[f64]> for ReturnSeries {
    fn as_ref(&self) -> &[f64] {
        &self.values
    }
}

/// Normalizes raw returns: `(R - <R>) / sqrt(<R^2> - <R>^2)`.
pub fn normalize(raw: &[f64]) -> Result<ReturnSeries> {
    if raw.len() < 2 {
        return Err(Error::TooShort {
            needed: 2,
            got: raw.len(),
        });
    }
    if raw.iter().any(|v| !v.is_finite()) {
        return Err(Error::BadParameters("returns must be finite".into()));
    }
    let (mean, sigma) = numeric::mean_and_std(raw);
    // Anything below this is rounding noise on a constant input.
    let scale = raw.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    if !(sigma > scale * 1e-14) {
        return Err(Error::ZeroVariance);
    }
    Ok(ReturnSeries {
        values: raw.iter().map(|v| (v - mean) / sigma).collect(),
        mean_removed: mean,
        sigma,
        origin: Origin::Observed,
    })
}

/// Mean absolute return at each intraday step.
#[derive(Debug, Clone, PartialEq)]
pub struct IntradayProfile {
    step_volatility: Vec<f64>,
    floor: f64,
}

impl IntradayProfile {
    pub fn step_volatility(&self) -> &[f64] {
        &self.step_volatility
    }

    pub fn floor(&self) -> f64 {
        self.floor
    }

    pub fn steps_per_day(&self) -> usize {
        self.step_volatility.len()
    }
}

/// Averages `|r|` over complete days at each intraday step. A trailing partial
/// day is dropped; entries are clamped below at `floor`.
pub fn intraday_profile(r: &[f64], steps_per_day: usize, floor: f64) -> Result<IntradayProfile> {
    if steps_per_day == 0 {
        return Err(Error::BadParameters(
            "steps_per_day must be positive".into(),
        ));
    }
    if !(floor > 0.0) {
        return Err(Error::BadParameters(
            "profile floor must be positive".into(),
        ));
    }
    let days = r.len() / steps_per_day;
    if days == 0 {
        return Err(Error::TooShort {
            needed: steps_per_day,
            got: r.len(),
        });
    }
    let step_volatility = (0..steps_per_day)
        .map(|k| {
            let total = numeric::sum((0..days).map(|d| r[d * steps_per_day + k].abs()));
            (total / days as f64).max(floor)
        })
        .collect();
    Ok(IntradayProfile {
        step_volatility,
        floor,
    })
}

/// Divides each return by the profile value of its intraday step, then
/// re-normalizes. The origin of the input is kept.
pub fn remove_intraday(
    r: &ReturnSeries,
    profile: &IntradayProfile,
    steps_per_day: usize,
) -> Result<ReturnSeries> {
    if profile.steps_per_day() != steps_per_day {
        return Err(Error::ProfileMismatch {
            expected: steps_per_day,
            got: profile.steps_per_day(),
        });
    }
    Ok(normalize(&deseasonalize(r.values(), profile))?.with_origin(r.origin()))
}

/// The division step of [`remove_intraday`], before re-normalization.
/// Signs are never changed since every profile entry is positive.
pub fn deseasonalize(r: &[f64], profile: &IntradayProfile) -> Vec<f64> {
    let steps = profile.steps_per_day();
    r.iter()
        .enumerate()
        .map(|(i, v)| v / profile.step_volatility[i % steps])
        .collect()
}
