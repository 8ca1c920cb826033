//! Artifact file formats.
//!
//! All CSV files carry a header row and use `.` decimals; floating values are
//! written with 17 significant digits so every value reads back bit-exact.
//! Readers skip the header, blank lines and `#` comments.

use std::io::{BufRead, Write};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::estimators::{CurveKind, LagCurve, TailHistogram};
use crate::retarded::{DecoupleReport, Kernel};
use crate::series::PriceSeries;

pub const RETURNS_HEADER: &str = "index,value";
pub const LAG_CURVE_HEADER: &str = "lag,value,count,stderr";
pub const TAIL_HEADER: &str = "bin_center,density,count";
pub const KERNEL_HEADER: &str = "lag,K";

/// 17 significant digits.
pub fn fmt_f64(v: f64) -> String {
    format!("{v:.16e}")
}

fn rows<R: BufRead>(source: R, columns: usize) -> Result<Vec<(usize, Vec<String>)>> {
    let mut out = Vec::new();
    let mut seen_data = false;
    for (idx, line) in source.lines().enumerate() {
        let line = line?;
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let fields: Vec<String> = line.split(',').map(|f| f.trim().to_string()).collect();
        // header: first non-comment row whose first field is not numeric
        if !seen_data && fields[0].parse::<f64>().is_err() {
            seen_data = true;
            continue;
        }
        seen_data = true;
        if fields.len() != columns {
            return Err(Error::MalformedRow {
                line: idx + 1,
                reason: format!("expected {columns} fields, found {}", fields.len()),
            });
        }
        out.push((idx + 1, fields));
    }
    Ok(out)
}

fn field<T: std::str::FromStr>(line: usize, s: &str) -> Result<T> {
    s.parse().map_err(|_| Error::MalformedRow {
        line,
        reason: format!("cannot parse {s:?}"),
    })
}

pub fn write_prices<W: Write>(mut w: W, prices: &PriceSeries) -> Result<()> {
    for &(ts, p) in prices.observations() {
        writeln!(w, "{ts},{p}")?;
    }
    Ok(())
}

pub fn write_returns<W: Write>(mut w: W, values: &[f64]) -> Result<()> {
    writeln!(w, "{RETURNS_HEADER}")?;
    for (i, v) in values.iter().enumerate() {
        writeln!(w, "{i},{}", fmt_f64(*v))?;
    }
    Ok(())
}

/// Reads an `index,value` file. Indices must run 0, 1, 2, ...
pub fn read_returns<R: BufRead>(source: R) -> Result<Vec<f64>> {
    let mut values = Vec::new();
    for (line, f) in rows(source, 2)? {
        let index: usize = field(line, &f[0])?;
        if index != values.len() {
            return Err(Error::MalformedRow {
                line,
                reason: format!("expected index {}, found {index}", values.len()),
            });
        }
        values.push(field(line, &f[1])?);
    }
    Ok(values)
}

pub fn write_lag_curve<W: Write>(mut w: W, curve: &LagCurve) -> Result<()> {
    writeln!(w, "{LAG_CURVE_HEADER}")?;
    for t in curve.lags() {
        writeln!(
            w,
            "{t},{},{},{}",
            fmt_f64(curve.values[t - 1]),
            curve.counts[t - 1],
            fmt_f64(curve.stderr[t - 1])
        )?;
    }
    Ok(())
}

/// Reads a lag curve; the kind is not stored in the file and must be given.
pub fn read_lag_curve<R: BufRead>(source: R, kind: CurveKind) -> Result<LagCurve> {
    let (mut values, mut counts, mut stderr) = (Vec::new(), Vec::new(), Vec::new());
    for (line, f) in rows(source, 4)? {
        let lag: usize = field(line, &f[0])?;
        if lag != values.len() + 1 {
            return Err(Error::MalformedRow {
                line,
                reason: format!("expected lag {}, found {lag}", values.len() + 1),
            });
        }
        values.push(field(line, &f[1])?);
        counts.push(field(line, &f[2])?);
        stderr.push(field(line, &f[3])?);
    }
    LagCurve::new(kind, values, counts, stderr)
}

/// One row of a tail histogram file.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TailBin {
    pub center: f64,
    pub density: f64,
    pub count: usize,
}

pub fn write_tail_histogram<W: Write>(mut w: W, hist: &TailHistogram) -> Result<()> {
    writeln!(w, "{TAIL_HEADER}")?;
    for ((center, density), count) in hist
        .centers()
        .into_iter()
        .zip(&hist.densities)
        .zip(&hist.counts)
    {
        writeln!(w, "{},{},{count}", fmt_f64(center), fmt_f64(*density))?;
    }
    Ok(())
}

pub fn read_tail_histogram<R: BufRead>(source: R) -> Result<Vec<TailBin>> {
    rows(source, 3)?
        .into_iter()
        .map(|(line, f)| {
            Ok(TailBin {
                center: field(line, &f[0])?,
                density: field(line, &f[1])?,
                count: field(line, &f[2])?,
            })
        })
        .collect()
}

pub fn write_kernel<W: Write>(mut w: W, kernel: &Kernel) -> Result<()> {
    writeln!(w, "{KERNEL_HEADER}")?;
    for (i, k) in kernel.values().iter().enumerate() {
        writeln!(w, "{},{}", i + 1, fmt_f64(*k))?;
    }
    Ok(())
}

pub fn read_kernel<R: BufRead>(source: R) -> Result<Kernel> {
    let mut values = Vec::new();
    for (line, f) in rows(source, 2)? {
        let lag: usize = field(line, &f[0])?;
        if lag != values.len() + 1 {
            return Err(Error::MalformedRow {
                line,
                reason: format!("expected lag {}, found {lag}", values.len() + 1),
            });
        }
        values.push(field(line, &f[1])?);
    }
    Kernel::from_values(values)
}

/// JSON form of a [`DecoupleReport`], without the series itself.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DecoupleSummary {
    #[serde(rename = "C")]
    pub c: Option<f64>,
    pub frac_large_terms: f64,
    pub frac_factor_nonpositive: f64,
    pub mean_decoupled: f64,
    pub max_abs_sum: f64,
}

impl From<&DecoupleReport> for DecoupleSummary {
    fn from(r: &DecoupleReport) -> Self {
        Self {
            c: r.c_used,
            frac_large_terms: r.frac_large_terms,
            frac_factor_nonpositive: r.frac_factor_nonpositive,
            mean_decoupled: r.mean_decoupled,
            max_abs_sum: r.max_abs_sum,
        }
    }
}

pub fn to_json<T: Serialize>(value: &T) -> Result<String> {
    serde_json::to_string_pretty(value).map_err(|e| Error::Io(e.to_string()))
}

pub fn from_json<T: for<'de> Deserialize<'de>>(text: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| Error::Io(e.to_string()))
}
