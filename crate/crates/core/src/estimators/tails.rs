use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Side of the return distribution.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Positive,
    Negative,
}

/// Log-binned density of `|r|` on one side of the distribution.
///
/// Densities are normalized by the total number of samples (both sides and
/// zeros), so they integrate to the fraction of samples on this side.
#[derive(Debug, Clone, PartialEq)]
pub struct TailHistogram {
    pub side: Side,
    pub bin_edges: Vec<f64>,
    pub densities: Vec<f64>,
    pub counts: Vec<usize>,
    pub total_count: usize,
}

impl TailHistogram {
    /// Geometric bin centers.
    pub fn centers(&self) -> Vec<f64> {
        self.bin_edges
            .windows(2)
            .map(|w| (w[0] * w[1]).sqrt())
            .collect()
    }

    pub fn widths(&self) -> Vec<f64> {
        self.bin_edges.windows(2).map(|w| w[1] - w[0]).collect()
    }
}

/// Histogram of the magnitudes on `side`, with `bins_per_decade` log-spaced
/// bins starting at the smallest magnitude and covering the largest.
pub fn tail_histogram(r: &[f64], side: Side, bins_per_decade: usize) -> Result<TailHistogram> {
    if bins_per_decade == 0 {
        return Err(Error::BadParameters(
            "bins_per_decade must be positive".into(),
        ));
    }
    let magnitudes: Vec<f64> = r
        .iter()
        .filter_map(|&x| match side {
            Side::Positive if x > 0.0 => Some(x),
            Side::Negative if x < 0.0 => Some(-x),
            _ => None,
        })
        .collect();
    if magnitudes.is_empty() {
        return Err(Error::EmptySide);
    }
    let lo = magnitudes.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = magnitudes.iter().copied().fold(0.0f64, f64::max);
    let per_decade = bins_per_decade as f64;
    let position = |x: f64| per_decade * (x / lo).log10();

    let n_bins = (position(hi).floor() as usize + 1).max(1);
    let bin_edges: Vec<f64> = (0..=n_bins)
        .map(|k| lo * 10f64.powf(k as f64 / per_decade))
        .collect();
    let mut counts = vec![0usize; n_bins];
    for &x in &magnitudes {
        let k = (position(x).floor() as usize).min(n_bins - 1);
        counts[k] += 1;
    }
    let total = r.len() as f64;
    let densities = counts
        .iter()
        .zip(bin_edges.windows(2))
        .map(|(&c, w)| c as f64 / (total * (w[1] - w[0])))
        .collect();
    Ok(TailHistogram {
        side,
        bin_edges,
        densities,
        counts,
        total_count: r.len(),
    })
}
