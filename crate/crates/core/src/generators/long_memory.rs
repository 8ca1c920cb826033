use rustfft::num_complex::Complex;
use rustfft::FftPlanner;

use crate::error::{Error, Result};
use crate::noise::Noise;

fn autocovariance(k: usize, hurst: f64) -> f64 {
    let h2 = 2.0 * hurst;
    let k = k as f64;
    0.5 * ((k + 1.0).powf(h2) - 2.0 * k.powf(h2) + (k - 1.0).abs().powf(h2))
}

/// Unit-variance fractional Gaussian noise of length `n` by circulant
/// embedding of its autocovariance.
pub fn fractional_gaussian_noise(n: usize, hurst: f64, noise: &mut Noise) -> Result<Vec<f64>> {
    if n == 0 {
        return Ok(Vec::new());
    }
    let m = 2 * n;
    // first row of the circulant: gamma(0..=n) followed by gamma(n-1..=1)
    let mut row: Vec<Complex<f64>> = (0..=n)
        .chain((1..n).rev())
        .map(|k| Complex::new(autocovariance(k, hurst), 0.0))
        .collect();
    let mut planner = FftPlanner::<f64>::new();
    let fft = planner.plan_fft_forward(m);
    fft.process(&mut row);

    let largest = row.iter().fold(0.0f64, |a, c| a.max(c.re.abs()));
    let mut weights = Vec::with_capacity(m);
    for c in &row {
        if c.re < -1e-9 * largest {
            return Err(Error::BadParameters(format!(
                "circulant embedding is not positive for hurst = {hurst}"
            )));
        }
        weights.push((c.re.max(0.0) / m as f64).sqrt());
    }
    let mut w: Vec<Complex<f64>> = weights
        .iter()
        .map(|&s| {
            let re = noise.normal();
            let im = noise.normal();
            Complex::new(s * re, s * im)
        })
        .collect();
    fft.process(&mut w);
    Ok(w[..n].iter().map(|c| c.re).collect())
}
