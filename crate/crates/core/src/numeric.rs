/// Neumaier-compensated running sum.
///
/// All estimator averages go through this accumulator in index order, so
/// results are reproducible and carry roughly twice the working precision.
#[derive(Debug, Clone, Copy, Default)]
pub(crate) struct Accumulator {
    sum: f64,
    compensation: f64,
}

impl Accumulator {
    pub(crate) fn new() -> Self {
        Self::default()
    }

    #[inline]
    pub(crate) fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.compensation += (self.sum - t) + x;
        } else {
            self.compensation += (x - t) + self.sum;
        }
        self.sum = t;
    }

    #[inline]
    pub(crate) fn total(&self) -> f64 {
        self.sum + self.compensation
    }
}

pub(crate) fn sum<I: IntoIterator<Item = f64>>(values: I) -> f64 {
    let mut acc = Accumulator::new();
    for v in values {
        acc.add(v);
    }
    acc.total()
}

pub(crate) fn mean(values: &[f64]) -> f64 {
    sum(values.iter().copied()) / values.len() as f64
}

/// Mean and population standard deviation (two-pass).
pub(crate) fn mean_and_std(values: &[f64]) -> (f64, f64) {
    let m = mean(values);
    let var = sum(values.iter().map(|&x| (x - m) * (x - m))) / values.len() as f64;
    (m, var.sqrt())
}

/// Ordinary least squares of `y` on `x`: (intercept, slope, slope standard error).
pub(crate) fn linear_regression(x: &[f64], y: &[f64]) -> (f64, f64, f64) {
    let n = x.len() as f64;
    let mx = mean(x);
    let my = mean(y);
    let sxx = sum(x.iter().map(|&a| (a - mx) * (a - mx)));
    let sxy = sum(x.iter().zip(y).map(|(&a, &b)| (a - mx) * (b - my)));
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let stderr = if x.len() > 2 {
        let ssr = sum(x
            .iter()
            .zip(y)
            .map(|(&a, &b)| (b - intercept - slope * a).powi(2)));
        (ssr / (n - 2.0) / sxx).sqrt()
    } else {
        0.0
    };
    (intercept, slope, stderr)
}
