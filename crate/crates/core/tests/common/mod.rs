//! Direct evaluations of the estimator definitions, used as independent
//! oracles. Plain nested loops and naive summation on purpose.
#![allow(dead_code)]

pub fn leverage_oracle(r: &[f64], max_lag: usize) -> Vec<f64> {
    let n = r.len();
    let mut z = 0.0;
    for &x in r {
        z += x * x;
    }
    z /= n as f64;
    z *= z;
    let mut out = Vec::new();
    for t in 1..=max_lag {
        let mut s = 0.0;
        for i in 0..n - t {
            s += r[i] * r[i + t].abs().powi(2);
        }
        out.push(s / (n - t) as f64 / z);
    }
    out
}

/// Scale for relative comparison: the mean magnitude of the summands.
pub fn leverage_scale(r: &[f64], t: usize) -> f64 {
    let n = r.len();
    let z = (r.iter().map(|x| x * x).sum::<f64>() / n as f64).powi(2);
    (0..n - t)
        .map(|i| (r[i] * r[i + t] * r[i + t]).abs())
        .sum::<f64>()
        / (n - t) as f64
        / z
}

pub fn autocorr_oracle(r: &[f64], max_lag: usize) -> Vec<f64> {
    let n = r.len();
    let mut m1 = 0.0;
    let mut m2 = 0.0;
    for &x in r {
        m1 += x.abs();
        m2 += x * x;
    }
    m1 /= n as f64;
    m2 /= n as f64;
    let a0 = m2 - m1 * m1;
    let mut out = Vec::new();
    for t in 1..=max_lag {
        let mut s = 0.0;
        for i in 0..n - t {
            s += r[i].abs() * r[i + t].abs();
        }
        out.push((s / (n - t) as f64 - m1 * m1) / a0);
    }
    out
}

pub fn persistence_oracle(r: &[f64], max_lag: usize, below: bool) -> Vec<f64> {
    let n = r.len();
    let mut out = Vec::new();
    for t in 1..=max_lag {
        let mut hits = 0usize;
        for start in 0..n - t {
            let mut ok = true;
            for k in 1..=t {
                let (a, b) = (r[start + k].abs(), r[start].abs());
                if (below && !(a < b)) || (!below && !(a > b)) {
                    ok = false;
                    break;
                }
            }
            if ok {
                hits += 1;
            }
        }
        out.push(hits as f64 / (n - t) as f64);
    }
    out
}

/// Two-sample Kolmogorov-Smirnov statistic.
pub fn ks_distance(a: &[f64], b: &[f64]) -> f64 {
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    a.sort_by(f64::total_cmp);
    b.sort_by(f64::total_cmp);
    let (na, nb) = (a.len() as f64, b.len() as f64);
    let (mut i, mut j, mut d) = (0usize, 0usize, 0.0f64);
    while i < a.len() && j < b.len() {
        let x = a[i].min(b[j]);
        while i < a.len() && a[i] <= x {
            i += 1;
        }
        while j < b.len() && b[j] <= x {
            j += 1;
        }
        d = d.max((i as f64 / na - j as f64 / nb).abs());
    }
    d
}

pub fn mean(x: &[f64]) -> f64 {
    x.iter().sum::<f64>() / x.len() as f64
}

pub fn close(a: f64, b: f64, rel: f64, scale: f64) -> bool {
    (a - b).abs() <= rel * scale.max(b.abs()).max(f64::MIN_POSITIVE)
}
