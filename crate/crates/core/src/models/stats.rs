//! Summary statistics of simulated batches.

use crate::error::{domain, Result};
use crate::sampling::SampleBatch;

/// Asymptotic 1% critical value of the Kolmogorov distribution.
pub const KS_CRITICAL_1PCT: f64 = 1.627_61;

pub fn mean(x: &[f64]) -> f64 {
    x.iter().sum::<f64>() / x.len() as f64
}

/// Mean and its standard error.
pub fn mean_se(x: &[f64]) -> (f64, f64) {
    let n = x.len() as f64;
    let m = mean(x);
    let var = x.iter().map(|v| (v - m).powi(2)).sum::<f64>() / (n - 1.0);
    (m, (var / n).sqrt())
}

pub fn pearson(x: &[f64], y: &[f64]) -> Result<f64> {
    if x.len() != y.len() || x.len() < 2 {
        return domain("correlation needs two samples of equal length >= 2");
    }
    let (mx, my) = (mean(x), mean(y));
    let mut sxy = 0.0;
    let mut sxx = 0.0;
    let mut syy = 0.0;
    for (a, b) in x.iter().zip(y) {
        sxy += (a - mx) * (b - my);
        sxx += (a - mx).powi(2);
        syy += (b - my).powi(2);
    }
    if sxx == 0.0 || syy == 0.0 {
        return domain("correlation of a constant sample");
    }
    Ok(sxy / (sxx * syy).sqrt())
}

/// Pearson correlation with its delta-method standard error, built from the
/// sample standardized moments up to order four.
pub fn pearson_with_se(x: &[f64], y: &[f64]) -> Result<(f64, f64)> {
    let rho = pearson(x, y)?;
    let n = x.len() as f64;
    let (mx, my) = (mean(x), mean(y));
    let sx = (x.iter().map(|a| (a - mx).powi(2)).sum::<f64>() / n).sqrt();
    let sy = (y.iter().map(|b| (b - my).powi(2)).sum::<f64>() / n).sqrt();
    // m[j][k] = E[zx^j zy^k] for j + k = 4
    let mut m = [0.0; 5];
    for (a, b) in x.iter().zip(y) {
        let (u, v) = ((a - mx) / sx, (b - my) / sy);
        let (u2, v2) = (u * u, v * v);
        m[0] += u2 * u2;
        m[1] += u2 * u * v;
        m[2] += u2 * v2;
        m[3] += u * v * v2;
        m[4] += v2 * v2;
    }
    let m = m.map(|t| t / n);
    let var = m[2] * (1.0 + rho * rho / 2.0) + rho * rho * (m[0] + m[4]) / 4.0 - rho * (m[1] + m[3]);
    Ok((rho, (var.max(0.0) / n).sqrt()))
}

/// Pearson correlation of the logarithms of the first two columns.
pub fn log_correlation(batch: &SampleBatch) -> Result<f64> {
    if batch.columns < 2 {
        return domain("log-correlation needs two columns");
    }
    let logs = |k: usize| -> Result<Vec<f64>> {
        batch
            .column(k)
            .into_iter()
            .map(|v| if v > 0.0 { Ok(v.ln()) } else { domain(format!("nonpositive draw {v}")) })
            .collect()
    };
    pearson(&logs(0)?, &logs(1)?)
}

/// Empirical `p`-quantile (lower order statistic).
pub fn quantile(x: &[f64], p: f64) -> f64 {
    let mut s = x.to_vec();
    s.sort_by(f64::total_cmp);
    let k = ((p * s.len() as f64).ceil() as usize).clamp(1, s.len()) - 1;
    s[k]
}

/// `P(X₂ > q₂ | X₁ > q₁)` with `q_k` the empirical `level`-quantile of column `k`.
pub fn conditional_exceedance(batch: &SampleBatch, level: f64) -> f64 {
    let x = batch.column(0);
    let y = batch.column(1);
    let (qx, qy) = (quantile(&x, level), quantile(&y, level));
    let over: Vec<bool> = x.iter().map(|&v| v > qx).collect();
    let n1 = over.iter().filter(|&&b| b).count();
    let both = over.iter().zip(&y).filter(|(&b, &v)| b && v > qy).count();
    both as f64 / n1.max(1) as f64
}

/// `sup |F_n - F|`.
pub fn ks_statistic<F: Fn(f64) -> f64>(sample: &[f64], cdf: F) -> f64 {
    let mut s = sample.to_vec();
    s.sort_by(f64::total_cmp);
    let n = s.len() as f64;
    s.iter()
        .enumerate()
        .map(|(i, &x)| {
            let f = cdf(x);
            (f - i as f64 / n).abs().max(((i + 1) as f64 / n - f).abs())
        })
        .fold(0.0, f64::max)
}

/// `sup |F_n - G_m|`.
pub fn ks_two_sample(a: &[f64], b: &[f64]) -> f64 {
    let mut x = a.to_vec();
    let mut y = b.to_vec();
    x.sort_by(f64::total_cmp);
    y.sort_by(f64::total_cmp);
    let (n, m) = (x.len() as f64, y.len() as f64);
    let (mut i, mut j) = (0, 0);
    let mut d: f64 = 0.0;
    while i < x.len() && j < y.len() {
        let v = x[i].min(y[j]);
        while i < x.len() && x[i] <= v {
            i += 1;
        }
        while j < y.len() && y[j] <= v {
            j += 1;
        }
        d = d.max((i as f64 / n - j as f64 / m).abs());
    }
    d
}

pub fn ks_critical_one_sample(n: usize) -> f64 {
    KS_CRITICAL_1PCT / (n as f64).sqrt()
}

pub fn ks_critical_two_sample(n: usize, m: usize) -> f64 {
    let (n, m) = (n as f64, m as f64);
    KS_CRITICAL_1PCT * ((n + m) / (n * m)).sqrt()
}
