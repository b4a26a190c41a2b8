//! Kolmogorov–Smirnov statistics and the exact null law of the equal-size
//! two-sample statistic.

use serde::Serialize;
use statrs::function::gamma::ln_gamma;

use crate::{Error, Result};

/// `sup_x |F_N(x) − F(x)|` for a sample against a continuous CDF.
pub fn one_sample<F: Fn(f64) -> f64>(sample: &[f64], cdf: F) -> f64 {
    let mut sorted = sample.to_vec();
    sorted.sort_by(f64::total_cmp);
    let cdf_values: Vec<f64> = sorted.iter().map(|&x| cdf(x)).collect();
    one_sample_sorted(&sorted, &cdf_values)
}

/// The one-sample statistic given a sorted sample and the CDF at each point.
pub fn one_sample_sorted(sorted: &[f64], cdf_values: &[f64]) -> f64 {
    let m = sorted.len() as f64;
    cdf_values
        .iter()
        .enumerate()
        .map(|(i, &f)| (f - i as f64 / m).max((i + 1) as f64 / m - f))
        .fold(0.0, f64::max)
}

/// `sup_x |F_a(x) − F_b(x)|` between two empirical CDFs.
pub fn two_sample(a: &[f64], b: &[f64]) -> f64 {
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    a.sort_by(f64::total_cmp);
    b.sort_by(f64::total_cmp);
    let (na, nb) = (a.len() as f64, b.len() as f64);
    let (mut i, mut j) = (0, 0);
    let mut d: f64 = 0.0;
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

fn ln_binomial(n: f64, k: f64) -> f64 {
    ln_gamma(n + 1.0) - ln_gamma(k + 1.0) - ln_gamma(n - k + 1.0)
}

/// `P(D ≥ k/N)` under the null for two samples of equal size `N` without ties:
/// `(2 / C(2N,N)) Σ_{j≥1} (−1)^{j−1} C(2N, N − jk)`.
pub fn two_sample_equal_tail(size: usize, k: usize) -> Result<f64> {
    if size == 0 {
        return Err(Error::InvalidDimension("sample size must be positive".into()));
    }
    if k == 0 {
        return Ok(1.0);
    }
    if k > size {
        return Ok(0.0);
    }
    let n = size as f64;
    let centre = ln_binomial(2.0 * n, n);
    let mut sum = 0.0;
    for j in 1..=(size / k) {
        let term = (ln_binomial(2.0 * n, n - (j * k) as f64) - centre).exp();
        if term == 0.0 {
            break;
        }
        sum += if j % 2 == 1 { term } else { -term };
    }
    Ok((2.0 * sum).clamp(0.0, 1.0))
}

/// Smallest lattice threshold `k/N` with null tail `P(D ≥ k/N) ≤ alpha`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CriticalValue {
    pub size: usize,
    pub alpha: f64,
    pub k: usize,
    pub threshold: f64,
    /// Exact null probability of reaching the threshold.
    pub tail: f64,
}

pub fn two_sample_equal_critical(size: usize, alpha: f64) -> Result<CriticalValue> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::Domain(format!("alpha must lie in (0,1), got {alpha}")));
    }
    // the tail is decreasing in k
    let (mut lo, mut hi) = (1, size + 1);
    while lo < hi {
        let mid = (lo + hi) / 2;
        if two_sample_equal_tail(size, mid)? <= alpha {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    Ok(CriticalValue {
        size,
        alpha,
        k: lo,
        threshold: lo as f64 / size as f64,
        tail: two_sample_equal_tail(size, lo)?,
    })
}
