use serde::Serialize;
use statrs::function::gamma::ln_gamma;

use crate::quadrature::GaussLegendre;
use crate::{Error, Result};

/// `ln Z(n, d)` with `Z = Π_{k=1..d} Γ(n−d+k) Γ(k+1) / Γ(dn)`, the
/// normalization of `Π_{i<j}(w_i − w_j)² Π w_i^{n−d}` over the simplex.
pub fn exact_log_z(n: usize, d: usize) -> Result<f64> {
    if d == 0 || n < d {
        return Err(Error::Domain(format!("need n >= d >= 1, got n = {n}, d = {d}")));
    }
    let (nf, df) = (n as f64, d as f64);
    let mut log_z = -ln_gamma(df * nf);
    for k in 1..=d {
        let kf = k as f64;
        log_z += ln_gamma(nf - df + kf) + ln_gamma(kf + 1.0);
    }
    Ok(log_z)
}

/// The closed-form bound `ln(Z⁻¹) ≤ d² ln n + d(n−d) ln d`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ZInverseBound {
    pub value: f64,
    /// The derivation's side condition `ln n − ln d ≥ 4`.
    pub side_condition_met: bool,
}

pub fn z_inverse_bound(n: usize, d: usize) -> Result<ZInverseBound> {
    if d == 0 || n < d {
        return Err(Error::Domain(format!("need n >= d >= 1, got n = {n}, d = {d}")));
    }
    let (nf, df) = (n as f64, d as f64);
    Ok(ZInverseBound {
        value: df * df * nf.ln() + df * (nf - df) * df.ln(),
        side_condition_met: nf.ln() - df.ln() >= 4.0,
    })
}

/// Log-density of `μ_{d,n}` with respect to the flat simplex measure.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DensityEvaluation {
    pub log_density: f64,
    pub log_z: f64,
    pub in_support: bool,
}

/// Evaluates the eigenvalue density at `w`. The density is symmetric, so only
/// permutation-invariant events are meaningful.
pub fn mu_log_density(w: &[f64], n: usize) -> Result<DensityEvaluation> {
    let d = w.len();
    let log_z = exact_log_z(n, d)?;
    let sum: f64 = w.iter().sum();
    if w.iter().any(|&x| x < 0.0 || !x.is_finite()) || (sum - 1.0).abs() > 1e-10 {
        return Ok(DensityEvaluation {
            log_density: f64::NEG_INFINITY,
            log_z,
            in_support: false,
        });
    }
    let mut log_density = -log_z;
    for i in 0..d {
        for j in (i + 1)..d {
            log_density += 2.0 * (w[i] - w[j]).abs().ln();
        }
    }
    let power = (n - d) as f64;
    if power > 0.0 {
        log_density += power * w.iter().map(|x| x.ln()).sum::<f64>();
    }
    Ok(DensityEvaluation {
        log_density,
        log_z,
        in_support: true,
    })
}

fn mu2_density(p: f64, n: usize, log_z: f64) -> f64 {
    let q = 1.0 - p;
    if p <= 0.0 || q <= 0.0 {
        return if n == 2 { (2.0 * p - 1.0).powi(2) * (-log_z).exp() } else { 0.0 };
    }
    let power = (n - 2) as f64;
    (2.0 * (2.0 * p - 1.0).abs().ln() + power * (p.ln() + q.ln()) - log_z).exp()
}

const CDF_RULE_POINTS: usize = 16;

/// CDF of the largest eigenvalue under `μ_{2,n}` at `x ∈ [1/2, 1]`, by
/// Gauss–Legendre quadrature of the analytic density.
pub fn mu2_max_eigenvalue_cdf(n: usize, x: f64) -> Result<f64> {
    Ok(mu2_max_eigenvalue_cdf_sorted(n, &[x])?[0])
}

/// The same CDF at a non-decreasing list of points, integrating panel by panel.
pub fn mu2_max_eigenvalue_cdf_sorted(n: usize, xs: &[f64]) -> Result<Vec<f64>> {
    if n < 2 {
        return Err(Error::Domain(format!("need n >= 2, got {n}")));
    }
    let log_z = exact_log_z(n, 2)?;
    let rule = GaussLegendre::new(CDF_RULE_POINTS);
    // panels fine enough for the polynomial degree 2n-2
    let min_panels = (n / 8).max(1);
    let density = |p: f64| 2.0 * mu2_density(p, n, log_z);
    let mut out = Vec::with_capacity(xs.len());
    let mut acc = 0.0;
    let mut prev = 0.5;
    for &x in xs {
        let x = x.clamp(0.5, 1.0);
        if x < prev {
            return Err(Error::Domain("evaluation points must be sorted".into()));
        }
        let width = x - prev;
        if width > 0.0 {
            let panels = ((width * 2.0 * min_panels as f64).ceil() as usize).max(1);
            acc += rule.integrate_composite(density, prev, x, panels);
        }
        prev = x;
        out.push(acc.min(1.0));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn log_z_small_cases() {
        for n in [1, 2, 10, 1000] {
            assert!(exact_log_z(n, 1).unwrap().abs() < 1e-12);
        }
        assert!((exact_log_z(2, 2).unwrap() - (1.0f64 / 3.0).ln()).abs() < 1e-14);
        assert!(matches!(exact_log_z(2, 3), Err(Error::Domain(_))));
    }

    #[test]
    fn z_bound_with_side_condition() {
        let b = z_inverse_bound(100, 2).unwrap();
        assert!(!b.side_condition_met);
        assert!(-exact_log_z(100, 2).unwrap() <= b.value);
        let b = z_inverse_bound(200, 2).unwrap();
        assert!(b.side_condition_met);
        assert!(-exact_log_z(200, 2).unwrap() <= b.value);
    }

    #[test]
    fn density_hand_values() {
        let e = mu_log_density(&[0.75, 0.25], 2).unwrap();
        assert!((e.log_density.exp() - 0.75).abs() < 1e-14);
        let tie = mu_log_density(&[0.5, 0.5], 4).unwrap();
        assert_eq!(tie.log_density, f64::NEG_INFINITY);
        assert!(tie.in_support);
        let out = mu_log_density(&[1.2, -0.2], 4).unwrap();
        assert!(!out.in_support);
    }

    #[test]
    fn max_eigenvalue_cdf_endpoints() {
        for n in [2, 5, 40] {
            let v = mu2_max_eigenvalue_cdf_sorted(n, &[0.5, 0.75, 1.0]).unwrap();
            assert_eq!(v[0], 0.0);
            assert!(v[1] > 0.0 && v[1] < 1.0);
            assert!((v[2] - 1.0).abs() < 1e-12, "n = {n}: {}", v[2]);
        }
    }
}
