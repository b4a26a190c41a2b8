use rayon::prelude::*;
use serde::Serialize;

use super::md::m_d;
use crate::entropy::{golden_section_min, kl1};
use crate::{Error, Result};

const TWO_E2: f64 = 2.0 * std::f64::consts::E * std::f64::consts::E;

fn check_gamma(gamma: f64) -> Result<()> {
    if !(gamma > 0.0 && gamma < 1.0) {
        return Err(Error::Domain(format!("gamma must lie in (0,1), got {gamma}")));
    }
    Ok(())
}

/// Number of interior grid points `k/m`, `k = 1..m−1`, for a grid step.
fn grid_size(resolution: f64) -> Result<usize> {
    if !(resolution > 0.0 && resolution <= 1e-3) {
        return Err(Error::Domain(format!("grid resolution must lie in (0, 1e-3], got {resolution}")));
    }
    Ok((1.0 / resolution).round() as usize)
}

const RATIO_R_POINTS: usize = 1001;

/// Grid maximum of `f(x) / f(r x + 1 − r)` over `x` in `grid` and `r ∈ [γ, 1]`.
/// At `x = 1` the ratio is replaced by its limit `1/r²`.
pub fn f_ratio_sup(gamma: f64, grid: &[f64]) -> Result<f64> {
    check_gamma(gamma)?;
    if grid.is_empty() || grid.iter().any(|&x| !(x >= 0.0)) {
        return Err(Error::Domain("x grid must be non-empty and non-negative".into()));
    }
    let mut sup: f64 = 0.0;
    for k in 0..RATIO_R_POINTS {
        let r = gamma + (1.0 - gamma) * k as f64 / (RATIO_R_POINTS - 1) as f64;
        for &x in grid {
            let ratio = if x == 1.0 {
                1.0 / (r * r)
            } else {
                kl1(x) / kl1(r * x + 1.0 - r)
            };
            sup = sup.max(ratio);
        }
    }
    Ok(sup)
}

/// `(2e² − γ) / ((1 − γ) f(1 − γ))`.
pub fn h_min_curve(gamma: f64) -> Result<f64> {
    check_gamma(gamma)?;
    Ok((TWO_E2 - gamma) / ((1.0 - gamma) * kl1(1.0 - gamma)))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HMinResult {
    pub gamma_star: f64,
    pub h_min: f64,
    /// `2 h_min + 1`, the log of the crude dimension threshold.
    pub log_dimension: f64,
    pub grid_resolution: f64,
}

/// Grid scan then golden-section refinement to `1e-6`.
pub fn minimize_h_min(grid_resolution: f64) -> Result<HMinResult> {
    let m = grid_size(grid_resolution)?;
    let mut best = (f64::NAN, f64::INFINITY);
    for k in 1..m {
        let g = k as f64 / m as f64;
        let h = h_min_curve(g)?;
        if h < best.1 {
            best = (g, h);
        }
    }
    let step = 1.0 / m as f64;
    let lo = (best.0 - step).max(0.5 * step);
    let hi = (best.0 + step).min(1.0 - 0.5 * step);
    let (gamma_star, h_min) = golden_section_min(|g| (TWO_E2 - g) / ((1.0 - g) * kl1(1.0 - g)), lo, hi, 1e-6);
    Ok(HMinResult {
        gamma_star,
        h_min,
        log_dimension: 2.0 * h_min + 1.0,
        grid_resolution,
    })
}

/// `M_d(f(1−γ)/2 · ln d) + ln(1 − γ)`; positive means the condition holds.
pub fn counterexample_margin(d: usize, gamma: f64) -> Result<f64> {
    check_gamma(gamma)?;
    if d < 2 {
        return Err(Error::Domain(format!("need d >= 2, got {d}")));
    }
    let df = d as f64;
    let x = kl1(1.0 - gamma) / 2.0 * df.ln();
    if x > df * df.ln() {
        return Err(Error::Domain(format!("argument {x} exceeds d ln d")));
    }
    Ok(m_d(x, d)?.value + (1.0 - gamma).ln())
}

pub fn counterexample_condition(d: usize, gamma: f64) -> Result<bool> {
    Ok(counterexample_margin(d, gamma)? > 0.0)
}

/// Dimensions above this are not searched.
pub const DIMENSION_CAP: usize = 1 << 45;

/// Smallest `d` satisfying the condition at `gamma`, found by doubling then
/// bisection, or `None` below [`DIMENSION_CAP`].
pub fn smallest_dimension(gamma: f64) -> Result<Option<usize>> {
    if counterexample_condition(2, gamma)? {
        return Ok(Some(2));
    }
    let mut below = 2;
    let mut above = 4;
    while !counterexample_condition(above, gamma)? {
        below = above;
        above *= 2;
        if above > DIMENSION_CAP {
            return Ok(None);
        }
    }
    while above - below > 1 {
        let mid = below + (above - below) / 2;
        if counterexample_condition(mid, gamma)? {
            above = mid;
        } else {
            below = mid;
        }
    }
    Ok(Some(above))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SearchResult {
    pub gamma_star: f64,
    pub d_star: usize,
    /// The minimized objective, `d_star` as a real.
    pub objective: f64,
    pub grid_resolution: f64,
    /// Condition margin at `(gamma_star, d_star)`, positive.
    pub margin: f64,
    /// Condition margin at `(gamma_star, d_star − 1)`, non-positive.
    pub margin_below: f64,
}

/// Minimizes the smallest feasible dimension over the grid `γ = k·resolution`.
/// Ties go to the smaller `γ`.
pub fn dmin_search(grid_resolution: f64) -> Result<SearchResult> {
    let m = grid_size(grid_resolution)?;
    let per_gamma: Vec<(usize, Option<usize>)> = (1..m)
        .into_par_iter()
        .map(|k| smallest_dimension(k as f64 / m as f64).map(|d| (k, d)))
        .collect::<Result<_>>()?;
    let (k, d_star) = per_gamma
        .into_iter()
        .filter_map(|(k, d)| d.map(|d| (k, d)))
        .min_by(|a, b| a.1.cmp(&b.1).then(a.0.cmp(&b.0)))
        .ok_or_else(|| Error::Consistency("no grid point admits a feasible dimension".into()))?;
    let gamma_star = k as f64 / m as f64;
    let margin = counterexample_margin(d_star, gamma_star)?;
    let margin_below = if d_star > 2 {
        counterexample_margin(d_star - 1, gamma_star)?
    } else {
        f64::NEG_INFINITY
    };
    if !(margin > 0.0 && margin_below <= 0.0) {
        return Err(Error::Consistency(format!(
            "d = {d_star} is not minimal at gamma = {gamma_star}: margins {margin}, {margin_below}"
        )));
    }
    Ok(SearchResult {
        gamma_star,
        d_star,
        objective: d_star as f64,
        grid_resolution,
        margin,
        margin_below,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DeltaSMax {
    pub h: f64,
    pub d: usize,
    pub gamma: f64,
    /// `M_d(f(1−γ) h) + ln(1 − γ)`, positive.
    pub margin: f64,
    /// `1/d`.
    pub value: f64,
}

pub const DELTA_S_BASE_DIMENSION: f64 = 38590.0;
pub const DELTA_S_GAMMA: f64 = 0.762;

/// With `h = ln(38590)/2` and `d = ⌊exp(2h + 1)⌋`, checks the counterexample
/// inequality at `γ = 0.762` and returns `1/d`.
pub fn delta_s_max_bound() -> Result<DeltaSMax> {
    let h = DELTA_S_BASE_DIMENSION.ln() / 2.0;
    let d = (2.0 * h + 1.0).exp().floor() as usize;
    let gamma = DELTA_S_GAMMA;
    let margin = m_d(kl1(1.0 - gamma) * h, d)?.value + (1.0 - gamma).ln();
    if !(margin > 0.0) {
        return Err(Error::Consistency(format!(
            "counterexample inequality fails at d = {d}: margin {margin}"
        )));
    }
    Ok(DeltaSMax {
        h,
        d,
        gamma,
        margin,
        value: 1.0 / d as f64,
    })
}
