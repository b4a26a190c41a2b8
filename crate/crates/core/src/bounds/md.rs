use serde::Serialize;

use crate::entropy::kl1;
use crate::{Error, Result};

/// Solution of the one-dimensional reduction of `M_d(x)`: the minimizer puts
/// `d − 1` coordinates at a common level and one coordinate at `z/d`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MdSolution {
    pub x: f64,
    pub d: usize,
    pub z_star: f64,
    pub value: f64,
}

/// `ln((d − z)/(d − 1))`, accurate for `z` near 1 at huge `d`.
fn log_rest(z: f64, df: f64) -> f64 {
    (-(z - 1.0) / (df - 1.0)).ln_1p()
}

/// `z ln z + (d − z) ln((d − z)/(d − 1))`, increasing on `[1, d]` from 0 to `d ln d`.
pub fn md_constraint(z: f64, d: usize) -> f64 {
    let df = d as f64;
    if z >= df {
        return df * df.ln();
    }
    z * z.ln() + (df - z) * log_rest(z, df)
}

/// `−ln z − (d − 1) ln((d − z)/(d − 1))`.
pub fn md_objective(z: f64, d: usize) -> f64 {
    let df = d as f64;
    if z >= df {
        return f64::INFINITY;
    }
    -z.ln() - (df - 1.0) * log_rest(z, df)
}

/// `M_d(x) = inf { Σ F(q_i d) : q ∈ Δ_d, Σ f(q_i d) ≥ x }` for `0 ≤ x ≤ d ln d`,
/// solved by bisection on the reduced constraint down to adjacent floats.
pub fn m_d(x: f64, d: usize) -> Result<MdSolution> {
    if d < 2 {
        return Err(Error::Domain(format!("M_d needs d >= 2, got {d}")));
    }
    let df = d as f64;
    let top = df * df.ln();
    if !(x >= 0.0) || x > top {
        return Err(Error::Domain(format!("M_d argument {x} outside [0, {top}] for d = {d}")));
    }
    if x == 0.0 {
        return Ok(MdSolution {
            x,
            d,
            z_star: 1.0,
            value: 0.0,
        });
    }
    let (mut lo, mut hi) = (1.0, df);
    loop {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if md_constraint(mid, d) < x {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let z_star = if (md_constraint(lo, d) - x).abs() <= (md_constraint(hi, d) - x).abs() {
        lo
    } else {
        hi
    };
    Ok(MdSolution {
        x,
        d,
        z_star,
        value: md_objective(z_star, d),
    })
}

fn itakura_saito(y: f64) -> f64 {
    if y <= 0.0 {
        f64::INFINITY
    } else {
        y - 1.0 - y.ln()
    }
}

/// Zoom passes after the coarse grid, each refining the step tenfold.
const ORACLE_ZOOM_PASSES: usize = 3;

/// Direct grid minimization over the simplex for `d ∈ {2, 3}`: a full grid of
/// step `grid_step`, then local grids around the incumbent.
pub fn m_d_oracle(x: f64, d: usize, grid_step: f64) -> Result<f64> {
    if !(grid_step > 0.0 && grid_step <= 0.5) {
        return Err(Error::Domain(format!("grid step {grid_step} outside (0, 0.5]")));
    }
    if !(d == 2 || d == 3) {
        return Err(Error::Domain(format!("grid oracle only supports d = 2 or 3, got {d}")));
    }
    let df = d as f64;
    // free coordinates; the last one is 1 minus their sum
    let score = |free: &[f64]| -> f64 {
        let last = 1.0 - free.iter().sum::<f64>();
        if last < -1e-15 || free.iter().any(|&q| q < 0.0) {
            return f64::INFINITY;
        }
        let last = last.max(0.0);
        let q = free.iter().copied().chain(std::iter::once(last));
        let spread: f64 = q.clone().map(|qi| kl1(qi * df)).sum();
        if spread >= x {
            q.map(|qi| itakura_saito(qi * df)).sum()
        } else {
            f64::INFINITY
        }
    };
    let m = (1.0 / grid_step).round() as usize;
    let mut best = (f64::INFINITY, vec![1.0 / df; d - 1]);
    let consider = |free: Vec<f64>, best: &mut (f64, Vec<f64>)| {
        let v = score(&free);
        if v < best.0 {
            *best = (v, free);
        }
    };
    for i in 0..=m {
        let q1 = i as f64 / m as f64;
        if d == 2 {
            consider(vec![q1], &mut best);
        } else {
            for j in 0..=(m - i) {
                consider(vec![q1, j as f64 / m as f64], &mut best);
            }
        }
    }
    let mut window = 1.0 / m as f64;
    for _ in 0..ORACLE_ZOOM_PASSES {
        if !best.0.is_finite() {
            break;
        }
        let centre = best.1.clone();
        let step = window / 10.0;
        for i in -10i32..=10 {
            let q1 = centre[0] + i as f64 * step;
            if d == 2 {
                consider(vec![q1], &mut best);
            } else {
                for j in -10i32..=10 {
                    consider(vec![q1, centre[1] + j as f64 * step], &mut best);
                }
            }
        }
        window = step;
    }
    Ok(best.0)
}

/// `dQ/dt` for `Q(w, z, t) = −t ln w − (1−t) ln z` moved along the constraint
/// manifold `t w ln w + (1−t) z ln z = const`, `t w + (1−t) z = 1`.
///
/// Closed form `−[(z−w)²/(zw) − ln²(z/w)] / ln(z/w)`.
pub fn level_split_slope(w: f64, z: f64) -> f64 {
    let l = (z / w).ln();
    -((z - w).powi(2) / (z * w) - l * l) / l
}
