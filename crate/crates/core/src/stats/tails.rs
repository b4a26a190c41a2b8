use serde::Serialize;
use statrs::function::gamma::ln_gamma;

use crate::channel::{sample_unit_vector, RandomUnitaryChannel};
use crate::linalg::CVector;
use crate::rng::{sample_blocks, RngStream};
use crate::state::UnitVector;
use crate::{Complex64, Error, Result};

/// Tail bound for a single eigenvalue of `G(z)` deviating from `1/d` by `t`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ConcentrationBound {
    pub log_value: f64,
    pub value: f64,
    /// The bound exceeds one and says nothing.
    pub vacuous: bool,
}

/// `exp[d² ln n − ln (d−1)! − ((n−d)/2) d² t² + ((n−d)/6) d³ t³]`.
pub fn concentration_tail_bound(d: usize, n: f64, t: f64) -> Result<ConcentrationBound> {
    let df = d as f64;
    if d == 0 || !(n >= df) {
        return Err(Error::Domain(format!("need n >= d >= 1, got n = {n}, d = {d}")));
    }
    if !(t >= 0.0) {
        return Err(Error::Domain(format!("t must be non-negative, got {t}")));
    }
    let spare = n - df;
    let log_value = df * df * n.ln() - ln_gamma(df) - spare / 2.0 * df * df * t * t
        + spare / 6.0 * df.powi(3) * t.powi(3);
    Ok(ConcentrationBound {
        log_value,
        value: log_value.exp(),
        vacuous: log_value > 0.0,
    })
}

/// `θ = x ψ + √(1 − |x|²) φ` with `φ ⟂ ψ`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OverlapDecomposition {
    pub x: Complex64,
    pub phi: UnitVector,
}

impl OverlapDecomposition {
    pub fn reconstruct(&self, psi: &UnitVector) -> CVector {
        let r = (1.0 - self.x.norm_sqr()).max(0.0).sqrt();
        psi.as_vector() * self.x + self.phi.as_vector() * Complex64::new(r, 0.0)
    }
}

const COLLINEAR: f64 = 1e-12;

pub fn overlap_decompose(theta: &UnitVector, psi: &UnitVector) -> Result<OverlapDecomposition> {
    let n = psi.dim();
    if theta.dim() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: theta.dim(),
        });
    }
    if n < 2 {
        return Err(Error::InvalidDimension(
            "no unit vector is orthogonal to a state in dimension 1".into(),
        ));
    }
    let x = psi.inner(theta);
    let residual = theta.as_vector() - psi.as_vector() * x;
    let phi = if residual.norm() > COLLINEAR {
        UnitVector::normalize(residual)?
    } else {
        // any orthogonal direction: project the basis vector least aligned with ψ
        let k = (0..n)
            .min_by(|&a, &b| psi.as_vector()[a].norm().total_cmp(&psi.as_vector()[b].norm()))
            .unwrap_or(0);
        let e = UnitVector::basis(n, k)?;
        let c = psi.inner(&e);
        UnitVector::normalize(e.as_vector() - psi.as_vector() * c)?
    };
    Ok(OverlapDecomposition { x, phi })
}

/// `P(|⟨ψ,θ⟩| > t) = (1 − t²)^{n−1}` for uniform `θ` in `C^n`.
pub fn overlap_tail(n: usize, t: f64) -> Result<f64> {
    if n == 0 {
        return Err(Error::InvalidDimension("n must be positive".into()));
    }
    if !(0.0..=1.0).contains(&t) {
        return Err(Error::Domain(format!("t must lie in [0,1], got {t}")));
    }
    Ok((1.0 - t * t).powi(n as i32 - 1))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CrossTermPoint {
    pub t: f64,
    pub empirical: f64,
    pub stderr: f64,
    /// `d² (1 − t²)^{n−1}`.
    pub bound: f64,
    /// The bound is below one.
    pub informative: bool,
    /// `empirical ≤ bound + 3σ`, with `σ` the binomial spread at the bound.
    pub holds: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CrossTermTail {
    pub count: usize,
    pub points: Vec<CrossTermPoint>,
    /// Largest Frobenius norm observed; never above one.
    pub max_norm: f64,
}

impl CrossTermTail {
    pub fn all_hold(&self) -> bool {
        self.points.iter().all(|p| p.holds)
    }
}

/// Empirical tail of `‖Φ^C(|θ⟩⟨ψ|)‖₂` over uniform `θ`, checked against
/// `d² (1 − t²)^{n−1}` at each `t`.
pub fn cross_term_tail_check(
    channel: &RandomUnitaryChannel,
    psi: &UnitVector,
    ts: &[f64],
    count: usize,
    rng: &RngStream,
) -> Result<CrossTermTail> {
    let (n, d) = (channel.n(), channel.d());
    if count == 0 {
        return Err(Error::InvalidDimension("count must be positive".into()));
    }
    let norms: Vec<f64> = sample_blocks(count, rng, |s| -> Result<f64> {
        let theta = sample_unit_vector(n, s)?;
        Ok(channel.complementary_cross(&theta, psi)?.norm())
    })
    .into_iter()
    .collect::<Result<_>>()?;
    let m = count as f64;
    let points = ts
        .iter()
        .map(|&t| {
            let bound = (d * d) as f64 * overlap_tail(n, t)?;
            let empirical = norms.iter().filter(|&&v| v > t).count() as f64 / m;
            let stderr = (empirical * (1.0 - empirical) / m).sqrt();
            let informative = bound < 1.0;
            let sigma = (bound.min(1.0) * (1.0 - bound.min(1.0)) / m).sqrt();
            Ok(CrossTermPoint {
                t,
                empirical,
                stderr,
                bound,
                informative,
                holds: !informative || empirical <= bound + 3.0 * sigma,
            })
        })
        .collect::<Result<_>>()?;
    Ok(CrossTermTail {
        count,
        points,
        max_norm: norms.iter().copied().fold(0.0, f64::max),
    })
}
