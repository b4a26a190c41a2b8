use serde::Serialize;

use super::ks;
use super::{gram_state, SpectrumSample};
use crate::bounds::beta_term;
use crate::channel::{sample_channel, sample_unit_vector, RandomUnitaryChannel};
use crate::entropy::{ball_membership, tube_membership, BallSpec, TubeSpec};
use crate::rng::{sample_blocks, RngStream};
use crate::state::UnitVector;
use crate::{Error, Result};

/// A Monte Carlo fraction with its binomial standard error.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Proportion {
    pub fraction: f64,
    pub stderr: f64,
}

impl Proportion {
    pub fn from_hits(hits: &[bool]) -> Self {
        let m = hits.len() as f64;
        let fraction = hits.iter().filter(|&&h| h).count() as f64 / m;
        Self {
            fraction,
            stderr: (fraction * (1.0 - fraction) / m).sqrt(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TypicalityEstimate {
    pub fraction: f64,
    pub stderr: f64,
    pub is_typical: bool,
    /// The fraction lies within three standard errors of 1/2.
    pub near_threshold: bool,
}

fn check_count(count: usize) -> Result<()> {
    if count == 0 {
        return Err(Error::InvalidDimension("count must be positive".into()));
    }
    Ok(())
}

/// Fraction of uniform inputs whose environment output lands in the ball.
pub fn typicality_estimate(
    channel: &RandomUnitaryChannel,
    spec: &BallSpec,
    count: usize,
    rng: &RngStream,
) -> Result<TypicalityEstimate> {
    check_count(count)?;
    if spec.d != channel.d() {
        return Err(Error::DimensionMismatch {
            expected: channel.d(),
            got: spec.d,
        });
    }
    let hits: Vec<bool> = sample_blocks(count, rng, |s| -> Result<bool> {
        let z = sample_unit_vector(channel.n(), s)?;
        ball_membership(&channel.complementary_pure(&z)?, spec)
    })
    .into_iter()
    .collect::<Result<_>>()?;
    let p = Proportion::from_hits(&hits);
    Ok(TypicalityEstimate {
        fraction: p.fraction,
        stderr: p.stderr,
        is_typical: p.fraction >= 0.5,
        near_threshold: (p.fraction - 0.5).abs() < 3.0 * p.stderr,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TubeHitEstimate {
    pub fraction: f64,
    pub stderr: f64,
    /// `β (1 − γ)^{n−1}`.
    pub analytic_floor: f64,
    pub beta: f64,
    pub typicality: TypicalityEstimate,
    /// `β > 0`, the channel looks typical, and `t ≥ b + 4`.
    pub floor_valid: bool,
    /// `fraction ≥ floor − 3σ`; only asserted when the floor is valid.
    pub floor_respected: Option<bool>,
}

/// Fraction of uniform inputs whose environment output falls in the tube
/// around `Φ^C(ψψ*)`. Hits use stream `child(0)`, typicality `child(1)`.
pub fn tube_hit_estimate(
    channel: &RandomUnitaryChannel,
    psi: &UnitVector,
    tube: &TubeSpec,
    ball: &BallSpec,
    count: usize,
    rng: &RngStream,
) -> Result<TubeHitEstimate> {
    check_count(count)?;
    if tube.d != channel.d() {
        return Err(Error::DimensionMismatch {
            expected: channel.d(),
            got: tube.d,
        });
    }
    let centre = channel.complementary_pure(psi)?;
    let hits: Vec<bool> = sample_blocks(count, &rng.child(0), |s| -> Result<bool> {
        let z = sample_unit_vector(channel.n(), s)?;
        tube_membership(&channel.complementary_pure(&z)?, &centre, tube)
    })
    .into_iter()
    .collect::<Result<_>>()?;
    let p = Proportion::from_hits(&hits);
    let typicality = typicality_estimate(channel, ball, count, &rng.child(1))?;
    let beta = beta_term(channel.d(), channel.n() as f64).value;
    let analytic_floor = if beta > 0.0 {
        beta * (1.0 - tube.gamma).powi(channel.n() as i32 - 1)
    } else {
        beta
    };
    let floor_valid = beta > 0.0 && typicality.is_typical && tube.t >= ball.b + 4.0;
    Ok(TubeHitEstimate {
        fraction: p.fraction,
        stderr: p.stderr,
        analytic_floor,
        beta,
        typicality,
        floor_valid,
        floor_respected: floor_valid.then_some(p.fraction >= analytic_floor - 3.0 * p.stderr),
    })
}

/// Two-sample comparison of environment spectra under random channels against
/// spectra of `G(z)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Lemma34Report {
    pub d: usize,
    pub n: usize,
    pub count: usize,
    /// Largest KS distance over the sorted eigenvalue coordinates.
    pub statistic: f64,
    pub coordinate_statistics: Vec<f64>,
    /// Per-coordinate significance after the Bonferroni split of `alpha`.
    pub coordinate_alpha: f64,
    pub alpha: f64,
    pub threshold: f64,
    pub passes: bool,
}

/// Family-wise level of [`lemma34_equivalence_test`].
pub const LEMMA34_ALPHA: f64 = 0.01;

/// Side (a) draws `(Φ, z)` on stream `child(0)`, side (b) draws `z ∈ C^{dn}` on
/// `child(1)`. The threshold is the exact equal-size null quantile.
pub fn lemma34_equivalence_test(d: usize, n: usize, count: usize, rng: &RngStream) -> Result<Lemma34Report> {
    check_count(count)?;
    if d == 0 || n == 0 {
        return Err(Error::InvalidDimension(format!("d = {d}, n = {n}")));
    }
    let channel_side: Vec<SpectrumSample> = sample_blocks(count, &rng.child(0), |s| {
        let channel = sample_channel(d, n, s)?;
        let z = sample_unit_vector(n, s)?;
        SpectrumSample::from_state(&channel.complementary_pure(&z)?)
    })
    .into_iter()
    .collect::<Result<_>>()?;
    let gram_side: Vec<SpectrumSample> = sample_blocks(count, &rng.child(1), |s| {
        let z = sample_unit_vector(d * n, s)?;
        SpectrumSample::from_state(&gram_state(&z, d)?)
    })
    .into_iter()
    .collect::<Result<_>>()?;
    let coordinate_statistics: Vec<f64> = (0..d)
        .map(|k| {
            let a: Vec<f64> = channel_side.iter().map(|s| s.values()[k]).collect();
            let b: Vec<f64> = gram_side.iter().map(|s| s.values()[k]).collect();
            ks::two_sample(&a, &b)
        })
        .collect();
    let statistic = coordinate_statistics.iter().copied().fold(0.0, f64::max);
    let coordinate_alpha = LEMMA34_ALPHA / d as f64;
    let threshold = ks::two_sample_equal_critical(count, coordinate_alpha)?.threshold;
    Ok(Lemma34Report {
        d,
        n,
        count,
        statistic,
        coordinate_statistics,
        coordinate_alpha,
        alpha: LEMMA34_ALPHA,
        threshold,
        passes: statistic < threshold,
    })
}
