//! Minimum output entropy estimation for random unitary channels, the
//! entangled-input bound for `Φ ⊗ Φ̄`, and the additivity gap report.
//!
//! The optimizer works on the `d x d` environment side: for a pure input the
//! outputs `Φ(zz*)` and `Φ^C(zz*)` share their nonzero spectrum, so both
//! have the same entropy and the eigenproblem is `d`-dimensional.

use rayon::prelude::*;
use serde::Serialize;

use crate::channel::{sample_unit_vector, RandomUnitaryChannel};
use crate::entropy::{spectrum_entropy, EntropyValue};
use crate::linalg::{self, CMatrix, CVector};
use crate::rng::RngStream;
use crate::state::{SimplexPoint, UnitVector};
use crate::{Complex64, Error, Result};

/// Logarithm floor used inside the entropy gradient.
pub const LOG_FLOOR: f64 = 1e-300;
/// Output eigenvalues below this mark the gradient as a subgradient estimate.
pub const SINGULAR_SPECTRUM: f64 = 1e-12;

/// `S(Φ(zz*))`, computed from `Φ^C(zz*)`.
pub fn output_entropy(channel: &RandomUnitaryChannel, z: &UnitVector) -> Result<EntropyValue> {
    let env = channel.complementary_pure(z)?;
    crate::entropy::von_neumann_entropy(&env)
}

/// Entropy of the (possibly unnormalized) Gram matrix `ρ_ij = ⟨√w_j U_j z, √w_i U_i z⟩`.
///
/// Equals `S(Φ^C(zz*))` on the unit sphere; off the sphere it is the smooth
/// extension `−Σ λ ln λ` whose Euclidean gradient [`entropy_gradient_at`] returns.
pub fn environment_entropy_at(channel: &RandomUnitaryChannel, z: &CVector) -> Result<f64> {
    let gram = gram_of(channel, z)?;
    spectrum_entropy(&linalg::hermitian_eigenvalues(&gram))
}

fn gram_of(channel: &RandomUnitaryChannel, z: &CVector) -> Result<CMatrix> {
    if z.len() != channel.n() {
        return Err(Error::DimensionMismatch {
            expected: channel.n(),
            got: z.len(),
        });
    }
    let cols = channel.environment_columns(z);
    let d = channel.d();
    Ok(linalg::hermitian_part(&CMatrix::from_fn(d, d, |i, j| cols[j].dotc(&cols[i]))))
}

/// Entropy value and Euclidean gradient at a point of `C^n`.
#[derive(Debug, Clone)]
pub struct GradientEval {
    pub entropy: f64,
    /// Gradient w.r.t. the real inner product `Re⟨u, v⟩` on `C^n`.
    pub gradient: CVector,
    /// Smallest output eigenvalue fell below [`SINGULAR_SPECTRUM`]; the
    /// logarithm was clamped and the gradient is only a subgradient estimate.
    pub near_singular: bool,
}

/// `g = 2 A z` with `A = Σ_ij √(w_i w_j) C_ji U_j* U_i` and `C = −(ln ρ + I)`.
pub fn entropy_gradient_at(channel: &RandomUnitaryChannel, z: &CVector) -> Result<GradientEval> {
    let gram = gram_of(channel, z)?;
    let (values, vectors) = linalg::hermitian_eigen(&gram);
    let near_singular = values.last().is_some_and(|&l| l < SINGULAR_SPECTRUM);
    let entropy = spectrum_entropy(&values.iter().map(|l| l.max(0.0)).collect::<Vec<_>>())?;

    let d = channel.d();
    let weights: Vec<Complex64> = values
        .iter()
        .map(|&l| Complex64::new(-(l.max(LOG_FLOOR).ln() + 1.0), 0.0))
        .collect();
    let c = &vectors * CMatrix::from_diagonal(&CVector::from_vec(weights)) * vectors.adjoint();

    let cols = channel.environment_columns(z);
    let sqrt_w: Vec<f64> = channel.weights().weights().iter().map(|w| w.sqrt()).collect();
    let mut az = CVector::zeros(channel.n());
    for j in 0..d {
        let mut mix = CVector::zeros(channel.n());
        for (i, col) in cols.iter().enumerate() {
            mix.axpy(c[(j, i)], col, Complex64::new(1.0, 0.0));
        }
        let back = channel.unitaries()[j].matrix().adjoint() * mix;
        az.axpy(Complex64::new(sqrt_w[j], 0.0), &back, Complex64::new(1.0, 0.0));
    }
    Ok(GradientEval {
        entropy,
        gradient: az * Complex64::new(2.0, 0.0),
        near_singular,
    })
}

/// Euclidean gradient of `z ↦ S(Φ^C(zz*))` at a unit vector.
pub fn entropy_gradient(channel: &RandomUnitaryChannel, z: &UnitVector) -> Result<GradientEval> {
    entropy_gradient_at(channel, z.as_vector())
}

/// Tangent component `g − Re⟨z, g⟩ z` at a unit vector `z`.
pub fn project_tangent(z: &CVector, g: &CVector) -> CVector {
    let radial = z.dotc(g).re;
    g - z * Complex64::new(radial, 0.0)
}

/// Optimizer configuration.
#[derive(Debug, Clone, Serialize)]
pub struct MoeOptions {
    pub restarts: usize,
    /// Exit when the projected gradient norm drops below `tol * max(1, |S|)`.
    pub tol: f64,
    pub max_iter: usize,
    pub seed: u64,
    pub stream_id: u64,
}

impl Default for MoeOptions {
    fn default() -> Self {
        Self {
            restarts: 32,
            tol: 1e-8,
            max_iter: 2000,
            seed: 0,
            stream_id: 0,
        }
    }
}

/// Best local minimum found by the multi-start descent.
#[derive(Debug, Clone, Serialize)]
pub struct MoeResult {
    /// Always an upper bound on `S_min(Φ)`.
    pub entropy_upper_bound: EntropyValue,
    pub argmin: UnitVector,
    pub restarts_used: usize,
    pub converged: bool,
    pub gradient_norm_at_exit: f64,
    pub iterations: usize,
    /// Restart index that produced the minimum.
    pub best_restart: usize,
}

const ARMIJO_C: f64 = 1e-4;
const MAX_HALVINGS: usize = 60;

struct Descent {
    value: f64,
    z: CVector,
    converged: bool,
    gradient_norm: f64,
    iterations: usize,
}

fn descend(channel: &RandomUnitaryChannel, start: CVector, tol: f64, max_iter: usize) -> Result<Descent> {
    let mut z = start;
    let mut eval = entropy_gradient_at(channel, &z)?;
    let mut step = 1.0;
    let mut iterations = 0;
    loop {
        let tangent = project_tangent(&z, &eval.gradient);
        let gnorm = tangent.norm();
        if gnorm < tol * eval.entropy.abs().max(1.0) {
            return Ok(Descent {
                value: eval.entropy,
                z,
                converged: true,
                gradient_norm: gnorm,
                iterations,
            });
        }
        if iterations >= max_iter {
            return Ok(Descent {
                value: eval.entropy,
                z,
                converged: false,
                gradient_norm: gnorm,
                iterations,
            });
        }
        iterations += 1;

        let slope = gnorm * gnorm;
        let mut accepted = None;
        let mut trial = step;
        for _ in 0..MAX_HALVINGS {
            let moved = &z - &tangent * Complex64::new(trial, 0.0);
            let candidate = moved.unscale(moved.norm());
            let value = environment_entropy_at(channel, &candidate)?;
            if value <= eval.entropy - ARMIJO_C * trial * slope {
                accepted = Some(candidate);
                break;
            }
            trial *= 0.5;
        }
        match accepted {
            Some(next) => {
                z = next;
                eval = entropy_gradient_at(channel, &z)?;
                step = (trial * 2.0).min(1e6);
            }
            None => {
                // no Armijo decrease representable in floating point
                return Ok(Descent {
                    value: eval.entropy,
                    z,
                    converged: false,
                    gradient_norm: gnorm,
                    iterations,
                });
            }
        }
    }
}

/// Multi-start projected gradient descent on the unit sphere of `C^n`.
///
/// Restart `k` starts from a uniform random unit vector drawn from stream
/// `child(k)` of `(seed, stream_id)`, so adding restarts never worsens the result.
pub fn minimize_output_entropy(channel: &RandomUnitaryChannel, options: &MoeOptions) -> Result<MoeResult> {
    if options.restarts == 0 {
        return Err(Error::Domain("at least one restart is required".into()));
    }
    let base = RngStream::new(options.seed, options.stream_id);
    let runs: Vec<Result<(usize, Descent)>> = (0..options.restarts)
        .into_par_iter()
        .map(|k| {
            let mut rng = base.child(k as u64);
            let start = sample_unit_vector(channel.n(), &mut rng)?;
            descend(channel, start.into_vector(), options.tol, options.max_iter).map(|r| (k, r))
        })
        .collect();
    let mut best: Option<(usize, Descent)> = None;
    for run in runs {
        let (k, r) = run?;
        let better = match &best {
            None => true,
            Some((_, b)) => r.value < b.value,
        };
        if better {
            best = Some((k, r));
        }
    }
    let (k, run) = best.expect("restarts >= 1");
    let argmin = UnitVector::normalize(run.z)?;
    let entropy = output_entropy(channel, &argmin)?;
    Ok(MoeResult {
        entropy_upper_bound: entropy,
        argmin,
        restarts_used: options.restarts,
        converged: run.converged,
        gradient_norm_at_exit: run.gradient_norm,
        iterations: run.iterations,
        best_restart: k,
    })
}

/// `2 ln d − (ln d)/d`, the universal upper bound on `S_min(Φ ⊗ Φ̄)`.
pub fn lemma1_bound(d: usize) -> f64 {
    let l = (d as f64).ln();
    2.0 * l - l / d as f64
}

/// `h(p) = −p ln p − (1−p) ln((1−p)/(d²−d))` at `p = Σ w_i²`.
///
/// Returns 0 for `d = 1`.
pub fn hp_bound(weights: &SimplexPoint) -> f64 {
    let d = weights.dim();
    if d < 2 {
        return 0.0;
    }
    hp_of_purity(weights.purity(), d)
}

/// `h(p)` as a function of the collision probability `p ∈ [1/d, 1]`.
pub fn hp_of_purity(p: f64, d: usize) -> f64 {
    let df = d as f64;
    let xlogx = |x: f64| if x > 0.0 { x * x.ln() } else { 0.0 };
    let q = (1.0 - p).max(0.0);
    -xlogx(p) - xlogx(q) + q * (df * df - df).ln()
}

/// Exact entropy of `(Φ ⊗ Φ̄)(|ψ̂⟩⟨ψ̂|)`, evaluated on the `d² x d²` environment side.
pub fn product_entangled_entropy(channel: &RandomUnitaryChannel, cap: usize) -> Result<EntropyValue> {
    let env = channel.product_entangled_environment(cap)?;
    crate::entropy::von_neumann_entropy(&env)
}

/// Empirical comparison of `2 S_min(Φ)` with the entangled-input product entropy.
///
/// `gap_estimate` is a search heuristic, never a certified violation: the
/// `S_min` term is an upper bound from local optimization, so a positive gap
/// does not prove non-additivity.
#[derive(Debug, Clone, Serialize)]
pub struct GapReport {
    pub smin_phi_est: f64,
    pub product_entangled_entropy: f64,
    pub lemma1_bound: f64,
    pub hp_bound: f64,
    /// `2 * smin_phi_est − product_entangled_entropy`.
    pub gap_lower_bound: f64,
    /// Always false; see the type-level note.
    pub certified_violation: bool,
    pub optimizer_converged: bool,
}

pub fn additivity_gap_report(
    channel: &RandomUnitaryChannel,
    options: &MoeOptions,
    cap: usize,
) -> Result<GapReport> {
    let moe = minimize_output_entropy(channel, options)?;
    let product = product_entangled_entropy(channel, cap)?.value();
    let smin = moe.entropy_upper_bound.value();
    Ok(GapReport {
        smin_phi_est: smin,
        product_entangled_entropy: product,
        lemma1_bound: lemma1_bound(channel.d()),
        hp_bound: hp_bound(channel.weights()),
        gap_lower_bound: 2.0 * smin - product,
        certified_violation: false,
        optimizer_converged: moe.converged,
    })
}
