//! Statistics of random pure states and their induced `d x d` states:
//! the Gram map `z ↦ M(z)* M(z)`, the eigenvalue law `μ_{d,n}` with its exact
//! normalization, overlap and tail laws, Kolmogorov–Smirnov machinery, and
//! Monte Carlo estimators for typicality and tube hits.

mod density;
mod estimators;
pub mod export;
pub mod ks;
mod tails;

pub use density::{
    exact_log_z, mu2_max_eigenvalue_cdf, mu2_max_eigenvalue_cdf_sorted, mu_log_density, z_inverse_bound,
    DensityEvaluation, ZInverseBound,
};
pub use estimators::{
    lemma34_equivalence_test, tube_hit_estimate, typicality_estimate, Lemma34Report, Proportion,
    TubeHitEstimate, TypicalityEstimate,
};
pub use tails::{
    concentration_tail_bound, cross_term_tail_check, overlap_decompose, overlap_tail, ConcentrationBound,
    CrossTermPoint, CrossTermTail, OverlapDecomposition,
};

use serde::Serialize;

use crate::channel::sample_unit_vector;
use crate::linalg::{self, CMatrix};
use crate::rng::{sample_blocks, RngStream};
use crate::state::{DensityMatrix, SimplexPoint, UnitVector};
use crate::{Error, Result};

/// `G(z) = M(z)* M(z)` for `z ∈ C^{nd}` reshaped row-major into an `n x d`
/// matrix `M_{ij} = z_{i d + j}`.
pub fn gram_state(z: &UnitVector, d: usize) -> Result<DensityMatrix> {
    if d == 0 || !z.dim().is_multiple_of(d) {
        return Err(Error::InvalidDimension(format!(
            "vector length {} is not a multiple of d = {d}",
            z.dim()
        )));
    }
    let n = z.dim() / d;
    let v = z.as_vector();
    let m = CMatrix::from_fn(n, d, |i, j| v[i * d + j]);
    Ok(DensityMatrix::from_trusted(linalg::hermitian_part(&(m.adjoint() * m))))
}

/// Eigenvalues of an induced state, sorted descending.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpectrumSample {
    pub eigenvalues: SimplexPoint,
}

impl SpectrumSample {
    /// Clamps round-off negatives to zero and renormalizes.
    pub fn from_state(rho: &DensityMatrix) -> Result<Self> {
        let values: Vec<f64> = rho.eigenvalues().into_iter().map(|l| l.max(0.0)).collect();
        Ok(Self {
            eigenvalues: SimplexPoint::normalized(values)?,
        })
    }

    pub fn values(&self) -> &[f64] {
        self.eigenvalues.weights()
    }
}

/// `count` spectra of `G(z)` with `z` uniform on the unit sphere of `C^{dn}`.
pub fn sample_spectrum_mc(d: usize, n: usize, count: usize, rng: &RngStream) -> Result<Vec<SpectrumSample>> {
    if d == 0 || n == 0 {
        return Err(Error::InvalidDimension(format!("d = {d}, n = {n}")));
    }
    sample_blocks(count, rng, |s| {
        let z = sample_unit_vector(d * n, s)?;
        SpectrumSample::from_state(&gram_state(&z, d)?)
    })
    .into_iter()
    .collect()
}
