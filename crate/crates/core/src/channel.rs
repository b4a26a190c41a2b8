//! Random unitary channels `ρ ↦ Σ w_i U_i ρ U_i*`, their complementary and
//! complex-conjugate channels, the Stinespring isometry, and the product
//! channel `Φ ⊗ Φ̄` on the maximally entangled input.

use crate::linalg::{self, CMatrix, CVector, Keep};
use crate::rng::RngStream;
use crate::state::{DensityMatrix, SimplexPoint, UnitVector, UnitaryMatrix, UNITARY_TOL};
use crate::{Complex64, Error, Result};

/// Default cap on the number of entries of any matrix allocated by the
/// product-channel routines.
pub const DEFAULT_ENTRY_CAP: usize = 1 << 22;

fn check_dim(name: &str, value: usize) -> Result<()> {
    if value == 0 {
        return Err(Error::InvalidDimension(format!("{name} must be at least 1")));
    }
    Ok(())
}

fn check_cap(requested: usize, cap: usize) -> Result<()> {
    if requested > cap {
        return Err(Error::ResourceCap { requested, cap });
    }
    Ok(())
}

/// Haar-distributed unitary: QR of a complex Ginibre matrix, with the phases
/// of the triangular factor's diagonal moved into `Q`.
pub fn sample_haar_unitary(n: usize, rng: &mut RngStream) -> Result<UnitaryMatrix> {
    check_dim("n", n)?;
    let ginibre = CMatrix::from_fn(n, n, |_, _| rng.complex_normal());
    let qr = ginibre.qr();
    let (mut q, r) = (qr.q(), qr.r());
    for k in 0..n {
        let diag = r[(k, k)];
        let modulus = diag.norm();
        if modulus > 0.0 {
            let phase = diag / modulus;
            for row in 0..n {
                q[(row, k)] *= phase;
            }
        }
    }
    Ok(UnitaryMatrix::from_trusted(q))
}

/// Uniform point of the unit sphere in `C^m` (normalized complex Gaussian).
pub fn sample_unit_vector(m: usize, rng: &mut RngStream) -> Result<UnitVector> {
    check_dim("m", m)?;
    loop {
        let v = CVector::from_fn(m, |_, _| rng.complex_normal());
        if v.norm_squared() > 0.0 {
            return UnitVector::normalize(v);
        }
    }
}

/// Weights with law `ν_{d,n}`: block norms `Y_j = Σ_i |z_{ij}|²` of a uniform
/// `z ∈ C^n ⊗ C^d`, using the row-major reshape `z_{(i-1)d+j}`.
pub fn sample_weights_nu(d: usize, n: usize, rng: &mut RngStream) -> Result<SimplexPoint> {
    check_dim("d", d)?;
    check_dim("n", n)?;
    let z = sample_unit_vector(d * n, rng)?;
    let mut y = vec![0.0; d];
    for (k, entry) in z.as_vector().iter().enumerate() {
        y[k % d] += entry.norm_sqr();
    }
    SimplexPoint::normalized(y)
}

/// A channel in `R_d(n)`: weights on `Δ_d` and `d` unitaries on `C^n`.
#[derive(Debug, Clone, PartialEq)]
pub struct RandomUnitaryChannel {
    weights: SimplexPoint,
    unitaries: Vec<UnitaryMatrix>,
    n: usize,
}

impl RandomUnitaryChannel {
    pub fn new(weights: SimplexPoint, unitaries: Vec<UnitaryMatrix>) -> Result<Self> {
        if unitaries.len() != weights.dim() {
            return Err(Error::DimensionMismatch {
                expected: weights.dim(),
                got: unitaries.len(),
            });
        }
        let n = unitaries[0].dim();
        if let Some(u) = unitaries.iter().find(|u| u.dim() != n) {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: u.dim(),
            });
        }
        Ok(Self {
            weights,
            unitaries,
            n,
        })
    }

    /// Input dimension.
    pub fn n(&self) -> usize {
        self.n
    }

    /// Environment dimension (number of summands).
    pub fn d(&self) -> usize {
        self.unitaries.len()
    }

    pub fn weights(&self) -> &SimplexPoint {
        &self.weights
    }

    pub fn unitaries(&self) -> &[UnitaryMatrix] {
        &self.unitaries
    }

    fn check_input(&self, rho: &DensityMatrix) -> Result<()> {
        if rho.dim() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                got: rho.dim(),
            });
        }
        Ok(())
    }

    fn sqrt_weights(&self) -> Vec<f64> {
        self.weights.weights().iter().map(|w| w.sqrt()).collect()
    }

    /// `Φ(ρ) = Σ w_i U_i ρ U_i*`.
    pub fn apply(&self, rho: &DensityMatrix) -> Result<DensityMatrix> {
        self.check_input(rho)?;
        let mut out = CMatrix::zeros(self.n, self.n);
        for (w, u) in self.weights.weights().iter().zip(&self.unitaries) {
            let u = u.matrix();
            out += (u * rho.matrix() * u.adjoint()) * Complex64::new(*w, 0.0);
        }
        Ok(DensityMatrix::from_trusted(linalg::hermitian_part(&out)))
    }

    /// `Φ̄(ρ) = Σ w_i Ū_i ρ U_iᵀ`.
    pub fn apply_conjugate(&self, rho: &DensityMatrix) -> Result<DensityMatrix> {
        self.check_input(rho)?;
        let mut out = CMatrix::zeros(self.n, self.n);
        for (w, u) in self.weights.weights().iter().zip(&self.unitaries) {
            let ubar = linalg::conjugate(u.matrix());
            out += (&ubar * rho.matrix() * ubar.adjoint()) * Complex64::new(*w, 0.0);
        }
        Ok(DensityMatrix::from_trusted(linalg::hermitian_part(&out)))
    }

    /// Complementary map on an arbitrary `n x n` operator:
    /// entry `(i, j)` is `√(w_i w_j) Tr(X U_j* U_i)`.
    pub fn complementary_map(&self, x: &CMatrix) -> Result<CMatrix> {
        if x.nrows() != self.n || x.ncols() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                got: x.nrows(),
            });
        }
        let d = self.d();
        let sw = self.sqrt_weights();
        // Tr(X U_j* U_i) = Σ_{ab} (U_i X)_{ab} conj(U_j)_{ab}
        let ux: Vec<CMatrix> = self.unitaries.iter().map(|u| u.matrix() * x).collect();
        Ok(CMatrix::from_fn(d, d, |i, j| {
            let tr: Complex64 = ux[i]
                .iter()
                .zip(self.unitaries[j].matrix().iter())
                .map(|(a, b)| a * b.conj())
                .sum();
            tr * (sw[i] * sw[j])
        }))
    }

    /// `Φ^C(ρ)`, a `d x d` state.
    pub fn complementary_output(&self, rho: &DensityMatrix) -> Result<DensityMatrix> {
        self.check_input(rho)?;
        let out = self.complementary_map(rho.matrix())?;
        Ok(DensityMatrix::from_trusted(linalg::hermitian_part(&out)))
    }

    /// Columns `√w_i U_i z`; the complementary output of `z z*` is their
    /// Gram matrix.
    pub(crate) fn environment_columns(&self, z: &CVector) -> Vec<CVector> {
        self.unitaries
            .iter()
            .zip(self.sqrt_weights())
            .map(|(u, s)| (u.matrix() * z).scale(s))
            .collect()
    }

    /// `Φ^C(z z*)` for a pure input, with entry `(i, j) = ⟨√w_j U_j z, √w_i U_i z⟩`.
    pub fn complementary_pure(&self, z: &UnitVector) -> Result<DensityMatrix> {
        if z.dim() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                got: z.dim(),
            });
        }
        let cols = self.environment_columns(z.as_vector());
        let d = self.d();
        let m = CMatrix::from_fn(d, d, |i, j| cols[j].dotc(&cols[i]));
        Ok(DensityMatrix::from_trusted(linalg::hermitian_part(&m)))
    }

    /// `Φ^C(|θ⟩⟨ψ|)`, entry `(i, j) = √(w_i w_j) ⟨U_j ψ, U_i θ⟩`.
    pub fn complementary_cross(&self, theta: &UnitVector, psi: &UnitVector) -> Result<CMatrix> {
        for v in [theta, psi] {
            if v.dim() != self.n {
                return Err(Error::DimensionMismatch {
                    expected: self.n,
                    got: v.dim(),
                });
            }
        }
        let a = self.environment_columns(theta.as_vector());
        let b = self.environment_columns(psi.as_vector());
        let d = self.d();
        Ok(CMatrix::from_fn(d, d, |i, j| b[j].dotc(&a[i])))
    }

    /// The Stinespring isometry `W = [√w_1 U_1; …; √w_d U_d]`.
    pub fn stinespring_isometry(&self) -> PartialIsometry {
        let (n, d) = (self.n, self.d());
        let sw = self.sqrt_weights();
        let block = CMatrix::from_fn(n * d, n, |r, c| {
            let (i, a) = (r / n, r % n);
            self.unitaries[i].matrix()[(a, c)] * sw[i]
        });
        PartialIsometry { block, n, d }
    }

    /// The complex-conjugate channel `Φ̄` as a channel object.
    pub fn conjugate_channel(&self) -> RandomUnitaryChannel {
        RandomUnitaryChannel {
            weights: self.weights.clone(),
            unitaries: self.unitaries.iter().map(UnitaryMatrix::conj).collect(),
            n: self.n,
        }
    }

    /// `(Φ ⊗ Φ̄)(ρ₂)` evaluated directly on `C^n ⊗ C^n`.
    ///
    /// Allocates `n⁴` entries; refused above `cap`.
    pub fn product_output(&self, rho2: &DensityMatrix, cap: usize) -> Result<DensityMatrix> {
        let n = self.n;
        check_cap((n * n).saturating_mul(n * n), cap)?;
        if rho2.dim() != n * n {
            return Err(Error::DimensionMismatch {
                expected: n * n,
                got: rho2.dim(),
            });
        }
        let w = self.weights.weights();
        let bars: Vec<CMatrix> = self
            .unitaries
            .iter()
            .map(|u| linalg::conjugate(u.matrix()))
            .collect();
        let mut out = CMatrix::zeros(n * n, n * n);
        for (i, ui) in self.unitaries.iter().enumerate() {
            for (j, uj_bar) in bars.iter().enumerate() {
                let k = linalg::kron(ui.matrix(), uj_bar);
                out += (&k * rho2.matrix() * k.adjoint()) * Complex64::new(w[i] * w[j], 0.0);
            }
        }
        Ok(DensityMatrix::from_trusted(linalg::hermitian_part(&out)))
    }

    /// Environment-side state of `(Φ ⊗ Φ̄)` on the maximally entangled input.
    ///
    /// This is the complementary output of the product channel, a `d² x d²`
    /// matrix with entry `((i,j),(k,l)) = √(w_i w_j w_k w_l) Tr(U_k* U_i U_j* U_l) / n`.
    /// It shares its nonzero spectrum with `(Φ ⊗ Φ̄)(|ψ̂⟩⟨ψ̂|)`.
    pub fn product_entangled_environment(&self, cap: usize) -> Result<DensityMatrix> {
        let d = self.d();
        let d2 = d * d;
        check_cap(d2.saturating_mul(d2), cap)?;
        let n = self.n as f64;
        let sw = self.sqrt_weights();
        // P_{ij} = U_i U_j*
        let p: Vec<CMatrix> = (0..d2)
            .map(|ij| {
                let (i, j) = (ij / d, ij % d);
                self.unitaries[i].matrix() * self.unitaries[j].matrix().adjoint()
            })
            .collect();
        // Tr(U_k* U_i U_j* U_l) = Tr(P_{ij} P_{lk}) = Σ_{ab} P_{ij}[a,b] P_{lk}[b,a]
        let m = CMatrix::from_fn(d2, d2, |r, c| {
            let (i, j) = (r / d, r % d);
            let (k, l) = (c / d, c % d);
            let plk = &p[l * d + k];
            let pij = &p[r];
            let mut tr = Complex64::new(0.0, 0.0);
            for a in 0..self.n {
                for b in 0..self.n {
                    tr += pij[(a, b)] * plk[(b, a)];
                }
            }
            tr * (sw[i] * sw[j] * sw[k] * sw[l] / n)
        });
        Ok(DensityMatrix::from_trusted(linalg::hermitian_part(&m)))
    }
}

/// Draws a channel from `P_{d,n}`: weights from `ν_{d,n}`, unitaries i.i.d. Haar.
pub fn sample_channel(d: usize, n: usize, rng: &mut RngStream) -> Result<RandomUnitaryChannel> {
    check_dim("d", d)?;
    check_dim("n", n)?;
    let weights = sample_weights_nu(d, n, rng)?;
    let unitaries = (0..d)
        .map(|_| sample_haar_unitary(n, rng))
        .collect::<Result<Vec<_>>>()?;
    RandomUnitaryChannel::new(weights, unitaries)
}

/// Stinespring isometry `W : C^n → C^d ⊗ C^n` of a random unitary channel.
///
/// Row index `i * n + a` pairs environment index `i` with system index `a`.
#[derive(Debug, Clone, PartialEq)]
pub struct PartialIsometry {
    block: CMatrix,
    n: usize,
    d: usize,
}

impl PartialIsometry {
    pub fn matrix(&self) -> &CMatrix {
        &self.block
    }

    /// `max |W*W − I|`.
    pub fn isometry_defect(&self) -> f64 {
        linalg::max_abs_entry(&(self.block.adjoint() * &self.block - linalg::identity(self.n)))
    }

    pub fn is_isometry(&self) -> bool {
        self.isometry_defect() <= UNITARY_TOL
    }

    /// `W ρ W*` on `C^d ⊗ C^n`.
    pub fn dilate(&self, rho: &DensityMatrix) -> Result<CMatrix> {
        if rho.dim() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                got: rho.dim(),
            });
        }
        Ok(&self.block * rho.matrix() * self.block.adjoint())
    }

    /// Trace over the environment: the channel output `Φ(ρ)`.
    pub fn system_marginal(&self, rho: &DensityMatrix) -> Result<DensityMatrix> {
        let big = self.dilate(rho)?;
        Ok(DensityMatrix::from_trusted(linalg::partial_trace(
            &big,
            self.d,
            self.n,
            Keep::Inner,
        )))
    }

    /// Trace over the system: the complementary output `Φ^C(ρ)`.
    pub fn environment_marginal(&self, rho: &DensityMatrix) -> Result<DensityMatrix> {
        let big = self.dilate(rho)?;
        Ok(DensityMatrix::from_trusted(linalg::partial_trace(
            &big,
            self.d,
            self.n,
            Keep::Outer,
        )))
    }
}

/// `|ψ̂⟩ = n^{-1/2} Σ_k e_k ⊗ e_k` in `C^n ⊗ C^n` (index `a * n + b`).
pub fn maximally_entangled_state(n: usize) -> Result<UnitVector> {
    check_dim("n", n)?;
    let amp = Complex64::new(1.0 / (n as f64).sqrt(), 0.0);
    let mut v = CVector::zeros(n * n);
    for k in 0..n {
        v[k * n + k] = amp;
    }
    UnitVector::normalize(v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::entropy::von_neumann_entropy;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn max_dev(a: &CMatrix, b: &CMatrix) -> f64 {
        linalg::max_abs_entry(&(a - b))
    }

    #[test]
    fn haar_dimension_one_is_a_phase() {
        let mut rng = RngStream::new(1, 0);
        let u = sample_haar_unitary(1, &mut rng).unwrap();
        assert!((u.matrix()[(0, 0)].norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn haar_is_unitary() {
        let mut rng = RngStream::new(2, 0);
        let u = sample_haar_unitary(8, &mut rng).unwrap();
        let dev = max_dev(&(u.matrix() * u.matrix().adjoint()), &linalg::identity(8));
        assert!(dev < 1e-10, "{dev}");
        assert!(UnitaryMatrix::new(u.matrix().clone()).is_ok());
    }

    #[test]
    fn zero_dimensions_rejected() {
        let mut rng = RngStream::new(0, 0);
        assert!(matches!(sample_haar_unitary(0, &mut rng), Err(Error::InvalidDimension(_))));
        assert!(sample_unit_vector(0, &mut rng).is_err());
        assert!(sample_weights_nu(0, 3, &mut rng).is_err());
        assert!(sample_channel(2, 0, &mut rng).is_err());
    }

    #[test]
    fn unit_vector_has_unit_norm() {
        let mut rng = RngStream::new(3, 0);
        let one = sample_unit_vector(1, &mut rng).unwrap();
        assert!((one.as_vector()[0].norm() - 1.0).abs() < 1e-12);
        let z = sample_unit_vector(16, &mut rng).unwrap();
        assert!((z.as_vector().norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn nu_weights_single_block() {
        let mut rng = RngStream::new(4, 0);
        for n in [1, 5, 30] {
            assert_eq!(sample_weights_nu(1, n, &mut rng).unwrap().weights(), &[1.0]);
        }
    }

    #[test]
    fn single_unitary_channel_is_conjugation() {
        let mut rng = RngStream::new(5, 0);
        let phi = sample_channel(1, 4, &mut rng).unwrap();
        let z = sample_unit_vector(4, &mut rng).unwrap();
        let out = phi.apply(&z.projector()).unwrap();
        let u = phi.unitaries()[0].matrix();
        let expected = u * z.projector().matrix() * u.adjoint();
        assert!(max_dev(out.matrix(), &expected) < 1e-12);
        assert!(von_neumann_entropy(&out).unwrap().value() < 1e-9);
        let env = phi.complementary_output(&z.projector()).unwrap();
        assert!((env.matrix()[(0, 0)] - c(1.0)).norm() < 1e-12);
    }

    #[test]
    fn channel_is_unital() {
        let mut rng = RngStream::new(6, 0);
        let phi = sample_channel(3, 8, &mut rng).unwrap();
        let mixed = DensityMatrix::maximally_mixed(8).unwrap();
        let out = phi.apply(&mixed).unwrap();
        assert!(max_dev(out.matrix(), mixed.matrix()) < 1e-10);
    }

    #[test]
    fn complementary_diagonal_is_weights_for_pure_inputs() {
        let mut rng = RngStream::new(7, 0);
        let phi = sample_channel(3, 5, &mut rng).unwrap();
        let z = sample_unit_vector(5, &mut rng).unwrap();
        let env = phi.complementary_output(&z.projector()).unwrap();
        for (i, w) in phi.weights().weights().iter().enumerate() {
            assert!((env.matrix()[(i, i)].re - w).abs() < 1e-12);
        }
        let fast = phi.complementary_pure(&z).unwrap();
        assert!(max_dev(env.matrix(), fast.matrix()) < 1e-12);
    }

    #[test]
    fn identical_blocks_give_rank_one_environment() {
        let id = UnitaryMatrix::identity(3).unwrap();
        let phi = RandomUnitaryChannel::new(
            SimplexPoint::new(vec![0.5, 0.5]).unwrap(),
            vec![id.clone(), id],
        )
        .unwrap();
        let rho = DensityMatrix::maximally_mixed(3).unwrap();
        let env = phi.complementary_output(&rho).unwrap();
        let expected = CMatrix::from_element(2, 2, c(0.5));
        assert!(max_dev(env.matrix(), &expected) < 1e-12);
        let spec = env.eigenvalues();
        assert!((spec[0] - 1.0).abs() < 1e-12 && spec[1].abs() < 1e-12);
    }

    #[test]
    fn stinespring_single_block_is_the_unitary() {
        let mut rng = RngStream::new(8, 0);
        let phi = sample_channel(1, 4, &mut rng).unwrap();
        let w = phi.stinespring_isometry();
        assert!(max_dev(w.matrix(), phi.unitaries()[0].matrix()) < 1e-15);
        assert!(w.is_isometry());
    }

    #[test]
    fn real_unitaries_commute_with_conjugation() {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let rot = UnitaryMatrix::new(CMatrix::from_row_slice(2, 2, &[c(s), c(-s), c(s), c(s)])).unwrap();
        let flip = UnitaryMatrix::diagonal(&[c(1.0), c(-1.0)]).unwrap();
        let phi = RandomUnitaryChannel::new(SimplexPoint::new(vec![0.3, 0.7]).unwrap(), vec![rot, flip]).unwrap();
        let mut rng = RngStream::new(9, 0);
        let z = sample_unit_vector(2, &mut rng).unwrap();
        let a = phi.apply(&z.projector()).unwrap();
        let b = phi.apply_conjugate(&z.projector()).unwrap();
        assert!(max_dev(a.matrix(), b.matrix()) < 1e-14);
    }

    #[test]
    fn maximally_entangled_small_cases() {
        let one = maximally_entangled_state(1).unwrap();
        assert!((one.as_vector()[0] - c(1.0)).norm() < 1e-15);
        let two = maximally_entangled_state(2).unwrap();
        let reduced = linalg::partial_trace(two.projector().matrix(), 2, 2, Keep::Inner);
        assert!(max_dev(&reduced, &(linalg::identity(2) * c(0.5))) < 1e-15);
    }

    #[test]
    fn entangled_state_fixed_by_u_tensor_ubar() {
        let mut rng = RngStream::new(10, 0);
        for n in [1, 2, 5] {
            let u = sample_haar_unitary(n, &mut rng).unwrap();
            let psi = maximally_entangled_state(n).unwrap();
            let k = linalg::kron(u.matrix(), &linalg::conjugate(u.matrix()));
            let moved = &k * psi.as_vector();
            assert!((moved - psi.as_vector()).camax() < 1e-12);
        }
    }

    #[test]
    fn product_cap_is_enforced() {
        let mut rng = RngStream::new(11, 0);
        let phi = sample_channel(2, 8, &mut rng).unwrap();
        let psi = maximally_entangled_state(8).unwrap();
        let err = phi.product_output(&psi.projector(), 100).unwrap_err();
        assert!(matches!(err, Error::ResourceCap { .. }));
        assert!(matches!(
            phi.product_entangled_environment(10),
            Err(Error::ResourceCap { .. })
        ));
    }

    #[test]
    fn single_unitary_product_fixes_entangled_input() {
        let mut rng = RngStream::new(12, 0);
        let phi = sample_channel(1, 3, &mut rng).unwrap();
        let psi = maximally_entangled_state(3).unwrap();
        let out = phi.product_output(&psi.projector(), DEFAULT_ENTRY_CAP).unwrap();
        assert!(max_dev(out.matrix(), psi.projector().matrix()) < 1e-12);
        let env = phi.product_entangled_environment(DEFAULT_ENTRY_CAP).unwrap();
        assert!((env.matrix()[(0, 0)] - c(1.0)).norm() < 1e-12);
    }

    #[test]
    fn mismatched_dimensions_rejected() {
        let mut rng = RngStream::new(13, 0);
        let phi = sample_channel(2, 4, &mut rng).unwrap();
        let rho = DensityMatrix::maximally_mixed(3).unwrap();
        assert!(matches!(phi.apply(&rho), Err(Error::DimensionMismatch { .. })));
        assert!(phi.complementary_output(&rho).is_err());
        assert!(phi.apply_conjugate(&rho).is_err());
        let z = UnitVector::basis(3, 0).unwrap();
        assert!(phi.complementary_pure(&z).is_err());
    }
}
