//! Validated domain types: unit vectors, density matrices, unitaries and
//! probability vectors.

use serde::{Deserialize, Serialize};

use crate::linalg::{self, CMatrix, CVector};
use crate::{Complex64, Error, Result};

/// Tolerance on `‖z‖² = 1`.
pub const UNIT_NORM_TOL: f64 = 1e-12;
/// Entrywise Hermiticity, trace and eigenvalue-floor tolerance for states.
pub const STATE_TOL: f64 = 1e-10;
/// Tolerance on `U U* = I` in max-entry norm.
pub const UNITARY_TOL: f64 = 1e-10;
/// Tolerance on `Σ w = 1` for probability vectors.
pub const SIMPLEX_TOL: f64 = 1e-12;

/// A unit-norm vector in `C^m`.
#[derive(Debug, Clone, PartialEq)]
pub struct UnitVector(CVector);

/// Serialized as a list of `[re, im]` pairs.
impl Serialize for UnitVector {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_seq(self.0.iter())
    }
}

impl UnitVector {
    pub fn new(v: CVector) -> Result<Self> {
        if v.is_empty() {
            return Err(Error::InvalidDimension("unit vector of length 0".into()));
        }
        let norm2 = v.norm_squared();
        if (norm2 - 1.0).abs() > UNIT_NORM_TOL {
            return Err(Error::InvalidState(format!("squared norm {norm2} is not 1")));
        }
        Ok(Self(v))
    }

    /// Rescales a nonzero vector to unit length.
    pub fn normalize(v: CVector) -> Result<Self> {
        if v.is_empty() {
            return Err(Error::InvalidDimension("unit vector of length 0".into()));
        }
        let norm = v.norm();
        if norm == 0.0 || !norm.is_finite() {
            return Err(Error::InvalidState("cannot normalize a zero vector".into()));
        }
        Ok(Self(v.unscale(norm)))
    }

    /// Standard basis vector `e_k` in `C^m`.
    pub fn basis(m: usize, k: usize) -> Result<Self> {
        if k >= m {
            return Err(Error::InvalidDimension(format!("basis index {k} out of range for C^{m}")));
        }
        let mut v = CVector::zeros(m);
        v[k] = Complex64::new(1.0, 0.0);
        Ok(Self(v))
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn as_vector(&self) -> &CVector {
        &self.0
    }

    pub fn into_vector(self) -> CVector {
        self.0
    }

    /// `⟨self, other⟩ = self* other`.
    pub fn inner(&self, other: &UnitVector) -> Complex64 {
        self.0.dotc(&other.0)
    }

    /// Pure state `z z*`.
    pub fn projector(&self) -> DensityMatrix {
        DensityMatrix(&self.0 * self.0.adjoint())
    }
}

/// A Hermitian, positive semi-definite, trace-one complex matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix(CMatrix);

impl DensityMatrix {
    pub fn new(m: CMatrix) -> Result<Self> {
        if m.nrows() != m.ncols() || m.nrows() == 0 {
            return Err(Error::InvalidDimension(format!(
                "density matrix must be square and nonempty, got {}x{}",
                m.nrows(),
                m.ncols()
            )));
        }
        let asym = linalg::max_abs_entry(&(&m - m.adjoint()));
        if asym > STATE_TOL {
            return Err(Error::InvalidState(format!("not Hermitian (deviation {asym:e})")));
        }
        let trace = m.trace();
        if (trace.re - 1.0).abs() > STATE_TOL || trace.im.abs() > STATE_TOL {
            return Err(Error::InvalidState(format!("trace {trace} is not 1")));
        }
        let min_eig = linalg::hermitian_eigenvalues(&m)
            .last()
            .copied()
            .unwrap_or(0.0);
        if min_eig < -STATE_TOL {
            return Err(Error::InvalidState(format!("negative eigenvalue {min_eig:e}")));
        }
        Ok(Self(m))
    }

    /// Wraps a matrix that is a state by construction (channel outputs).
    pub(crate) fn from_trusted(m: CMatrix) -> Self {
        Self(m)
    }

    pub fn maximally_mixed(d: usize) -> Result<Self> {
        if d == 0 {
            return Err(Error::InvalidDimension("dimension 0".into()));
        }
        Ok(Self(linalg::identity(d) * Complex64::new(1.0 / d as f64, 0.0)))
    }

    /// Diagonal state with the given probability vector on the diagonal.
    pub fn diagonal(p: &SimplexPoint) -> Self {
        let diag = CVector::from_iterator(p.dim(), p.weights().iter().map(|&x| Complex64::new(x, 0.0)));
        Self(CMatrix::from_diagonal(&diag))
    }

    pub fn dim(&self) -> usize {
        self.0.nrows()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.0
    }

    pub fn into_matrix(self) -> CMatrix {
        self.0
    }

    /// Eigenvalues, descending.
    pub fn eigenvalues(&self) -> Vec<f64> {
        linalg::hermitian_eigenvalues(&self.0)
    }

    /// Entrywise complex conjugate (also a state).
    pub fn conj(&self) -> Self {
        Self(linalg::conjugate(&self.0))
    }
}

/// An `n x n` unitary matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct UnitaryMatrix(CMatrix);

impl UnitaryMatrix {
    pub fn new(m: CMatrix) -> Result<Self> {
        if m.nrows() != m.ncols() || m.nrows() == 0 {
            return Err(Error::InvalidDimension(format!(
                "unitary must be square and nonempty, got {}x{}",
                m.nrows(),
                m.ncols()
            )));
        }
        let n = m.nrows();
        let dev = linalg::max_abs_entry(&(&m * m.adjoint() - linalg::identity(n)));
        if dev > UNITARY_TOL {
            return Err(Error::InvalidState(format!("not unitary (deviation {dev:e})")));
        }
        Ok(Self(m))
    }

    pub(crate) fn from_trusted(m: CMatrix) -> Self {
        Self(m)
    }

    pub fn identity(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidDimension("dimension 0".into()));
        }
        Ok(Self(linalg::identity(n)))
    }

    /// Diagonal unitary with the given unit-modulus entries.
    pub fn diagonal(phases: &[Complex64]) -> Result<Self> {
        Self::new(CMatrix::from_diagonal(&CVector::from_column_slice(phases)))
    }

    pub fn dim(&self) -> usize {
        self.0.nrows()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.0
    }

    pub fn conj(&self) -> Self {
        Self(linalg::conjugate(&self.0))
    }

    pub fn adjoint(&self) -> Self {
        Self(self.0.adjoint())
    }

    pub fn mul(&self, other: &UnitaryMatrix) -> Self {
        Self(&self.0 * &other.0)
    }

    pub fn apply(&self, v: &UnitVector) -> UnitVector {
        UnitVector(&self.0 * v.as_vector())
    }
}

/// A point of the probability simplex `Δ_d`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct SimplexPoint(Vec<f64>);

impl SimplexPoint {
    pub fn new(weights: Vec<f64>) -> Result<Self> {
        if weights.is_empty() {
            return Err(Error::InvalidDimension("empty probability vector".into()));
        }
        if let Some(w) = weights.iter().find(|w| !(**w >= 0.0) || !w.is_finite()) {
            return Err(Error::InvalidState(format!("negative or non-finite weight {w}")));
        }
        let sum: f64 = weights.iter().sum();
        if (sum - 1.0).abs() > SIMPLEX_TOL {
            return Err(Error::InvalidState(format!("weights sum to {sum}, not 1")));
        }
        Ok(Self(weights))
    }

    /// Rescales non-negative weights to sum to one.
    pub fn normalized(weights: Vec<f64>) -> Result<Self> {
        let sum: f64 = weights.iter().sum();
        if !(sum > 0.0) || !sum.is_finite() {
            return Err(Error::InvalidState(format!("cannot normalize weights with sum {sum}")));
        }
        Self::new(weights.into_iter().map(|w| w / sum).collect())
    }

    pub fn uniform(d: usize) -> Result<Self> {
        if d == 0 {
            return Err(Error::InvalidDimension("dimension 0".into()));
        }
        Ok(Self(vec![1.0 / d as f64; d]))
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn weights(&self) -> &[f64] {
        &self.0
    }

    /// Collision probability `Σ w_i²`.
    pub fn purity(&self) -> f64 {
        self.0.iter().map(|w| w * w).sum()
    }

    /// `ℓ¹` distance to another point of the same simplex.
    pub fn l1_distance(&self, other: &SimplexPoint) -> Result<f64> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                got: other.dim(),
            });
        }
        Ok(self.0.iter().zip(&other.0).map(|(a, b)| (a - b).abs()).sum())
    }
}

impl TryFrom<Vec<f64>> for SimplexPoint {
    type Error = Error;

    fn try_from(v: Vec<f64>) -> Result<Self> {
        Self::new(v)
    }
}

impl From<SimplexPoint> for Vec<f64> {
    fn from(p: SimplexPoint) -> Self {
        p.0
    }
}
