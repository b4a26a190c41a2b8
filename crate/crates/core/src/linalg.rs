//! Dense complex linear algebra helpers on top of `nalgebra`.

use nalgebra::{DMatrix, DVector};

use crate::Complex64;

pub type CMatrix = DMatrix<Complex64>;
pub type CVector = DVector<Complex64>;

/// `(A + A*) / 2`.
pub fn hermitian_part(a: &CMatrix) -> CMatrix {
    (a + a.adjoint()) * Complex64::new(0.5, 0.0)
}

/// Eigen-decomposition of the Hermitian part of `a`.
///
/// Eigenvalues are returned in descending order with matching eigenvector columns.
pub fn hermitian_eigen(a: &CMatrix) -> (Vec<f64>, CMatrix) {
    let h = hermitian_part(a);
    let dim = h.nrows();
    let eig = h.symmetric_eigen();
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[j].total_cmp(&eig.eigenvalues[i]));
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vectors = CMatrix::from_fn(dim, dim, |r, c| eig.eigenvectors[(r, order[c])]);
    (values, vectors)
}

/// Eigenvalues of the Hermitian part of `a`, descending.
pub fn hermitian_eigenvalues(a: &CMatrix) -> Vec<f64> {
    let h = hermitian_part(a);
    let mut values: Vec<f64> = h.symmetric_eigenvalues().iter().copied().collect();
    values.sort_by(|x, y| y.total_cmp(x));
    values
}

/// Operator norm of a Hermitian matrix, i.e. its largest absolute eigenvalue.
pub fn hermitian_operator_norm(a: &CMatrix) -> f64 {
    hermitian_eigenvalues(a)
        .into_iter()
        .fold(0.0_f64, |m, v| m.max(v.abs()))
}

/// Largest entrywise modulus.
pub fn max_abs_entry(a: &CMatrix) -> f64 {
    a.iter().fold(0.0_f64, |m, z| m.max(z.norm()))
}

pub fn identity(n: usize) -> CMatrix {
    CMatrix::identity(n, n)
}

pub fn conjugate(a: &CMatrix) -> CMatrix {
    a.map(|z| z.conj())
}

pub fn kron(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a.kronecker(b)
}

/// Which tensor factor of `C^outer ⊗ C^inner` survives a partial trace.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Keep {
    Outer,
    Inner,
}

/// Partial trace of a matrix on `C^outer ⊗ C^inner` (index `o * inner + i`).
pub fn partial_trace(x: &CMatrix, outer: usize, inner: usize, keep: Keep) -> CMatrix {
    assert_eq!(x.nrows(), outer * inner);
    assert_eq!(x.ncols(), outer * inner);
    match keep {
        Keep::Outer => CMatrix::from_fn(outer, outer, |p, q| {
            (0..inner).map(|a| x[(p * inner + a, q * inner + a)]).sum()
        }),
        Keep::Inner => CMatrix::from_fn(inner, inner, |a, b| {
            (0..outer).map(|p| x[(p * inner + a, p * inner + b)]).sum()
        }),
    }
}

/// Positive eigenvalues (above `floor`) of a Hermitian matrix, descending.
pub fn nonzero_spectrum(a: &CMatrix, floor: f64) -> Vec<f64> {
    hermitian_eigenvalues(a)
        .into_iter()
        .filter(|&v| v > floor)
        .collect()
}
