#![allow(dead_code)]

use addlab_core::linalg::{CMatrix, CVector};
use addlab_core::rng::RngStream;
use addlab_core::state::DensityMatrix;
use addlab_core::Complex64;

pub fn ginibre(rows: usize, cols: usize, rng: &mut RngStream) -> CMatrix {
    CMatrix::from_fn(rows, cols, |_, _| rng.complex_normal())
}

/// `G G* / Tr(G G*)` for a square Ginibre `G`: a full-rank random state.
pub fn random_mixed_state(n: usize, rng: &mut RngStream) -> DensityMatrix {
    let g = ginibre(n, n, rng);
    let p = &g * g.adjoint();
    let tr = p.trace().re;
    let m = p.unscale(tr);
    DensityMatrix::new((&m + m.adjoint()).unscale(2.0)).unwrap()
}

pub fn random_vector(n: usize, rng: &mut RngStream) -> CVector {
    CVector::from_fn(n, |_, _| rng.complex_normal())
}

/// Eigenvalues of a Hermitian matrix straight from nalgebra, ascending.
pub fn eigenvalues(m: &CMatrix) -> Vec<f64> {
    let h = (m + m.adjoint()).unscale(2.0);
    let mut v: Vec<f64> = h.symmetric_eigenvalues().iter().copied().collect();
    v.sort_by(f64::total_cmp);
    v
}

/// `−Σ λ ln λ` over strictly positive eigenvalues.
pub fn entropy_of(m: &CMatrix) -> f64 {
    eigenvalues(m)
        .into_iter()
        .filter(|&l| l > 1e-300)
        .map(|l| -l * l.ln())
        .sum()
}

/// Nonzero part of a spectrum, descending.
pub fn nonzero(values: &[f64], floor: f64) -> Vec<f64> {
    let mut v: Vec<f64> = values.iter().copied().filter(|&l| l > floor).collect();
    v.sort_by(|a, b| b.total_cmp(a));
    v
}

pub fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

/// Sample mean and its standard error.
pub fn mean_and_stderr(values: &[f64]) -> (f64, f64) {
    let m = values.len() as f64;
    let mean = values.iter().sum::<f64>() / m;
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (m - 1.0);
    (mean, (var / m).sqrt())
}

/// Composite Simpson rule with `panels` (even) subintervals.
pub fn simpson<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, panels: usize) -> f64 {
    let h = (b - a) / panels as f64;
    let mut s = f(a) + f(b);
    for k in 1..panels {
        let x = a + k as f64 * h;
        s += if k % 2 == 1 { 4.0 } else { 2.0 } * f(x);
    }
    s * h / 3.0
}
