//! Entropy functionals, the scalar divergences `x − 1 − ln x` and
//! `x ln x − x + 1`, Fannes-type continuity bounds, and the ball and tube
//! geometry around the maximally mixed state.

use serde::Serialize;

use crate::linalg::{self, CMatrix};
use crate::state::{DensityMatrix, SimplexPoint};
use crate::{Complex64, Error, Result};

/// Eigenvalues below this (after clamping) contribute nothing to entropy sums.
pub const EIGEN_CLAMP: f64 = 1e-10;

/// Von Neumann (or Rényi) entropy in nats.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize)]
pub struct EntropyValue(f64);

impl EntropyValue {
    pub fn value(self) -> f64 {
        self.0
    }
}

fn clamp_spectrum(eigenvalues: &[f64]) -> Result<Vec<f64>> {
    eigenvalues
        .iter()
        .map(|&l| {
            if l < -EIGEN_CLAMP {
                Err(Error::InvalidState(format!("eigenvalue {l:e} below clamp threshold")))
            } else {
                Ok(l.max(0.0))
            }
        })
        .collect()
}

/// `−Σ λ ln λ` with `0 ln 0 = 0`.
pub fn spectrum_entropy(eigenvalues: &[f64]) -> Result<f64> {
    let clamped = clamp_spectrum(eigenvalues)?;
    Ok(clamped
        .iter()
        .filter(|&&l| l > 0.0)
        .map(|&l| -l * l.ln())
        .sum::<f64>()
        .max(0.0))
}

/// Shannon entropy of a probability vector.
pub fn shannon_entropy(p: &SimplexPoint) -> f64 {
    p.weights()
        .iter()
        .filter(|&&x| x > 0.0)
        .map(|&x| -x * x.ln())
        .sum()
}

/// `S(ρ) = −Tr ρ ln ρ`.
pub fn von_neumann_entropy(rho: &DensityMatrix) -> Result<EntropyValue> {
    spectrum_entropy(&rho.eigenvalues()).map(EntropyValue)
}

/// `S_p(ρ) = ln(Tr ρ^p) / (1 − p)` for `p ≥ 0`, `p ≠ 1`.
pub fn renyi_entropy(rho: &DensityMatrix, p: f64) -> Result<EntropyValue> {
    if p == 1.0 {
        return Err(Error::Domain(
            "order 1 Rényi entropy is the von Neumann entropy; call von_neumann_entropy".into(),
        ));
    }
    if !(p >= 0.0) || !p.is_finite() {
        return Err(Error::Domain(format!("Rényi order {p} must be a finite non-negative number")));
    }
    let spectrum = clamp_spectrum(&rho.eigenvalues())?;
    let power_sum: f64 = spectrum.iter().filter(|&&l| l > 0.0).map(|&l| l.powf(p)).sum();
    Ok(EntropyValue((power_sum.ln() / (1.0 - p)).max(0.0)))
}

/// `x − 1 − ln x`, the Itakura–Saito divergence of `x` from 1. Defined for `x > 0`.
pub fn itakura_saito_from_one(x: f64) -> Result<f64> {
    if !(x > 0.0) {
        return Err(Error::Domain(format!("x - 1 - ln x needs x > 0, got {x}")));
    }
    Ok(x - 1.0 - x.ln())
}

/// `x ln x − x + 1`, the generalized Kullback–Leibler divergence of `x` from 1.
/// Defined for `x ≥ 0` with value 1 at 0.
pub fn kl_from_one(x: f64) -> Result<f64> {
    if !(x >= 0.0) {
        return Err(Error::Domain(format!("x ln x - x + 1 needs x >= 0, got {x}")));
    }
    if x == 0.0 {
        return Ok(1.0);
    }
    Ok(x * x.ln() - x + 1.0)
}

/// Infallible `x ln x − x + 1` for arguments already known to be in `[0, ∞)`.
pub(crate) fn kl1(x: f64) -> f64 {
    if x <= 0.0 {
        1.0
    } else {
        x * x.ln() - x + 1.0
    }
}

/// `ε (ln d + ln(1/ε))` with `ε = Σ|z_i − q_i|`; dominates `|H(z) − H(q)|`
/// whenever `ε ≤ 1`.
pub fn fannes_bound(z: &SimplexPoint, q: &SimplexPoint) -> Result<f64> {
    let eps = z.l1_distance(q)?;
    if eps > 1.0 {
        return Err(Error::Regime(format!("l1 distance {eps} exceeds 1")));
    }
    Ok(fannes_term(eps, z.dim()))
}

fn fannes_term(eps: f64, d: usize) -> f64 {
    if eps == 0.0 {
        0.0
    } else {
        eps * ((d as f64).ln() - eps.ln())
    }
}

/// The perturbation term `η = d ε_m (ln d + ln(1/ε_m))`, with
/// `ε_m = t d √(d ln n / n)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EtaTerm {
    pub eps_m: f64,
    pub eta: f64,
    /// `ε_m < 1`; outside that range the Fannes bound is not asserted.
    pub valid: bool,
}

/// `n` is a real number so that astronomically large input dimensions can be evaluated.
pub fn eta_term(d: usize, n: f64, t: f64) -> EtaTerm {
    let df = d as f64;
    let eps_m = t * df * (df * n.ln() / n).sqrt();
    let valid = (0.0..1.0).contains(&eps_m);
    let eta = df * fannes_term(eps_m, d);
    EtaTerm { eps_m, eta, valid }
}

/// Operator-norm ball `‖ρ − I/d‖_∞ ≤ b √(ln n / n)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BallSpec {
    pub b: f64,
    pub n: f64,
    pub d: usize,
}

impl BallSpec {
    pub fn new(b: f64, n: f64, d: usize) -> Result<Self> {
        if !(b > 0.0) {
            return Err(Error::Domain(format!("ball parameter b must be positive, got {b}")));
        }
        if !(n >= 1.0) || d == 0 {
            return Err(Error::InvalidDimension(format!("n = {n}, d = {d}")));
        }
        Ok(Self { b, n, d })
    }

    pub fn radius(&self) -> f64 {
        self.b * (self.n.ln() / self.n).sqrt()
    }
}

/// Segment `{rρ + (1−r)I/d : γ ≤ r ≤ 1}` thickened by `t √(d ln n / n)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TubeSpec {
    pub gamma: f64,
    pub t: f64,
    pub n: f64,
    pub d: usize,
}

impl TubeSpec {
    pub fn new(gamma: f64, t: f64, n: f64, d: usize) -> Result<Self> {
        if !(gamma > 0.0 && gamma < 1.0) {
            return Err(Error::Domain(format!("gamma must lie in (0,1), got {gamma}")));
        }
        if !(t >= 0.0) {
            return Err(Error::Domain(format!("t must be non-negative, got {t}")));
        }
        if !(n >= 1.0) || d == 0 {
            return Err(Error::InvalidDimension(format!("n = {n}, d = {d}")));
        }
        Ok(Self { gamma, t, n, d })
    }

    pub fn radius(&self) -> f64 {
        self.t * (self.d as f64 * self.n.ln() / self.n).sqrt()
    }
}

fn distance_to_mixed(rho: &DensityMatrix) -> f64 {
    let d = rho.dim();
    let shifted = rho.matrix() - linalg::identity(d) * Complex64::new(1.0 / d as f64, 0.0);
    linalg::hermitian_operator_norm(&shifted)
}

/// Whether `ρ` lies in the operator-norm ball around `I/d`.
pub fn ball_membership(rho: &DensityMatrix, spec: &BallSpec) -> Result<bool> {
    if rho.dim() != spec.d {
        return Err(Error::DimensionMismatch {
            expected: spec.d,
            got: rho.dim(),
        });
    }
    Ok(distance_to_mixed(rho) <= spec.radius())
}

const GOLDEN_TOL: f64 = 1e-10;

/// `min_{γ ≤ r ≤ 1} ‖θ − (rρ + (1−r)I/d)‖_∞`.
///
/// The objective is a norm of an affine function of `r`, hence convex; it is
/// minimized by golden-section search on `[γ, 1]`.
pub fn tube_distance(theta: &DensityMatrix, rho: &DensityMatrix, spec: &TubeSpec) -> Result<f64> {
    let d = spec.d;
    for m in [theta, rho] {
        if m.dim() != d {
            return Err(Error::DimensionMismatch {
                expected: d,
                got: m.dim(),
            });
        }
    }
    let mixed = linalg::identity(d) * Complex64::new(1.0 / d as f64, 0.0);
    let base: CMatrix = theta.matrix() - &mixed;
    let dir: CMatrix = rho.matrix() - &mixed;
    let objective = |r: f64| linalg::hermitian_operator_norm(&(&base - &dir * Complex64::new(r, 0.0)));
    let (_, value) = golden_section_min(objective, spec.gamma, 1.0, GOLDEN_TOL);
    Ok([objective(spec.gamma), objective(1.0)]
        .into_iter()
        .fold(value, f64::min))
}

pub fn tube_membership(theta: &DensityMatrix, rho: &DensityMatrix, spec: &TubeSpec) -> Result<bool> {
    Ok(tube_distance(theta, rho, spec)? <= spec.radius())
}

/// Golden-section minimization of a unimodal function on `[lo, hi]`.
/// Returns `(argmin, min)`.
pub fn golden_section_min<F: Fn(f64) -> f64>(f: F, mut lo: f64, mut hi: f64, tol: f64) -> (f64, f64) {
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut x1 = hi - inv_phi * (hi - lo);
    let mut x2 = lo + inv_phi * (hi - lo);
    let (mut f1, mut f2) = (f(x1), f(x2));
    while hi - lo > tol {
        if f1 <= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - inv_phi * (hi - lo);
            f1 = f(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + inv_phi * (hi - lo);
            f2 = f(x2);
        }
    }
    let x = 0.5 * (lo + hi);
    (x, f(x))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::sample_unit_vector;
    use crate::rng::RngStream;

    fn diag(p: &[f64]) -> DensityMatrix {
        DensityMatrix::diagonal(&SimplexPoint::new(p.to_vec()).unwrap())
    }

    #[test]
    fn entropy_closed_forms() {
        let mut rng = RngStream::new(1, 0);
        let z = sample_unit_vector(5, &mut rng).unwrap();
        assert!(von_neumann_entropy(&z.projector()).unwrap().value() < 1e-9);
        for d in [2, 3, 7] {
            let s = von_neumann_entropy(&DensityMatrix::maximally_mixed(d).unwrap()).unwrap();
            assert!((s.value() - (d as f64).ln()).abs() < 1e-12);
        }
        let s = von_neumann_entropy(&diag(&[0.5, 0.25, 0.25])).unwrap().value();
        assert!((s - 1.5 * 2f64.ln()).abs() < 1e-12);
        assert!((s - 1.03972).abs() < 1e-5);
    }

    #[test]
    fn spectrum_entropy_clamps_and_rejects() {
        assert_eq!(spectrum_entropy(&[1.0, -5e-11]).unwrap(), 0.0);
        assert!(matches!(spectrum_entropy(&[1.0, -1e-9]), Err(Error::InvalidState(_))));
    }

    #[test]
    fn renyi_closed_forms() {
        let mixed = DensityMatrix::maximally_mixed(4).unwrap();
        for p in [0.0, 0.5, 2.0, 7.0] {
            assert!((renyi_entropy(&mixed, p).unwrap().value() - 4f64.ln()).abs() < 1e-12);
        }
        let pure = diag(&[1.0, 0.0]);
        assert!(renyi_entropy(&pure, 2.0).unwrap().value().abs() < 1e-12);
        let s2 = renyi_entropy(&diag(&[0.75, 0.25]), 2.0).unwrap().value();
        assert!((s2 + 0.625f64.ln()).abs() < 1e-12);
        assert!((s2 - 0.47000).abs() < 1e-5);
        assert!(matches!(renyi_entropy(&mixed, 1.0), Err(Error::Domain(_))));
        assert!(renyi_entropy(&mixed, -1.0).is_err());
    }

    #[test]
    fn scalar_divergences() {
        assert_eq!(itakura_saito_from_one(1.0).unwrap(), 0.0);
        assert_eq!(kl_from_one(1.0).unwrap(), 0.0);
        assert_eq!(kl_from_one(0.0).unwrap(), 1.0);
        let e = std::f64::consts::E;
        assert!((itakura_saito_from_one(e).unwrap() - (e - 2.0)).abs() < 1e-15);
        assert!((kl_from_one(e).unwrap() - 1.0).abs() < 1e-15);
        assert!(matches!(itakura_saito_from_one(0.0), Err(Error::Domain(_))));
        assert!(kl_from_one(-0.1).is_err());
    }

    #[test]
    fn fannes_cases() {
        let z = SimplexPoint::new(vec![0.2, 0.8]).unwrap();
        assert_eq!(fannes_bound(&z, &z).unwrap(), 0.0);
        let a = SimplexPoint::new(vec![1.0, 0.0]).unwrap();
        let b = SimplexPoint::uniform(2).unwrap();
        let bound = fannes_bound(&a, &b).unwrap();
        let gap = (shannon_entropy(&a) - shannon_entropy(&b)).abs();
        assert!((bound - 2f64.ln()).abs() < 1e-15);
        assert!(bound >= gap - 1e-15);
        let far = SimplexPoint::new(vec![0.0, 1.0]).unwrap();
        assert!(matches!(fannes_bound(&a, &far), Err(Error::Regime(_))));
    }

    #[test]
    fn eta_hand_evaluation() {
        assert_eq!(eta_term(2, 1e6, 0.0).eta, 0.0);
        let e = eta_term(2, 1e6, 6.0);
        let eps = 12.0 * (2.0 * 1e6f64.ln() / 1e6).sqrt();
        assert!((e.eps_m - eps).abs() < 1e-15);
        assert!((e.eta - 2.0 * eps * (2f64.ln() + (1.0 / eps).ln())).abs() < 1e-14);
        assert!(e.valid);
        assert!(eta_term(2, 1e8, 6.0).eta < e.eta);
        assert!(!eta_term(3, 100.0, 6.0).valid);
    }

    #[test]
    fn ball_cases() {
        let spec = BallSpec::new(2.0, 100.0, 2).unwrap();
        let radius = 2.0 * (100f64.ln() / 100.0).sqrt();
        assert!((radius - 0.42919).abs() < 1e-5);
        assert!(ball_membership(&DensityMatrix::maximally_mixed(2).unwrap(), &spec).unwrap());
        assert!(ball_membership(&diag(&[0.5 + radius * 0.999, 0.5 - radius * 0.999]), &spec).unwrap());
        assert!(!ball_membership(&diag(&[0.5 + radius * 1.001, 0.5 - radius * 1.001]), &spec).unwrap());
        let big_n = BallSpec::new(2.0, 1e6, 3).unwrap();
        assert!(!ball_membership(&diag(&[1.0, 0.0, 0.0]), &big_n).unwrap());
        assert!(BallSpec::new(0.0, 10.0, 2).is_err());
    }

    #[test]
    fn tube_cases() {
        let rho = diag(&[1.0, 0.0]);
        let spec = TubeSpec::new(0.5, 1.0, 100.0, 2).unwrap();
        assert!(tube_distance(&rho, &rho, &spec).unwrap() < 1e-9);
        let end = diag(&[0.75, 0.25]);
        assert!(tube_distance(&end, &rho, &spec).unwrap() < 1e-9);
        let mixed = DensityMatrix::maximally_mixed(2).unwrap();
        let dist = tube_distance(&mixed, &rho, &spec).unwrap();
        // grid oracle over r in [0.5, 1]: distance r/2
        let grid = (0..=10_000)
            .map(|k| 0.5 + 0.5 * k as f64 / 10_000.0)
            .map(|r| r / 2.0)
            .fold(f64::INFINITY, f64::min);
        assert!((dist - grid).abs() < 1e-9);
        assert!((dist - 0.25).abs() < 1e-9);
        assert!(TubeSpec::new(1.0, 1.0, 10.0, 2).is_err());
        assert!(TubeSpec::new(0.5, -1.0, 10.0, 2).is_err());
    }
}
