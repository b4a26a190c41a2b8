//! Eigenvalue statistics, overlap laws and KS machinery against independent
//! closed forms, quadrature and brute-force enumeration.

mod common;

use addlab_core::channel::{sample_channel, sample_unit_vector};
use addlab_core::rng::{sample_blocks, RngStream};
use addlab_core::state::UnitVector;
use addlab_core::stats::{
    concentration_tail_bound, cross_term_tail_check, exact_log_z, ks, lemma34_equivalence_test,
    mu2_max_eigenvalue_cdf, mu2_max_eigenvalue_cdf_sorted, mu_log_density, overlap_decompose, overlap_tail,
    sample_spectrum_mc, z_inverse_bound,
};
use common::*;
use statrs::function::beta::{beta_reg, ln_beta};

/// Mass of `μ_{d,n}` over the simplex by Simpson in `d − 1` free coordinates.
fn total_mass(d: usize, n: usize, panels: usize) -> f64 {
    let density = |w: &[f64]| mu_log_density(w, n).unwrap().log_density.exp();
    match d {
        2 => simpson(|p| density(&[p, 1.0 - p]), 0.0, 1.0, panels),
        3 => {
            // w1 = u, w2 = (1 − u) v, Jacobian 1 − u
            simpson(
                |u| {
                    (1.0 - u)
                        * simpson(
                            |v| {
                                let w2 = (1.0 - u) * v;
                                let w3 = (1.0 - u - w2).max(0.0);
                                density(&[u, w2, w3])
                            },
                            0.0,
                            1.0,
                            panels,
                        )
                },
                0.0,
                1.0,
                panels,
            )
        }
        _ => unreachable!(),
    }
}

#[test]
fn normalization_hand_values() {
    assert!((exact_log_z(2, 2).unwrap() - (1.0f64 / 3.0).ln()).abs() < 1e-13);
    // Z(n, 1) = Γ(n) Γ(2) / Γ(n) = 1
    assert!(exact_log_z(7, 1).unwrap().abs() < 1e-12);
    assert!(exact_log_z(1, 2).is_err());
}

#[test]
fn density_integrates_to_one() {
    for (d, n) in [(2, 2), (2, 5), (3, 4), (2, 30)] {
        let mass = total_mass(d, n, if d == 3 { 1000 } else { 400 });
        assert!((mass - 1.0).abs() < 1e-8, "(d, n) = ({d}, {n}): {mass}");
    }
}

#[test]
fn density_outside_simplex_is_zero() {
    let e = mu_log_density(&[0.7, 0.4], 5).unwrap();
    assert!(!e.in_support);
    assert_eq!(e.log_density, f64::NEG_INFINITY);
}

#[test]
fn z_inverse_bound_dominates_exact_when_side_condition_holds() {
    for (n, d) in [(100, 2), (1000, 3), (5000, 10), (60, 1)] {
        let b = z_inverse_bound(n, d).unwrap();
        if b.side_condition_met {
            assert!(-exact_log_z(n, d).unwrap() <= b.value, "(n, d) = ({n}, {d})");
        }
    }
}

/// `P(max ≤ x)` from the expansion `(2p−1)² (pq)^{n−2} = (pq)^{n−2} − 4 (pq)^{n−1}`
/// and regularized incomplete beta functions.
fn max_cdf_oracle(n: usize, x: f64) -> f64 {
    let a = (n - 1) as f64;
    let b = n as f64;
    let lo = 1.0 - x;
    let first = ln_beta(a, a).exp() * (beta_reg(a, a, x) - beta_reg(a, a, lo));
    let second = ln_beta(b, b).exp() * (beta_reg(b, b, x) - beta_reg(b, b, lo));
    (first - 4.0 * second) / exact_log_z(n, 2).unwrap().exp()
}

#[test]
fn max_eigenvalue_cdf_matches_incomplete_beta() {
    for n in [2, 3, 5, 16, 50, 200] {
        for k in 0..=20 {
            let x = 0.5 + 0.5 * k as f64 / 20.0;
            let ours = mu2_max_eigenvalue_cdf(n, x).unwrap();
            let oracle = max_cdf_oracle(n, x);
            assert!((ours - oracle).abs() < 1e-10, "n = {n}, x = {x}: {ours} vs {oracle}");
        }
    }
}

#[test]
fn max_eigenvalue_cdf_sorted_matches_pointwise() {
    let xs: Vec<f64> = (0..50).map(|k| 0.5 + k as f64 / 100.0).collect();
    let batch = mu2_max_eigenvalue_cdf_sorted(9, &xs).unwrap();
    for (x, v) in xs.iter().zip(&batch) {
        assert!((mu2_max_eigenvalue_cdf(9, *x).unwrap() - v).abs() < 1e-12);
    }
}

#[test]
fn sampled_gram_spectra_follow_analytic_max_law() {
    let m = 100_000;
    let spectra = sample_spectrum_mc(2, 5, m, &RngStream::new(31, 0)).unwrap();
    let mut top: Vec<f64> = spectra.iter().map(|s| s.values()[0]).collect();
    top.sort_by(f64::total_cmp);
    let cdf = mu2_max_eigenvalue_cdf_sorted(5, &top).unwrap();
    let d = ks::one_sample_sorted(&top, &cdf);
    // asymptotic 0.1% critical value
    assert!(d < 1.95 / (m as f64).sqrt(), "D = {d}");
}

/// All `C(2N, N)` interleavings of two size-`N` samples, counting each `D`.
fn brute_force_tail(size: usize, k: usize) -> f64 {
    let total = 2 * size;
    let (mut hits, mut all) = (0u64, 0u64);
    for mask in 0u32..(1 << total) {
        if mask.count_ones() as usize != size {
            continue;
        }
        let mut walk: i64 = 0;
        let mut peak: i64 = 0;
        for bit in 0..total {
            walk += if mask >> bit & 1 == 1 { 1 } else { -1 };
            peak = peak.max(walk.abs());
        }
        all += 1;
        if peak as usize >= k {
            hits += 1;
        }
    }
    hits as f64 / all as f64
}

#[test]
fn two_sample_null_matches_enumeration() {
    for size in [5, 6] {
        for k in 1..=size {
            let exact = ks::two_sample_equal_tail(size, k).unwrap();
            let brute = brute_force_tail(size, k);
            assert!((exact - brute).abs() < 1e-12, "N = {size}, k = {k}: {exact} vs {brute}");
        }
    }
}

#[test]
fn two_sample_statistic_matches_walk() {
    // statistic on an explicit interleaving equals the walk peak over N
    let a = [0.1, 0.2, 0.5, 0.9, 1.3];
    let b = [0.3, 0.4, 0.6, 0.7, 0.8];
    assert!((ks::two_sample(&a, &b) - 0.4).abs() < 1e-15);
}

#[test]
fn critical_value_is_minimal() {
    let c = ks::two_sample_equal_critical(200, 0.01).unwrap();
    assert!(c.tail <= 0.01);
    assert!(ks::two_sample_equal_tail(200, c.k - 1).unwrap() > 0.01);
}

#[test]
fn lemma34_small_configurations_pass() {
    for (d, n) in [(2, 8), (3, 6)] {
        let r = lemma34_equivalence_test(d, n, 20_000, &RngStream::new(32, 0)).unwrap();
        assert!(r.passes, "(d, n) = ({d}, {n}): {} vs {}", r.statistic, r.threshold);
        assert!(r.statistic < 0.015);
    }
}

#[test]
fn squared_overlap_is_beta_one_n_minus_one() {
    let n = 10;
    let psi = UnitVector::basis(n, 0).unwrap();
    let draws: Vec<(f64, f64)> = sample_blocks(50_000, &RngStream::new(33, 0), |s| {
        let theta = sample_unit_vector(n, s).unwrap();
        let dec = overlap_decompose(&theta, &psi).unwrap();
        (dec.x.norm_sqr(), dec.phi.as_vector()[1].norm_sqr())
    });
    let x2: Vec<f64> = draws.iter().map(|p| p.0).collect();
    let d = ks::one_sample(&x2, |x| 1.0 - (1.0 - x.clamp(0.0, 1.0)).powi(n as i32 - 1));
    assert!(d < 1.95 / (x2.len() as f64).sqrt(), "D = {d}");

    // φ is uniform on ψ⊥ independently of x
    let phi: Vec<f64> = draws.iter().map(|p| p.1).collect();
    let (mx, _) = mean_and_stderr(&x2);
    let (mp, _) = mean_and_stderr(&phi);
    assert!((mp - 1.0 / (n - 1) as f64).abs() < 0.005);
    let cov: f64 = draws.iter().map(|p| (p.0 - mx) * (p.1 - mp)).sum::<f64>() / draws.len() as f64;
    let sx = (x2.iter().map(|v| (v - mx).powi(2)).sum::<f64>() / x2.len() as f64).sqrt();
    let sp = (phi.iter().map(|v| (v - mp).powi(2)).sum::<f64>() / phi.len() as f64).sqrt();
    assert!((cov / (sx * sp)).abs() < 4.0 / (draws.len() as f64).sqrt());
}

#[test]
fn decomposition_reconstructs_theta() {
    let mut rng = RngStream::new(34, 0);
    for _ in 0..50 {
        let theta = sample_unit_vector(7, &mut rng).unwrap();
        let psi = sample_unit_vector(7, &mut rng).unwrap();
        let dec = overlap_decompose(&theta, &psi).unwrap();
        assert!((dec.reconstruct(&psi) - theta.as_vector()).norm() < 1e-12);
        assert!(dec.phi.inner(&psi).norm() < 1e-12);
    }
}

#[test]
fn cross_term_with_one_unitary_is_the_overlap() {
    let mut rng = RngStream::new(35, 0);
    let ch = sample_channel(1, 12, &mut rng).unwrap();
    let psi = sample_unit_vector(12, &mut rng).unwrap();
    let ts = [0.1, 0.2, 0.3, 0.4, 0.5];
    let r = cross_term_tail_check(&ch, &psi, &ts, 50_000, &RngStream::new(35, 1)).unwrap();
    assert!(r.max_norm <= 1.0 + 1e-12);
    for p in &r.points {
        let exact = overlap_tail(12, p.t).unwrap();
        assert!((p.bound - exact).abs() < 1e-15);
        let se = (exact * (1.0 - exact) / 50_000.0).sqrt();
        assert!((p.empirical - exact).abs() < 4.0 * se, "t = {}: {} vs {exact}", p.t, p.empirical);
    }
}

#[test]
fn cross_term_tail_respects_bound() {
    let mut rng = RngStream::new(36, 0);
    let ch = sample_channel(2, 16, &mut rng).unwrap();
    let psi = sample_unit_vector(16, &mut rng).unwrap();
    let ts: Vec<f64> = (1..10).map(|k| k as f64 / 10.0).collect();
    let r = cross_term_tail_check(&ch, &psi, &ts, 20_000, &RngStream::new(36, 1)).unwrap();
    assert!(r.all_hold());
    assert!(r.points.iter().any(|p| p.informative));
    assert!(r.max_norm <= 1.0 + 1e-12);
}

#[test]
fn concentration_tails_never_exceed_bound() {
    let n = 200;
    for d in [2, 3] {
        let spectra = sample_spectrum_mc(d, n, 100_000, &RngStream::new(37, d as u64)).unwrap();
        // density is symmetric, so pool all coordinates for an unlabelled w_i
        let deviations: Vec<f64> = spectra
            .iter()
            .flat_map(|s| s.values().iter().map(|w| (w - 1.0 / d as f64).abs()).collect::<Vec<_>>())
            .collect();
        let mut informative = 0;
        for k in 1..=10 {
            let t = 0.05 * k as f64;
            let bound = concentration_tail_bound(d, n as f64, t).unwrap();
            if bound.vacuous {
                continue;
            }
            informative += 1;
            let p = deviations.iter().filter(|&&v| v >= t).count() as f64 / deviations.len() as f64;
            assert!(p <= bound.value, "d = {d}, t = {t}: {p} > {}", bound.value);
        }
        assert!(informative > 0);
    }
}

#[test]
fn spectra_concentrate_as_n_grows() {
    let spread = |n: usize| {
        let s = sample_spectrum_mc(2, n, 5_000, &RngStream::new(38, n as u64)).unwrap();
        let top: Vec<f64> = s.iter().map(|x| x.values()[0]).collect();
        let (m, _) = mean_and_stderr(&top);
        (top.iter().map(|v| (v - m).powi(2)).sum::<f64>() / top.len() as f64).sqrt()
    };
    assert!(spread(200) < spread(50));
}
