use serde::Serialize;
use statrs::function::gamma::ln_gamma;

use super::md::m_d;
use crate::entropy::{eta_term, kl1};

const TWO_E2: f64 = 2.0 * std::f64::consts::E * std::f64::consts::E;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AlphaTerm {
    pub value: f64,
    pub positive: bool,
    /// `n ≥ b² d² ln n`.
    pub side_condition_met: bool,
}

/// `α = b²(n − d)/(3n) − 1`.
pub fn alpha_term(b: f64, n: f64, d: usize) -> AlphaTerm {
    let df = d as f64;
    let value = b * b * (n - df) / (3.0 * n) - 1.0;
    AlphaTerm {
        value,
        positive: value > 0.0,
        side_condition_met: n >= b * b * df * df * n.ln(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BetaTerm {
    pub value: f64,
    pub positive: bool,
}

/// `β = 1/2 − (d² + 2)(1 − d ln d / n)^{n−1}`.
pub fn beta_term(d: usize, n: f64) -> BetaTerm {
    let df = d as f64;
    let ratio = df * df.ln() / n;
    let power = if ratio < 1.0 {
        ((n - 1.0) * (-ratio).ln_1p()).exp()
    } else {
        (1.0 - ratio).powi((n - 1.0) as i32)
    };
    let value = 0.5 - (df * df + 2.0) * power;
    BetaTerm {
        value,
        positive: value > 0.0,
    }
}

/// The main term after substituting the logarithmic lower bound on `M_d`,
/// with `h̃ = (h f(1−γ) − η − 1)/(2e² − 1)`. Only a valid upper bound when
/// `h f(1−γ) − η ≥ 2e²`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ClosedFormTerm {
    pub h_tilde: f64,
    pub log_term: Option<f64>,
    pub applicable: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CertificateReport {
    pub n: f64,
    pub d: usize,
    pub h: f64,
    pub gamma: f64,
    pub b: f64,
    pub t: f64,
    pub alpha: f64,
    pub beta: f64,
    pub eps_m: f64,
    pub eta: f64,
    /// `h f(1−γ) − η`, the argument passed to `M_d`.
    pub md_argument: f64,
    pub md_value: Option<f64>,
    pub log_term_typicality: f64,
    pub log_term_main: Option<f64>,
    pub term_typicality: f64,
    pub term_main: Option<f64>,
    pub log_total: Option<f64>,
    pub total: Option<f64>,
    pub closed_form: ClosedFormTerm,
    pub valid: bool,
    pub violated_preconditions: Vec<String>,
    /// `valid` and `total < 1`: some channel has `S_min > ln d − h/d`.
    pub existence_certified: bool,
    pub entropy_threshold: f64,
}

fn log_add_exp(a: f64, b: f64) -> f64 {
    let (hi, lo) = if a >= b { (a, b) } else { (b, a) };
    if hi == f64::NEG_INFINITY {
        hi
    } else {
        hi + (lo - hi).exp().ln_1p()
    }
}

/// Evaluates the bound `P(C) ≤ term_typicality + term_main` on the set of
/// channels with `S_min ≤ ln d − h/d`, with
///
/// * `term_typicality = (2d/(d−1)!) exp(−α d² ln n)`
/// * `term_main = β⁻¹ (1−γ)^{−(n−1)} exp[d² ln n − ln (d−1)! − (n−d) M_d(h f(1−γ) − η)]`
///
/// `n` is real so astronomically large inputs can be evaluated.
pub fn certificate_evaluate(n: f64, d: usize, h: f64, gamma: f64, b: f64, t: f64) -> CertificateReport {
    let df = d as f64;
    let mut violated = Vec::new();
    let mut require = |ok: bool, name: &str| {
        if !ok {
            violated.push(name.to_string());
        }
    };

    let alpha = alpha_term(b, n, d);
    let beta = beta_term(d, n);
    let eta = eta_term(d, n, t);
    let ln_n = n.ln();
    let log_fact = ln_gamma(df);

    require(d >= 3, "d_at_least_3");
    require(n > df, "n_exceeds_d");
    require(gamma > 0.0 && gamma < 1.0, "gamma_in_unit_interval");
    require(b > 3f64.sqrt(), "b_exceeds_sqrt3");
    require(t >= b + 4.0, "t_at_least_b_plus_4");
    require(alpha.positive, "alpha_positive");
    require(alpha.side_condition_met, "n_at_least_b2_d2_ln_n");
    require(df * b * (ln_n / n).sqrt() <= 1.0, "d_b_sqrt_ln_n_over_n_at_most_1");
    require(beta.positive, "beta_positive");
    require(eta.valid, "eps_m_below_1");

    let md_argument = h * kl1(1.0 - gamma) - eta.eta;
    let md_in_range = md_argument > 0.0 && md_argument <= df * df.ln();
    require(md_in_range, "md_argument_in_range");

    let log_term_typicality = (2.0 * df).ln() - log_fact - alpha.value * df * df * ln_n;
    let md_value = if md_in_range && d >= 2 {
        m_d(md_argument, d).ok().map(|s| s.value)
    } else {
        None
    };
    let log_term_main = match md_value {
        Some(m) if beta.positive && gamma < 1.0 => Some(
            -beta.value.ln() - (n - 1.0) * (1.0 - gamma).ln() + df * df * ln_n - log_fact - (n - df) * m,
        ),
        _ => None,
    };
    let log_total = log_term_main.map(|m| log_add_exp(log_term_typicality, m));

    let h_tilde = (md_argument - 1.0) / (TWO_E2 - 1.0);
    let closed_form = ClosedFormTerm {
        h_tilde,
        log_term: (h_tilde > 0.0 && beta.positive).then(|| {
            (1.0 - gamma).ln() - beta.value.ln() - log_fact + df * df * ln_n + df * h_tilde.ln()
                - n * ((1.0 - gamma) * h_tilde).ln()
        }),
        applicable: md_argument >= TWO_E2 && md_in_range,
    };

    let valid = violated.is_empty();
    let total = log_total.map(f64::exp);
    CertificateReport {
        n,
        d,
        h,
        gamma,
        b,
        t,
        alpha: alpha.value,
        beta: beta.value,
        eps_m: eta.eps_m,
        eta: eta.eta,
        md_argument,
        md_value,
        log_term_typicality,
        log_term_main,
        term_typicality: log_term_typicality.exp(),
        term_main: log_term_main.map(f64::exp),
        log_total,
        total,
        closed_form,
        valid,
        violated_preconditions: violated,
        existence_certified: valid && total.is_some_and(|v| v < 1.0),
        entropy_threshold: df.ln() - h / df,
    }
}
