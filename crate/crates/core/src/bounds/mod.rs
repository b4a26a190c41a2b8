//! Closed-form bound machinery: the reduced minimization `M_d`, the `h_min`
//! curve, the smallest-dimension search and the existence certificate.

mod certificate;
mod md;
mod search;

pub use certificate::{
    alpha_term, beta_term, certificate_evaluate, AlphaTerm, BetaTerm, CertificateReport, ClosedFormTerm,
};
pub use md::{level_split_slope, m_d, m_d_oracle, md_constraint, md_objective, MdSolution};
pub use search::{
    counterexample_condition, counterexample_margin, delta_s_max_bound, dmin_search, f_ratio_sup, h_min_curve,
    minimize_h_min, smallest_dimension, DeltaSMax, HMinResult, SearchResult, DELTA_S_BASE_DIMENSION,
    DELTA_S_GAMMA, DIMENSION_CAP,
};
