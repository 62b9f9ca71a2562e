//! Quantitative compactness on finite instances: parametrized Prokhorov
//! distances, covering profiles, path-space moduli and constructive nets.

pub mod error;
mod flow;
pub mod function_space;
pub mod metric;
pub mod mnc;
pub mod prokhorov;
pub mod stochastic;

use serde::Serialize;

pub use error::{Error, Result};
pub use function_space::{
    aa_net, chebyshev_center, jung_check, modulus, mu_uec_family, uniform_distance, verify_qaa, AANet,
    BallCertificate, JungReport, PLPath, QaaReport,
};
pub use metric::{FiniteMetricSpace, IndexSet};
pub use mnc::{cover_profile, cover_profile_ambient, exact_kcenter, CoverProfile, KCenter};
pub use prokhorov::{
    check_alpha, mu_ut, prokhorov_distance, prokhorov_net, tv_distance, verify_qprokh, DiscreteMeasure,
    Feasibility, ProkhorovDistance, ProkhorovNet, QProkhOptions, QProkhReport, TightnessEstimate,
};
pub use stochastic::{
    mu_sub_hat, mu_suec_hat, path_prokhorov, sample_walks, verify_qsaa, PathEnsemble, QsaaOptions,
    QsaaReport,
};

/// Outcome of a constructive theorem check.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Pass,
    /// The grids cannot decide one side; nothing was violated.
    Inconclusive,
    Fail,
}
