//! Path ensembles as empirical distributions of continuous processes.

mod distance;
mod ensemble;
mod estimators;
mod qsaa;
mod walks;

pub use distance::{path_prokhorov, path_space};
pub use ensemble::{PathEnsemble, WEIGHT_TOL};
pub use estimators::{mu_sub_hat, mu_suec_hat, SubEstimate, SuecEstimate, SuecRow};
pub use qsaa::{verify_qsaa, QsaaOptions, QsaaReport, QsaaRow, QsaaSlacks};
pub use walks::{sample_walks, spike_mixture};
