//! Discrete probability measures and the parametrized Prokhorov distance.

mod distance;
mod measure;
mod net;
mod tightness;
mod verify;

pub use distance::{
    check_alpha, prokhorov_distance, prokhorov_distance_bisect, verify_coupling, CouplingCertificate,
    CouplingEntry, Feasibility, ProkhorovDistance, ViolationCertificate, FEASIBILITY_TOL,
    FLOW_RESIDUAL_TOL,
};
pub(crate) use distance::Bipartite;
pub use measure::{tv_distance, DiscreteMeasure, MASS_TOL};
pub use net::{certify_net_cover, diameter_partition, prokhorov_net, NetCover, ProkhorovNet, MAX_NET_SIZE};
pub use tightness::{mu_ut, TightnessEntry, TightnessEstimate, EXACT_LIMIT};
pub(crate) use tightness::next_combination;
pub use verify::{verify_qprokh, QProkhOptions, QProkhReport, QProkhRow};
