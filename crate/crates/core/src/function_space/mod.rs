//! Piecewise-linear paths, Chebyshev centers and interpolation nets.

mod aa_net;
mod ball;
mod jung;
mod path;
mod verify;

pub use aa_net::{aa_net, grid_times, AANet, LatticeSpec, SampleFit, Window, LATTICE_LIMIT, NET_TOL};
pub use ball::{chebyshev_center, BallCertificate, CERT_TOL, MAX_DIM};
pub use jung::{jung_check, jung_constant, regular_simplex, JungReport};
pub use path::{
    bridge_gap, bridge_max_distance, modulus, mu_uec_family, ramp_family, uniform_distance, PLPath,
};
pub(crate) use path::{check_dims, sup_distance};
pub use verify::{verify_qaa, QaaLowerCheck, QaaReport, QaaRow};
