//! Finite stochastic matrices: validation, stationary laws, irreducibility,
//! reversibility, Perron roots, rational stationary laws and membership in
//! the restricted testing class.

mod edges;
pub mod io;
mod matrix;
mod membership;
mod rational;
pub mod spectral;
mod stationary;

pub use edges::EdgeSet;
pub use matrix::{TransitionMatrix, DETAILED_BALANCE_TOL, STOCHASTIC_TOL};
pub use membership::{
    check_vtest_membership, MembershipReport, VtestFailure, STATIONARY_MATCH_TOL,
};
pub use rational::{rationalize, RationalStationary, RATIONALIZE_TOL};
pub use spectral::{perron_root, spectral_radius, PerronRoot};
pub use stationary::{stationary_distribution, StationaryDistribution, STATIONARY_RESIDUAL_TOL};
