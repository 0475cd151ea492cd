//! The reduction pipeline: symmetrize the reference, embed the observed
//! trajectory, delegate to a tester for symmetric chains. Also the Monte
//! Carlo risk harness built on top of it.

mod config;
mod pipeline;
mod plugin;
mod risk;

pub use config::{Decision, Diagnostics, InitialLaw, TestConfig, TestVerdict};
pub use pipeline::{reduced_identity_test, ReductionPipeline, SYMMETRIZATION_TOL};
pub use plugin::{PluginTester, DEFAULT_MIN_VISITS, PLUGIN_TESTER_ID, SYMMETRY_TOL};
pub use risk::{
    estimate_risk, sample_complexity_scan, validate_alternatives, RiskReport, ScanTable,
};

use crate::error::Result;
use crate::markov::TransitionMatrix;
use crate::sampling::{RandomSource, Trajectory};

/// Identity tester for symmetric chains.
///
/// Given a symmetric irreducible reference over `Δ` states and a trajectory
/// over the same states, decides whether the trajectory was generated by the
/// reference or by a chain at contrast greater than `cfg.epsilon`.
/// Implementations must be deterministic given `source`.
pub trait SymmetricTester {
    fn id(&self) -> &str;

    fn test(
        &self,
        reference: &TransitionMatrix,
        y: &Trajectory,
        cfg: &TestConfig,
        source: &RandomSource,
    ) -> Result<TestVerdict>;
}

/// Looks a tester up by id.
pub fn tester_by_id(id: &str) -> Option<Box<dyn SymmetricTester + Send + Sync>> {
    match id {
        PLUGIN_TESTER_ID => Some(Box::new(PluginTester::default())),
        _ => None,
    }
}
