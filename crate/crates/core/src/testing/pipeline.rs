use super::config::{TestConfig, TestVerdict};
use super::SymmetricTester;
use crate::embedding::{build_symmetrizer, Symmetrizer};
use crate::error::{Error, Result};
use crate::markov::{check_vtest_membership, RationalStationary, TransitionMatrix};
use crate::sampling::{embed_trajectory, RandomSource, Trajectory};

/// Maximum asymmetry tolerated in the symmetrized reference.
pub const SYMMETRIZATION_TOL: f64 = 1e-12;

/// Reference-side half of the reduction, built once per reference: the
/// symmetrizer and the symmetrized reference matrix.
#[derive(Debug, Clone)]
pub struct ReductionPipeline {
    reference: TransitionMatrix,
    symmetrizer: Symmetrizer,
    symmetric_reference: TransitionMatrix,
}

impl ReductionPipeline {
    /// Fails with `NotInVtest` unless the reference is irreducible,
    /// reversible and has stationary law `r`.
    pub fn new(reference: &TransitionMatrix, r: &RationalStationary) -> Result<Self> {
        let report = check_vtest_membership(reference, r, reference.edges());
        if !report.is_member() {
            return Err(Error::NotInVtest(report.failures));
        }
        let symmetrizer = build_symmetrizer(r, reference.edges())?;
        let symmetric_reference = symmetrizer.embed_matrix(reference)?;
        let asymmetry = symmetric_reference.max_asymmetry();
        if asymmetry > SYMMETRIZATION_TOL {
            return Err(Error::PreconditionFailed(format!(
                "symmetrized reference has asymmetry {asymmetry:e}"
            )));
        }
        Ok(Self {
            reference: reference.clone(),
            symmetrizer,
            symmetric_reference,
        })
    }

    pub fn reference(&self) -> &TransitionMatrix {
        &self.reference
    }

    pub fn symmetrizer(&self) -> &Symmetrizer {
        &self.symmetrizer
    }

    /// `σ_*P̄`.
    pub fn symmetric_reference(&self) -> &TransitionMatrix {
        &self.symmetric_reference
    }

    /// Embeds `x` into the expanded space and hands it to `tester` together
    /// with the symmetrized reference.
    pub fn test(
        &self,
        x: &Trajectory,
        cfg: &TestConfig,
        tester: &dyn SymmetricTester,
        embed_source: &RandomSource,
        tester_source: &RandomSource,
    ) -> Result<TestVerdict> {
        cfg.validate()?;
        let y = embed_trajectory(self.symmetrizer.embedding(), x, embed_source)?;
        tester.test(&self.symmetric_reference, &y, cfg, tester_source)
    }
}

/// One-shot form of [`ReductionPipeline`]: symmetrize the reference, embed
/// the trajectory, delegate to `tester`.
pub fn reduced_identity_test(
    reference: &TransitionMatrix,
    r: &RationalStationary,
    x: &Trajectory,
    cfg: &TestConfig,
    tester: &dyn SymmetricTester,
    embed_source: &RandomSource,
    tester_source: &RandomSource,
) -> Result<TestVerdict> {
    ReductionPipeline::new(reference, r)?.test(x, cfg, tester, embed_source, tester_source)
}
