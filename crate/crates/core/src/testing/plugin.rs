use super::config::{Decision, Diagnostics, TestConfig, TestVerdict};
use super::SymmetricTester;
use crate::contrast::contrast;
use crate::error::{Error, Result};
use crate::markov::TransitionMatrix;
use crate::sampling::{RandomSource, Trajectory};

pub const PLUGIN_TESTER_ID: &str = "plugin";

/// Rows with fewer outgoing transitions than this are copied from the
/// reference.
pub const DEFAULT_MIN_VISITS: u64 = 10;

/// Reference symmetric matrices are accepted up to this asymmetry.
pub const SYMMETRY_TOL: f64 = 1e-12;

/// Baseline plug-in tester for symmetric references.
///
/// Stand-in for a dedicated symmetric-chain identity tester: it estimates
/// the transition matrix from the trajectory and thresholds the contrast of
/// the estimate to the reference at `ε/2`. It carries no sample-complexity
/// guarantee; `n` has to be calibrated empirically.
///
/// Estimation details:
/// - counts of transitions off the reference edge set are dropped;
/// - a row seen at least `min_visits` times gets
///   `(N(y, y') + α) / (N(y) + α·deg(y))` on the reference edges, with
///   `α = 1/Δ` unless overridden;
/// - other rows are copied from the reference.
#[derive(Debug, Clone)]
pub struct PluginTester {
    pub min_visits: u64,
    pub smoothing: Option<f64>,
}

impl Default for PluginTester {
    fn default() -> Self {
        Self {
            min_visits: DEFAULT_MIN_VISITS,
            smoothing: None,
        }
    }
}

impl PluginTester {
    /// Smoothed empirical matrix on the reference edge set, plus the number
    /// of rows that fell back to the reference.
    pub fn estimate(
        &self,
        reference: &TransitionMatrix,
        y: &Trajectory,
    ) -> Result<(TransitionMatrix, usize)> {
        let k = reference.state_count();
        if y.state_count != k {
            return Err(Error::IncompatibleStateCount {
                expected: k,
                found: y.state_count,
            });
        }
        let alpha = self.smoothing.unwrap_or(1.0 / k as f64);
        let counts = y.transition_counts();
        let edges = reference.edges();
        let mut data = vec![0.0; k * k];
        let mut sparse_rows = 0;
        for from in 0..k {
            let row_counts = &counts[from * k..(from + 1) * k];
            let observed: u64 = edges.successors(from).map(|to| row_counts[to]).sum();
            let out = &mut data[from * k..(from + 1) * k];
            if observed >= self.min_visits {
                let norm = observed as f64 + alpha * edges.degree(from) as f64;
                for to in edges.successors(from) {
                    out[to] = (row_counts[to] as f64 + alpha) / norm;
                }
            } else {
                sparse_rows += 1;
                out.copy_from_slice(reference.row(from));
            }
        }
        Ok((
            TransitionMatrix::from_dense(edges.clone(), data)?,
            sparse_rows,
        ))
    }
}

impl SymmetricTester for PluginTester {
    fn id(&self) -> &str {
        PLUGIN_TESTER_ID
    }

    fn test(
        &self,
        reference: &TransitionMatrix,
        y: &Trajectory,
        cfg: &TestConfig,
        _source: &RandomSource,
    ) -> Result<TestVerdict> {
        cfg.validate()?;
        if reference.max_asymmetry() > SYMMETRY_TOL {
            return Err(Error::PreconditionFailed(
                "plug-in tester needs a symmetric reference".into(),
            ));
        }
        if !reference.is_irreducible() {
            return Err(Error::PreconditionFailed(
                "plug-in tester needs an irreducible reference".into(),
            ));
        }
        let (estimate, sparse_rows) = self.estimate(reference, y)?;
        let k_hat = contrast(&estimate, reference)?.k;
        let decision = if k_hat > cfg.epsilon / 2.0 {
            Decision::Reject
        } else {
            Decision::AcceptNull
        };
        Ok(TestVerdict {
            decision,
            diagnostics: Diagnostics {
                tester: PLUGIN_TESTER_ID.to_string(),
                visits: y.visits(),
                contrast_estimate: Some(k_hat),
                insufficient_data: 2 * sparse_rows > reference.state_count(),
            },
        })
    }
}
