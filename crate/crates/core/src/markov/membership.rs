use std::fmt;

use serde::{Deserialize, Serialize};

use super::edges::EdgeSet;
use super::matrix::{TransitionMatrix, DETAILED_BALANCE_TOL};
use super::rational::RationalStationary;
use super::stationary::stationary_distribution;

/// Tolerance on `‖π − π̄‖∞` for the shared-stationary-law assumption.
pub const STATIONARY_MATCH_TOL: f64 = 1e-9;

/// One violated assumption of the restricted class.
///
/// The rationality assumption holds by construction of
/// [`RationalStationary`], so it has no failure variant.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "failure", rename_all = "snake_case")]
pub enum VtestFailure {
    /// Support graph not strongly connected.
    NotIrreducible,
    /// Detailed balance violated by more than the tolerance.
    NotReversible {
        defect: f64,
    },
    /// Stationary law differs from the reference.
    StationaryMismatch {
        max_abs_diff: f64,
    },
    /// Support graph differs from the reference.
    EdgeSetMismatch {
        missing: Vec<(usize, usize)>,
        extra: Vec<(usize, usize)>,
    },
    StateCountMismatch {
        expected: usize,
        found: usize,
    },
}

impl VtestFailure {
    pub fn assumption(&self) -> &'static str {
        match self {
            VtestFailure::NotIrreducible | VtestFailure::NotReversible { .. } => "reversibility",
            VtestFailure::StationaryMismatch { .. } => "stationary_law",
            VtestFailure::EdgeSetMismatch { .. } | VtestFailure::StateCountMismatch { .. } => {
                "support"
            }
        }
    }
}

impl fmt::Display for VtestFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = self.assumption();
        match self {
            VtestFailure::NotIrreducible => write!(f, "{tag}: chain is not irreducible"),
            VtestFailure::NotReversible { defect } => {
                write!(f, "{tag}: detailed balance defect {defect:e}")
            }
            VtestFailure::StationaryMismatch { max_abs_diff } => write!(
                f,
                "{tag}: stationary law differs from the reference by {max_abs_diff:e}"
            ),
            VtestFailure::EdgeSetMismatch { missing, extra } => write!(
                f,
                "{tag}: edge set differs (missing {missing:?}, extra {extra:?})"
            ),
            VtestFailure::StateCountMismatch { expected, found } => {
                write!(f, "{tag}: expected {expected} states, found {found}")
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct MembershipReport {
    pub failures: Vec<VtestFailure>,
}

impl MembershipReport {
    pub fn is_member(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Checks irreducibility, reversibility, the shared edge set and the
/// shared (exact, rational) stationary law against a reference.
///
/// The relaxed form `‖π/π̄ − 1‖∞ < ε` of the stationary-law assumption is
/// not implemented.
pub fn check_vtest_membership(
    p: &TransitionMatrix,
    reference_pi: &RationalStationary,
    reference_edges: &EdgeSet,
) -> MembershipReport {
    let mut failures = Vec::new();
    let n = p.state_count();
    if n != reference_edges.state_count() || n != reference_pi.state_count() {
        failures.push(VtestFailure::StateCountMismatch {
            expected: reference_edges.state_count(),
            found: n,
        });
        return MembershipReport { failures };
    }

    if p.edges() != reference_edges {
        let missing = reference_edges
            .iter()
            .filter(|&(a, b)| !p.edges().contains(a, b))
            .collect();
        let extra = p
            .edges()
            .iter()
            .filter(|&(a, b)| !reference_edges.contains(a, b))
            .collect();
        failures.push(VtestFailure::EdgeSetMismatch { missing, extra });
    }

    match stationary_distribution(p) {
        Err(_) => failures.push(VtestFailure::NotIrreducible),
        Ok(pi) => {
            let defect = p.detailed_balance_defect(pi.probs());
            if defect > DETAILED_BALANCE_TOL {
                failures.push(VtestFailure::NotReversible { defect });
            }
            let diff = pi.max_abs_diff(&reference_pi.probs());
            if diff > STATIONARY_MATCH_TOL {
                failures.push(VtestFailure::StationaryMismatch { max_abs_diff: diff });
            }
        }
    }
    MembershipReport { failures }
}
