//! Symmetrizing embedding of a reversible chain with rational stationary
//! law `π̄ = p/Δ`.
//!
//! States are laid out in ascending order of `p` (ties by state index).
//! With sorted numerators `p₁ ≤ … ≤ p_|X|`, the 1-indexed construction is
//!
//! ```text
//! κ(j) = min { i : p₁ + … + p_i ≥ j },    L(j) = 1 / p_{κ(j)},    1 ≤ j ≤ Δ
//! ```
//!
//! so block `i` has exactly `p_i` members. This module stores 0-indexed
//! states: expanded state `j − 1` maps to the original label of the
//! `κ(j)`-th smallest numerator. Embedding a reversible `P̄` gives
//! `P̄(x, x')/p_{x'}`, which is symmetric exactly when detailed balance holds,
//! and the embedded stationary law is uniform on `Δ` states.

use serde::{Deserialize, Serialize};

use super::lumping::LumpingMap;
use super::memoryless::MemorylessEmbedding;
use crate::error::{Error, Result};
use crate::markov::{
    stationary_distribution, EdgeSet, RationalStationary, TransitionMatrix, DETAILED_BALANCE_TOL,
    STATIONARY_MATCH_TOL,
};

#[derive(Debug, Clone, PartialEq)]
pub struct Symmetrizer {
    embedding: MemorylessEmbedding,
    rational: RationalStationary,
    base_edges: EdgeSet,
    target_edges: EdgeSet,
}

/// Serialized symmetrizer: `{"kappa", "weights", "delta", "p"}` with 0-indexed
/// `kappa` and `p` in the caller's state order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SymmetrizerFile {
    pub kappa: Vec<usize>,
    pub weights: Vec<f64>,
    pub delta: u64,
    pub p: Vec<u64>,
}

/// Builds the symmetrizer for `r` over the support graph `edges`.
pub fn build_symmetrizer(r: &RationalStationary, edges: &EdgeSet) -> Result<Symmetrizer> {
    if r.state_count() != edges.state_count() {
        return Err(Error::DimensionMismatch(format!(
            "stationary law over {} states, edge set over {}",
            r.state_count(),
            edges.state_count()
        )));
    }
    let delta = r.denominator() as usize;
    let mut kappa = Vec::with_capacity(delta);
    let mut weights = Vec::with_capacity(delta);
    for &state in r.order() {
        let size = r.numerators()[state];
        let weight = if size == 1 { 1.0 } else { 1.0 / size as f64 };
        for _ in 0..size {
            kappa.push(state);
            weights.push(weight);
        }
    }
    let lumping = LumpingMap::new(kappa, r.state_count())?;
    let embedding = MemorylessEmbedding::new(lumping, weights)?;
    let target_edges = embedding.target_edges(edges)?;
    Ok(Symmetrizer {
        embedding,
        rational: r.clone(),
        base_edges: edges.clone(),
        target_edges,
    })
}

impl Symmetrizer {
    pub fn embedding(&self) -> &MemorylessEmbedding {
        &self.embedding
    }

    pub fn lumping(&self) -> &LumpingMap {
        self.embedding.lumping()
    }

    pub fn rational(&self) -> &RationalStationary {
        &self.rational
    }

    /// `Δ`.
    pub fn delta(&self) -> usize {
        self.embedding.source_count()
    }

    pub fn base_edges(&self) -> &EdgeSet {
        &self.base_edges
    }

    /// `E = {(y, y') : (κ(y), κ(y')) ∈ D}`.
    pub fn target_edges(&self) -> &EdgeSet {
        &self.target_edges
    }

    /// `σ_*P`, for `P` supported on the symmetrizer's base edge set.
    pub fn embed_matrix(&self, p: &TransitionMatrix) -> Result<TransitionMatrix> {
        if p.edges() != &self.base_edges {
            return Err(Error::EdgeMismatch(
                "matrix edge set differs from the symmetrizer's base edge set".into(),
            ));
        }
        self.embedding.embed_matrix(p)
    }

    pub fn to_file(&self) -> SymmetrizerFile {
        SymmetrizerFile {
            kappa: self.lumping().kappa().to_vec(),
            weights: self.embedding.weights().to_vec(),
            delta: self.rational.denominator(),
            p: self.rational.numerators().to_vec(),
        }
    }

    /// Rebuilds from a file and the base edge set, checking that the stored
    /// map and weights are exactly the ones the construction produces.
    pub fn from_file(file: &SymmetrizerFile, edges: &EdgeSet) -> Result<Self> {
        let rational = RationalStationary::new(file.p.clone(), file.delta)?;
        let built = build_symmetrizer(&rational, edges)?;
        if built.lumping().kappa() != file.kappa.as_slice()
            || built.embedding.weights() != file.weights.as_slice()
        {
            return Err(Error::InvalidEmbedding(
                "stored kappa/weights do not match the construction for the stored p".into(),
            ));
        }
        Ok(built)
    }
}

impl SymmetrizerFile {
    /// The embedding alone; enough to embed trajectories without the base
    /// edge set.
    pub fn embedding(&self) -> Result<MemorylessEmbedding> {
        let lumping = LumpingMap::new(self.kappa.clone(), self.p.len())?;
        MemorylessEmbedding::new(lumping, self.weights.clone())
    }
}

/// `max_{y,y'} |M(y,y') − M(y',y)|` for `M = σ_*P̄`.
///
/// Fails with `PreconditionFailed` unless `P̄` is reversible with stationary
/// law equal to the symmetrizer's `p/Δ`.
pub fn verify_symmetrization(s: &Symmetrizer, p_ref: &TransitionMatrix) -> Result<f64> {
    let pi = stationary_distribution(p_ref)
        .map_err(|e| Error::PreconditionFailed(format!("reference stationary law: {e}")))?;
    let defect = p_ref.detailed_balance_defect(pi.probs());
    if defect > DETAILED_BALANCE_TOL {
        return Err(Error::PreconditionFailed(format!(
            "reference is not reversible (detailed balance defect {defect:e})"
        )));
    }
    let diff = pi.max_abs_diff(&s.rational.probs());
    if diff > STATIONARY_MATCH_TOL {
        return Err(Error::PreconditionFailed(format!(
            "reference stationary law differs from p/Δ by {diff:e}"
        )));
    }
    Ok(s.embed_matrix(p_ref)?.max_asymmetry())
}
