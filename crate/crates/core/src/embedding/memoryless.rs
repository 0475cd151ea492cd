use serde::{Deserialize, Serialize};

use super::lumping::LumpingMap;
use crate::error::{Error, Result};
use crate::markov::{EdgeSet, StationaryDistribution, TransitionMatrix};

/// Per-block normalization tolerance for embedding weights.
pub const WEIGHT_TOL: f64 = 1e-12;

/// Memoryless Markov embedding: a lumping `κ: Y → X` and positive weights
/// `L` on `Y` with `Σ_{y ∈ S_x} L(y) = 1` for every block.
///
/// The embedded matrix is `(L_*P)(y, y') = P(κ(y), κ(y'))·L(y')` on
/// `E = {(y, y') : (κ(y), κ(y')) ∈ D}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "EmbeddingRepr", into = "EmbeddingRepr")]
pub struct MemorylessEmbedding {
    lumping: LumpingMap,
    weights: Vec<f64>,
}

#[derive(Serialize, Deserialize)]
struct EmbeddingRepr {
    lumping: LumpingMap,
    weights: Vec<f64>,
}

impl TryFrom<EmbeddingRepr> for MemorylessEmbedding {
    type Error = Error;
    fn try_from(r: EmbeddingRepr) -> Result<Self> {
        MemorylessEmbedding::new(r.lumping, r.weights)
    }
}

impl From<MemorylessEmbedding> for EmbeddingRepr {
    fn from(e: MemorylessEmbedding) -> Self {
        EmbeddingRepr {
            lumping: e.lumping,
            weights: e.weights,
        }
    }
}

impl MemorylessEmbedding {
    /// Normalization is enforced on every block, not only on blocks
    /// reachable in one step from some state.
    pub fn new(lumping: LumpingMap, weights: Vec<f64>) -> Result<Self> {
        if weights.len() != lumping.source_count() {
            return Err(Error::InvalidEmbedding(format!(
                "{} weights for {} source states",
                weights.len(),
                lumping.source_count()
            )));
        }
        if let Some(y) = weights.iter().position(|w| !w.is_finite() || *w <= 0.0) {
            return Err(Error::InvalidEmbedding(format!(
                "weight L({y}) = {} is not positive",
                weights[y]
            )));
        }
        for (x, block) in lumping.blocks().iter().enumerate() {
            let total: f64 = block.iter().map(|&y| weights[y]).sum();
            if (total - 1.0).abs() > WEIGHT_TOL {
                return Err(Error::InvalidEmbedding(format!(
                    "weights on block {x} sum to {total}"
                )));
            }
        }
        Ok(Self { lumping, weights })
    }

    pub fn identity(n: usize) -> Result<Self> {
        Self::new(LumpingMap::identity(n)?, vec![1.0; n])
    }

    pub fn lumping(&self) -> &LumpingMap {
        &self.lumping
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    #[inline]
    pub fn weight(&self, y: usize) -> f64 {
        self.weights[y]
    }

    pub fn source_count(&self) -> usize {
        self.lumping.source_count()
    }

    pub fn target_count(&self) -> usize {
        self.lumping.target_count()
    }

    /// `E = {(y, y') : (κ(y), κ(y')) ∈ D}`.
    pub fn target_edges(&self, base: &EdgeSet) -> Result<EdgeSet> {
        self.check_base(base.state_count())?;
        let n = self.source_count();
        let k = &self.lumping;
        EdgeSet::new(
            n,
            (0..n)
                .flat_map(|a| (0..n).map(move |b| (a, b)))
                .filter(|&(a, b)| base.contains(k.map(a), k.map(b))),
        )
    }

    fn check_base(&self, state_count: usize) -> Result<()> {
        if state_count != self.target_count() {
            return Err(Error::EdgeMismatch(format!(
                "embedding lumps onto {} states, matrix has {}",
                self.target_count(),
                state_count
            )));
        }
        Ok(())
    }

    /// `L_*P`.
    pub fn embed_matrix(&self, p: &TransitionMatrix) -> Result<TransitionMatrix> {
        let edges = self.target_edges(p.edges())?;
        let n = self.source_count();
        let k = &self.lumping;
        let mut data = vec![0.0; n * n];
        for (a, b) in edges.iter() {
            data[a * n + b] = p.get(k.map(a), k.map(b)) * self.weights[b];
        }
        TransitionMatrix::from_dense(edges, data)
    }

    /// `L_*π(y) = π(κ(y))·L(y)`.
    pub fn embed_distribution(
        &self,
        pi: &StationaryDistribution,
    ) -> Result<StationaryDistribution> {
        self.check_base(pi.len())?;
        let probs = (0..self.source_count())
            .map(|y| pi.probs()[self.lumping.map(y)] * self.weights[y])
            .collect();
        StationaryDistribution::new(probs)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn running_embedding() -> MemorylessEmbedding {
        MemorylessEmbedding::new(
            LumpingMap::new(vec![0, 1, 1], 2).unwrap(),
            vec![1.0, 0.5, 0.5],
        )
        .unwrap()
    }

    #[test]
    fn embeds_running_example() {
        let p = TransitionMatrix::from_rows(&[vec![0.5, 0.5], vec![0.25, 0.75]]).unwrap();
        let m = running_embedding().embed_matrix(&p).unwrap();
        assert_eq!(
            m.rows(),
            vec![
                vec![0.5, 0.25, 0.25],
                vec![0.25, 0.375, 0.375],
                vec![0.25, 0.375, 0.375]
            ]
        );
    }

    #[test]
    fn identity_embedding_is_noop() {
        let p = TransitionMatrix::from_rows(&[
            vec![0.1, 0.9, 0.0],
            vec![0.3, 0.3, 0.4],
            vec![0.0, 0.5, 0.5],
        ])
        .unwrap();
        let id = MemorylessEmbedding::identity(3).unwrap();
        assert_eq!(id.embed_matrix(&p).unwrap(), p);
        let pi = StationaryDistribution::new(vec![0.2, 0.3, 0.5]).unwrap();
        assert_eq!(id.embed_distribution(&pi).unwrap(), pi);
    }

    #[test]
    fn embeds_distribution() {
        let pi = StationaryDistribution::new(vec![1.0 / 3.0, 2.0 / 3.0]).unwrap();
        let e = running_embedding().embed_distribution(&pi).unwrap();
        assert!(e.max_abs_diff(&[1.0 / 3.0; 3]) < 1e-16);
    }

    #[test]
    fn rejects_bad_weights() {
        let k = LumpingMap::new(vec![0, 1, 1], 2).unwrap();
        assert!(MemorylessEmbedding::new(k.clone(), vec![1.0, 0.6, 0.5]).is_err());
        assert!(MemorylessEmbedding::new(k.clone(), vec![1.0, 1.0, 0.0]).is_err());
        assert!(MemorylessEmbedding::new(k, vec![1.0, 1.0]).is_err());
    }

    #[test]
    fn edge_mismatch_on_wrong_base() {
        let p = TransitionMatrix::from_rows(&[vec![1.0]]).unwrap();
        assert!(matches!(
            running_embedding().embed_matrix(&p),
            Err(Error::EdgeMismatch(_))
        ));
    }
}
