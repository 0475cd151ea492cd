use std::collections::BTreeMap;

use super::lumping::{induced_edge_image, LumpingMap};
use super::memoryless::{MemorylessEmbedding, WEIGHT_TOL};
use crate::error::{Error, Result};
use crate::markov::{EdgeSet, TransitionMatrix};

/// Markov embedding with edge-dependent weights `Λ(y, y')`.
///
/// Requirements checked at construction:
/// 1. `κ₂(E) = D`;
/// 2. `Λ > 0` on `E`;
/// 3. for every `y` and every `x'` with `(κ(y), x') ∈ D`, the weights
///    `(Λ(y, y'))_{y' ∈ S_{x'}}` form a probability vector.
///
/// Only memoryless embeddings are constructed by the testing pipeline; this
/// type exists so that arbitrary embeddings can be validated and applied.
#[derive(Debug, Clone, PartialEq)]
pub struct MarkovEmbedding {
    lumping: LumpingMap,
    base_edges: EdgeSet,
    edges: EdgeSet,
    weights: BTreeMap<(usize, usize), f64>,
}

impl MarkovEmbedding {
    pub fn new(
        lumping: LumpingMap,
        base_edges: EdgeSet,
        weights: BTreeMap<(usize, usize), f64>,
    ) -> Result<Self> {
        let edges = EdgeSet::new(lumping.source_count(), weights.keys().copied())?;
        if induced_edge_image(&lumping, &edges)? != base_edges {
            return Err(Error::InvalidEmbedding(
                "lumped edge set of the embedding differs from the base edge set".into(),
            ));
        }
        if let Some((&(a, b), w)) = weights.iter().find(|(_, w)| !w.is_finite() || **w <= 0.0) {
            return Err(Error::InvalidEmbedding(format!(
                "weight on edge ({a}, {b}) is {w}, expected positive"
            )));
        }
        for y in 0..lumping.source_count() {
            for target in base_edges.successors(lumping.map(y)) {
                let total: f64 = lumping
                    .block(target)
                    .iter()
                    .map(|&z| weights.get(&(y, z)).copied().unwrap_or(0.0))
                    .sum();
                if (total - 1.0).abs() > WEIGHT_TOL {
                    return Err(Error::InvalidEmbedding(format!(
                        "weights from {y} into block {target} sum to {total}"
                    )));
                }
            }
        }
        Ok(Self {
            lumping,
            base_edges,
            edges,
            weights,
        })
    }

    /// The edge-weight form `Λ(y, y') = L(y')` of a memoryless embedding.
    pub fn from_memoryless(embedding: &MemorylessEmbedding, base_edges: &EdgeSet) -> Result<Self> {
        let edges = embedding.target_edges(base_edges)?;
        let weights = edges
            .iter()
            .map(|(a, b)| ((a, b), embedding.weight(b)))
            .collect();
        Self::new(embedding.lumping().clone(), base_edges.clone(), weights)
    }

    pub fn lumping(&self) -> &LumpingMap {
        &self.lumping
    }

    pub fn edges(&self) -> &EdgeSet {
        &self.edges
    }

    pub fn weight(&self, from: usize, to: usize) -> f64 {
        self.weights.get(&(from, to)).copied().unwrap_or(0.0)
    }

    /// True iff `Λ(y, y')` depends on `y'` only.
    pub fn is_memoryless(&self, tol: f64) -> bool {
        let mut by_target: BTreeMap<usize, f64> = BTreeMap::new();
        self.weights.iter().all(|(&(_, b), &w)| {
            let first = *by_target.entry(b).or_insert(w);
            (first - w).abs() <= tol
        })
    }

    /// `Λ_*P(y, y') = P(κ(y), κ(y'))·Λ(y, y')` on `E`.
    pub fn embed_matrix(&self, p: &TransitionMatrix) -> Result<TransitionMatrix> {
        if p.edges() != &self.base_edges {
            return Err(Error::EdgeMismatch(
                "matrix edge set differs from the embedding's base edge set".into(),
            ));
        }
        let n = self.lumping.source_count();
        let mut data = vec![0.0; n * n];
        for (&(a, b), &w) in &self.weights {
            data[a * n + b] = p.get(self.lumping.map(a), self.lumping.map(b)) * w;
        }
        TransitionMatrix::from_dense(self.edges.clone(), data)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::embedding::lump;

    #[test]
    fn memoryless_form_agrees() {
        let p = TransitionMatrix::from_rows(&[vec![0.5, 0.5], vec![0.25, 0.75]]).unwrap();
        let l = MemorylessEmbedding::new(
            LumpingMap::new(vec![0, 1, 1], 2).unwrap(),
            vec![1.0, 0.25, 0.75],
        )
        .unwrap();
        let g = MarkovEmbedding::from_memoryless(&l, p.edges()).unwrap();
        assert!(g.is_memoryless(0.0));
        assert_eq!(g.embed_matrix(&p).unwrap(), l.embed_matrix(&p).unwrap());
    }

    #[test]
    fn edge_dependent_weights_are_lumping_sections() {
        let p = TransitionMatrix::from_rows(&[vec![0.5, 0.5], vec![0.25, 0.75]]).unwrap();
        let kappa = LumpingMap::new(vec![0, 1, 1], 2).unwrap();
        let weights: BTreeMap<_, _> = [
            ((0, 0), 1.0),
            ((0, 1), 0.5),
            ((0, 2), 0.5),
            ((1, 0), 1.0),
            ((1, 1), 0.9),
            ((1, 2), 0.1),
            ((2, 0), 1.0),
            ((2, 1), 0.2),
            ((2, 2), 0.8),
        ]
        .into_iter()
        .collect();
        let g = MarkovEmbedding::new(kappa.clone(), p.edges().clone(), weights).unwrap();
        assert!(!g.is_memoryless(1e-12));
        let m = g.embed_matrix(&p).unwrap();
        assert!(lump(&m, &kappa).unwrap().max_abs_diff(&p) < 1e-15);
    }

    #[test]
    fn rejects_unnormalized_rows() {
        let base = EdgeSet::complete(2).unwrap();
        let kappa = LumpingMap::new(vec![0, 1, 1], 2).unwrap();
        let weights: BTreeMap<_, _> = [
            ((0, 0), 1.0),
            ((0, 1), 0.5),
            ((0, 2), 0.6),
            ((1, 0), 1.0),
            ((1, 1), 1.0),
            ((2, 0), 1.0),
            ((2, 2), 1.0),
        ]
        .into_iter()
        .collect();
        assert!(MarkovEmbedding::new(kappa, base, weights).is_err());
    }
}
