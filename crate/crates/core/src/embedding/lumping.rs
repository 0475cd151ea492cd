use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::markov::{EdgeSet, TransitionMatrix};

/// Tolerance used by [`lump`] to confirm lumpability before merging.
pub const LUMP_TOL: f64 = 1e-10;

/// Surjective state map `κ: Y → X` with its blocks `S_x = κ⁻¹(x)`.
///
/// States are 0-indexed on both sides.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "LumpingRepr", into = "LumpingRepr")]
pub struct LumpingMap {
    kappa: Vec<usize>,
    blocks: Vec<Vec<usize>>,
}

#[derive(Serialize, Deserialize)]
struct LumpingRepr {
    kappa: Vec<usize>,
    target_count: usize,
}

impl TryFrom<LumpingRepr> for LumpingMap {
    type Error = Error;
    fn try_from(r: LumpingRepr) -> Result<Self> {
        LumpingMap::new(r.kappa, r.target_count)
    }
}

impl From<LumpingMap> for LumpingRepr {
    fn from(l: LumpingMap) -> Self {
        LumpingRepr {
            target_count: l.target_count(),
            kappa: l.kappa,
        }
    }
}

impl LumpingMap {
    pub fn new(kappa: Vec<usize>, target_count: usize) -> Result<Self> {
        if kappa.is_empty() || target_count == 0 {
            return Err(Error::InvalidEmbedding("empty lumping map".into()));
        }
        let mut blocks = vec![Vec::new(); target_count];
        for (y, &x) in kappa.iter().enumerate() {
            if x >= target_count {
                return Err(Error::InvalidEmbedding(format!(
                    "kappa({y}) = {x} is outside 0..{target_count}"
                )));
            }
            blocks[x].push(y);
        }
        if let Some(x) = blocks.iter().position(Vec::is_empty) {
            return Err(Error::InvalidEmbedding(format!(
                "kappa is not surjective: block {x} is empty"
            )));
        }
        Ok(Self { kappa, blocks })
    }

    pub fn identity(n: usize) -> Result<Self> {
        Self::new((0..n).collect(), n)
    }

    /// `|Y|`.
    pub fn source_count(&self) -> usize {
        self.kappa.len()
    }

    /// `|X|`.
    pub fn target_count(&self) -> usize {
        self.blocks.len()
    }

    #[inline]
    pub fn map(&self, y: usize) -> usize {
        self.kappa[y]
    }

    pub fn kappa(&self) -> &[usize] {
        &self.kappa
    }

    /// `S_x`, in increasing order.
    pub fn block(&self, x: usize) -> &[usize] {
        &self.blocks[x]
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    pub fn is_identity(&self) -> bool {
        self.source_count() == self.target_count()
            && self.kappa.iter().enumerate().all(|(y, &x)| x == y)
    }
}

/// `κ₂(E) = {(κ(y), κ(y')) : (y, y') ∈ E}`.
pub fn induced_edge_image(kappa: &LumpingMap, edges: &EdgeSet) -> Result<EdgeSet> {
    if edges.state_count() != kappa.source_count() {
        return Err(Error::DimensionMismatch(format!(
            "edge set over {} states, lumping map over {}",
            edges.state_count(),
            kappa.source_count()
        )));
    }
    EdgeSet::new(
        kappa.target_count(),
        edges.iter().map(|(a, b)| (kappa.map(a), kappa.map(b))),
    )
}

/// Row-block sum `Σ_{y' ∈ S_x} P(y, y')`.
fn block_sum(p: &TransitionMatrix, y: usize, block: &[usize]) -> f64 {
    block.iter().map(|&z| p.get(y, z)).sum()
}

fn first_lumpability_violation(
    p: &TransitionMatrix,
    kappa: &LumpingMap,
    tol: f64,
) -> Option<(usize, usize, usize)> {
    for members in kappa.blocks() {
        let (&head, rest) = members.split_first()?;
        for (target, block) in kappa.blocks().iter().enumerate() {
            let reference = block_sum(p, head, block);
            for &other in rest {
                if (block_sum(p, other, block) - reference).abs() > tol {
                    return Some((head, other, target));
                }
            }
        }
    }
    None
}

/// Classical row-block-sum criterion: every state in a block sends the same
/// mass into each block.
pub fn is_lumpable(p: &TransitionMatrix, kappa: &LumpingMap, tol: f64) -> bool {
    p.state_count() == kappa.source_count() && first_lumpability_violation(p, kappa, tol).is_none()
}

/// The lumped matrix `κ_*P(x, x') = Σ_{y' ∈ S_{x'}} P(y, y')` for the first
/// representative `y` of `S_x`.
pub fn lump(p: &TransitionMatrix, kappa: &LumpingMap) -> Result<TransitionMatrix> {
    if p.state_count() != kappa.source_count() {
        return Err(Error::DimensionMismatch(format!(
            "matrix over {} states, lumping map over {}",
            p.state_count(),
            kappa.source_count()
        )));
    }
    if let Some((first, second, block)) = first_lumpability_violation(p, kappa, LUMP_TOL) {
        return Err(Error::NotLumpable {
            first,
            second,
            block,
        });
    }
    let n = kappa.target_count();
    let mut data = vec![0.0; n * n];
    for (x, members) in kappa.blocks().iter().enumerate() {
        let representative = members[0];
        for (x2, block) in kappa.blocks().iter().enumerate() {
            data[x * n + x2] = block_sum(p, representative, block);
        }
    }
    let edges = induced_edge_image(kappa, p.edges())?;
    TransitionMatrix::from_dense(edges, data)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_non_surjective() {
        assert!(LumpingMap::new(vec![0, 0, 2], 3).is_err());
        assert!(LumpingMap::new(vec![0, 3], 2).is_err());
    }

    #[test]
    fn edge_image() {
        let id = LumpingMap::identity(3).unwrap();
        let e = EdgeSet::new(3, [(0, 1), (1, 2), (2, 0)]).unwrap();
        assert_eq!(induced_edge_image(&id, &e).unwrap(), e);

        let collapse = LumpingMap::new(vec![0, 0, 0], 1).unwrap();
        let img = induced_edge_image(&collapse, &e).unwrap();
        assert_eq!(img.iter().collect::<Vec<_>>(), vec![(0, 0)]);

        let kappa = LumpingMap::new(vec![0, 1, 1], 2).unwrap();
        let complete = EdgeSet::complete(3).unwrap();
        assert_eq!(
            induced_edge_image(&kappa, &complete).unwrap(),
            EdgeSet::complete(2).unwrap()
        );
    }

    #[test]
    fn cyclic_permutation_is_not_lumpable() {
        let p = TransitionMatrix::from_rows(&[
            vec![0.0, 1.0, 0.0],
            vec![0.0, 0.0, 1.0],
            vec![1.0, 0.0, 0.0],
        ])
        .unwrap();
        let kappa = LumpingMap::new(vec![0, 0, 1], 2).unwrap();
        assert!(!is_lumpable(&p, &kappa, 1e-12));
        assert!(matches!(lump(&p, &kappa), Err(Error::NotLumpable { .. })));
        let id = LumpingMap::identity(3).unwrap();
        assert!(is_lumpable(&p, &id, 0.0));
        assert_eq!(lump(&p, &id).unwrap(), p);
    }

    #[test]
    fn lumps_block_sums() {
        let p = TransitionMatrix::from_rows(&[
            vec![0.5, 0.25, 0.25],
            vec![0.25, 0.375, 0.375],
            vec![0.25, 0.375, 0.375],
        ])
        .unwrap();
        let kappa = LumpingMap::new(vec![0, 1, 1], 2).unwrap();
        let lumped = lump(&p, &kappa).unwrap();
        assert_eq!(lumped.rows(), vec![vec![0.5, 0.5], vec![0.25, 0.75]]);
    }

    #[test]
    fn serde_validates() {
        let k = LumpingMap::new(vec![0, 1, 1], 2).unwrap();
        let json = serde_json::to_string(&k).unwrap();
        assert_eq!(serde_json::from_str::<LumpingMap>(&json).unwrap(), k);
        assert!(serde_json::from_str::<LumpingMap>(r#"{"kappa":[0,0],"target_count":2}"#).is_err());
    }
}
