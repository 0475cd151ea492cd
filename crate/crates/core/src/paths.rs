//! Exact laws of stationary paths and the path-level Markov morphism induced
//! by a memoryless embedding.
//!
//! Paths of length `n` over `k` states are indexed in row-major order: the
//! path `(x₁, …, x_n)` sits at `x₁·k^{n−1} + x₂·k^{n−2} + … + x_n`.
//!
//! For a memoryless embedding `(κ, L)` and the block lumping
//! `κ_n(y₁ⁿ) = (κ(y₁), …, κ(y_n))`, the morphism sends a law `Q` on `Xⁿ` to
//! `(M_*Q)(y₁ⁿ) = Q(κ_n(y₁ⁿ))·Π_t L(y_t)`. Applied to the stationary path law
//! of `P` it yields the stationary path law of `L_*P`; [`verify_path_morphism`]
//! checks this by computing both sides independently.

use crate::contrast::renyi_half;
use crate::embedding::{LumpingMap, MemorylessEmbedding};
use crate::error::{Error, Result};
use crate::markov::{stationary_distribution, StationaryDistribution, TransitionMatrix};

/// Largest dense path enumeration allowed.
pub const PATH_GUARD: u128 = 1_000_000;

/// Checks `states^n ≤ PATH_GUARD` and returns `states^n`.
pub fn enumeration_size(states: usize, n: usize) -> Result<usize> {
    let mut size: u128 = 1;
    for _ in 0..n {
        size = size.saturating_mul(states as u128);
        if size > PATH_GUARD {
            return Err(Error::TooLarge {
                size,
                limit: PATH_GUARD,
            });
        }
    }
    Ok(size as usize)
}

/// Dense distribution over `Xⁿ`.
#[derive(Debug, Clone, PartialEq)]
pub struct PathDistribution {
    length: usize,
    state_count: usize,
    probs: Vec<f64>,
}

impl PathDistribution {
    pub fn length(&self) -> usize {
        self.length
    }

    pub fn state_count(&self) -> usize {
        self.state_count
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn prob(&self, path: &[usize]) -> f64 {
        self.probs[encode(path, self.state_count)]
    }

    pub fn total_mass(&self) -> f64 {
        self.probs.iter().sum()
    }

    pub fn max_abs_diff(&self, other: &PathDistribution) -> f64 {
        self.probs
            .iter()
            .zip(&other.probs)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }
}

pub fn encode(path: &[usize], states: usize) -> usize {
    path.iter().fold(0, |acc, &s| acc * states + s)
}

pub fn decode(mut index: usize, states: usize, n: usize) -> Vec<usize> {
    let mut path = vec![0; n];
    for slot in path.iter_mut().rev() {
        *slot = index % states;
        index /= states;
    }
    path
}

/// `Qⁿ(x₁ⁿ) = π(x₁)·Π_{t<n} P(x_t, x_{t+1})`.
pub fn path_distribution(
    p: &TransitionMatrix,
    pi: &StationaryDistribution,
    n: usize,
) -> Result<PathDistribution> {
    let k = p.state_count();
    if pi.len() != k {
        return Err(Error::DimensionMismatch(format!(
            "initial law over {} states, matrix over {k}",
            pi.len()
        )));
    }
    if n == 0 {
        return Err(Error::InvalidInput("path length must be at least 1".into()));
    }
    enumeration_size(k, n)?;
    let mut probs = pi.probs().to_vec();
    for _ in 1..n {
        let mut next = vec![0.0; probs.len() * k];
        for (idx, &mass) in probs.iter().enumerate() {
            let row = p.row(idx % k);
            for (to, &step) in row.iter().enumerate() {
                next[idx * k + to] = mass * step;
            }
        }
        probs = next;
    }
    Ok(PathDistribution {
        length: n,
        state_count: k,
        probs,
    })
}

/// `κ_n` as a lumping map from `Yⁿ` onto `Xⁿ`.
pub fn block_lumping(kappa: &LumpingMap, n: usize) -> Result<LumpingMap> {
    let (ys, xs) = (kappa.source_count(), kappa.target_count());
    let size = enumeration_size(ys, n)?;
    let map = (0..size)
        .map(|idx| {
            decode(idx, ys, n)
                .into_iter()
                .fold(0, |acc, y| acc * xs + kappa.map(y))
        })
        .collect();
    LumpingMap::new(map, enumeration_size(xs, n)?)
}

/// Markov morphism `M_*: P(Xⁿ) → P(Yⁿ)` with kernels
/// `M^{x₁ⁿ}(y₁ⁿ) = Π_t L(y_t)` on `S_{x₁ⁿ}`.
#[derive(Debug, Clone)]
pub struct PathMorphism {
    embedding: MemorylessEmbedding,
    length: usize,
}

impl PathMorphism {
    pub fn new(embedding: MemorylessEmbedding, length: usize) -> Result<Self> {
        if length == 0 {
            return Err(Error::InvalidInput("path length must be at least 1".into()));
        }
        enumeration_size(embedding.source_count(), length)?;
        Ok(Self { embedding, length })
    }

    pub fn length(&self) -> usize {
        self.length
    }

    /// `M^{x₁ⁿ}(y₁ⁿ)`.
    pub fn kernel(&self, x_path: &[usize], y_path: &[usize]) -> f64 {
        let k = self.embedding.lumping();
        if x_path.iter().zip(y_path).any(|(&x, &y)| k.map(y) != x) {
            return 0.0;
        }
        y_path.iter().map(|&y| self.embedding.weight(y)).product()
    }

    /// `max_{x₁ⁿ} |Σ_{y₁ⁿ} M^{x₁ⁿ}(y₁ⁿ) − 1|`, by enumeration of each block.
    pub fn normalization_defect(&self) -> Result<f64> {
        let blocks = block_lumping(self.embedding.lumping(), self.length)?;
        let ys = self.embedding.source_count();
        let xs = self.embedding.target_count();
        let mut worst = 0.0f64;
        for (x_idx, members) in blocks.blocks().iter().enumerate() {
            let x_path = decode(x_idx, xs, self.length);
            let total: f64 = members
                .iter()
                .map(|&y_idx| self.kernel(&x_path, &decode(y_idx, ys, self.length)))
                .sum();
            worst = worst.max((total - 1.0).abs());
        }
        Ok(worst)
    }
}

/// `(M_*Q)(y₁ⁿ) = Q(κ_n(y₁ⁿ))·Π_t L(y_t)`.
///
/// Unrealizable paths (`Q = 0`) contribute nothing, which leaves the kernel
/// on them irrelevant.
pub fn pushforward(m: &PathMorphism, q: &PathDistribution) -> Result<PathDistribution> {
    let emb = &m.embedding;
    if q.length != m.length || q.state_count != emb.target_count() {
        return Err(Error::DimensionMismatch(format!(
            "morphism on paths of length {} over {} states applied to length {} over {}",
            m.length,
            emb.target_count(),
            q.length,
            q.state_count
        )));
    }
    let ys = emb.source_count();
    let size = enumeration_size(ys, m.length)?;
    let probs = (0..size)
        .map(|idx| {
            let y_path = decode(idx, ys, m.length);
            let x_idx = y_path
                .iter()
                .fold(0, |acc, &y| acc * q.state_count + emb.lumping().map(y));
            let mass = q.probs[x_idx];
            if mass > 0.0 {
                mass * y_path.iter().map(|&y| emb.weight(y)).product::<f64>()
            } else {
                0.0
            }
        })
        .collect();
    Ok(PathDistribution {
        length: m.length,
        state_count: ys,
        probs,
    })
}

/// `max |M_*Qⁿ − Q̃ⁿ|`, where `Q̃ⁿ` is computed directly from `L_*P` and
/// `L_*π`.
pub fn verify_path_morphism(
    p: &TransitionMatrix,
    l: &MemorylessEmbedding,
    n: usize,
) -> Result<f64> {
    let pi = stationary_distribution(p)?;
    let morphism = PathMorphism::new(l.clone(), n)?;
    let pushed = pushforward(&morphism, &path_distribution(p, &pi, n)?)?;
    let direct = path_distribution(&l.embed_matrix(p)?, &l.embed_distribution(&pi)?, n)?;
    Ok(pushed.max_abs_diff(&direct))
}

/// `(R_{1/2}(Qⁿ‖Q̄ⁿ), R_{1/2}(L_*Qⁿ‖L_*Q̄ⁿ))`, both over exact stationary
/// path laws; the embedded laws come from the embedded matrices.
pub fn verify_monotonicity_equality(
    p: &TransitionMatrix,
    p_ref: &TransitionMatrix,
    l: &MemorylessEmbedding,
    n: usize,
) -> Result<(f64, f64)> {
    if p.edges() != p_ref.edges() {
        return Err(Error::EdgeMismatch(
            "the two chains must share one edge set".into(),
        ));
    }
    let pi = stationary_distribution(p)?;
    let pi_ref = stationary_distribution(p_ref)?;
    let base = renyi_half(
        path_distribution(p, &pi, n)?.probs(),
        path_distribution(p_ref, &pi_ref, n)?.probs(),
    );
    let embedded = renyi_half(
        path_distribution(&l.embed_matrix(p)?, &l.embed_distribution(&pi)?, n)?.probs(),
        path_distribution(&l.embed_matrix(p_ref)?, &l.embed_distribution(&pi_ref)?, n)?.probs(),
    );
    Ok((base, embedded))
}
