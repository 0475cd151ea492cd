//! Random instances for property sweeps and the oracle suite.

use nalgebra::DMatrix;
use rand::seq::SliceRandom;
use rand::Rng;

use crate::embedding::{LumpingMap, MemorylessEmbedding};
use crate::error::{Error, Result};
use crate::markov::{EdgeSet, RationalStationary, TransitionMatrix};

/// Dense stochastic matrix with entries bounded away from zero.
pub fn random_stochastic<R: Rng + ?Sized>(rng: &mut R, k: usize) -> TransitionMatrix {
    let rows: Vec<Vec<f64>> = (0..k)
        .map(|_| {
            let raw: Vec<f64> = (0..k).map(|_| rng.random_range(0.05..1.0)).collect();
            let total: f64 = raw.iter().sum();
            raw.into_iter().map(|v| v / total).collect()
        })
        .collect();
    TransitionMatrix::from_rows(&rows).expect("normalized positive rows")
}

/// Positive (hence irreducible) square matrix with entries in `(0, 1)`.
pub fn random_positive_matrix<R: Rng + ?Sized>(rng: &mut R, k: usize) -> DMatrix<f64> {
    DMatrix::from_fn(k, k, |_, _| rng.random_range(0.01..1.0))
}

/// `p/Δ` with `k` positive parts and `Δ` uniform in `k..=max_delta`.
pub fn random_rational<R: Rng + ?Sized>(
    rng: &mut R,
    k: usize,
    max_delta: u64,
) -> Result<RationalStationary> {
    if k == 0 || (k as u64) > max_delta {
        return Err(Error::InvalidInput(format!(
            "cannot split a denominator of at most {max_delta} into {k} positive parts"
        )));
    }
    let delta = rng.random_range(k as u64..=max_delta);
    let mut p = vec![1u64; k];
    for _ in 0..(delta - k as u64) {
        p[rng.random_range(0..k)] += 1;
    }
    RationalStationary::new(p, delta)
}

/// Symmetric, strongly connected support with every self-loop present.
///
/// A random spanning path guarantees connectivity; each remaining unordered
/// pair is added with probability 1/2.
pub fn random_symmetric_edges<R: Rng + ?Sized>(rng: &mut R, k: usize) -> EdgeSet {
    let mut order: Vec<usize> = (0..k).collect();
    order.shuffle(rng);
    let mut pairs: Vec<(usize, usize)> = (0..k).map(|i| (i, i)).collect();
    for w in order.windows(2) {
        pairs.push((w[0], w[1]));
        pairs.push((w[1], w[0]));
    }
    for a in 0..k {
        for b in (a + 1)..k {
            if rng.random_bool(0.5) {
                pairs.push((a, b));
                pairs.push((b, a));
            }
        }
    }
    EdgeSet::new(k, pairs).expect("states in range")
}

/// Reversible chain on `edges` with stationary law `p/Δ`.
///
/// Off-diagonal entries are `P(x, x') = t·S(x, x')/π(x)` for random symmetric
/// weights `S`; `t` is chosen so that every diagonal entry stays positive.
/// `edges` must be symmetric and contain every self-loop.
pub fn random_reversible<R: Rng + ?Sized>(
    rng: &mut R,
    r: &RationalStationary,
    edges: &EdgeSet,
) -> Result<TransitionMatrix> {
    let k = r.state_count();
    if edges.state_count() != k || !edges.is_symmetric() || (0..k).any(|x| !edges.contains(x, x)) {
        return Err(Error::InvalidInput(
            "edge set must be symmetric, contain all self-loops and match the law".into(),
        ));
    }
    let pi = r.probs();
    let mut s = vec![0.0; k * k];
    for (a, b) in edges.iter().filter(|&(a, b)| a < b) {
        let w = rng.random_range(0.1..1.0);
        s[a * k + b] = w;
        s[b * k + a] = w;
    }
    let t_max = (0..k)
        .map(|x| {
            let out: f64 = s[x * k..(x + 1) * k].iter().sum();
            if out > 0.0 {
                pi[x] / out
            } else {
                f64::INFINITY
            }
        })
        .fold(f64::INFINITY, f64::min);
    let t = if t_max.is_finite() {
        t_max * rng.random_range(0.2..0.95)
    } else {
        0.0
    };
    let mut data = vec![0.0; k * k];
    for x in 0..k {
        let mut off = 0.0;
        for y in 0..k {
            if x != y && s[x * k + y] > 0.0 {
                let v = t * s[x * k + y] / pi[x];
                data[x * k + y] = v;
                off += v;
            }
        }
        data[x * k + x] = 1.0 - off;
    }
    TransitionMatrix::from_dense(edges.clone(), data)
}

/// Surjective `κ` onto `target` states from `target..=max_source` states,
/// with random positive weights normalized per block.
pub fn random_memoryless_embedding<R: Rng + ?Sized>(
    rng: &mut R,
    target: usize,
    max_source: usize,
) -> Result<MemorylessEmbedding> {
    if target == 0 || max_source < target {
        return Err(Error::InvalidInput("need max_source >= target > 0".into()));
    }
    let source = rng.random_range(target..=max_source);
    let mut kappa: Vec<usize> = (0..target)
        .chain((target..source).map(|_| rng.random_range(0..target)))
        .collect();
    kappa.shuffle(rng);
    let lumping = LumpingMap::new(kappa, target)?;
    let mut weights: Vec<f64> = (0..source).map(|_| rng.random_range(0.1..1.0)).collect();
    for block in lumping.blocks() {
        if block.len() == 1 {
            weights[block[0]] = 1.0;
            continue;
        }
        let total: f64 = block.iter().map(|&y| weights[y]).sum();
        for &y in block {
            weights[y] /= total;
        }
    }
    MemorylessEmbedding::new(lumping, weights)
}

/// A reference `P̄`, an alternative `P` on the same support with the same
/// rational stationary law, and that law.
#[derive(Debug, Clone)]
pub struct VtestPair {
    pub reference: TransitionMatrix,
    pub alternative: TransitionMatrix,
    pub rational: RationalStationary,
}

pub fn random_vtest_pair<R: Rng + ?Sized>(
    rng: &mut R,
    k: usize,
    max_delta: u64,
) -> Result<VtestPair> {
    let rational = random_rational(rng, k, max_delta)?;
    let edges = random_symmetric_edges(rng, k);
    Ok(VtestPair {
        reference: random_reversible(rng, &rational, &edges)?,
        alternative: random_reversible(rng, &rational, &edges)?,
        rational,
    })
}
