//! Trajectory simulation and the operational embedding of an observed
//! trajectory into the expanded state space.

mod rng;
mod trajectory;

pub use rng::{trial_stream, RandomSource, ALGORITHM};
pub use trajectory::Trajectory;

use rand::Rng;

use crate::embedding::MemorylessEmbedding;
use crate::error::{Error, Result};
use crate::markov::TransitionMatrix;

/// Inverse-CDF draw over `weights` in index order. The last positive bucket
/// absorbs whatever mass round-off leaves above the final cumulative sum.
fn draw_index<R: Rng + ?Sized>(rng: &mut R, weights: impl Iterator<Item = f64>) -> usize {
    let u: f64 = rng.random();
    let mut cumulative = 0.0;
    let mut last_positive = 0;
    for (i, w) in weights.enumerate() {
        if w > 0.0 {
            cumulative += w;
            last_positive = i;
            if u < cumulative {
                return i;
            }
        }
    }
    last_positive
}

/// Draws `x₁ ~ initial`, `x_{t+1} ~ P(x_t, ·)` for `n` states.
pub fn simulate(
    p: &TransitionMatrix,
    initial: &[f64],
    n: usize,
    source: &RandomSource,
) -> Result<Trajectory> {
    let k = p.state_count();
    if initial.len() != k {
        return Err(Error::DimensionMismatch(format!(
            "initial law over {} states, matrix over {k}",
            initial.len()
        )));
    }
    if n == 0 {
        return Err(Error::InvalidInput(
            "trajectory length must be at least 1".into(),
        ));
    }
    let mut rng = source.rng();
    let mut states = Vec::with_capacity(n);
    let mut current = draw_index(&mut rng, initial.iter().copied());
    states.push(current);
    for _ in 1..n {
        current = draw_index(&mut rng, p.row(current).iter().copied());
        states.push(current);
    }
    Ok(Trajectory {
        states,
        state_count: k,
        seed: Some(source.seed),
        stream: Some(source.stream),
    })
}

/// Replaces each `x_t` by an independent draw from `(L(y))_{y ∈ S_{x_t}}`.
///
/// Singleton blocks are mapped without consuming randomness.
pub fn embed_trajectory(
    l: &MemorylessEmbedding,
    x: &Trajectory,
    source: &RandomSource,
) -> Result<Trajectory> {
    let target = l.target_count();
    if x.state_count > target {
        return Err(Error::IncompatibleStateCount {
            expected: target,
            found: x.state_count,
        });
    }
    let mut rng = source.rng();
    let lumping = l.lumping();
    let states = x
        .states
        .iter()
        .map(|&s| {
            let block = lumping.block(s);
            if block.len() == 1 {
                block[0]
            } else {
                block[draw_index(&mut rng, block.iter().map(|&y| l.weight(y)))]
            }
        })
        .collect();
    Ok(Trajectory {
        states,
        state_count: l.source_count(),
        seed: Some(source.seed),
        stream: Some(source.stream),
    })
}
