//! Seeded sweep over every structural identity the reduction relies on.
//!
//! Each check draws its own random instances from a dedicated stream and
//! records the worst deviation seen against a fixed tolerance.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::contrast::contrast;
use crate::embedding::{
    build_symmetrizer, induced_edge_image, is_lumpable, lump, verify_symmetrization, LUMP_TOL,
};
use crate::error::Result;
use crate::generate::{
    random_memoryless_embedding, random_stochastic, random_vtest_pair, VtestPair,
};
use crate::markov::{stationary_distribution, StationaryDistribution};
use crate::paths::{verify_monotonicity_equality, verify_path_morphism};
use crate::sampling::RandomSource;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OracleCheck {
    pub name: String,
    pub cases: usize,
    pub worst: f64,
    pub tolerance: f64,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OracleReport {
    pub seed: u64,
    pub checks: Vec<OracleCheck>,
}

impl OracleReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

struct Sweep {
    name: &'static str,
    tolerance: f64,
    worst: f64,
    cases: usize,
}

impl Sweep {
    fn new(name: &'static str, tolerance: f64) -> Self {
        Self {
            name,
            tolerance,
            worst: 0.0,
            cases: 0,
        }
    }

    fn record(&mut self, deviation: f64) {
        self.cases += 1;
        // NaN must fail the check
        self.worst = if deviation.is_nan() {
            f64::NAN
        } else {
            self.worst.max(deviation)
        };
    }

    fn finish(self) -> OracleCheck {
        OracleCheck {
            name: self.name.to_string(),
            cases: self.cases,
            worst: self.worst,
            tolerance: self.tolerance,
            passed: self.worst <= self.tolerance,
        }
    }
}

fn uniform_gap(pi: &StationaryDistribution) -> f64 {
    let u = 1.0 / pi.len() as f64;
    pi.probs().iter().map(|p| (p - u).abs()).fold(0.0, f64::max)
}

fn reference_pair<R: Rng>(rng: &mut R, max_delta: u64) -> Result<VtestPair> {
    let k = rng.random_range(2..=5usize.min(max_delta as usize));
    random_vtest_pair(rng, k, max_delta)
}

pub fn run_oracle_suite(trials: usize, seed: u64) -> Result<OracleReport> {
    let mut checks = Vec::new();

    // symmetrizer on random references in the class
    {
        let mut rng = RandomSource::new(seed, 0).rng();
        let mut symmetry = Sweep::new("symmetrization", 1e-12);
        let mut uniform = Sweep::new("symmetrizer_uniform_law", 1e-12);
        let mut retraction = Sweep::new("symmetrizer_lump_retraction", 1e-12);
        let mut edges = Sweep::new("edge_image_consistency", 0.0);
        let mut preserved = Sweep::new("contrast_preservation", 1e-9);
        for _ in 0..trials {
            let pair = reference_pair(&mut rng, 12)?;
            let s = build_symmetrizer(&pair.rational, pair.reference.edges())?;
            symmetry.record(verify_symmetrization(&s, &pair.reference)?);
            let pi = pair.rational.to_distribution();
            uniform.record(uniform_gap(&s.embedding().embed_distribution(&pi)?));
            let embedded = s.embed_matrix(&pair.reference)?;
            retraction.record(lump(&embedded, s.lumping())?.max_abs_diff(&pair.reference));
            let image = induced_edge_image(s.lumping(), s.target_edges())?;
            edges.record(if &image == pair.reference.edges() {
                0.0
            } else {
                1.0
            });
            let direct = contrast(&pair.alternative, &pair.reference)?.k;
            let lifted = contrast(&s.embed_matrix(&pair.alternative)?, &embedded)?.k;
            preserved.record((direct - lifted).abs());
        }
        checks.extend([symmetry, uniform, retraction, edges, preserved].map(Sweep::finish));
    }

    // arbitrary memoryless embeddings of arbitrary irreducible chains
    {
        let mut rng = RandomSource::new(seed, 1).rng();
        let mut section = Sweep::new("embedding_lump_section", 1e-12);
        let mut lumpable = Sweep::new("embedding_is_lumpable", 0.0);
        let mut transport = Sweep::new("stationarity_transport", 1e-10);
        for _ in 0..trials {
            let k = rng.random_range(2..=4);
            let p = random_stochastic(&mut rng, k);
            let l = random_memoryless_embedding(&mut rng, k, 8)?;
            let embedded = l.embed_matrix(&p)?;
            section.record(lump(&embedded, l.lumping())?.max_abs_diff(&p));
            lumpable.record(if is_lumpable(&embedded, l.lumping(), LUMP_TOL) {
                0.0
            } else {
                1.0
            });
            let pi = stationary_distribution(&p)?;
            transport.record(l.embed_distribution(&pi)?.residual(&embedded));
        }
        checks.extend([section, lumpable, transport].map(Sweep::finish));
    }

    // path-level morphism and Rényi equality
    {
        let mut rng = RandomSource::new(seed, 2).rng();
        let mut morphism = Sweep::new("path_morphism", 1e-12);
        let mut renyi = Sweep::new("renyi_equality", 1e-10);
        for case in 0..trials {
            let n = 2 + case % 3;
            let pair = reference_pair(&mut rng, 6)?;
            let s = build_symmetrizer(&pair.rational, pair.reference.edges())?;
            morphism.record(verify_path_morphism(&pair.reference, s.embedding(), n)?);
            let (base, lifted) =
                verify_monotonicity_equality(&pair.alternative, &pair.reference, s.embedding(), n)?;
            renyi.record((base - lifted).abs());
        }
        checks.extend([morphism, renyi].map(Sweep::finish));
    }

    Ok(OracleReport { seed, checks })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suite_passes_and_is_deterministic() {
        let a = run_oracle_suite(20, 7).unwrap();
        assert!(a.passed(), "{a:#?}");
        assert!(a.checks.iter().all(|c| c.cases == 20));
        assert_eq!(a, run_oracle_suite(20, 7).unwrap());
    }
}
