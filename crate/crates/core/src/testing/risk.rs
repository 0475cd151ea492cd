use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::config::{InitialLaw, TestConfig};
use super::pipeline::ReductionPipeline;
use super::SymmetricTester;
use crate::contrast::contrast;
use crate::error::{Error, Result};
use crate::markov::{check_vtest_membership, RationalStationary, TransitionMatrix};
use crate::sampling::{simulate, trial_stream, RandomSource};

const ROLE_SIMULATE: u8 = 0;
const ROLE_EMBED: u8 = 1;
const ROLE_TESTER: u8 = 2;

/// Monte Carlo estimate of the two error probabilities at one length `n`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RiskReport {
    pub n: usize,
    pub trials: u64,
    /// Rejection frequency when the data come from the reference.
    pub type1_freq: f64,
    /// Acceptance frequency per alternative.
    pub type2_freqs: Vec<f64>,
    pub type2_freq_max: Option<f64>,
    /// `type1_freq + type2_freq_max`.
    pub risk_estimate: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanTable {
    pub rows: Vec<RiskReport>,
    /// Smallest `n` in the grid with estimated risk below `δ`.
    pub n_star: Option<usize>,
}

/// Checks that every alternative is in the class and lies beyond the
/// exclusion region, `K(P, P̄) > ε`.
pub fn validate_alternatives(
    reference: &TransitionMatrix,
    r: &RationalStationary,
    alternatives: &[TransitionMatrix],
    epsilon: f64,
) -> Result<()> {
    for (index, alt) in alternatives.iter().enumerate() {
        let report = check_vtest_membership(alt, r, reference.edges());
        if !report.is_member() {
            let reason = report
                .failures
                .iter()
                .map(|f| f.to_string())
                .collect::<Vec<_>>()
                .join("; ");
            return Err(Error::ExclusionRegion { index, reason });
        }
        let k = contrast(alt, reference)?.k;
        if k <= epsilon {
            return Err(Error::ExclusionRegion {
                index,
                reason: format!("contrast {k} does not exceed epsilon {epsilon}"),
            });
        }
    }
    Ok(())
}

fn initial_law(cfg: &TestConfig, r: &RationalStationary) -> Result<Vec<f64>> {
    match cfg.initial {
        InitialLaw::Stationary => Ok(r.probs()),
        InitialLaw::State(s) if s < r.state_count() => {
            let mut v = vec![0.0; r.state_count()];
            v[s] = 1.0;
            Ok(v)
        }
        InitialLaw::State(s) => Err(Error::InvalidConfig(format!(
            "initial state {s} outside 0..{}",
            r.state_count()
        ))),
    }
}

/// Frequency of `Reject` over `trials` seeded runs with data from `source_chain`.
fn rejection_frequency(
    pipeline: &ReductionPipeline,
    source_chain: &TransitionMatrix,
    initial: &[f64],
    hypothesis: u32,
    cfg: &TestConfig,
    trials: u64,
    tester: &(dyn SymmetricTester + Sync),
) -> Result<f64> {
    let rejections = (0..trials)
        .into_par_iter()
        .map(|trial| {
            let src = |role| RandomSource::new(cfg.seed, trial_stream(hypothesis, trial, role));
            let x = simulate(source_chain, initial, cfg.n, &src(ROLE_SIMULATE))?;
            let verdict = pipeline.test(&x, cfg, tester, &src(ROLE_EMBED), &src(ROLE_TESTER))?;
            Ok(u64::from(verdict.rejects()))
        })
        .collect::<Result<Vec<u64>>>()?
        .into_iter()
        .sum::<u64>();
    Ok(rejections as f64 / trials as f64)
}

/// Type-I frequency under the reference and type-II frequencies under each
/// alternative, each over `trials` runs of the full reduction pipeline.
pub fn estimate_risk(
    reference: &TransitionMatrix,
    r: &RationalStationary,
    alternatives: &[TransitionMatrix],
    cfg: &TestConfig,
    trials: u64,
    tester: &(dyn SymmetricTester + Sync),
) -> Result<RiskReport> {
    cfg.validate()?;
    if trials == 0 {
        return Err(Error::InvalidConfig("trials must be positive".into()));
    }
    let pipeline = ReductionPipeline::new(reference, r)?;
    validate_alternatives(reference, r, alternatives, cfg.epsilon)?;
    risk_with_pipeline(&pipeline, r, alternatives, cfg, trials, tester)
}

fn risk_with_pipeline(
    pipeline: &ReductionPipeline,
    r: &RationalStationary,
    alternatives: &[TransitionMatrix],
    cfg: &TestConfig,
    trials: u64,
    tester: &(dyn SymmetricTester + Sync),
) -> Result<RiskReport> {
    let initial = initial_law(cfg, r)?;
    let type1_freq = rejection_frequency(
        pipeline,
        pipeline.reference(),
        &initial,
        0,
        cfg,
        trials,
        tester,
    )?;
    let type2_freqs = alternatives
        .iter()
        .enumerate()
        .map(|(i, alt)| {
            rejection_frequency(pipeline, alt, &initial, i as u32 + 1, cfg, trials, tester)
                .map(|f| 1.0 - f)
        })
        .collect::<Result<Vec<f64>>>()?;
    let type2_freq_max = type2_freqs.iter().copied().reduce(f64::max);
    Ok(RiskReport {
        n: cfg.n,
        trials,
        type1_freq,
        risk_estimate: type1_freq + type2_freq_max.unwrap_or(0.0),
        type2_freqs,
        type2_freq_max,
    })
}

/// Risk per `n` in `n_grid` and the smallest `n` whose estimate is below
/// `cfg.delta`. Raw frequencies, no monotone smoothing.
pub fn sample_complexity_scan(
    reference: &TransitionMatrix,
    r: &RationalStationary,
    alternatives: &[TransitionMatrix],
    cfg: &TestConfig,
    n_grid: &[usize],
    trials: u64,
    tester: &(dyn SymmetricTester + Sync),
) -> Result<ScanTable> {
    cfg.validate()?;
    if trials == 0 {
        return Err(Error::InvalidConfig("trials must be positive".into()));
    }
    let pipeline = ReductionPipeline::new(reference, r)?;
    validate_alternatives(reference, r, alternatives, cfg.epsilon)?;
    let rows = n_grid
        .iter()
        .map(|&n| {
            let cfg_n = cfg.with_n(n);
            cfg_n.validate()?;
            risk_with_pipeline(&pipeline, r, alternatives, &cfg_n, trials, tester)
        })
        .collect::<Result<Vec<_>>>()?;
    let n_star = rows
        .iter()
        .filter(|row| row.risk_estimate < cfg.delta)
        .map(|row| row.n)
        .min();
    Ok(ScanTable { rows, n_star })
}
