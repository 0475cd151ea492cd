use num_integer::Integer;
use serde::{Deserialize, Serialize};

use super::stationary::StationaryDistribution;
use crate::error::{Error, Result};

/// Reconstruction tolerance `max_x |p_x/Δ − π(x)|`.
pub const RATIONALIZE_TOL: f64 = 1e-9;

// A convergent this close to the input is taken as exact.
const SNAP_TOL: f64 = 1e-13;

/// Rational stationary law `π = p/Δ`.
///
/// Numerators are stored in the caller's state order; `order` lists the
/// states by ascending numerator (ties by state index), which is the order
/// the symmetrizer lays blocks out in.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RationalStationary {
    numerators: Vec<u64>,
    denominator: u64,
    order: Vec<usize>,
}

impl RationalStationary {
    pub fn new(numerators: Vec<u64>, denominator: u64) -> Result<Self> {
        if numerators.is_empty() {
            return Err(Error::InvalidInput("empty numerator vector".into()));
        }
        if numerators.contains(&0) {
            return Err(Error::InvalidInput("numerators must be positive".into()));
        }
        let total: u64 = numerators.iter().sum();
        if total != denominator {
            return Err(Error::InvalidInput(format!(
                "numerators sum to {total}, denominator is {denominator}"
            )));
        }
        let mut order: Vec<usize> = (0..numerators.len()).collect();
        order.sort_by_key(|&i| (numerators[i], i));
        Ok(Self {
            numerators,
            denominator,
            order,
        })
    }

    pub fn state_count(&self) -> usize {
        self.numerators.len()
    }

    /// Numerators in the caller's state order.
    pub fn numerators(&self) -> &[u64] {
        &self.numerators
    }

    /// `Δ`.
    pub fn denominator(&self) -> u64 {
        self.denominator
    }

    /// States sorted by ascending numerator, ties broken by index.
    pub fn order(&self) -> &[usize] {
        &self.order
    }

    /// `p₁ ≤ p₂ ≤ … ≤ p_|X|`.
    pub fn sorted_numerators(&self) -> Vec<u64> {
        self.order.iter().map(|&i| self.numerators[i]).collect()
    }

    pub fn probs(&self) -> Vec<f64> {
        let d = self.denominator as f64;
        self.numerators.iter().map(|&p| p as f64 / d).collect()
    }

    pub fn to_distribution(&self) -> StationaryDistribution {
        StationaryDistribution::new(self.probs()).expect("numerators sum to the denominator")
    }

    /// `π_* = p₁/Δ`.
    pub fn min_prob(&self) -> f64 {
        self.sorted_numerators()[0] as f64 / self.denominator as f64
    }
}

/// Rational form of `π` with denominator at most `max_denominator`.
///
/// Each entry is replaced by its first continued-fraction convergent that
/// is exact to round-off (or the last one under the cap); the common
/// denominator is the least common multiple, and the largest numerator
/// absorbs any integer drift so that `Σp = Δ`. If that denominator exceeds
/// the cap or misses [`RATIONALIZE_TOL`], every `Δ ≤ max_denominator` is
/// scanned with rounded numerators.
pub fn rationalize(
    pi: &StationaryDistribution,
    max_denominator: u64,
) -> Result<RationalStationary> {
    let probs = pi.probs();
    if max_denominator == 0 {
        return Err(Error::InvalidInput(
            "max_denominator must be positive".into(),
        ));
    }
    if probs.iter().any(|&p| p <= 0.0) {
        return Err(Error::InvalidInput(
            "rationalization needs strictly positive probabilities".into(),
        ));
    }

    let mut best_error = f64::INFINITY;
    if let Some(candidate) = unify_convergents(probs, max_denominator) {
        let err = reconstruction_error(probs, &candidate.0, candidate.1);
        if err <= RATIONALIZE_TOL {
            return RationalStationary::new(candidate.0, candidate.1);
        }
        best_error = err;
    }
    for delta in 1..=max_denominator {
        if let Some(numerators) = rounded_numerators(probs, delta) {
            let err = reconstruction_error(probs, &numerators, delta);
            if err <= RATIONALIZE_TOL {
                return RationalStationary::new(numerators, delta);
            }
            best_error = best_error.min(err);
        }
    }
    Err(Error::RationalizationFailed {
        max_denominator,
        tol: RATIONALIZE_TOL,
        best_error,
    })
}

fn unify_convergents(probs: &[f64], cap: u64) -> Option<(Vec<u64>, u64)> {
    let fractions: Vec<(u64, u64)> = probs.iter().map(|&p| best_convergent(p, cap)).collect();
    let mut lcd = 1u64;
    for &(_, den) in &fractions {
        lcd = lcd.lcm(&den);
        if lcd > cap {
            return None;
        }
    }
    let mut numerators: Vec<u64> = fractions.iter().map(|&(h, k)| h * (lcd / k)).collect();
    balance(&mut numerators, lcd)?;
    Some((numerators, lcd))
}

/// Pushes the integer drift `Δ − Σp` onto the largest numerator.
fn balance(numerators: &mut [u64], delta: u64) -> Option<()> {
    let total: i128 = numerators.iter().map(|&p| p as i128).sum();
    let drift = delta as i128 - total;
    if drift != 0 {
        let (idx, _) = numerators
            .iter()
            .enumerate()
            .max_by_key(|&(i, &p)| (p, std::cmp::Reverse(i)))?;
        let adjusted = numerators[idx] as i128 + drift;
        if adjusted <= 0 {
            return None;
        }
        numerators[idx] = adjusted as u64;
    }
    if numerators.contains(&0) {
        return None;
    }
    Some(())
}

fn rounded_numerators(probs: &[f64], delta: u64) -> Option<Vec<u64>> {
    let mut numerators: Vec<u64> = probs
        .iter()
        .map(|&p| (p * delta as f64).round().max(0.0) as u64)
        .collect();
    balance(&mut numerators, delta)?;
    Some(numerators)
}

fn reconstruction_error(probs: &[f64], numerators: &[u64], delta: u64) -> f64 {
    probs
        .iter()
        .zip(numerators)
        .map(|(&p, &h)| (h as f64 / delta as f64 - p).abs())
        .fold(0.0, f64::max)
}

/// Continued-fraction convergent `h/k` of `x ∈ (0, 1]` with `k ≤ cap`.
fn best_convergent(x: f64, cap: u64) -> (u64, u64) {
    let (mut h_prev, mut h) = (1u64, x.floor() as u64);
    let (mut k_prev, mut k) = (0u64, 1u64);
    let mut frac = x - x.floor();
    loop {
        if (h as f64 / k as f64 - x).abs() <= SNAP_TOL || frac <= 0.0 {
            return (h, k);
        }
        let inv = 1.0 / frac;
        let a = inv.floor();
        if !a.is_finite() || a > cap as f64 {
            return (h, k);
        }
        let a = a as u64;
        let k_next = match a.checked_mul(k).and_then(|v| v.checked_add(k_prev)) {
            Some(v) if v <= cap => v,
            _ => return (h, k),
        };
        let h_next = a * h + h_prev;
        (h_prev, h) = (h, h_next);
        (k_prev, k) = (k, k_next);
        frac = inv - inv.floor();
    }
}
