use nalgebra::{DMatrix, DVector};

use super::matrix::TransitionMatrix;
use crate::error::{Error, Result};

/// Residual bound `‖πP − π‖∞` required of a computed stationary law.
pub const STATIONARY_RESIDUAL_TOL: f64 = 1e-10;

const NORMALIZATION_TOL: f64 = 1e-9;
const LAZY_ITERATION_CAP: usize = 1_000_000;

/// Probability vector over the states of a chain, with its minimum `π_*`.
#[derive(Debug, Clone, PartialEq)]
pub struct StationaryDistribution {
    probs: Vec<f64>,
    min_prob: f64,
}

impl StationaryDistribution {
    pub fn new(probs: Vec<f64>) -> Result<Self> {
        if probs.is_empty() {
            return Err(Error::InvalidInput("empty distribution".into()));
        }
        if probs.iter().any(|p| !p.is_finite() || *p < 0.0) {
            return Err(Error::InvalidInput(
                "distribution entries must be finite and nonnegative".into(),
            ));
        }
        let total: f64 = probs.iter().sum();
        if (total - 1.0).abs() > NORMALIZATION_TOL {
            return Err(Error::InvalidInput(format!("distribution sums to {total}")));
        }
        let min_prob = probs.iter().copied().fold(f64::INFINITY, f64::min);
        Ok(Self { probs, min_prob })
    }

    pub fn uniform(state_count: usize) -> Result<Self> {
        Self::new(vec![1.0 / state_count as f64; state_count])
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn len(&self) -> usize {
        self.probs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probs.is_empty()
    }

    /// `π_* = min_x π(x)`.
    pub fn min_prob(&self) -> f64 {
        self.min_prob
    }

    /// `‖πP − π‖∞`.
    pub fn residual(&self, p: &TransitionMatrix) -> f64 {
        left_residual(&self.probs, p)
    }

    pub fn max_abs_diff(&self, other: &[f64]) -> f64 {
        self.probs
            .iter()
            .zip(other)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }
}

/// Unique stationary law of an irreducible chain.
///
/// Solves `(Pᵀ − I)πᵀ = 0` with the last equation replaced by `Σπ = 1`; if
/// the factorization is singular or the residual exceeds
/// [`STATIONARY_RESIDUAL_TOL`], falls back to power iteration on the lazy
/// chain `(P + I)/2`.
pub fn stationary_distribution(p: &TransitionMatrix) -> Result<StationaryDistribution> {
    if !p.is_irreducible() {
        return Err(Error::NotIrreducible);
    }
    let probs = match solve_linear(p) {
        Some(v) if left_residual(&v, p) <= STATIONARY_RESIDUAL_TOL => v,
        _ => lazy_power_iteration(p)?,
    };
    StationaryDistribution::new(probs)
}

fn solve_linear(p: &TransitionMatrix) -> Option<Vec<f64>> {
    let n = p.state_count();
    let mut a: DMatrix<f64> = p.to_dmatrix().transpose() - DMatrix::identity(n, n);
    for j in 0..n {
        a[(n - 1, j)] = 1.0;
    }
    let mut b = DVector::zeros(n);
    b[n - 1] = 1.0;
    let x = a.lu().solve(&b)?;
    let mut v: Vec<f64> = x.iter().copied().collect();
    if v.iter()
        .any(|x| !x.is_finite() || *x < -STATIONARY_RESIDUAL_TOL)
    {
        return None;
    }
    for x in &mut v {
        *x = x.max(0.0);
    }
    renormalize(&mut v);
    Some(v)
}

fn lazy_power_iteration(p: &TransitionMatrix) -> Result<Vec<f64>> {
    let n = p.state_count();
    let mut v = vec![1.0 / n as f64; n];
    let mut next = vec![0.0; n];
    let mut change = f64::INFINITY;
    for _ in 0..LAZY_ITERATION_CAP {
        for (j, slot) in next.iter_mut().enumerate() {
            *slot = 0.5 * v[j];
        }
        for (i, &vi) in v.iter().enumerate() {
            for (j, &pij) in p.row(i).iter().enumerate() {
                next[j] += 0.5 * vi * pij;
            }
        }
        renormalize(&mut next);
        change = v
            .iter()
            .zip(&next)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        std::mem::swap(&mut v, &mut next);
        if change <= 1e-16 && left_residual(&v, p) <= STATIONARY_RESIDUAL_TOL {
            return Ok(v);
        }
    }
    if left_residual(&v, p) <= STATIONARY_RESIDUAL_TOL {
        Ok(v)
    } else {
        Err(Error::NoConvergence {
            iterations: LAZY_ITERATION_CAP,
            last: change,
            previous: f64::NAN,
        })
    }
}

fn renormalize(v: &mut [f64]) {
    let total: f64 = v.iter().sum();
    for x in v.iter_mut() {
        *x /= total;
    }
}

fn left_residual(v: &[f64], p: &TransitionMatrix) -> f64 {
    let n = p.state_count();
    (0..n)
        .map(|j| {
            let flow: f64 = (0..n).map(|i| v[i] * p.get(i, j)).sum();
            (flow - v[j]).abs()
        })
        .fold(0.0, f64::max)
}
