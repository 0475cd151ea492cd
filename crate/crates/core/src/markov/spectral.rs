//! Perron root of nonnegative square matrices by power iteration.
//!
//! The iteration runs on the shifted, rescaled matrix `B = A/s + I` with
//! `s = ‖A‖∞`. For nonnegative `A` the Perron root of `B` is `ρ(A)/s + 1`
//! and it strictly dominates every other eigenvalue of `B` in modulus
//! whenever `A` is irreducible, so periodic chains (eigenvalue `−1`) do not
//! stall the iteration.
//!
//! Stopping rules, whichever fires first:
//! - the Collatz–Wielandt bracket `min (Bx)_i/x_i ≤ ρ(B) ≤ max (Bx)_i/x_i`
//!   has relative width below `1e-13`;
//! - both the eigenvalue estimate and the iterate change by less than
//!   `1e-13` (relative) between sweeps.

use nalgebra::DMatrix;

use crate::error::{Error, Result};

pub const RELATIVE_TOL: f64 = 1e-13;
pub const ITERATION_CAP: usize = 1_000_000;

/// Result of a Perron root computation.
#[derive(Debug, Clone)]
pub struct PerronRoot {
    pub radius: f64,
    /// Nonnegative right eigenvector, normalized to unit sum.
    pub vector: Vec<f64>,
    pub iterations: usize,
}

/// `ρ(A)` for a nonnegative square matrix.
pub fn spectral_radius(a: &DMatrix<f64>) -> Result<f64> {
    perron_root(a).map(|r| r.radius)
}

pub fn perron_root(a: &DMatrix<f64>) -> Result<PerronRoot> {
    let n = a.nrows();
    if n == 0 || a.ncols() != n {
        return Err(Error::DimensionMismatch(
            "spectral radius needs a non-empty square matrix".into(),
        ));
    }
    if a.iter().any(|v| !v.is_finite() || *v < 0.0) {
        return Err(Error::InvalidInput(
            "spectral radius is computed for finite nonnegative matrices only".into(),
        ));
    }
    let scale = (0..n)
        .map(|i| a.row(i).iter().sum::<f64>())
        .fold(0.0, f64::max);
    if scale == 0.0 {
        return Ok(PerronRoot {
            radius: 0.0,
            vector: vec![1.0 / n as f64; n],
            iterations: 0,
        });
    }
    let mut b = a / scale;
    for i in 0..n {
        b[(i, i)] += 1.0;
    }

    let mut x = vec![1.0 / n as f64; n];
    let mut y = vec![0.0; n];
    let mut lambda_prev = f64::NAN;
    let mut lambda = f64::NAN;
    for iteration in 1..=ITERATION_CAP {
        for (i, yi) in y.iter_mut().enumerate() {
            *yi = (0..n).map(|j| b[(i, j)] * x[j]).sum();
        }
        // x sums to one, so Σy is the 1-norm growth factor.
        lambda = y.iter().sum();

        let (lo, hi, all_positive) = collatz_wielandt(&x, &y);
        for yi in y.iter_mut() {
            *yi /= lambda;
        }
        let step = x
            .iter()
            .zip(&y)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        std::mem::swap(&mut x, &mut y);

        if all_positive && hi - lo <= RELATIVE_TOL * lambda {
            return Ok(finish(0.5 * (lo + hi), scale, x, iteration));
        }
        if (lambda - lambda_prev).abs() <= RELATIVE_TOL * lambda && step <= RELATIVE_TOL {
            return Ok(finish(lambda, scale, x, iteration));
        }
        lambda_prev = lambda;
    }
    Err(Error::NoConvergence {
        iterations: ITERATION_CAP,
        last: (lambda - 1.0) * scale,
        previous: (lambda_prev - 1.0) * scale,
    })
}

fn collatz_wielandt(x: &[f64], bx: &[f64]) -> (f64, f64, bool) {
    let mut lo = f64::INFINITY;
    let mut hi = 0.0f64;
    let mut all_positive = true;
    for (xi, yi) in x.iter().zip(bx) {
        if *xi > 0.0 {
            let r = yi / xi;
            lo = lo.min(r);
            hi = hi.max(r);
        } else {
            all_positive = false;
        }
    }
    (lo, hi, all_positive)
}

fn finish(shifted: f64, scale: f64, vector: Vec<f64>, iterations: usize) -> PerronRoot {
    PerronRoot {
        radius: ((shifted - 1.0) * scale).max(0.0),
        vector,
        iterations,
    }
}
