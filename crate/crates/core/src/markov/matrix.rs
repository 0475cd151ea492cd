use nalgebra::DMatrix;

use super::edges::EdgeSet;
use super::stationary::StationaryDistribution;
use crate::error::{Error, Result};

/// Row-sum tolerance enforced at construction.
pub const STOCHASTIC_TOL: f64 = 1e-12;

/// Default tolerance for detailed balance checks.
pub const DETAILED_BALANCE_TOL: f64 = 1e-9;

/// Row-stochastic matrix bound to its support graph.
///
/// Entries are strictly positive exactly on the edge set and identically
/// zero elsewhere; rows sum to one within [`STOCHASTIC_TOL`].
#[derive(Debug, Clone, PartialEq)]
pub struct TransitionMatrix {
    edges: EdgeSet,
    data: Vec<f64>,
}

impl TransitionMatrix {
    /// Validates dense `rows` against a declared edge set.
    pub fn new(edges: EdgeSet, rows: &[Vec<f64>]) -> Result<Self> {
        let n = edges.state_count();
        if rows.len() != n || rows.iter().any(|r| r.len() != n) {
            return Err(Error::DimensionMismatch(format!(
                "expected a {n}x{n} matrix for the declared edge set"
            )));
        }
        let data: Vec<f64> = rows.iter().flatten().copied().collect();
        Self::from_dense(edges, data)
    }

    /// Validates a row-major dense buffer against a declared edge set.
    pub fn from_dense(edges: EdgeSet, data: Vec<f64>) -> Result<Self> {
        let n = edges.state_count();
        if data.len() != n * n {
            return Err(Error::DimensionMismatch(format!(
                "expected {} entries, got {}",
                n * n,
                data.len()
            )));
        }
        for i in 0..n {
            let row = &data[i * n..(i + 1) * n];
            for (j, &v) in row.iter().enumerate() {
                if !v.is_finite() {
                    return Err(Error::InvalidInput(format!(
                        "entry ({i}, {j}) is not finite"
                    )));
                }
                if edges.contains(i, j) {
                    if v <= 0.0 {
                        return Err(Error::ZeroOnEdge {
                            from: i,
                            to: j,
                            value: v,
                        });
                    }
                } else if v != 0.0 {
                    return Err(Error::OffEdgeMass {
                        from: i,
                        to: j,
                        value: v,
                    });
                }
            }
            let sum: f64 = row.iter().sum();
            if (sum - 1.0).abs() > STOCHASTIC_TOL {
                return Err(Error::RowSumError {
                    row: i,
                    sum,
                    tol: STOCHASTIC_TOL,
                });
            }
        }
        Ok(Self { edges, data })
    }

    /// Validates dense `rows`, taking the edge set to be the nonzero pattern.
    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::DimensionMismatch("matrix must be square".into()));
        }
        let edges = EdgeSet::new(
            n,
            rows.iter().enumerate().flat_map(|(i, r)| {
                r.iter()
                    .enumerate()
                    .filter(|(_, &v)| v != 0.0)
                    .map(move |(j, _)| (i, j))
            }),
        )?;
        Self::new(edges, rows)
    }

    pub fn state_count(&self) -> usize {
        self.edges.state_count()
    }

    pub fn edges(&self) -> &EdgeSet {
        &self.edges
    }

    #[inline]
    pub fn get(&self, from: usize, to: usize) -> f64 {
        self.data[from * self.state_count() + to]
    }

    pub fn row(&self, from: usize) -> &[f64] {
        let n = self.state_count();
        &self.data[from * n..(from + 1) * n]
    }

    pub fn rows(&self) -> Vec<Vec<f64>> {
        (0..self.state_count())
            .map(|i| self.row(i).to_vec())
            .collect()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn to_dmatrix(&self) -> DMatrix<f64> {
        let n = self.state_count();
        DMatrix::from_row_slice(n, n, &self.data)
    }

    /// Exact strong-connectivity test on the support graph.
    pub fn is_irreducible(&self) -> bool {
        self.edges.is_strongly_connected()
    }

    /// Detailed balance `π(x)P(x,x') = π(x')P(x',x)` on every edge, within `tol`.
    pub fn is_reversible(&self, pi: &StationaryDistribution, tol: f64) -> bool {
        self.detailed_balance_defect(pi.probs()) <= tol
    }

    /// `max |π(x)P(x,x') − π(x')P(x',x)|` over the edge set.
    pub fn detailed_balance_defect(&self, pi: &[f64]) -> f64 {
        self.edges
            .iter()
            .map(|(a, b)| (pi[a] * self.get(a, b) - pi[b] * self.get(b, a)).abs())
            .fold(0.0, f64::max)
    }

    /// `max |P(x,x') − P(x',x)|` over all pairs.
    pub fn max_asymmetry(&self) -> f64 {
        let n = self.state_count();
        let mut worst = 0.0f64;
        for i in 0..n {
            for j in (i + 1)..n {
                worst = worst.max((self.get(i, j) - self.get(j, i)).abs());
            }
        }
        worst
    }

    pub fn max_abs_diff(&self, other: &TransitionMatrix) -> f64 {
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }
}
