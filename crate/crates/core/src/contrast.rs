//! Kazakos contrast between stochastic matrices and the Rényi divergence of
//! order 1/2 between distributions and between stationary path laws.
//!
//! For transition matrices `P`, `P'` on the same state space,
//!
//! ```text
//! K(P, P') = 1 − ρ(P^{∘1/2} ∘ P'^{∘1/2})
//! ```
//!
//! and for irreducible pairs the Rényi-1/2 divergence rate between the two
//! processes is `−2 log(1 − K)`.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::markov::{spectral_radius, EdgeSet, StationaryDistribution, TransitionMatrix};
use crate::paths::path_distribution;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ContrastValue {
    /// `K ∈ [0, 1]`.
    pub k: f64,
    /// `−2 log(1 − K)`; `+∞` when `K = 1`.
    #[serde(with = "infinite_as_string")]
    pub renyi_rate: f64,
    /// Whether the support of the Hadamard product is strongly connected.
    /// When it is not, the Perron vector need not be unique and the rate
    /// identity carries no guarantee.
    pub product_irreducible: bool,
}

impl ContrastValue {
    fn from_radius(rho: f64, product_irreducible: bool) -> Self {
        let k = (1.0 - rho).clamp(0.0, 1.0);
        let renyi_rate = if k < 1.0 {
            -2.0 * (1.0 - k).ln()
        } else {
            f64::INFINITY
        };
        ContrastValue {
            k,
            renyi_rate,
            product_irreducible,
        }
    }
}

/// Entrywise `√(P(x,x')·P'(x,x'))`; exact zeros off the shared support.
pub fn hadamard_sqrt_product(p: &TransitionMatrix, q: &TransitionMatrix) -> Result<DMatrix<f64>> {
    let n = p.state_count();
    if q.state_count() != n {
        return Err(Error::DimensionMismatch(format!(
            "contrast between chains on {n} and {} states",
            q.state_count()
        )));
    }
    Ok(DMatrix::from_fn(n, n, |i, j| {
        (p.get(i, j) * q.get(i, j)).sqrt()
    }))
}

pub fn contrast(p: &TransitionMatrix, q: &TransitionMatrix) -> Result<ContrastValue> {
    let h = hadamard_sqrt_product(p, q)?;
    let rho = spectral_radius(&h)?;
    let n = h.nrows();
    let support = EdgeSet::new(
        n,
        (0..n)
            .flat_map(|i| (0..n).map(move |j| (i, j)))
            .filter(|&(i, j)| h[(i, j)] > 0.0),
    )?;
    Ok(ContrastValue::from_radius(
        rho,
        support.is_strongly_connected(),
    ))
}

/// Bhattacharyya coefficient `Σ √(μ(x)ν(x))`.
pub fn bhattacharyya(mu: &[f64], nu: &[f64]) -> f64 {
    mu.iter().zip(nu).map(|(a, b)| (a * b).sqrt()).sum()
}

/// `R_{1/2}(μ‖ν) = −2 log Σ √(μ(x)ν(x))`; `+∞` for disjoint supports.
pub fn renyi_half(mu: &[f64], nu: &[f64]) -> f64 {
    assert_eq!(mu.len(), nu.len(), "distributions over different sets");
    let bc = bhattacharyya(mu, nu);
    if bc <= 0.0 {
        f64::INFINITY
    } else {
        (-2.0 * bc.ln()).max(0.0)
    }
}

/// `(1/n)·R_{1/2}(Qⁿ‖Q'ⁿ)` over exact stationary path laws of length `n`.
pub fn renyi_rate_via_paths(
    p: &TransitionMatrix,
    q: &TransitionMatrix,
    pi_p: &StationaryDistribution,
    pi_q: &StationaryDistribution,
    n: usize,
) -> Result<f64> {
    if p.state_count() != q.state_count() {
        return Err(Error::DimensionMismatch(
            "path laws over different state spaces".into(),
        ));
    }
    let qp = path_distribution(p, pi_p, n)?;
    let qq = path_distribution(q, pi_q, n)?;
    Ok(renyi_half(qp.probs(), qq.probs()) / n as f64)
}

mod infinite_as_string {
    //! JSON has no infinity; `+∞` is written as the string `"inf"`.

    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &f64, s: S) -> Result<S::Ok, S::Error> {
        if v.is_infinite() {
            s.serialize_str("inf")
        } else {
            s.serialize_f64(*v)
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
        #[derive(serde::Deserialize)]
        #[serde(untagged)]
        enum Repr {
            Num(f64),
            Str(String),
        }
        match Repr::deserialize(d)? {
            Repr::Num(v) => Ok(v),
            Repr::Str(s) if s == "inf" => Ok(f64::INFINITY),
            Repr::Str(s) => Err(serde::de::Error::custom(format!("unexpected {s:?}"))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::markov::stationary_distribution;

    fn m(rows: &[&[f64]]) -> TransitionMatrix {
        TransitionMatrix::from_rows(&rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>()).unwrap()
    }

    #[test]
    fn self_contrast_is_zero() {
        let p = m(&[&[0.5, 0.5], &[0.25, 0.75]]);
        let c = contrast(&p, &p).unwrap();
        assert!(c.k.abs() < 1e-12);
        assert!(c.renyi_rate.abs() < 1e-11);
        assert!(c.product_irreducible);
    }

    #[test]
    fn disjoint_supports_give_one() {
        let p = m(&[&[0.0, 1.0], &[1.0, 0.0]]);
        let q = m(&[&[1.0, 0.0], &[0.0, 1.0]]);
        let c = contrast(&p, &q).unwrap();
        assert_eq!(c.k, 1.0);
        assert!(c.renyi_rate.is_infinite());
        assert!(!c.product_irreducible);
        let json = serde_json::to_string(&c).unwrap();
        assert!(json.contains("\"inf\""));
        let back: ContrastValue = serde_json::from_str(&json).unwrap();
        assert_eq!(back, c);
    }

    #[test]
    fn two_state_closed_form() {
        let p = m(&[&[0.5, 0.5], &[0.25, 0.75]]);
        let q = m(&[&[0.7, 0.3], &[0.15, 0.85]]);
        // Perron root of [[a, b], [c, d]] from trace and determinant
        let (a, b, c, d) = (
            0.35f64.sqrt(),
            0.15f64.sqrt(),
            0.0375f64.sqrt(),
            0.6375f64.sqrt(),
        );
        let (t, det) = (a + d, a * d - b * c);
        let rho = 0.5 * (t + (t * t - 4.0 * det).sqrt());
        let k = contrast(&p, &q).unwrap().k;
        assert!((k - (1.0 - rho)).abs() < 1e-12, "{k} vs {}", 1.0 - rho);
        assert!((contrast(&q, &p).unwrap().k - k).abs() == 0.0);
    }

    #[test]
    fn renyi_half_values() {
        assert!(renyi_half(&[0.3, 0.7], &[0.3, 0.7]).abs() < 1e-15);
        assert!(renyi_half(&[1.0, 0.0], &[0.0, 1.0]).is_infinite());
        let expected = -2.0 * ((1.0f64 / 8.0).sqrt() + (3.0f64 / 8.0).sqrt()).ln();
        // second route: Hellinger affinity via squared-difference identity
        // Σ√(μν) = 1 − ½Σ(√μ − √ν)²
        let mu = [0.5f64, 0.5];
        let nu = [0.25f64, 0.75];
        let affinity = 1.0
            - 0.5
                * mu.iter()
                    .zip(&nu)
                    .map(|(a, b)| (a.sqrt() - b.sqrt()).powi(2))
                    .sum::<f64>();
        assert!((-2.0 * affinity.ln() - expected).abs() < 1e-14);
        assert!((renyi_half(&[0.5, 0.5], &[0.25, 0.75]) - expected).abs() < 1e-15);
    }

    #[test]
    fn single_step_rate_is_stationary_divergence() {
        let p = m(&[&[0.5, 0.5], &[0.25, 0.75]]);
        let q = m(&[&[0.7, 0.3], &[0.15, 0.85]]);
        let pp = stationary_distribution(&p).unwrap();
        let pq = stationary_distribution(&q).unwrap();
        let r1 = renyi_rate_via_paths(&p, &q, &pp, &pq, 1).unwrap();
        assert!((r1 - renyi_half(pp.probs(), pq.probs())).abs() < 1e-15);
        assert!(renyi_rate_via_paths(&p, &p, &pp, &pp, 5).unwrap() < 1e-15);
    }

    #[test]
    fn path_rate_approaches_spectral_rate() {
        let p = m(&[&[0.5, 0.5], &[0.25, 0.75]]);
        let q = m(&[&[0.7, 0.3], &[0.15, 0.85]]);
        let pp = stationary_distribution(&p).unwrap();
        let pq = stationary_distribution(&q).unwrap();
        let limit = contrast(&p, &q).unwrap().renyi_rate;
        let gaps: Vec<f64> = [4, 8, 12]
            .iter()
            .map(|&n| (renyi_rate_via_paths(&p, &q, &pp, &pq, n).unwrap() - limit).abs())
            .collect();
        assert!(
            gaps[1] <= gaps[0] + 1e-9 && gaps[2] <= gaps[1] + 1e-9,
            "{gaps:?}"
        );
        assert!(gaps[2] < gaps[0]);
    }
}
