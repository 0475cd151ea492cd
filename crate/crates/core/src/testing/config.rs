use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Initial law of simulated trajectories.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InitialLaw {
    /// Start from the common stationary law.
    #[default]
    Stationary,
    /// Start deterministically from one state.
    State(usize),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TestConfig {
    pub epsilon: f64,
    pub delta: f64,
    pub n: usize,
    pub seed: u64,
    pub tester: String,
    /// Lower threshold of the robust variant (`K < ε_low` vs `K > ε`).
    /// Reserved; no tester reads it yet.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub epsilon_low: Option<f64>,
    #[serde(default)]
    pub initial: InitialLaw,
}

impl TestConfig {
    pub fn new(epsilon: f64, delta: f64, n: usize, seed: u64) -> Result<Self> {
        let cfg = Self {
            epsilon,
            delta,
            n,
            seed,
            tester: super::PLUGIN_TESTER_ID.to_string(),
            epsilon_low: None,
            initial: InitialLaw::Stationary,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn with_n(&self, n: usize) -> Self {
        Self { n, ..self.clone() }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.epsilon > 0.0 && self.epsilon < 1.0) {
            return Err(Error::InvalidConfig(format!(
                "epsilon must lie in (0, 1), got {}",
                self.epsilon
            )));
        }
        if !(self.delta > 0.0 && self.delta < 1.0) {
            return Err(Error::InvalidConfig(format!(
                "delta must lie in (0, 1), got {}",
                self.delta
            )));
        }
        if self.n == 0 {
            return Err(Error::InvalidConfig("n must be at least 1".into()));
        }
        if let Some(low) = self.epsilon_low {
            if !(low > 0.0 && low < self.epsilon) {
                return Err(Error::InvalidConfig(format!(
                    "epsilon_low must lie in (0, epsilon), got {low}"
                )));
            }
        }
        Ok(())
    }
}

/// `0` keeps the null hypothesis, `1` rejects it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(into = "u8", try_from = "u8")]
pub enum Decision {
    AcceptNull,
    Reject,
}

impl From<Decision> for u8 {
    fn from(d: Decision) -> u8 {
        match d {
            Decision::AcceptNull => 0,
            Decision::Reject => 1,
        }
    }
}

impl TryFrom<u8> for Decision {
    type Error = String;
    fn try_from(v: u8) -> std::result::Result<Self, String> {
        match v {
            0 => Ok(Decision::AcceptNull),
            1 => Ok(Decision::Reject),
            other => Err(format!("decision must be 0 or 1, got {other}")),
        }
    }
}

impl fmt::Display for Decision {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Decision::AcceptNull => f.write_str("accept"),
            Decision::Reject => f.write_str("reject"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Diagnostics {
    pub tester: String,
    /// Visits per state of the trajectory handed to the tester.
    pub visits: Vec<u64>,
    /// Plug-in estimate of the contrast to the reference, when computed.
    pub contrast_estimate: Option<f64>,
    /// Too few visits to more than half of the states.
    pub insufficient_data: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TestVerdict {
    pub decision: Decision,
    pub diagnostics: Diagnostics,
}

impl TestVerdict {
    pub fn rejects(&self) -> bool {
        self.decision == Decision::Reject
    }
}
