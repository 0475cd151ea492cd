//! Trajectory files.
//!
//! Text: optional header line `# states=<k> seed=<s> stream=<t>` (any subset
//! of the keys), then one integer state per line.
//! JSON: `{"states": [...], "seed": s, "stream": t, "state_count": k}` with
//! `seed`, `stream` and `state_count` optional.

use std::fmt::Write as _;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Trajectory {
    pub states: Vec<usize>,
    pub state_count: usize,
    pub seed: Option<u64>,
    pub stream: Option<u64>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct TrajectoryFile {
    states: Vec<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    stream: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    state_count: Option<usize>,
}

impl Trajectory {
    /// A trajectory without provenance; the alphabet is `0..state_count`.
    pub fn new(states: Vec<usize>, state_count: usize) -> Result<Self> {
        if let Some(&bad) = states.iter().find(|&&s| s >= state_count) {
            return Err(Error::InvalidInput(format!(
                "state {bad} outside alphabet 0..{state_count}"
            )));
        }
        Ok(Self {
            states,
            state_count,
            seed: None,
            stream: None,
        })
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    /// Visit counts per state.
    pub fn visits(&self) -> Vec<u64> {
        let mut v = vec![0u64; self.state_count];
        for &s in &self.states {
            v[s] += 1;
        }
        v
    }

    /// Row-major `k×k` matrix of observed transition counts.
    pub fn transition_counts(&self) -> Vec<u64> {
        let k = self.state_count;
        let mut counts = vec![0u64; k * k];
        for w in self.states.windows(2) {
            counts[w[0] * k + w[1]] += 1;
        }
        counts
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&TrajectoryFile {
            states: self.states.clone(),
            seed: self.seed,
            stream: self.stream,
            state_count: Some(self.state_count),
        })
        .expect("trajectory serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let f: TrajectoryFile = serde_json::from_str(text)?;
        let inferred = f.states.iter().max().map_or(1, |m| m + 1);
        let mut t = Trajectory::new(f.states, f.state_count.unwrap_or(inferred))?;
        t.seed = f.seed;
        t.stream = f.stream;
        Ok(t)
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("# states={}", self.state_count);
        if let Some(seed) = self.seed {
            write!(out, " seed={seed}").unwrap();
        }
        if let Some(stream) = self.stream {
            write!(out, " stream={stream}").unwrap();
        }
        out.push('\n');
        for s in &self.states {
            writeln!(out, "{s}").unwrap();
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let (mut state_count, mut seed, mut stream) = (None, None, None);
        let mut states = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if let Some(header) = line.strip_prefix('#') {
                for token in header.split_whitespace() {
                    let Some((key, value)) = token.split_once('=') else {
                        continue;
                    };
                    let parse = |v: &str| {
                        v.parse::<u64>().map_err(|_| {
                            Error::Parse(format!("line {}: bad header value {v:?}", lineno + 1))
                        })
                    };
                    match key {
                        "states" => state_count = Some(parse(value)? as usize),
                        "seed" => seed = Some(parse(value)?),
                        "stream" => stream = Some(parse(value)?),
                        _ => {}
                    }
                }
                continue;
            }
            if line.is_empty() {
                continue;
            }
            states.push(line.parse::<usize>().map_err(|_| {
                Error::Parse(format!(
                    "line {}: {line:?} is not a state index",
                    lineno + 1
                ))
            })?);
        }
        let inferred = states.iter().max().map_or(1, |m| m + 1);
        let mut t = Trajectory::new(states, state_count.unwrap_or(inferred))?;
        t.seed = seed;
        t.stream = stream;
        Ok(t)
    }

    /// Reads JSON if the content starts with `{`, text otherwise.
    pub fn read(path: impl AsRef<Path>) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        if text.trim_start().starts_with('{') {
            Self::from_json(&text)
        } else {
            Self::from_text(&text)
        }
    }
}
