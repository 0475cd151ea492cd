use std::fmt::Write as _;
use std::path::PathBuf;

use anyhow::{bail, Context};
use serde::Serialize;

use markov_identity::sampling::Trajectory;
use markov_identity::testing::RiskReport;
use markov_identity::verify::OracleReport;

use crate::Format;

pub struct Output {
    path: Option<PathBuf>,
    format: Option<Format>,
}

#[derive(Serialize)]
struct RiskRow {
    n: usize,
    type1_freq: f64,
    type2_freq_max: Option<f64>,
    risk_estimate: f64,
}

impl Output {
    pub fn new(path: Option<PathBuf>, format: Option<Format>) -> Self {
        Self { path, format }
    }

    fn emit(&self, text: &str) -> anyhow::Result<()> {
        match &self.path {
            Some(path) => {
                std::fs::write(path, text).with_context(|| format!("writing {}", path.display()))
            }
            None => {
                print!("{text}");
                Ok(())
            }
        }
    }

    fn json<T: Serialize>(value: &T) -> anyhow::Result<String> {
        Ok(serde_json::to_string_pretty(value)? + "\n")
    }

    /// Generic value: JSON, a flat `key = value` listing, or a one-row CSV.
    pub fn write<T: Serialize>(&self, value: &T, default: Format) -> anyhow::Result<()> {
        let text = match self.format.unwrap_or(default) {
            Format::Json => Self::json(value)?,
            Format::Text => {
                let mut out = String::new();
                for (key, v) in flat_fields(value)? {
                    writeln!(out, "{key} = {v}")?;
                }
                out
            }
            Format::Csv => {
                let fields = flat_fields(value)?;
                let mut w = csv::Writer::from_writer(Vec::new());
                w.write_record(fields.iter().map(|(k, _)| k))?;
                w.write_record(fields.iter().map(|(_, v)| v))?;
                String::from_utf8(w.into_inner()?)?
            }
        };
        self.emit(&text)
    }

    pub fn write_json_only<T: Serialize>(&self, value: &T) -> anyhow::Result<()> {
        if !matches!(self.format, None | Some(Format::Json)) {
            bail!("this command only writes JSON");
        }
        self.emit(&Self::json(value)?)
    }

    /// Text trajectory format by default, JSON on request.
    pub fn trajectory(&self, t: &Trajectory) -> anyhow::Result<()> {
        match self.format.unwrap_or(Format::Text) {
            Format::Text => self.emit(&t.to_text()),
            Format::Json => self.emit(&(t.to_json() + "\n")),
            Format::Csv => bail!("trajectories are written as text or json"),
        }
    }

    /// Risk tables: CSV `n,type1_freq,type2_freq_max,risk_estimate`, or the
    /// full JSON report.
    pub fn risk_rows<T: Serialize>(&self, rows: &[RiskReport], full: &T) -> anyhow::Result<()> {
        match self.format.unwrap_or(Format::Json) {
            Format::Json => self.emit(&Self::json(full)?),
            Format::Csv => {
                let mut w = csv::Writer::from_writer(Vec::new());
                for r in rows {
                    w.serialize(RiskRow {
                        n: r.n,
                        type1_freq: r.type1_freq,
                        type2_freq_max: r.type2_freq_max,
                        risk_estimate: r.risk_estimate,
                    })?;
                }
                self.emit(&String::from_utf8(w.into_inner()?)?)
            }
            Format::Text => {
                let mut out = format!(
                    "{:>10} {:>10} {:>14} {:>13}\n",
                    "n", "type1", "type2_max", "risk"
                );
                for r in rows {
                    let t2 = r
                        .type2_freq_max
                        .map_or_else(|| "-".to_string(), |v| format!("{v:.4}"));
                    writeln!(
                        out,
                        "{:>10} {:>10.4} {:>14} {:>13.4}",
                        r.n, r.type1_freq, t2, r.risk_estimate
                    )?;
                }
                self.emit(&out)
            }
        }
    }

    pub fn oracle(&self, report: &OracleReport) -> anyhow::Result<()> {
        match self.format.unwrap_or(Format::Text) {
            Format::Json => self.emit(&Self::json(report)?),
            Format::Csv => {
                let mut w = csv::Writer::from_writer(Vec::new());
                for c in &report.checks {
                    w.serialize(c)?;
                }
                self.emit(&String::from_utf8(w.into_inner()?)?)
            }
            Format::Text => {
                let mut out = format!("seed {}\n", report.seed);
                for c in &report.checks {
                    writeln!(
                        out,
                        "{:<30} {:>5} cases  worst {:.3e}  tol {:.0e}  {}",
                        c.name,
                        c.cases,
                        c.worst,
                        c.tolerance,
                        if c.passed { "ok" } else { "FAIL" }
                    )?;
                }
                self.emit(&out)
            }
        }
    }
}

/// Top-level fields as strings; nested values stay JSON.
fn flat_fields<T: Serialize>(value: &T) -> anyhow::Result<Vec<(String, String)>> {
    let serde_json::Value::Object(map) = serde_json::to_value(value)? else {
        bail!("value has no fields");
    };
    Ok(map
        .into_iter()
        .map(|(k, v)| {
            let s = match v {
                serde_json::Value::String(s) => s,
                other => other.to_string(),
            };
            (k, s)
        })
        .collect())
}
