//! Matrix file formats.
//!
//! JSON: `{"states": n, "edges": [[i, j], ...], "rows": [[...], ...]}`.
//! Floats are written in shortest round-trip form and parsed with correct
//! rounding, so read/write is bit-exact.
//!
//! Plain text: one row per line, entries separated by whitespace; the edge
//! set is the nonzero pattern. Blank lines and `#` comments are skipped.

use std::fmt::Write as _;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::edges::EdgeSet;
use super::matrix::TransitionMatrix;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatrixFile {
    pub states: usize,
    pub edges: Vec<[usize; 2]>,
    pub rows: Vec<Vec<f64>>,
}

impl From<&TransitionMatrix> for MatrixFile {
    fn from(p: &TransitionMatrix) -> Self {
        MatrixFile {
            states: p.state_count(),
            edges: p.edges().iter().map(|(a, b)| [a, b]).collect(),
            rows: p.rows(),
        }
    }
}

impl TryFrom<MatrixFile> for TransitionMatrix {
    type Error = Error;

    fn try_from(file: MatrixFile) -> Result<Self> {
        let edges = EdgeSet::new(file.states, file.edges.iter().map(|e| (e[0], e[1])))?;
        TransitionMatrix::new(edges, &file.rows)
    }
}

pub fn matrix_to_json(p: &TransitionMatrix) -> String {
    serde_json::to_string(&MatrixFile::from(p)).expect("matrix file serializes")
}

pub fn matrix_from_json(text: &str) -> Result<TransitionMatrix> {
    let file: MatrixFile = serde_json::from_str(text)?;
    file.try_into()
}

pub fn matrix_to_text(p: &TransitionMatrix) -> String {
    let mut out = String::new();
    for i in 0..p.state_count() {
        let line: Vec<String> = p.row(i).iter().map(|v| format!("{v:?}")).collect();
        writeln!(out, "{}", line.join(" ")).unwrap();
    }
    out
}

pub fn matrix_from_text(text: &str) -> Result<TransitionMatrix> {
    let mut rows = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let row = line
            .split_whitespace()
            .map(|tok| {
                tok.parse::<f64>().map_err(|_| {
                    Error::Parse(format!(
                        "line {}: cannot parse {tok:?} as a number",
                        lineno + 1
                    ))
                })
            })
            .collect::<Result<Vec<_>>>()?;
        rows.push(row);
    }
    if rows.is_empty() {
        return Err(Error::Parse("no matrix rows found".into()));
    }
    TransitionMatrix::from_rows(&rows)
}

/// Reads a matrix, choosing the format by content: JSON if the first
/// non-blank character is `{`, plain text otherwise.
pub fn read_matrix(path: impl AsRef<Path>) -> Result<TransitionMatrix> {
    let text = std::fs::read_to_string(path)?;
    if text.trim_start().starts_with('{') {
        matrix_from_json(&text)
    } else {
        matrix_from_text(&text)
    }
}
