use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Directed support graph `(X, D)` of a transition matrix.
///
/// Edges are kept in a `BTreeSet` so iteration order (and therefore every
/// serialized form) is deterministic.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct EdgeSet {
    state_count: usize,
    edges: BTreeSet<(usize, usize)>,
}

impl EdgeSet {
    pub fn new<I>(state_count: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        if state_count == 0 {
            return Err(Error::InvalidInput("state count must be positive".into()));
        }
        let edges: BTreeSet<_> = edges.into_iter().collect();
        if let Some(&(a, b)) = edges
            .iter()
            .find(|&&(a, b)| a >= state_count || b >= state_count)
        {
            return Err(Error::InvalidInput(format!(
                "edge ({a}, {b}) references a state outside 0..{state_count}"
            )));
        }
        Ok(Self { state_count, edges })
    }

    /// The complete digraph on `state_count` states, self-loops included.
    pub fn complete(state_count: usize) -> Result<Self> {
        Self::new(
            state_count,
            (0..state_count).flat_map(|i| (0..state_count).map(move |j| (i, j))),
        )
    }

    pub fn state_count(&self) -> usize {
        self.state_count
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn contains(&self, from: usize, to: usize) -> bool {
        self.edges.contains(&(from, to))
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.edges.iter().copied()
    }

    pub fn successors(&self, from: usize) -> impl Iterator<Item = usize> + '_ {
        self.edges
            .range((from, 0)..(from, usize::MAX))
            .map(|&(_, to)| to)
    }

    /// Out-degree of `from`.
    pub fn degree(&self, from: usize) -> usize {
        self.successors(from).count()
    }

    /// True iff the digraph is strongly connected.
    ///
    /// Runs one forward and one backward reachability search from state 0.
    pub fn is_strongly_connected(&self) -> bool {
        let n = self.state_count;
        let mut forward = vec![Vec::new(); n];
        let mut backward = vec![Vec::new(); n];
        for (a, b) in self.iter() {
            forward[a].push(b);
            backward[b].push(a);
        }
        reaches_all(&forward) && reaches_all(&backward)
    }

    /// True iff `(x, x') ∈ D ⇔ (x', x) ∈ D`.
    pub fn is_symmetric(&self) -> bool {
        self.iter().all(|(a, b)| self.contains(b, a))
    }
}

fn reaches_all(adjacency: &[Vec<usize>]) -> bool {
    let mut seen = vec![false; adjacency.len()];
    let mut stack = vec![0usize];
    seen[0] = true;
    while let Some(v) = stack.pop() {
        for &w in &adjacency[v] {
            if !seen[w] {
                seen[w] = true;
                stack.push(w);
            }
        }
    }
    seen.into_iter().all(|s| s)
}
