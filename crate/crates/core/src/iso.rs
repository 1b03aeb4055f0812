//! Undirected isomorphism of small graphs via a canonical adjacency string.
//!
//! The key is the vertex count, the sorted degree sequence and the
//! lexicographically smallest column-major upper-triangular adjacency string
//! (edge multiplicities) over all vertex orders that list vertices by
//! nonincreasing degree. Orientation and edge numbering are ignored.

use crate::graph::Graph;
use std::fmt;
use thiserror::Error;

/// Largest vertex count accepted for canonical labeling.
pub const MAX_ISO_VERTICES: usize = 12;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum IsoError {
    #[error("canonical labeling supports at most {MAX_ISO_VERTICES} vertices, got {0}")]
    TooManyVertices(usize),
    #[error("more than 255 parallel edges between one vertex pair")]
    MultiplicityOverflow,
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CanonicalKey(Vec<u8>);

impl CanonicalKey {
    pub fn as_bytes(&self) -> &[u8] {
        &self.0
    }

    pub fn to_hex(&self) -> String {
        self.0.iter().map(|b| format!("{b:02x}")).collect()
    }
}

impl fmt::Display for CanonicalKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_hex())
    }
}

/// Canonical key together with the vertex order realizing it:
/// `order[p]` is the original vertex placed at position `p`.
#[derive(Clone, Debug)]
pub struct CanonicalForm {
    pub key: CanonicalKey,
    pub order: Vec<usize>,
}

impl CanonicalForm {
    /// The graph relabeled into canonical order, each edge oriented from the
    /// lower to the higher position and edges sorted.
    pub fn graph(&self, g: &Graph) -> Graph {
        let mut pos = vec![0; self.order.len()];
        for (p, &v) in self.order.iter().enumerate() {
            pos[v] = p;
        }
        let mut edges: Vec<(usize, usize)> = g
            .edges()
            .iter()
            .map(|&(t, h)| (pos[t].min(pos[h]), pos[t].max(pos[h])))
            .collect();
        edges.sort_unstable();
        Graph::new(g.vertex_count(), edges).expect("relabeling preserves validity")
    }
}

pub fn canonical_key(g: &Graph) -> Result<CanonicalKey, IsoError> {
    canonical_form(g).map(|c| c.key)
}

pub fn is_isomorphic(g1: &Graph, g2: &Graph) -> Result<bool, IsoError> {
    if g1.vertex_count() != g2.vertex_count()
        || g1.edge_count() != g2.edge_count()
        || g1.degree_sequence() != g2.degree_sequence()
    {
        // still enforce the size bound on both inputs
        for g in [g1, g2] {
            if g.vertex_count() > MAX_ISO_VERTICES {
                return Err(IsoError::TooManyVertices(g.vertex_count()));
            }
        }
        return Ok(false);
    }
    Ok(canonical_key(g1)? == canonical_key(g2)?)
}

pub fn canonical_form(g: &Graph) -> Result<CanonicalForm, IsoError> {
    let n = g.vertex_count();
    if n > MAX_ISO_VERTICES {
        return Err(IsoError::TooManyVertices(n));
    }
    let mut adj = vec![vec![0u8; n]; n];
    for &(t, h) in g.edges() {
        for (a, b) in [(t, h), (h, t)] {
            adj[a][b] = adj[a][b]
                .checked_add(1)
                .ok_or(IsoError::MultiplicityOverflow)?;
        }
    }
    let degrees = g.degrees();
    let seq = g.degree_sequence();
    let mut search = Search {
        adj: &adj,
        degrees: &degrees,
        seq: &seq,
        order: Vec::with_capacity(n),
        used: vec![false; n],
        current: Vec::with_capacity(n * n.saturating_sub(1) / 2),
        best: None,
    };
    search.run();
    let (best, order) = search.best.unwrap_or_default();
    let mut key = Vec::with_capacity(3 + n + best.len());
    key.push(n as u8);
    key.extend_from_slice(&(g.edge_count() as u16).to_be_bytes());
    key.extend(seq.iter().map(|&d| d as u8));
    key.extend(best);
    Ok(CanonicalForm {
        key: CanonicalKey(key),
        order,
    })
}

struct Search<'a> {
    adj: &'a [Vec<u8>],
    degrees: &'a [usize],
    seq: &'a [usize],
    order: Vec<usize>,
    used: Vec<bool>,
    current: Vec<u8>,
    best: Option<(Vec<u8>, Vec<usize>)>,
}

impl Search<'_> {
    fn run(&mut self) {
        let p = self.order.len();
        if p == self.seq.len() {
            let better = match &self.best {
                None => true,
                Some((best, _)) => self.current < *best,
            };
            if better {
                self.best = Some((self.current.clone(), self.order.clone()));
            }
            return;
        }
        let mut candidates: Vec<(Vec<u8>, usize)> = (0..self.seq.len())
            .filter(|&v| !self.used[v] && self.degrees[v] == self.seq[p])
            .map(|v| (self.order.iter().map(|&u| self.adj[u][v]).collect(), v))
            .collect();
        candidates.sort();
        for (column, v) in candidates {
            let start = self.current.len();
            self.current.extend_from_slice(&column);
            let prune = match &self.best {
                Some((best, _)) => self.current.as_slice() > &best[..self.current.len()],
                None => false,
            };
            if !prune {
                self.order.push(v);
                self.used[v] = true;
                self.run();
                self.used[v] = false;
                self.order.pop();
            }
            self.current.truncate(start);
        }
    }
}
