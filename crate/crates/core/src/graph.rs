//! Oriented graphs with numbered edges, homology bookkeeping and
//! combinatorial enumeration (spanning forests, connected edge subsets).

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::collections::VecDeque;
use thiserror::Error;

pub type VertexId = usize;
pub type EdgeId = usize;

/// Largest edge count accepted by [`Graph::connected_edge_subgraphs`].
pub const MAX_SUBGRAPH_EDGES: usize = 20;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("edge {edge} uses vertex {vertex} but the graph has {vertex_count} vertices")]
    VertexOutOfRange {
        edge: EdgeId,
        vertex: VertexId,
        vertex_count: usize,
    },
    #[error("edge {0} is a self-loop")]
    SelfLoop(EdgeId),
    #[error("edge id {id} out of range (graph has {count} edges)")]
    EdgeOutOfRange { id: EdgeId, count: usize },
    #[error("graph is disconnected ({0} components)")]
    Disconnected(usize),
    #[error("{what}: limit is {limit}, got {actual}")]
    TooLarge {
        what: &'static str,
        limit: usize,
        actual: usize,
    },
    #[error("invalid loop table: {0}")]
    InvalidLoopTable(String),
    #[error("contracting edge {0} would turn a parallel edge into a self-loop")]
    ContractionLoop(EdgeId),
}

/// A finite graph with oriented, numbered edges. Edge `i` runs from
/// `edges[i].0` (tail) to `edges[i].1` (head). Parallel edges are allowed,
/// self-loops are not.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "GraphJson", into = "GraphJson")]
pub struct Graph {
    vertex_count: usize,
    edges: Vec<(VertexId, VertexId)>,
}

/// Interchange form: `{"vertices": m, "edges": [[tail, head], ...]}`.
#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct GraphJson {
    vertices: usize,
    edges: Vec<[VertexId; 2]>,
}

impl TryFrom<GraphJson> for Graph {
    type Error = GraphError;

    fn try_from(value: GraphJson) -> Result<Self, Self::Error> {
        Graph::new(value.vertices, value.edges.into_iter().map(|[t, h]| (t, h)))
    }
}

impl From<Graph> for GraphJson {
    fn from(g: Graph) -> Self {
        GraphJson {
            vertices: g.vertex_count,
            edges: g.edges.into_iter().map(|(t, h)| [t, h]).collect(),
        }
    }
}

impl Graph {
    pub fn new(
        vertex_count: usize,
        edges: impl IntoIterator<Item = (VertexId, VertexId)>,
    ) -> Result<Self, GraphError> {
        let edges: Vec<_> = edges.into_iter().collect();
        for (id, &(t, h)) in edges.iter().enumerate() {
            for v in [t, h] {
                if v >= vertex_count {
                    return Err(GraphError::VertexOutOfRange {
                        edge: id,
                        vertex: v,
                        vertex_count,
                    });
                }
            }
            if t == h {
                return Err(GraphError::SelfLoop(id));
            }
        }
        Ok(Graph {
            vertex_count,
            edges,
        })
    }

    /// First 16 hex digits of the SHA-256 of the graph's JSON form. Depends
    /// on the labeling, not only on the isomorphism class.
    pub fn id(&self) -> String {
        use sha2::{Digest, Sha256};
        let json = serde_json::to_string(self).expect("graph serializes");
        let digest = Sha256::digest(json.as_bytes());
        digest[..8].iter().map(|b| format!("{b:02x}")).collect()
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(VertexId, VertexId)] {
        &self.edges
    }

    pub fn edge(&self, id: EdgeId) -> Result<(VertexId, VertexId), GraphError> {
        self.edges
            .get(id)
            .copied()
            .ok_or(GraphError::EdgeOutOfRange {
                id,
                count: self.edges.len(),
            })
    }

    /// `+1` if `e` exits `v`, `-1` if it enters `v`, `0` otherwise.
    pub fn incidence(&self, e: EdgeId, v: VertexId) -> i8 {
        let (t, h) = self.edges[e];
        if t == v {
            1
        } else if h == v {
            -1
        } else {
            0
        }
    }

    pub fn degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.vertex_count];
        for &(t, h) in &self.edges {
            deg[t] += 1;
            deg[h] += 1;
        }
        deg
    }

    pub fn min_degree(&self) -> usize {
        self.degrees().into_iter().min().unwrap_or(0)
    }

    /// Degree sequence sorted in nonincreasing order.
    pub fn degree_sequence(&self) -> Vec<usize> {
        let mut d = self.degrees();
        d.sort_unstable_by(|a, b| b.cmp(a));
        d
    }

    /// True when no two edges join the same pair of vertices.
    pub fn is_simple(&self) -> bool {
        let mut seen = rustc_hash::FxHashSet::default();
        self.edges
            .iter()
            .all(|&(t, h)| seen.insert((t.min(h), t.max(h))))
    }

    pub fn are_adjacent(&self, a: VertexId, b: VertexId) -> bool {
        self.edges
            .iter()
            .any(|&(t, h)| (t == a && h == b) || (t == b && h == a))
    }

    /// Component index for every vertex, numbered in order of first vertex.
    pub fn component_labels(&self) -> (usize, Vec<usize>) {
        let mut dsu = Dsu::new(self.vertex_count);
        for &(t, h) in &self.edges {
            dsu.union(t, h);
        }
        let mut label = vec![usize::MAX; self.vertex_count];
        let mut root_label = vec![usize::MAX; self.vertex_count];
        let mut count = 0;
        for v in 0..self.vertex_count {
            let r = dsu.find(v);
            if root_label[r] == usize::MAX {
                root_label[r] = count;
                count += 1;
            }
            label[v] = root_label[r];
        }
        (count, label)
    }

    /// Number of connected components; isolated vertices count.
    pub fn connected_components(&self) -> usize {
        self.component_labels().0
    }

    pub fn is_connected(&self) -> bool {
        self.connected_components() <= 1
    }

    /// Rank of the first homology: `|E| - |V| + #components`.
    pub fn betti(&self) -> usize {
        self.edges.len() + self.connected_components() - self.vertex_count
    }

    fn adjacency(&self) -> Vec<Vec<(EdgeId, VertexId)>> {
        let mut adj = vec![Vec::new(); self.vertex_count];
        for (e, &(t, h)) in self.edges.iter().enumerate() {
            adj[t].push((e, h));
            adj[h].push((e, t));
        }
        adj
    }

    /// Fundamental cycles of the breadth-first spanning tree rooted at vertex 0.
    pub fn cycle_basis(&self) -> Result<LoopTable, GraphError> {
        let components = self.connected_components();
        if components > 1 {
            return Err(GraphError::Disconnected(components));
        }
        let adj = self.adjacency();
        let mut in_tree = vec![false; self.edges.len()];
        let mut seen = vec![false; self.vertex_count];
        let mut queue = VecDeque::new();
        if self.vertex_count > 0 {
            seen[0] = true;
            queue.push_back(0);
        }
        while let Some(v) = queue.pop_front() {
            for &(e, w) in &adj[v] {
                if !seen[w] {
                    seen[w] = true;
                    in_tree[e] = true;
                    queue.push_back(w);
                }
            }
        }
        let tree: Vec<EdgeId> = (0..self.edges.len()).filter(|&e| in_tree[e]).collect();
        self.fundamental_cycles(&tree)
    }

    /// Cycle basis from a spanning tree grown by a seeded random edge order.
    pub fn shuffled_cycle_basis(&self, seed: u64) -> Result<LoopTable, GraphError> {
        let components = self.connected_components();
        if components > 1 {
            return Err(GraphError::Disconnected(components));
        }
        let mut order: Vec<EdgeId> = (0..self.edges.len()).collect();
        order.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
        let mut dsu = Dsu::new(self.vertex_count);
        let tree: Vec<EdgeId> = order
            .into_iter()
            .filter(|&e| dsu.union(self.edges[e].0, self.edges[e].1))
            .collect();
        self.fundamental_cycles(&tree)
    }

    /// One loop per non-tree edge `e`: `e` traversed tail to head, closed by
    /// the tree path back to its tail.
    pub fn fundamental_cycles(&self, tree: &[EdgeId]) -> Result<LoopTable, GraphError> {
        let n = self.edges.len();
        let mut in_tree = vec![false; n];
        for &e in tree {
            self.edge(e)?;
            in_tree[e] = true;
        }
        // root the tree at vertex 0 (connected input)
        let mut tree_adj = vec![Vec::new(); self.vertex_count];
        for &e in tree {
            let (t, h) = self.edges[e];
            tree_adj[t].push((e, h));
            tree_adj[h].push((e, t));
        }
        let mut parent: Vec<Option<(EdgeId, VertexId)>> = vec![None; self.vertex_count];
        let mut depth = vec![usize::MAX; self.vertex_count];
        if self.vertex_count > 0 {
            depth[0] = 0;
            let mut queue = VecDeque::from([0]);
            while let Some(v) = queue.pop_front() {
                for &(e, w) in &tree_adj[v] {
                    if depth[w] == usize::MAX {
                        depth[w] = depth[v] + 1;
                        parent[w] = Some((e, v));
                        queue.push_back(w);
                    }
                }
            }
        }
        if depth.contains(&usize::MAX) {
            return Err(GraphError::InvalidLoopTable(
                "edge set is not a spanning tree".into(),
            ));
        }
        let mut rows = Vec::new();
        for e in (0..n).filter(|&e| !in_tree[e]) {
            let mut row = vec![0i8; n];
            let (t, h) = self.edges[e];
            row[e] = 1;
            // walk from h up to the common ancestor, then from it down to t
            let (mut a, mut b) = (h, t);
            let mut down = Vec::new();
            while a != b {
                if depth[a] >= depth[b] {
                    let (pe, p) = parent[a].expect("non-root has parent");
                    row[pe] += if self.edges[pe].0 == a { 1 } else { -1 };
                    a = p;
                } else {
                    let (pe, p) = parent[b].expect("non-root has parent");
                    down.push((pe, p));
                    b = p;
                }
            }
            for (pe, p) in down {
                row[pe] += if self.edges[pe].0 == p { 1 } else { -1 };
            }
            rows.push(row);
        }
        LoopTable::new(self, rows)
    }

    /// Every spanning forest (a spanning tree on each component), as sorted
    /// edge-id lists, in lexicographic order.
    pub fn spanning_trees(&self) -> impl Iterator<Item = Vec<EdgeId>> {
        let mut out = Vec::new();
        let target = self.vertex_count - self.connected_components();
        let mut dsu = RollbackDsu::new(self.vertex_count);
        let mut chosen = Vec::with_capacity(target);
        self.forest_search(0, target, &mut dsu, &mut chosen, &mut out);
        out.into_iter()
    }

    fn forest_search(
        &self,
        next: EdgeId,
        target: usize,
        dsu: &mut RollbackDsu,
        chosen: &mut Vec<EdgeId>,
        out: &mut Vec<Vec<EdgeId>>,
    ) {
        if chosen.len() == target {
            out.push(chosen.clone());
            return;
        }
        if next == self.edges.len() || self.edges.len() - next < target - chosen.len() {
            return;
        }
        let (t, h) = self.edges[next];
        if dsu.union(t, h) {
            chosen.push(next);
            self.forest_search(next + 1, target, dsu, chosen, out);
            chosen.pop();
            dsu.rollback();
        }
        if self.can_complete_without(next, target, chosen) {
            self.forest_search(next + 1, target, dsu, chosen, out);
        }
    }

    // Whether chosen edges plus edges after `skip` still span every component.
    fn can_complete_without(&self, skip: EdgeId, target: usize, chosen: &[EdgeId]) -> bool {
        let mut dsu = Dsu::new(self.vertex_count);
        let mut merged = 0;
        for &e in chosen
            .iter()
            .chain(&((skip + 1)..self.edges.len()).collect::<Vec<_>>())
        {
            if dsu.union(self.edges[e].0, self.edges[e].1) {
                merged += 1;
            }
        }
        merged == target
    }

    /// Every nonempty edge subset whose edges form a connected subgraph.
    pub fn connected_edge_subgraphs(
        &self,
    ) -> Result<impl Iterator<Item = EdgeSubgraph> + '_, GraphError> {
        let n = self.edges.len();
        if n > MAX_SUBGRAPH_EDGES {
            return Err(GraphError::TooLarge {
                what: "edge count for subgraph enumeration",
                limit: MAX_SUBGRAPH_EDGES,
                actual: n,
            });
        }
        let scanner = MaskScanner::new(self);
        Ok((1u32..(1u32 << n)).filter_map(move |mask| {
            let stats = scanner.stats(mask);
            (stats.components == 1).then_some(EdgeSubgraph { mask })
        }))
    }

    /// Subgraph on the given edges; vertices are the edge endpoints, relabeled
    /// `0..k` in increasing order of their original index.
    pub fn edge_subgraph(&self, ids: &[EdgeId]) -> Result<Graph, GraphError> {
        let mut used = vec![false; self.vertex_count];
        for &e in ids {
            let (t, h) = self.edge(e)?;
            used[t] = true;
            used[h] = true;
        }
        let mut relabel = vec![usize::MAX; self.vertex_count];
        let mut k = 0;
        for v in 0..self.vertex_count {
            if used[v] {
                relabel[v] = k;
                k += 1;
            }
        }
        Graph::new(
            k,
            ids.iter().map(|&e| {
                let (t, h) = self.edges[e];
                (relabel[t], relabel[h])
            }),
        )
    }

    /// Deletes edge `e`, keeping all vertices; later edge ids shift down by one.
    pub fn delete_edge(&self, e: EdgeId) -> Result<Graph, GraphError> {
        self.edge(e)?;
        let mut edges = self.edges.clone();
        edges.remove(e);
        Graph::new(self.vertex_count, edges)
    }

    /// Contracts edge `e` by identifying its head with its tail. The head's
    /// index is removed and higher vertex indices shift down.
    pub fn contract_edge(&self, e: EdgeId) -> Result<Graph, GraphError> {
        let (t, h) = self.edge(e)?;
        let map = |v: VertexId| {
            let v = if v == h { t } else { v };
            if v > h {
                v - 1
            } else {
                v
            }
        };
        let mut edges = Vec::with_capacity(self.edges.len() - 1);
        for (id, &(a, b)) in self.edges.iter().enumerate() {
            if id == e {
                continue;
            }
            let (a, b) = (map(a), map(b));
            if a == b {
                return Err(GraphError::ContractionLoop(id));
            }
            edges.push((a, b));
        }
        Graph::new(self.vertex_count - 1, edges)
    }

    /// Same graph with edge `e` reversed.
    /// Replaces edge `e` by a path of two edges through a new last vertex;
    /// the second half is appended as the last edge.
    pub fn subdivide_edge(&self, e: EdgeId) -> Result<Graph, GraphError> {
        let (t, h) = self.edge(e)?;
        let mid = self.vertex_count;
        let mut edges = self.edges.clone();
        edges[e] = (t, mid);
        edges.push((mid, h));
        Graph::new(self.vertex_count + 1, edges)
    }

    pub fn reverse_edge(&self, e: EdgeId) -> Result<Graph, GraphError> {
        let (t, h) = self.edge(e)?;
        let mut g = self.clone();
        g.edges[e] = (h, t);
        Ok(g)
    }

    /// Renames vertex `v` to `perm[v]`.
    pub fn relabel_vertices(&self, perm: &[VertexId]) -> Result<Graph, GraphError> {
        Graph::new(
            self.vertex_count,
            self.edges.iter().map(|&(t, h)| (perm[t], perm[h])),
        )
    }

    /// Reorders edges so that new edge `i` is old edge `order[i]`.
    pub fn permute_edges(&self, order: &[EdgeId]) -> Result<Graph, GraphError> {
        let edges: Result<Vec<_>, _> = order.iter().map(|&e| self.edge(e)).collect();
        Graph::new(self.vertex_count, edges?)
    }

    /// Disjoint union; edges of `other` follow those of `self`.
    pub fn disjoint_union(&self, other: &Graph) -> Graph {
        let shift = self.vertex_count;
        let edges = self
            .edges
            .iter()
            .copied()
            .chain(other.edges.iter().map(|&(t, h)| (t + shift, h + shift)));
        Graph::new(self.vertex_count + other.vertex_count, edges).expect("union of valid graphs")
    }
}

/// A connected edge subset, stored as a bitmask over edge ids.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct EdgeSubgraph {
    pub mask: u32,
}

impl EdgeSubgraph {
    pub fn edge_ids(&self) -> Vec<EdgeId> {
        (0..32).filter(|&e| self.mask >> e & 1 == 1).collect()
    }

    pub fn edge_count(&self) -> usize {
        self.mask.count_ones() as usize
    }

    pub fn to_graph(&self, parent: &Graph) -> Graph {
        parent
            .edge_subgraph(&self.edge_ids())
            .expect("subgraph of a valid graph")
    }
}

/// Vertex, component and loop counts of an edge subset.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct MaskStats {
    pub edges: usize,
    pub vertices: usize,
    pub components: usize,
}

impl MaskStats {
    pub fn betti(&self) -> usize {
        self.edges + self.components - self.vertices
    }
}

/// Fast per-mask statistics for graphs with at most 32 edges and 64 vertices.
pub(crate) struct MaskScanner {
    ends: Vec<(u8, u8)>,
    vertex_count: usize,
}

impl MaskScanner {
    pub(crate) fn new(g: &Graph) -> Self {
        assert!(g.edge_count() <= 32 && g.vertex_count() <= 64);
        MaskScanner {
            ends: g.edges().iter().map(|&(t, h)| (t as u8, h as u8)).collect(),
            vertex_count: g.vertex_count(),
        }
    }

    pub(crate) fn stats(&self, mask: u32) -> MaskStats {
        let mut parent = [0u8; 64];
        for (v, p) in parent.iter_mut().enumerate().take(self.vertex_count) {
            *p = v as u8;
        }
        fn find(parent: &mut [u8; 64], mut x: u8) -> u8 {
            while parent[x as usize] != x {
                parent[x as usize] = parent[parent[x as usize] as usize];
                x = parent[x as usize];
            }
            x
        }
        let mut touched: u64 = 0;
        let mut merges = 0;
        let mut m = mask;
        while m != 0 {
            let e = m.trailing_zeros() as usize;
            m &= m - 1;
            let (t, h) = self.ends[e];
            touched |= 1 << t | 1 << h;
            let (a, b) = (find(&mut parent, t), find(&mut parent, h));
            if a != b {
                parent[a as usize] = b;
                merges += 1;
            }
        }
        let vertices = touched.count_ones() as usize;
        MaskStats {
            edges: mask.count_ones() as usize,
            vertices,
            components: vertices - merges,
        }
    }
}

/// Cycle-basis table: one row per basis loop, one column per edge, entries
/// `+1`/`-1` for edges traversed along/against their orientation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LoopTable {
    rows: Vec<Vec<i8>>,
    edge_count: usize,
}

impl LoopTable {
    /// Validates that every row lies in the kernel of the boundary map, that
    /// the rows are independent and that there are `betti(g)` of them.
    pub fn new(g: &Graph, rows: Vec<Vec<i8>>) -> Result<Self, GraphError> {
        let n = g.edge_count();
        for (i, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(GraphError::InvalidLoopTable(format!(
                    "row {i} has {} entries, expected {n}",
                    row.len()
                )));
            }
            if row.iter().any(|&x| !(-1..=1).contains(&x)) {
                return Err(GraphError::InvalidLoopTable(format!(
                    "row {i} has an entry outside {{-1, 0, 1}}"
                )));
            }
            let mut boundary = vec![0i64; g.vertex_count()];
            for (e, &x) in row.iter().enumerate() {
                let (t, h) = g.edges()[e];
                boundary[t] += x as i64;
                boundary[h] -= x as i64;
            }
            if let Some(v) = boundary.iter().position(|&b| b != 0) {
                return Err(GraphError::InvalidLoopTable(format!(
                    "row {i} has nonzero boundary at vertex {v}"
                )));
            }
        }
        if rows.len() != g.betti() {
            return Err(GraphError::InvalidLoopTable(format!(
                "{} rows but the Betti number is {}",
                rows.len(),
                g.betti()
            )));
        }
        let wide: Vec<Vec<i128>> = rows
            .iter()
            .map(|r| r.iter().map(|&x| x as i128).collect())
            .collect();
        if integer_rank(wide) != rows.len() {
            return Err(GraphError::InvalidLoopTable(
                "rows are linearly dependent".into(),
            ));
        }
        Ok(LoopTable {
            rows,
            edge_count: n,
        })
    }

    pub fn rows(&self) -> &[Vec<i8>] {
        &self.rows
    }

    pub fn loop_count(&self) -> usize {
        self.rows.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    pub fn entry(&self, row: usize, edge: EdgeId) -> i8 {
        self.rows[row][edge]
    }
}

/// Rank by fraction-free elimination.
fn integer_rank(mut m: Vec<Vec<i128>>) -> usize {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut rank = 0;
    let mut prev = 1i128;
    for c in 0..cols {
        let Some(p) = (rank..rows).find(|&r| m[r][c] != 0) else {
            continue;
        };
        m.swap(rank, p);
        for r in rank + 1..rows {
            for k in c + 1..cols {
                m[r][k] = (m[rank][c] * m[r][k] - m[r][c] * m[rank][k]) / prev;
            }
            m[r][c] = 0;
        }
        prev = m[rank][c];
        rank += 1;
    }
    rank
}

pub(crate) struct Dsu {
    parent: Vec<usize>,
}

impl Dsu {
    pub(crate) fn new(n: usize) -> Self {
        Dsu {
            parent: (0..n).collect(),
        }
    }

    pub(crate) fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    /// Returns false when `a` and `b` were already joined.
    pub(crate) fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        self.parent[ra] = rb;
        true
    }
}

struct RollbackDsu {
    parent: Vec<usize>,
    size: Vec<usize>,
    history: Vec<(usize, usize)>,
}

impl RollbackDsu {
    fn new(n: usize) -> Self {
        RollbackDsu {
            parent: (0..n).collect(),
            size: vec![1; n],
            history: Vec::new(),
        }
    }

    fn find(&self, mut x: usize) -> usize {
        while self.parent[x] != x {
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) -> bool {
        let (mut ra, mut rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        if self.size[ra] > self.size[rb] {
            std::mem::swap(&mut ra, &mut rb);
        }
        self.parent[ra] = rb;
        self.size[rb] += self.size[ra];
        self.history.push((ra, rb));
        true
    }

    fn rollback(&mut self) {
        let (ra, rb) = self.history.pop().expect("rollback without union");
        self.parent[ra] = ra;
        self.size[rb] -= self.size[ra];
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn triangle() -> Graph {
        Graph::new(3, [(0, 1), (1, 2), (2, 0)]).unwrap()
    }

    fn k4() -> Graph {
        Graph::new(4, [(0, 1), (0, 2), (0, 3), (1, 2), (2, 3), (3, 1)]).unwrap()
    }

    #[test]
    fn rejects_bad_edges() {
        assert_eq!(Graph::new(2, [(0, 0)]), Err(GraphError::SelfLoop(0)));
        assert!(matches!(
            Graph::new(2, [(0, 2)]),
            Err(GraphError::VertexOutOfRange { vertex: 2, .. })
        ));
    }

    #[test]
    fn betti_numbers() {
        let path = Graph::new(4, [(0, 1), (1, 2), (2, 3)]).unwrap();
        assert_eq!(path.betti(), 0);
        assert_eq!(triangle().betti(), 1);
        assert_eq!(k4().betti(), 3);
        let banana = Graph::new(2, [(0, 1), (0, 1), (1, 0)]).unwrap();
        assert_eq!(banana.betti(), 2);
    }

    #[test]
    fn subdivision_keeps_betti() {
        let g = k4().subdivide_edge(2).unwrap();
        assert_eq!((g.vertex_count(), g.edge_count(), g.betti()), (5, 7, 3));
        assert_eq!(g.edges()[2], (0, 4));
        assert_eq!(g.edges()[6], (4, 3));
        assert!(k4().subdivide_edge(6).is_err());
    }

    #[test]
    fn component_counts() {
        assert_eq!(Graph::new(3, []).unwrap().connected_components(), 3);
        let two = triangle().disjoint_union(&triangle());
        assert_eq!(two.connected_components(), 2);
        assert_eq!(two.betti(), 2);
    }

    #[test]
    fn triangle_loop() {
        let table = triangle().cycle_basis().unwrap();
        assert_eq!(table.loop_count(), 1);
        assert!(table.rows()[0].iter().all(|&x| x.abs() == 1));
    }

    #[test]
    fn cycle_basis_rejects_disconnected() {
        let two = triangle().disjoint_union(&triangle());
        assert_eq!(two.cycle_basis(), Err(GraphError::Disconnected(2)));
    }

    #[test]
    fn loop_table_validation() {
        let g = triangle();
        assert!(LoopTable::new(&g, vec![vec![1, 1, 1]]).is_ok());
        assert!(LoopTable::new(&g, vec![vec![1, -1, 1]]).is_err());
        assert!(LoopTable::new(&g, vec![]).is_err());
        let k = k4();
        let t = k.cycle_basis().unwrap();
        let mut rows = t.rows().to_vec();
        rows[2] = rows[1].clone();
        assert!(LoopTable::new(&k, rows).is_err());
    }

    #[test]
    fn spanning_tree_counts() {
        assert_eq!(triangle().spanning_trees().count(), 3);
        assert_eq!(k4().spanning_trees().count(), 16);
        let path = Graph::new(4, [(0, 1), (1, 2), (2, 3)]).unwrap();
        let trees: Vec<_> = path.spanning_trees().collect();
        assert_eq!(trees, vec![vec![0, 1, 2]]);
        // isolated vertices only: a single empty forest
        let empty = Graph::new(3, []).unwrap();
        assert_eq!(
            empty.spanning_trees().collect::<Vec<_>>(),
            vec![Vec::<EdgeId>::new()]
        );
        // forests of a disconnected graph: 3 x 3
        let two = triangle().disjoint_union(&triangle());
        assert_eq!(two.spanning_trees().count(), 9);
    }

    #[test]
    fn connected_subgraph_counts() {
        assert_eq!(triangle().connected_edge_subgraphs().unwrap().count(), 7);
        let single = Graph::new(2, [(0, 1)]).unwrap();
        assert_eq!(single.connected_edge_subgraphs().unwrap().count(), 1);
        let pair = Graph::new(4, [(0, 1), (2, 3)]).unwrap();
        assert_eq!(pair.connected_edge_subgraphs().unwrap().count(), 2);
    }

    #[test]
    fn subgraph_size_bound() {
        let edges: Vec<_> = (0..21).map(|i| (i, i + 1)).collect();
        let long = Graph::new(22, edges).unwrap();
        assert!(matches!(
            long.connected_edge_subgraphs().map(|_| ()),
            Err(GraphError::TooLarge { .. })
        ));
    }

    #[test]
    fn contraction_and_deletion() {
        let k = k4();
        let c = k.contract_edge(0).unwrap();
        assert_eq!(c.vertex_count(), 3);
        assert_eq!(c.edge_count(), 5);
        assert!(!c.is_simple());
        let d = k.delete_edge(0).unwrap();
        assert_eq!(d.edge_count(), 5);
        let banana = Graph::new(2, [(0, 1), (0, 1)]).unwrap();
        assert_eq!(banana.contract_edge(0), Err(GraphError::ContractionLoop(1)));
    }

    #[test]
    fn json_round_trip() {
        let g = k4();
        let text = serde_json::to_string(&g).unwrap();
        assert_eq!(
            text,
            r#"{"vertices":4,"edges":[[0,1],[0,2],[0,3],[1,2],[2,3],[3,1]]}"#
        );
        let back: Graph = serde_json::from_str(&text).unwrap();
        assert_eq!(back, g);
        assert!(serde_json::from_str::<Graph>(r#"{"vertices":1,"edges":[[0,0]]}"#).is_err());
    }
}
