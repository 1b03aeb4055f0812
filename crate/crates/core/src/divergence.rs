//! Power counting: convergence classes, primitive log divergence and the
//! exhaustive classification of small primitive graphs.

use crate::exec::Exec;
use crate::families::{catalog_label, glue, FamilyError, GlueMatching};
use crate::graph::{EdgeId, Graph, GraphError, MaskScanner, MAX_SUBGRAPH_EDGES};
use crate::iso::{canonical_form, CanonicalKey, IsoError};
use serde::Serialize;
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DivergenceError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Iso(#[from] IsoError),
    #[error(transparent)]
    Family(#[from] FamilyError),
    #[error(
        "classification is available for 3, 4 or 5 loops (6 with the experimental flag), got {0}"
    )]
    UnsupportedLoopCount(usize),
    #[error("gluing input {0} is not primitively log divergent")]
    NotPrimitive(usize),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum DivergenceClass {
    /// more than twice as many edges as loops
    Convergent,
    /// exactly twice as many edges as loops
    LogDivergent,
    /// fewer than twice as many edges as loops
    Superdivergent,
}

pub fn divergence_class(g: &Graph) -> DivergenceClass {
    classify_counts(g.edge_count(), g.betti())
}

fn classify_counts(edges: usize, betti: usize) -> DivergenceClass {
    match edges.cmp(&(2 * betti)) {
        std::cmp::Ordering::Greater => DivergenceClass::Convergent,
        std::cmp::Ordering::Equal => DivergenceClass::LogDivergent,
        std::cmp::Ordering::Less => DivergenceClass::Superdivergent,
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum PldReason {
    Primitive,
    Disconnected {
        components: usize,
    },
    NotLogDivergent {
        class: DivergenceClass,
    },
    /// A proper connected subgraph that is not convergent.
    DivergentSubgraph {
        edges: Vec<EdgeId>,
        class: DivergenceClass,
    },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PldVerdict {
    pub pld: bool,
    pub reason: PldReason,
    /// Offending subgraph; the whole graph when it is not log divergent.
    pub witness: Option<Graph>,
    /// Vertex of degree below three, when one exists.
    pub low_degree_vertex: Option<usize>,
}

/// Primitive log divergence: connected, log divergent, and every connected
/// proper edge-subgraph convergent. Subsets are scanned by decreasing size
/// and the first non-convergent one is returned as witness.
pub fn is_pld(g: &Graph) -> Result<PldVerdict, DivergenceError> {
    if g.edge_count() > MAX_SUBGRAPH_EDGES {
        return Err(GraphError::TooLarge {
            what: "edge count for the primitivity test",
            limit: MAX_SUBGRAPH_EDGES,
            actual: g.edge_count(),
        }
        .into());
    }
    let degrees = g.degrees();
    let low_degree_vertex = (0..g.vertex_count()).find(|&v| degrees[v] < 3);
    let components = g.connected_components();
    if components != 1 {
        return Ok(PldVerdict {
            pld: false,
            reason: PldReason::Disconnected { components },
            witness: None,
            low_degree_vertex,
        });
    }
    let class = divergence_class(g);
    if class != DivergenceClass::LogDivergent {
        return Ok(PldVerdict {
            pld: false,
            reason: PldReason::NotLogDivergent { class },
            witness: Some(g.clone()),
            low_degree_vertex,
        });
    }
    if let Some(mask) = divergent_proper_subgraph(g) {
        let edges: Vec<EdgeId> = (0..g.edge_count())
            .filter(|&e| mask >> e & 1 == 1)
            .collect();
        let witness = g.edge_subgraph(&edges)?;
        let class = divergence_class(&witness);
        return Ok(PldVerdict {
            pld: false,
            reason: PldReason::DivergentSubgraph { edges, class },
            witness: Some(witness),
            low_degree_vertex,
        });
    }
    debug_assert!(
        low_degree_vertex.is_none(),
        "primitive graphs have min degree 3"
    );
    Ok(PldVerdict {
        pld: true,
        reason: PldReason::Primitive,
        witness: None,
        low_degree_vertex,
    })
}

fn divergent_proper_subgraph(g: &Graph) -> Option<u32> {
    let n = g.edge_count();
    let scanner = MaskScanner::new(g);
    for k in (1..n).rev() {
        let found = subsets_of_size(n, k).find(|&mask| {
            let s = scanner.stats(mask);
            s.components == 1 && s.edges <= 2 * s.betti()
        });
        if found.is_some() {
            return found;
        }
    }
    None
}

/// All `k`-element subsets of `0..n` as bitmasks, in increasing order.
fn subsets_of_size(n: usize, k: usize) -> impl Iterator<Item = u32> {
    let limit: u64 = 1 << n;
    let mut next: Option<u64> = if k <= n { Some((1u64 << k) - 1) } else { None };
    if k == 0 {
        next = Some(0);
    }
    std::iter::from_fn(move || {
        let cur = next?;
        if cur >= limit {
            return None;
        }
        next = if cur == 0 {
            None
        } else {
            let c = cur & cur.wrapping_neg();
            let r = cur + c;
            Some((((r ^ cur) >> 2) / c) | r)
        };
        Some(cur as u32)
    })
}

/// One isomorphism class found by the classification.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ClassifiedGraph {
    pub graph: Graph,
    pub key: String,
    pub label: Option<String>,
}

/// Primitive graphs with `n_loops` loops: all simple connected graphs with
/// `2 n` edges, min degree at least 3 and `m` vertices for
/// `n + 1 <= m <= 4n / 3`, filtered by [`is_pld`] and reduced to one
/// canonical representative per isomorphism class, sorted by key.
pub fn classify_pld(n_loops: usize, exec: Exec) -> Result<Vec<ClassifiedGraph>, DivergenceError> {
    classify_pld_opts(n_loops, false, exec)
}

/// As [`classify_pld`]; `experimental` additionally allows six loops.
pub fn classify_pld_opts(
    n_loops: usize,
    experimental: bool,
    exec: Exec,
) -> Result<Vec<ClassifiedGraph>, DivergenceError> {
    let allowed = (3..=5).contains(&n_loops) || (experimental && n_loops == 6);
    if !allowed {
        return Err(DivergenceError::UnsupportedLoopCount(n_loops));
    }
    classify_vertex_range(n_loops, n_loops + 1, 4 * n_loops / 3, exec)
}

/// Classification over an explicit vertex-count range.
pub fn classify_vertex_range(
    n_loops: usize,
    min_vertices: usize,
    max_vertices: usize,
    exec: Exec,
) -> Result<Vec<ClassifiedGraph>, DivergenceError> {
    let edges = 2 * n_loops;
    let mut classes: BTreeMap<CanonicalKey, Graph> = BTreeMap::new();
    for m in min_vertices.max(1)..=max_vertices {
        let pairs: Vec<(usize, usize)> = (0..m)
            .flat_map(|i| (i + 1..m).map(move |j| (i, j)))
            .collect();
        if pairs.len() > 32 || edges > pairs.len() {
            if pairs.len() > 32 {
                return Err(GraphError::TooLarge {
                    what: "vertex count for classification",
                    limit: 8,
                    actual: m,
                }
                .into());
            }
            continue;
        }
        let candidates: Vec<u32> = subsets_of_size(pairs.len(), edges)
            .filter(|&mask| min_degree_at_least(&pairs, m, mask, 3))
            .collect();
        let found = exec.map_slice(&candidates, |&mask| -> Result<Option<_>, DivergenceError> {
            let g = Graph::new(
                m,
                (0..pairs.len())
                    .filter(|&p| mask >> p & 1 == 1)
                    .map(|p| pairs[p]),
            )?;
            if !is_pld(&g)?.pld {
                return Ok(None);
            }
            let form = canonical_form(&g)?;
            Ok(Some((form.key.clone(), form.graph(&g))))
        });
        for item in found {
            if let Some((key, g)) = item? {
                classes.entry(key).or_insert(g);
            }
        }
    }
    classes
        .into_iter()
        .map(|(key, graph)| {
            let label = catalog_label(&graph)?;
            Ok(ClassifiedGraph {
                graph,
                key: key.to_hex(),
                label,
            })
        })
        .collect()
}

fn min_degree_at_least(pairs: &[(usize, usize)], m: usize, mask: u32, min: usize) -> bool {
    let mut deg = [0usize; 32];
    let mut rest = mask;
    while rest != 0 {
        let p = rest.trailing_zeros() as usize;
        rest &= rest - 1;
        deg[pairs[p].0] += 1;
        deg[pairs[p].1] += 1;
    }
    deg[..m].iter().all(|&d| d >= min)
}

/// Outcome of gluing two primitive graphs along sampled edge pairs.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct GluingClosure {
    pub checked: usize,
    /// Pairs whose gluing produced parallel edges and was not tested.
    pub skipped_nonsimple: usize,
    pub failures: Vec<(EdgeId, EdgeId)>,
}

impl GluingClosure {
    pub fn holds(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Glues `g1` and `g2` along every listed edge pair and tests each simple
/// result for primitive log divergence.
pub fn verify_gluing_closure(
    g1: &Graph,
    g2: &Graph,
    pairs: &[(EdgeId, EdgeId)],
    matching: GlueMatching,
) -> Result<GluingClosure, DivergenceError> {
    for (i, g) in [g1, g2].into_iter().enumerate() {
        if !is_pld(g)?.pld {
            return Err(DivergenceError::NotPrimitive(i + 1));
        }
    }
    let mut out = GluingClosure::default();
    for &(e1, e2) in pairs {
        let r = glue(g1, e1, g2, e2, matching)?;
        if !r.simple {
            out.skipped_nonsimple += 1;
            continue;
        }
        out.checked += 1;
        if !is_pld(&r.graph)?.pld {
            out.failures.push((e1, e2));
        }
    }
    Ok(out)
}
