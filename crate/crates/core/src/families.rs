//! Named graph families and the gluing operation.

use crate::graph::{EdgeId, Graph, GraphError, LoopTable};
use crate::iso::{is_isomorphic, IsoError};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FamilyError {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("unknown family {0:?}")]
    UnknownFamily(String),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// Wheel with `n` spokes: hub `0`, rim vertices `1..=n`; spokes `(0, i)`
/// come first, then rim edges `(i, i + 1)` closing at `(n, 1)`.
pub fn wheel(n: usize) -> Result<Graph, FamilyError> {
    if n < 3 {
        return Err(FamilyError::InvalidParameter(format!(
            "wheel needs at least 3 spokes, got {n}"
        )));
    }
    let spokes = (1..=n).map(|i| (0, i));
    let rim = (1..=n).map(|i| (i, i % n + 1));
    Ok(Graph::new(n + 1, spokes.chain(rim))?)
}

/// Generalized zigzag graph. Vertices `u_1..u_{t+2}` are `0..t+1`, followed
/// by the fan vertices `v_{i,j}` in order of `i` then `j`. Edges: the path
/// `u_1 .. u_{t+2}`, then for each `i` the fan path from `u_i` through
/// `v_{i,1} .. v_{i,l_i-1}` to `u_{i+2}` followed by the edges
/// `(v_{i,j}, u_{i+1})`, and finally the closing edge `(u_1, u_{t+2})`.
/// An entry `l_i = 1` contributes the single edge `(u_i, u_{i+2})`.
pub fn gzz(l: &[usize]) -> Result<Graph, FamilyError> {
    let t = l.len();
    if t == 0 {
        return Err(FamilyError::InvalidParameter(
            "gzz needs at least one entry".into(),
        ));
    }
    if l.contains(&0) {
        return Err(FamilyError::InvalidParameter(
            "gzz entries must be positive".into(),
        ));
    }
    if l[0] < 2 || l[t - 1] < 2 {
        return Err(FamilyError::InvalidParameter(format!(
            "gzz needs first and last entries at least 2, got {l:?}"
        )));
    }
    let u = |i: usize| i - 1;
    let mut next = t + 2;
    let mut edges: Vec<(usize, usize)> = (1..=t + 1).map(|i| (u(i), u(i + 1))).collect();
    for (idx, &li) in l.iter().enumerate() {
        let i = idx + 1;
        let fan: Vec<usize> = (0..li - 1).map(|j| next + j).collect();
        next += li - 1;
        let mut path = vec![u(i)];
        path.extend(&fan);
        path.push(u(i + 2));
        edges.extend(path.windows(2).map(|w| (w[0], w[1])));
        edges.extend(fan.iter().map(|&v| (v, u(i + 1))));
    }
    edges.push((u(1), u(t + 2)));
    Ok(Graph::new(next, edges)?)
}

/// Zigzag graph `ZZ_n`, built as `gzz([2, 1, ..., 1, 2])` with `n - 5` ones.
pub fn zigzag(n: usize) -> Result<Graph, FamilyError> {
    if n < 5 {
        return Err(FamilyError::InvalidParameter(format!(
            "zigzag needs n >= 5, got {n}"
        )));
    }
    let mut l = vec![2];
    l.extend(std::iter::repeat(1).take(n - 5));
    l.push(2);
    gzz(&l)
}

/// Simple graph from the upper triangle of a 0/1 adjacency matrix given as
/// strings; edges `(i, j)`, `i < j`, in row-major order.
pub fn from_adjacency(rows: &[&str]) -> Result<Graph, FamilyError> {
    let m = rows.len();
    let mut edges = Vec::new();
    for (i, row) in rows.iter().enumerate() {
        let bytes = row.as_bytes();
        if bytes.len() != m {
            return Err(FamilyError::InvalidParameter(format!(
                "adjacency row {i} has length {}, expected {m}",
                bytes.len()
            )));
        }
        for j in 0..m {
            let other = rows[j].as_bytes().get(i).copied();
            match (bytes[j], other) {
                (b'0', Some(b'0')) => {}
                (b'1', Some(b'1')) if i != j => {
                    if i < j {
                        edges.push((i, j));
                    }
                }
                _ => {
                    return Err(FamilyError::InvalidParameter(format!(
                        "adjacency matrix is not a symmetric 0/1 matrix with zero diagonal at ({i}, {j})"
                    )))
                }
            }
        }
    }
    Ok(Graph::new(m, edges)?)
}

pub const XX5_ADJACENCY: [&str; 6] = ["001111", "001111", "110100", "111000", "110001", "110010"];
pub const ST5_ADJACENCY: [&str; 6] = ["011110", "101110", "110001", "110001", "110001", "001110"];

/// Exceptional five-loop graph whose degree-4 vertices are not adjacent.
pub fn xx5() -> Graph {
    from_adjacency(&XX5_ADJACENCY).expect("valid adjacency")
}

/// Exceptional five-loop graph whose degree-4 vertices are adjacent.
pub fn st5() -> Graph {
    from_adjacency(&ST5_ADJACENCY).expect("valid adjacency")
}

/// `ZZ_5` with vertices `a..f = 0..5` and edges numbered as in the classic
/// drawing, together with its reference loop table.
pub fn zz5_drawn() -> Graph {
    Graph::new(
        6,
        [
            (0, 1),
            (2, 0),
            (1, 2),
            (3, 1),
            (2, 3),
            (4, 2),
            (3, 4),
            (5, 3),
            (4, 5),
            (5, 0),
        ],
    )
    .expect("valid graph")
}

pub fn zz5_drawn_table() -> LoopTable {
    let rows = vec![
        vec![1, 1, 1, 0, 0, 0, 0, 0, 0, 0],
        vec![0, 0, 1, 1, 1, 0, 0, 0, 0, 0],
        vec![0, 0, 0, 0, 1, 1, 1, 0, 0, 0],
        vec![0, 0, 0, 0, 0, 0, 1, 1, 1, 0],
        vec![0, -1, 0, 0, 0, -1, 0, 0, 1, 1],
    ];
    LoopTable::new(&zz5_drawn(), rows).expect("valid table")
}

/// `XX_5` with vertices `P1..P6 = 0..5` and edges `e1..e10` as drawn.
pub fn xx5_drawn() -> Graph {
    Graph::new(
        6,
        [
            (1, 0),
            (0, 4),
            (4, 1),
            (0, 2),
            (2, 4),
            (5, 2),
            (2, 3),
            (3, 5),
            (3, 1),
            (1, 5),
        ],
    )
    .expect("valid graph")
}

pub fn xx5_drawn_table() -> LoopTable {
    let rows = vec![
        vec![1, 1, 1, 0, 0, 0, 0, 0, 0, 0],
        vec![0, -1, 0, 1, 1, 0, 0, 0, 0, 0],
        vec![0, 0, 1, 0, 1, 1, 0, 0, 0, 1],
        vec![0, 0, 0, 0, 0, 1, 1, 1, 0, 0],
        vec![0, 0, 0, 0, 0, 0, 0, -1, 1, 1],
    ];
    LoopTable::new(&xx5_drawn(), rows).expect("valid table")
}

/// Which endpoints of the two dropped edges are identified.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum GlueMatching {
    /// tail with tail, head with head
    #[default]
    TailToTail,
    /// tail of the first with head of the second and vice versa
    TailToHead,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Gluing {
    pub graph: Graph,
    /// False when the identification produced parallel edges.
    pub simple: bool,
}

/// Drops `e1` from `g1` and `e2` from `g2` and identifies their endpoints.
/// Vertices of `g1` keep their indices; the remaining vertices of `g2`
/// follow in their original order. Edges of `g1` come before those of `g2`.
pub fn glue(
    g1: &Graph,
    e1: EdgeId,
    g2: &Graph,
    e2: EdgeId,
    matching: GlueMatching,
) -> Result<Gluing, FamilyError> {
    let (t1, h1) = g1.edge(e1)?;
    let (t2, h2) = g2.edge(e2)?;
    let (to_t, to_h) = match matching {
        GlueMatching::TailToTail => (t1, h1),
        GlueMatching::TailToHead => (h1, t1),
    };
    let mut map = vec![usize::MAX; g2.vertex_count()];
    map[t2] = to_t;
    map[h2] = to_h;
    let mut next = g1.vertex_count();
    for slot in map.iter_mut().filter(|s| **s == usize::MAX) {
        *slot = next;
        next += 1;
    }
    let edges = g1
        .edges()
        .iter()
        .enumerate()
        .filter(|&(id, _)| id != e1)
        .map(|(_, &e)| e)
        .chain(
            g2.edges()
                .iter()
                .enumerate()
                .filter(|&(id, _)| id != e2)
                .map(|(_, &(t, h))| (map[t], map[h])),
        );
    let graph = Graph::new(next, edges)?;
    let simple = graph.is_simple();
    Ok(Gluing { graph, simple })
}

/// Graphs used for labeling classification results and for tests.
pub fn catalog() -> Vec<(String, Graph)> {
    let mut out = vec![("K4".to_string(), wheel(3).expect("valid"))];
    for n in 4..=6 {
        out.push((format!("WS{n}"), wheel(n).expect("valid")));
    }
    for n in 5..=7 {
        out.push((format!("ZZ{n}"), zigzag(n).expect("valid")));
    }
    out.push(("XX5".into(), xx5()));
    out.push(("ST5".into(), st5()));
    out
}

/// Name of the first catalog graph isomorphic to `g`.
pub fn catalog_label(g: &Graph) -> Result<Option<String>, IsoError> {
    for (name, c) in catalog() {
        if is_isomorphic(g, &c)? {
            return Ok(Some(name));
        }
    }
    Ok(None)
}

/// Builds a family member from a name and integer parameters:
/// `ws n`, `zz n`, `gzz l1 .. lt`, `xx5`, `st5`, `k4`, `zz5-drawn`, `xx5-drawn`.
pub fn by_name(name: &str, params: &[usize]) -> Result<Graph, FamilyError> {
    let one = |what: &str| -> Result<usize, FamilyError> {
        match params {
            [n] => Ok(*n),
            _ => Err(FamilyError::InvalidParameter(format!(
                "{what} takes exactly one parameter"
            ))),
        }
    };
    let none = |g: Graph| -> Result<Graph, FamilyError> {
        if params.is_empty() {
            Ok(g)
        } else {
            Err(FamilyError::InvalidParameter(format!(
                "{name} takes no parameters"
            )))
        }
    };
    match name.to_ascii_lowercase().as_str() {
        "ws" | "wheel" => wheel(one("ws")?),
        "zz" | "zigzag" => zigzag(one("zz")?),
        "gzz" => gzz(params),
        "k4" => none(wheel(3)?),
        "xx5" => none(xx5()),
        "st5" => none(st5()),
        "zz5-drawn" => none(zz5_drawn()),
        "xx5-drawn" => none(xx5_drawn()),
        _ => Err(FamilyError::UnknownFamily(name.to_string())),
    }
}
