//! The graph matrix and the first graph polynomial, computed as a
//! determinant and as a spanning-tree sum.

use crate::exec::Exec;
use crate::families::{xx5_drawn, zz5_drawn};
use crate::graph::{Graph, GraphError, LoopTable};
use crate::matrix::{MatrixError, SymLinMatrix};
use crate::poly::{LinearForm, MPoly, Monomial, PolyError, MAX_VARS};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PsiError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Matrix(#[from] MatrixError),
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error("graph has {0} edges; at most {MAX_VARS} variables are supported")]
    TooManyEdges(usize),
    #[error("loop table has {table} columns but the graph has {graph} edges")]
    TableMismatch { table: usize, graph: usize },
}

fn check_edges(g: &Graph) -> Result<(), PsiError> {
    if g.edge_count() > MAX_VARS {
        return Err(PsiError::TooManyEdges(g.edge_count()));
    }
    Ok(())
}

/// `Σ_k T_k M^k` with `M^k_{ij} = Tab_{ik} Tab_{jk}`; variable `k` is edge `k`.
pub fn graph_matrix(g: &Graph, table: &LoopTable) -> Result<SymLinMatrix, PsiError> {
    check_edges(g)?;
    if table.edge_count() != g.edge_count() {
        return Err(PsiError::TableMismatch {
            table: table.edge_count(),
            graph: g.edge_count(),
        });
    }
    let h = table.loop_count();
    let rows = table.rows();
    let entries = (0..h * h)
        .map(|idx| {
            let (i, j) = (idx / h, idx % h);
            LinearForm::from_coeffs(
                0,
                (0..g.edge_count()).map(|k| (k, (rows[i][k] * rows[j][k]) as i128)),
            )
        })
        .collect();
    Ok(SymLinMatrix::new(h, g.edge_count(), entries)?)
}

/// Determinant of the graph matrix for the breadth-first cycle basis.
pub fn psi_det(g: &Graph) -> Result<MPoly, PsiError> {
    psi_det_with(g, &g.cycle_basis()?, Exec::default())
}

pub fn psi_det_with(g: &Graph, table: &LoopTable, exec: Exec) -> Result<MPoly, PsiError> {
    Ok(graph_matrix(g, table)?.det_with(exec)?)
}

/// Sum over spanning forests `T` of `Π_{e ∉ T} T_e`.
pub fn psi_trees(g: &Graph) -> Result<MPoly, PsiError> {
    check_edges(g)?;
    let n = g.edge_count();
    let terms = g.spanning_trees().map(|tree| {
        let mut exps = [1u8; MAX_VARS];
        for &e in &tree {
            exps[e] = 0;
        }
        (
            Monomial::from_exponents(&exps[..n]).expect("bounded length"),
            1,
        )
    });
    Ok(MPoly::from_terms(n, terms)?)
}

/// Named coordinates for the two classic drawn labelings, in which the
/// graph matrix takes its banded reference form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PaperCoordinates {
    pub names: Vec<String>,
    /// `images[k]`: edge variable `T_{k+1}` as a linear form in the names.
    pub images: Vec<LinearForm>,
}

/// Variable order `A0..A5, B0, B1, B3, B4`.
pub const PAPER_NAMES: [&str; 10] = ["A0", "A1", "A2", "A3", "A4", "A5", "B0", "B1", "B3", "B4"];

const A0: usize = 0;
const A1: usize = 1;
const A2: usize = 2;
const A3: usize = 3;
const A4: usize = 4;
const A5: usize = 5;
const B0: usize = 6;
const B1: usize = 7;
const B3: usize = 8;
const B4: usize = 9;

impl PaperCoordinates {
    /// Available only for graphs whose edge list equals one of the drawn
    /// labelings exactly.
    pub fn for_graph(g: &Graph) -> Option<PaperCoordinates> {
        let f = |terms: &[(usize, i128)]| LinearForm::from_coeffs(0, terms.iter().copied());
        let images = if *g == zz5_drawn() {
            vec![
                f(&[(B0, 1), (A0, -1), (A5, 1)]),
                f(&[(A5, -1)]),
                f(&[(A0, 1)]),
                f(&[(B1, 1), (A0, -1), (A1, -1)]),
                f(&[(A1, 1)]),
                f(&[(A4, -1)]),
                f(&[(A2, 1)]),
                f(&[(B3, 1), (A2, -1), (A3, -1)]),
                f(&[(A3, 1)]),
                f(&[(B4, 1), (A5, 1), (A4, 1), (A3, -1)]),
            ]
        } else if *g == xx5_drawn() {
            vec![
                f(&[(B0, 1), (A0, 1), (A4, -1)]),
                f(&[(A0, -1)]),
                f(&[(A4, 1)]),
                f(&[(B1, 1), (A0, 1), (A1, -1)]),
                f(&[(A1, 1)]),
                f(&[(A2, 1)]),
                f(&[(B3, 1), (A2, -1), (A3, 1)]),
                f(&[(A3, -1)]),
                f(&[(B4, 1), (A3, 1), (A5, -1)]),
                f(&[(A5, 1)]),
            ]
        } else {
            return None;
        };
        Some(PaperCoordinates {
            names: PAPER_NAMES.iter().map(|s| s.to_string()).collect(),
            images,
        })
    }

    /// Rewrites a polynomial in edge variables into the named coordinates.
    pub fn apply(&self, p: &MPoly) -> Result<MPoly, PolyError> {
        let n = self.names.len();
        let images: Vec<MPoly> = self.images.iter().map(|f| f.to_poly(n)).collect();
        p.compose(&images)
    }

    /// Rewrites a matrix of edge-variable linear forms entrywise.
    pub fn apply_matrix(&self, m: &SymLinMatrix) -> Result<SymLinMatrix, MatrixError> {
        let d = m.dim();
        let entries = (0..d * d)
            .map(|idx| {
                let src = m.get(idx / d, idx % d);
                src.coeffs()
                    .iter()
                    .fold(LinearForm::constant(src.constant_term()), |acc, &(v, c)| {
                        acc.add(&self.images[v].scale(c))
                    })
            })
            .collect();
        SymLinMatrix::new(d, self.names.len(), entries)
    }
}
