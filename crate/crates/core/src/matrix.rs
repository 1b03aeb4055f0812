//! Square matrices over polynomials and exact determinants by minor
//! expansion over column subsets.

use crate::exec::Exec;
use crate::poly::{LinearForm, MPoly};
use rustc_hash::FxHashMap;
use thiserror::Error;

/// Largest matrix dimension accepted by the determinant.
pub const MAX_DIM: usize = 14;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MatrixError {
    #[error("matrix dimension {0} exceeds the limit of {MAX_DIM}")]
    TooLarge(usize),
    #[error("expected {expected} entries, got {actual}")]
    Shape { expected: usize, actual: usize },
    #[error("matrix is not symmetric at ({0}, {1})")]
    NotSymmetric(usize, usize),
    #[error("index {index} out of range for dimension {dim}")]
    IndexOutOfRange { index: usize, dim: usize },
    #[error("row and column index sets differ in size ({0} vs {1})")]
    UnbalancedMinor(usize, usize),
    #[error("repeated index {0} in minor specification")]
    RepeatedIndex(usize),
    #[error("entries use variable {var} but the ring has {nvars} variables")]
    VariableOutOfRange { var: usize, nvars: usize },
}

/// Square matrix of polynomials in a common ring, stored row-major.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolyMatrix {
    dim: usize,
    nvars: usize,
    entries: Vec<MPoly>,
}

impl PolyMatrix {
    pub fn new(dim: usize, nvars: usize, entries: Vec<MPoly>) -> Result<Self, MatrixError> {
        if entries.len() != dim * dim {
            return Err(MatrixError::Shape {
                expected: dim * dim,
                actual: entries.len(),
            });
        }
        if let Some(p) = entries.iter().find(|p| p.nvars() != nvars) {
            return Err(MatrixError::VariableOutOfRange {
                var: p.nvars(),
                nvars,
            });
        }
        Ok(PolyMatrix {
            dim,
            nvars,
            entries,
        })
    }

    /// Constant matrix from integer rows (ring with `nvars` variables).
    pub fn from_integers(rows: &[Vec<i128>], nvars: usize) -> Result<Self, MatrixError> {
        let dim = rows.len();
        let entries: Vec<MPoly> = rows
            .iter()
            .flat_map(|r| r.iter().map(|&c| MPoly::constant(nvars, c)))
            .collect();
        PolyMatrix::new(dim, nvars, entries)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn get(&self, i: usize, j: usize) -> &MPoly {
        &self.entries[i * self.dim + j]
    }

    pub fn is_symmetric(&self) -> bool {
        (0..self.dim).all(|i| (0..i).all(|j| self.get(i, j) == self.get(j, i)))
    }

    pub fn transpose(&self) -> PolyMatrix {
        let entries = (0..self.dim * self.dim)
            .map(|k| self.get(k % self.dim, k / self.dim).clone())
            .collect();
        PolyMatrix {
            dim: self.dim,
            nvars: self.nvars,
            entries,
        }
    }

    /// Submatrix keeping the listed rows and columns, in the given order.
    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> Result<PolyMatrix, MatrixError> {
        if rows.len() != cols.len() {
            return Err(MatrixError::UnbalancedMinor(rows.len(), cols.len()));
        }
        for &i in rows.iter().chain(cols) {
            if i >= self.dim {
                return Err(MatrixError::IndexOutOfRange {
                    index: i,
                    dim: self.dim,
                });
            }
        }
        let entries = rows
            .iter()
            .flat_map(|&i| cols.iter().map(move |&j| self.get(i, j).clone()))
            .collect();
        PolyMatrix::new(rows.len(), self.nvars, entries)
    }

    /// Determinant of the matrix with the listed rows and columns removed;
    /// removing everything leaves the empty matrix, whose determinant is 1.
    pub fn minor(
        &self,
        rows_removed: &[usize],
        cols_removed: &[usize],
    ) -> Result<MPoly, MatrixError> {
        self.minor_with(rows_removed, cols_removed, Exec::default())
    }

    pub fn minor_with(
        &self,
        rows_removed: &[usize],
        cols_removed: &[usize],
        exec: Exec,
    ) -> Result<MPoly, MatrixError> {
        let rows = self.complement(rows_removed)?;
        let cols = self.complement(cols_removed)?;
        self.submatrix(&rows, &cols)?.det_with(exec)
    }

    fn complement(&self, removed: &[usize]) -> Result<Vec<usize>, MatrixError> {
        let mut seen = vec![false; self.dim];
        for &i in removed {
            if i >= self.dim {
                return Err(MatrixError::IndexOutOfRange {
                    index: i,
                    dim: self.dim,
                });
            }
            if std::mem::replace(&mut seen[i], true) {
                return Err(MatrixError::RepeatedIndex(i));
            }
        }
        Ok((0..self.dim).filter(|&i| !seen[i]).collect())
    }

    pub fn det(&self) -> Result<MPoly, MatrixError> {
        self.det_with(Exec::default())
    }

    /// Exact determinant by Laplace expansion along successive rows,
    /// memoizing the minor on the first `k` rows for each needed column set.
    /// Only column sets reachable through nonzero entries are computed; each
    /// layer of equal-size sets is evaluated with the given strategy.
    pub fn det_with(&self, exec: Exec) -> Result<MPoly, MatrixError> {
        let n = self.dim;
        if n > MAX_DIM {
            return Err(MatrixError::TooLarge(n));
        }
        if n == 0 {
            return Ok(MPoly::one(self.nvars));
        }
        // needed[k]: column sets of size k whose minor on rows 0..k is used
        let full: u32 = (1u32 << n) - 1;
        let mut needed: Vec<Vec<u32>> = vec![Vec::new(); n + 1];
        needed[n].push(full);
        for k in (1..=n).rev() {
            let mut next: Vec<u32> = Vec::new();
            for &s in &needed[k] {
                for j in bits(s) {
                    if !self.get(k - 1, j).is_zero() {
                        next.push(s & !(1 << j));
                    }
                }
            }
            next.sort_unstable();
            next.dedup();
            needed[k - 1] = next;
        }
        let mut prev: FxHashMap<u32, MPoly> = FxHashMap::default();
        if needed[0].is_empty() {
            return Ok(MPoly::zero(self.nvars));
        }
        prev.insert(0, MPoly::one(self.nvars));
        for (k, layer) in needed.iter().enumerate().skip(1) {
            let row = k - 1;
            let values = exec.map_slice(layer, |&s| {
                let items: Vec<(i128, &MPoly, &MPoly)> = bits(s)
                    .enumerate()
                    .filter_map(|(pos, j)| {
                        let entry = self.get(row, j);
                        let sub = prev.get(&(s & !(1 << j)))?;
                        if entry.is_zero() || sub.is_zero() {
                            return None;
                        }
                        let sign = if (row + pos) % 2 == 0 { 1 } else { -1 };
                        Some((sign, entry, sub))
                    })
                    .collect();
                MPoly::sum_of_products(self.nvars, items)
            });
            prev = layer.iter().copied().zip(values).collect();
        }
        Ok(prev
            .remove(&full)
            .unwrap_or_else(|| MPoly::zero(self.nvars)))
    }
}

fn bits(mut s: u32) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        if s == 0 {
            return None;
        }
        let j = s.trailing_zeros() as usize;
        s &= s - 1;
        Some(j)
    })
}

/// Symmetric matrix of affine linear forms.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymLinMatrix {
    dim: usize,
    nvars: usize,
    entries: Vec<LinearForm>,
}

impl SymLinMatrix {
    /// Validates shape, symmetry and that every variable id is below `nvars`.
    pub fn new(dim: usize, nvars: usize, entries: Vec<LinearForm>) -> Result<Self, MatrixError> {
        if entries.len() != dim * dim {
            return Err(MatrixError::Shape {
                expected: dim * dim,
                actual: entries.len(),
            });
        }
        for i in 0..dim {
            for j in 0..i {
                if entries[i * dim + j] != entries[j * dim + i] {
                    return Err(MatrixError::NotSymmetric(i, j));
                }
            }
        }
        if let Some(f) = entries.iter().find(|f| f.var_bound() > nvars) {
            return Err(MatrixError::VariableOutOfRange {
                var: f.var_bound() - 1,
                nvars,
            });
        }
        Ok(SymLinMatrix {
            dim,
            nvars,
            entries,
        })
    }

    pub fn from_rows(rows: Vec<Vec<LinearForm>>, nvars: usize) -> Result<Self, MatrixError> {
        let dim = rows.len();
        if let Some(r) = rows.iter().find(|r| r.len() != dim) {
            return Err(MatrixError::Shape {
                expected: dim,
                actual: r.len(),
            });
        }
        SymLinMatrix::new(dim, nvars, rows.into_iter().flatten().collect())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn get(&self, i: usize, j: usize) -> &LinearForm {
        &self.entries[i * self.dim + j]
    }

    pub fn to_poly_matrix(&self) -> PolyMatrix {
        let entries = self.entries.iter().map(|f| f.to_poly(self.nvars)).collect();
        PolyMatrix::new(self.dim, self.nvars, entries).expect("consistent shape")
    }

    pub fn det(&self) -> Result<MPoly, MatrixError> {
        self.to_poly_matrix().det()
    }

    pub fn det_with(&self, exec: Exec) -> Result<MPoly, MatrixError> {
        self.to_poly_matrix().det_with(exec)
    }

    pub fn minor(
        &self,
        rows_removed: &[usize],
        cols_removed: &[usize],
    ) -> Result<MPoly, MatrixError> {
        self.to_poly_matrix().minor(rows_removed, cols_removed)
    }
}
