//! Bordered symmetric matrices and exact checks of the Dodgson-type
//! determinant identities and their congruence consequences.
//!
//! Congruences modulo a minor `I` are decided as exact divisibility of the
//! difference by `I` (equality when `I` is zero).

use crate::exec::Exec;
use crate::matrix::{MatrixError, PolyMatrix, SymLinMatrix};
pub use crate::poly::divides;
use crate::poly::{LinearForm, MPoly, PolyError};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum IdentityError {
    #[error(transparent)]
    Matrix(#[from] MatrixError),
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error("invalid border: {0}")]
    InvalidBorder(String),
    #[error("index constraint violated: {0}")]
    IndexConstraint(String),
    #[error("hypothesis not satisfied: {0}")]
    HypothesisFailed(String),
}

/// `a ≡ b` modulo `m` in the polynomial ring; modulo zero means equality.
pub fn congruent(a: &MPoly, b: &MPoly, m: &MPoly) -> Result<bool, PolyError> {
    let diff = a - b;
    if m.is_zero() {
        return Ok(diff.is_zero());
    }
    divides(m, &diff)
}

/// Matrix of size `(n + 1) × (n + 1)` whose last row and column carry the
/// "variables" `a_0 .. a_n`: each is zero or a single variable, the nonzero
/// ones pairwise distinct, and the last row equals the last column.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BorderedMatrix {
    m: PolyMatrix,
    border: Vec<Option<usize>>,
}

impl BorderedMatrix {
    pub fn new(m: PolyMatrix) -> Result<Self, IdentityError> {
        let d = m.dim();
        if d < 2 {
            return Err(IdentityError::InvalidBorder(
                "a bordered matrix needs at least two rows".into(),
            ));
        }
        let last = d - 1;
        let mut border = Vec::with_capacity(d);
        for i in 0..d {
            if m.get(last, i) != m.get(i, last) {
                return Err(IdentityError::InvalidBorder(format!(
                    "last row and last column differ at position {i}"
                )));
            }
            let entry = m.get(last, i);
            let var = if entry.is_zero() {
                None
            } else {
                match entry.terms() {
                    [(mono, 1)] if mono.degree() == 1 => Some(
                        (0..m.nvars())
                            .find(|&v| mono.exponent(v) == 1)
                            .expect("degree one"),
                    ),
                    _ => {
                        return Err(IdentityError::InvalidBorder(format!(
                            "border entry {i} is neither zero nor a single variable"
                        )))
                    }
                }
            };
            if let Some(v) = var {
                if border.contains(&Some(v)) {
                    return Err(IdentityError::InvalidBorder(format!(
                        "variable {v} appears twice in the border"
                    )));
                }
            }
            border.push(var);
        }
        Ok(BorderedMatrix { m, border })
    }

    pub fn from_sym(m: &SymLinMatrix) -> Result<Self, IdentityError> {
        BorderedMatrix::new(m.to_poly_matrix())
    }

    pub fn matrix(&self) -> &PolyMatrix {
        &self.m
    }

    /// The index `n` of the last row.
    pub fn n(&self) -> usize {
        self.m.dim() - 1
    }

    pub fn nvars(&self) -> usize {
        self.m.nvars()
    }

    pub fn is_symmetric(&self) -> bool {
        self.m.is_symmetric()
    }

    /// Border entry `a_i` as a polynomial.
    pub fn a(&self, i: usize) -> MPoly {
        match self.border[i] {
            Some(v) => MPoly::var(self.nvars(), v),
            None => MPoly::zero(self.nvars()),
        }
    }

    pub fn border_variables(&self) -> &[Option<usize>] {
        &self.border
    }

    /// Determinant after removing the listed rows and columns.
    pub fn minor(&self, rows: &[usize], cols: &[usize]) -> Result<MPoly, IdentityError> {
        if rows.len() != cols.len() {
            return Err(MatrixError::UnbalancedMinor(rows.len(), cols.len()).into());
        }
        Ok(self.m.minor(rows, cols)?)
    }

    /// Principal minor on rows and columns `i .. i + k - 1`.
    pub fn i_sup(&self, i: usize, k: usize) -> Result<MPoly, IdentityError> {
        let d = self.m.dim();
        if i + k > d {
            return Err(IdentityError::IndexConstraint(format!(
                "principal block {i}..{} exceeds dimension {d}",
                i + k
            )));
        }
        let keep: Vec<usize> = (i..i + k).collect();
        Ok(self.m.submatrix(&keep, &keep)?.det()?)
    }

    /// Leading principal minor of size `k`; `I_0 = 1`.
    pub fn i_k(&self, k: usize) -> Result<MPoly, IdentityError> {
        self.i_sup(0, k)
    }

    /// `S_t`: rows `0 .. t-1` against columns `1 .. t`, for `1 <= t <= n`.
    pub fn s_t(&self, t: usize) -> Result<MPoly, IdentityError> {
        if t == 0 || t > self.n() {
            return Err(IdentityError::IndexConstraint(format!(
                "S_t needs 1 <= t <= {}, got {t}",
                self.n()
            )));
        }
        let rows: Vec<usize> = (0..t).collect();
        let cols: Vec<usize> = (1..=t).collect();
        Ok(self.m.submatrix(&rows, &cols)?.det()?)
    }

    /// `I_n(i; j)`: remove rows `i, n` and columns `j, n`.
    pub fn i_n_minor(&self, i: usize, j: usize) -> Result<MPoly, IdentityError> {
        let n = self.n();
        if i >= n || j >= n {
            return Err(IdentityError::IndexConstraint(format!(
                "I_n(i; j) needs i, j < {n}, got ({i}, {j})"
            )));
        }
        self.minor(&[i, n], &[j, n])
    }

    fn sign(k: usize) -> i128 {
        if k % 2 == 0 {
            1
        } else {
            -1
        }
    }

    /// `G_n = Σ_{i,j <= n-1} (-1)^{i+j} a_i a_j I_n(i; j)`.
    pub fn g_n(&self) -> Result<MPoly, IdentityError> {
        let n = self.n();
        let mut g = MPoly::zero(self.nvars());
        for i in 0..n {
            for j in 0..n {
                if self.border[i].is_none() || self.border[j].is_none() {
                    continue;
                }
                let term = &(&self.a(i) * &self.a(j)) * &self.i_n_minor(i, j)?;
                g = &g + &term.scale(Self::sign(i + j));
            }
        }
        Ok(g)
    }

    /// `Li_n = a_{n-1} I_{n-1} + Σ_{i <= n-2} (-1)^{i+n-1} a_i I_n(i; n-1)`.
    pub fn li_n(&self) -> Result<MPoly, IdentityError> {
        self.linear_part(|i| self.i_n_minor(i, self.n() - 1))
    }

    /// `Li'_n`: as `Li_n` with the transposed minors `I_n(n-1; j)`.
    pub fn li_prime_n(&self) -> Result<MPoly, IdentityError> {
        self.linear_part(|j| self.i_n_minor(self.n() - 1, j))
    }

    fn linear_part(
        &self,
        minor: impl Fn(usize) -> Result<MPoly, IdentityError>,
    ) -> Result<MPoly, IdentityError> {
        let n = self.n();
        let mut li = &self.a(n - 1) * &self.i_k(n - 1)?;
        for i in 0..n - 1 {
            if self.border[i].is_some() {
                let term = &self.a(i) * &minor(i)?;
                li = &li + &term.scale(Self::sign(i + n - 1));
            }
        }
        Ok(li)
    }

    /// Right-hand side of the congruence for `G_n` when `I_{n-1} ≡ 0`.
    pub fn g_n_reduced(&self) -> Result<MPoly, IdentityError> {
        let n = self.n();
        let mut r = MPoly::zero(self.nvars());
        for i in 0..n.saturating_sub(1) {
            for j in i..n - 1 {
                if self.border[i].is_none() || self.border[j].is_none() {
                    continue;
                }
                let c = if i == j { 1 } else { 2 * Self::sign(i + j) };
                let term = &(&self.a(i) * &self.a(j)) * &self.i_n_minor(i, j)?;
                r = &r + &term.scale(c);
            }
        }
        Ok(r)
    }

    /// Entries outside the border do not involve the variable `a_{n-1}`.
    pub fn interior_free_of_a_n_minus_1(&self) -> bool {
        let n = self.n();
        let Some(v) = self.border[n - 1] else {
            return true;
        };
        (0..n).all(|i| (0..n).all(|j| self.m.get(i, j).degree_in(v) == 0))
    }

    /// `det = a_n I_n - G_n`.
    pub fn verify_decomposition(&self) -> Result<bool, IdentityError> {
        let n = self.n();
        let lhs = self.m.det()?;
        let rhs = &(&self.a(n) * &self.i_k(n)?) - &self.g_n()?;
        Ok(lhs == rhs)
    }
}

/// Exact Dodgson identity `M(i;j) M(k;t) - M(k;j) M(i;t) = M · M(i,k; j,t)`
/// for `i < k`, `j < t`. Reversing one of the pairs negates the right side.
///
/// A random evaluation modulo a large prime runs first: a mismatch there
/// already refutes the identity. Otherwise both sides are expanded exactly.
pub fn dodgson_check(
    m: &PolyMatrix,
    i: usize,
    j: usize,
    k: usize,
    t: usize,
) -> Result<bool, IdentityError> {
    let d = m.dim();
    if i == k || j == t {
        return Err(IdentityError::IndexConstraint(
            "need i != k and j != t".into(),
        ));
    }
    if [i, j, k, t].iter().any(|&x| x >= d) {
        return Err(IdentityError::IndexConstraint(format!(
            "indices must be below {d}"
        )));
    }
    let flip = (i > k) != (j > t);
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed ^ (d as u64));
    for _ in 0..2 {
        let point: Vec<u64> = (0..m.nvars())
            .map(|_| rng.random_range(0..SZ_PRIME))
            .collect();
        let at = |rows: &[usize], cols: &[usize]| minor_mod(m, rows, cols, &point);
        let lhs = (mulm(at(&[i], &[j]), at(&[k], &[t])) + SZ_PRIME
            - mulm(at(&[k], &[j]), at(&[i], &[t])))
            % SZ_PRIME;
        let mut rhs = mulm(at(&[], &[]), at(&[i, k], &[j, t]));
        if flip {
            rhs = (SZ_PRIME - rhs) % SZ_PRIME;
        }
        if lhs != rhs {
            return Ok(false);
        }
    }
    let lhs = &(&m.minor(&[i], &[j])? * &m.minor(&[k], &[t])?)
        - &(&m.minor(&[k], &[j])? * &m.minor(&[i], &[t])?);
    let rhs = &m.det()? * &m.minor(&[i, k], &[j, t])?;
    Ok(lhs == if flip { -&rhs } else { rhs })
}

/// Runs [`dodgson_check`] for every `i < k`, `j < t` with cached minors;
/// returns the number of index choices checked and the failures.
pub fn dodgson_all(m: &PolyMatrix) -> Result<(usize, Vec<[usize; 4]>), IdentityError> {
    let d = m.dim();
    let full = m.det()?;
    let mut single = vec![Vec::with_capacity(d); d];
    for (i, row) in single.iter_mut().enumerate() {
        for j in 0..d {
            row.push(m.minor(&[i], &[j])?);
        }
    }
    let mut checked = 0;
    let mut failures = Vec::new();
    for i in 0..d {
        for k in i + 1..d {
            for j in 0..d {
                for t in j + 1..d {
                    let lhs = &(&single[i][j] * &single[k][t]) - &(&single[k][j] * &single[i][t]);
                    let rhs = &full * &m.minor(&[i, k], &[j, t])?;
                    checked += 1;
                    if lhs != rhs {
                        failures.push([i, j, k, t]);
                    }
                }
            }
        }
    }
    Ok((checked, failures))
}

const SZ_PRIME: u64 = (1 << 61) - 1;

fn mulm(a: u64, b: u64) -> u64 {
    ((a as u128 * b as u128) % SZ_PRIME as u128) as u64
}

fn powm(mut a: u64, mut e: u64) -> u64 {
    let mut r = 1;
    while e > 0 {
        if e & 1 == 1 {
            r = mulm(r, a);
        }
        a = mulm(a, a);
        e >>= 1;
    }
    r
}

fn minor_mod(m: &PolyMatrix, rows_removed: &[usize], cols_removed: &[usize], point: &[u64]) -> u64 {
    let rows: Vec<usize> = (0..m.dim()).filter(|r| !rows_removed.contains(r)).collect();
    let cols: Vec<usize> = (0..m.dim()).filter(|c| !cols_removed.contains(c)).collect();
    let mut a: Vec<Vec<u64>> = rows
        .iter()
        .map(|&r| {
            cols.iter()
                .map(|&c| m.get(r, c).eval_mod(point, SZ_PRIME))
                .collect()
        })
        .collect();
    det_mod(&mut a)
}

fn det_mod(a: &mut [Vec<u64>]) -> u64 {
    let n = a.len();
    let mut det = 1u64;
    for c in 0..n {
        let Some(p) = (c..n).find(|&r| a[r][c] != 0) else {
            return 0;
        };
        if p != c {
            a.swap(p, c);
            det = (SZ_PRIME - det) % SZ_PRIME;
        }
        det = mulm(det, a[c][c]);
        let inv = powm(a[c][c], SZ_PRIME - 2);
        for r in c + 1..n {
            let f = mulm(a[r][c], inv);
            if f == 0 {
                continue;
            }
            for k in c..n {
                a[r][k] = (a[r][k] + SZ_PRIME - mulm(f, a[c][k])) % SZ_PRIME;
            }
        }
    }
    det
}

fn require_symmetric(b: &BorderedMatrix) -> Result<(), IdentityError> {
    if b.is_symmetric() {
        Ok(())
    } else {
        Err(IdentityError::HypothesisFailed(
            "matrix is not symmetric".into(),
        ))
    }
}

/// `I_n I^1_n - I^1_{n-1} I_{n+1} = S_n^2` for a symmetric matrix.
pub fn verify_cor_1_2(b: &BorderedMatrix) -> Result<bool, IdentityError> {
    require_symmetric(b)?;
    let n = b.n();
    let lhs = &(&b.i_k(n)? * &b.i_sup(1, n)?) - &(&b.i_sup(1, n - 1)? * &b.i_k(n + 1)?);
    let s = b.s_t(n)?;
    Ok(lhs == &s * &s)
}

/// `I_n` divides `I_{n-1} G_n - Li_n^2`, checked without any hypothesis.
pub fn cor_1_4_divisibility(b: &BorderedMatrix) -> Result<bool, IdentityError> {
    let n = b.n();
    let li = b.li_n()?;
    let lhs = &b.i_k(n - 1)? * &b.g_n()?;
    Ok(congruent(&lhs, &(&li * &li), &b.i_k(n)?)?)
}

/// The congruence `I_{n-1} G_n ≡ Li_n^2 (mod I_n)` for a symmetric matrix
/// with `I_{n-1} ≢ 0 (mod I_n)`.
pub fn verify_cor_1_4(b: &BorderedMatrix) -> Result<bool, IdentityError> {
    require_symmetric(b)?;
    let n = b.n();
    if congruent(&b.i_k(n - 1)?, &MPoly::zero(b.nvars()), &b.i_k(n)?)? {
        return Err(IdentityError::HypothesisFailed(
            "I_{n-1} is divisible by I_n".into(),
        ));
    }
    cor_1_4_divisibility(b)
}

/// `I_{n-1} G_n ≡ Li_n Li'_n (mod I_n)`; symmetry of the interior is not required.
pub fn verify_thm_1_3(b: &BorderedMatrix) -> Result<bool, IdentityError> {
    let n = b.n();
    if congruent(&b.i_k(n - 1)?, &MPoly::zero(b.nvars()), &b.i_k(n)?)? {
        return Err(IdentityError::HypothesisFailed(
            "I_{n-1} is divisible by I_n".into(),
        ));
    }
    let lhs = &b.i_k(n - 1)? * &b.g_n()?;
    let rhs = &b.li_n()? * &b.li_prime_n()?;
    Ok(congruent(&lhs, &rhs, &b.i_k(n)?)?)
}

/// When `I_{n-1} ≡ 0 (mod I_n)` and the quotient by `I_n` is a domain,
/// `G_n` is congruent to its part free of `a_{n-1}`.
///
/// The domain condition is checked only for constant `I_n` (it must be
/// plus or minus a prime); polynomial `I_n` is rejected as unverifiable.
pub fn verify_thm_1_5(b: &BorderedMatrix) -> Result<bool, IdentityError> {
    require_symmetric(b)?;
    let n = b.n();
    let i_n = b.i_k(n)?;
    if !congruent(&b.i_k(n - 1)?, &MPoly::zero(b.nvars()), &i_n)? {
        return Err(IdentityError::HypothesisFailed(
            "I_{n-1} is not divisible by I_n".into(),
        ));
    }
    match constant_value(&i_n) {
        Some(c) if is_prime(c.unsigned_abs()) => {}
        Some(_) => {
            return Err(IdentityError::HypothesisFailed(
                "I_n is a constant that is not plus or minus a prime".into(),
            ))
        }
        None => {
            return Err(IdentityError::HypothesisFailed(
                "cannot certify that the quotient by a non-constant I_n is a domain".into(),
            ))
        }
    }
    Ok(congruent(&b.g_n()?, &b.g_n_reduced()?, &i_n)?)
}

fn constant_value(p: &MPoly) -> Option<i128> {
    if !p.is_constant() {
        return None;
    }
    Some(p.terms().first().map_or(0, |t| t.1))
}

fn is_prime(n: u128) -> bool {
    n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| n % d != 0)
}

fn lf(terms: &[(usize, i128)]) -> LinearForm {
    LinearForm::from_coeffs(0, terms.iter().copied())
}

/// Tridiagonal `B_0..B_{n-1}` / `A_0..A_{n-2}` with `A_{n-1}` in the
/// corners. Variables: `A_i = i`, `B_i = n + i`.
pub fn wheel_matrix(n: usize) -> Result<BorderedMatrix, IdentityError> {
    if n < 3 {
        return Err(IdentityError::IndexConstraint(format!(
            "wheel matrix needs n >= 3, got {n}"
        )));
    }
    let (a, bv) = (|i: usize| i, |i: usize| n + i);
    let mut rows = vec![vec![LinearForm::zero(); n]; n];
    for i in 0..n {
        rows[i][i] = lf(&[(bv(i), 1)]);
        if i + 1 < n {
            rows[i][i + 1] = lf(&[(a(i), 1)]);
            rows[i + 1][i] = lf(&[(a(i), 1)]);
        }
    }
    rows[0][n - 1] = lf(&[(a(n - 1), 1)]);
    rows[n - 1][0] = lf(&[(a(n - 1), 1)]);
    BorderedMatrix::from_sym(&SymLinMatrix::from_rows(rows, 2 * n)?)
}

const A: [usize; 6] = [0, 1, 2, 3, 4, 5];
const B0: usize = 6;
const B1: usize = 7;
const B3: usize = 8;
const B4: usize = 9;

/// Banded five-loop matrix of the zigzag graph in the named coordinates
/// `A0..A5, B0, B1, B3, B4`, with middle diagonal entry `A1 + A2 - A4`.
pub fn zigzag5_matrix() -> BorderedMatrix {
    let z = LinearForm::zero;
    let v = |i: usize| lf(&[(i, 1)]);
    let rows = vec![
        vec![v(B0), v(A[0]), z(), z(), v(A[5])],
        vec![v(A[0]), v(B1), v(A[1]), z(), z()],
        vec![
            z(),
            v(A[1]),
            lf(&[(A[1], 1), (A[2], 1), (A[4], -1)]),
            v(A[2]),
            v(A[4]),
        ],
        vec![z(), z(), v(A[2]), v(B3), v(A[3])],
        vec![v(A[5]), z(), v(A[4]), v(A[3]), v(B4)],
    ];
    BorderedMatrix::from_sym(&SymLinMatrix::from_rows(rows, 10).expect("symmetric"))
        .expect("valid border")
}

/// Five-loop matrix of the exceptional graph with non-adjacent degree-4
/// vertices, middle diagonal entry `A1 + A2 + A4 + A5`.
pub fn xx5_matrix() -> BorderedMatrix {
    let z = LinearForm::zero;
    let v = |i: usize| lf(&[(i, 1)]);
    let rows = vec![
        vec![v(B0), v(A[0]), v(A[4]), z(), z()],
        vec![v(A[0]), v(B1), v(A[1]), z(), z()],
        vec![
            v(A[4]),
            v(A[1]),
            lf(&[(A[1], 1), (A[2], 1), (A[4], 1), (A[5], 1)]),
            v(A[2]),
            v(A[5]),
        ],
        vec![z(), z(), v(A[2]), v(B3), v(A[3])],
        vec![z(), z(), v(A[5]), v(A[3]), v(B4)],
    ];
    BorderedMatrix::from_sym(&SymLinMatrix::from_rows(rows, 10).expect("symmetric"))
        .expect("valid border")
}

/// Random symmetric integer interior of size `n` with border variables
/// `a_0..a_n` (variable `i` is `a_i`).
pub fn random_bordered(n: usize, rng: &mut impl Rng) -> BorderedMatrix {
    let mut c = vec![vec![0i128; n]; n];
    for i in 0..n {
        for j in i..n {
            let x = rng.random_range(-9..=9);
            c[i][j] = x;
            c[j][i] = x;
        }
    }
    bordered_from_interior(&c)
}

fn bordered_from_interior(c: &[Vec<i128>]) -> BorderedMatrix {
    let n = c.len();
    let nv = n + 1;
    let mut entries = Vec::with_capacity((n + 1) * (n + 1));
    for i in 0..=n {
        for j in 0..=n {
            entries.push(match (i == n, j == n) {
                (false, false) => MPoly::constant(nv, c[i][j]),
                (true, _) => MPoly::var(nv, j),
                (false, true) => MPoly::var(nv, i),
            });
        }
    }
    BorderedMatrix::new(PolyMatrix::new(n + 1, nv, entries).expect("shape")).expect("border")
}

fn int_det(m: &[Vec<i128>]) -> i128 {
    let n = m.len();
    let mut a = m.to_vec();
    let mut sign = 1;
    let mut prev = 1i128;
    for c in 0..n {
        let Some(p) = (c..n).find(|&r| a[r][c] != 0) else {
            return 0;
        };
        if p != c {
            a.swap(p, c);
            sign = -sign;
        }
        for r in c + 1..n {
            for k in c + 1..n {
                a[r][k] = (a[c][c] * a[r][k] - a[r][c] * a[c][k]) / prev;
            }
            a[r][c] = 0;
        }
        prev = a[c][c];
    }
    sign * a[n - 1][n - 1]
}

/// Random instance satisfying the hypotheses of [`verify_thm_1_5`]: integer
/// interior whose leading `n-1` block repeats its first row, so `I_{n-1} = 0`,
/// and whose determinant `I_n` is plus or minus a prime. For `n = 2` such a
/// determinant is minus a square, so `n >= 3` is required.
pub fn random_degenerate_bordered(n: usize, rng: &mut impl Rng) -> BorderedMatrix {
    assert!(n >= 3, "need n >= 3");
    loop {
        let mut c = vec![vec![0i128; n]; n];
        for i in 0..n {
            for j in i..n {
                let x = rng.random_range(-9..=9);
                c[i][j] = x;
                c[j][i] = x;
            }
        }
        let r = n - 2;
        let head = c[0][0];
        for j in 1..r {
            c[r][j] = c[0][j];
            c[j][r] = c[0][j];
        }
        c[0][r] = head;
        c[r][0] = head;
        c[r][r] = head;
        if is_prime(int_det(&c).unsigned_abs()) {
            return bordered_from_interior(&c);
        }
    }
}

/// Pass/fail tally for one identity in the self-test.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct IdentityTally {
    pub identity: String,
    pub cases: usize,
    pub passed: usize,
    pub failed: usize,
    /// Cases outside the identity's hypothesis; not counted as pass or fail.
    pub excluded: usize,
    /// Among excluded cases, how many still satisfied the conclusion.
    pub excluded_holding: usize,
}

impl IdentityTally {
    fn named(name: &str) -> Self {
        IdentityTally {
            identity: name.to_string(),
            ..Default::default()
        }
    }

    fn record(&mut self, r: Result<bool, IdentityError>) -> Result<(), IdentityError> {
        self.cases += 1;
        match r {
            Ok(true) => self.passed += 1,
            Ok(false) => self.failed += 1,
            Err(IdentityError::HypothesisFailed(_)) => self.excluded += 1,
            Err(e) => return Err(e),
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SelftestReport {
    pub sizes: Vec<usize>,
    pub trials: usize,
    pub seed: u64,
    pub tallies: Vec<IdentityTally>,
}

impl SelftestReport {
    pub fn all_passed(&self) -> bool {
        self.tallies.iter().all(|t| t.failed == 0)
    }
}

/// Random self-test over matrix sizes (row counts) in `sizes`: Dodgson on
/// integer matrices at every index choice, and the bordered identities on
/// integer interiors with variable borders.
pub fn selftest(
    sizes: &[usize],
    trials: usize,
    seed: u64,
    exec: Exec,
) -> Result<SelftestReport, IdentityError> {
    let names = [
        "dodgson",
        "decomposition",
        "cor_1_2",
        "cor_1_4",
        "thm_1_3",
        "thm_1_5",
    ];
    let mut tallies: Vec<IdentityTally> = names.iter().map(|n| IdentityTally::named(n)).collect();
    for &size in sizes {
        if size < 2 {
            return Err(IdentityError::IndexConstraint(format!(
                "matrix size must be at least 2, got {size}"
            )));
        }
        let results = exec.map(
            trials,
            |trial| -> Result<Vec<IdentityTally>, IdentityError> {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                rng.set_stream(((size as u64) << 32) | trial as u64);
                let mut local: Vec<IdentityTally> =
                    names.iter().map(|n| IdentityTally::named(n)).collect();
                let ints: Vec<Vec<i128>> = (0..size)
                    .map(|_| (0..size).map(|_| rng.random_range(-9..=9)).collect())
                    .collect();
                let m = PolyMatrix::from_integers(&ints, 0)?;
                let (checked, failures) = dodgson_all(&m)?;
                local[0].cases += checked;
                local[0].failed += failures.len();
                local[0].passed += checked - failures.len();
                let b = random_bordered(size - 1, &mut rng);
                local[1].record(b.verify_decomposition())?;
                local[2].record(verify_cor_1_2(&b))?;
                let r = verify_cor_1_4(&b);
                if matches!(r, Err(IdentityError::HypothesisFailed(_))) && cor_1_4_divisibility(&b)?
                {
                    local[3].excluded_holding += 1;
                }
                local[3].record(r)?;
                local[4].record(verify_thm_1_3(&b))?;
                if size >= 4 {
                    let d = random_degenerate_bordered(size - 1, &mut rng);
                    local[5].record(verify_thm_1_5(&d))?;
                }
                Ok(local)
            },
        );
        for r in results {
            for (t, l) in tallies.iter_mut().zip(r?) {
                t.cases += l.cases;
                t.passed += l.passed;
                t.failed += l.failed;
                t.excluded += l.excluded;
                t.excluded_holding += l.excluded_holding;
            }
        }
    }
    Ok(SelftestReport {
        sizes: sizes.to_vec(),
        trials,
        seed,
        tallies,
    })
}
