//! Point counts of graph hypersurfaces over prime fields and counting
//! polynomial fits.
//!
//! Counting specializes variables one at a time on a dense coefficient
//! table of the multilinear polynomial. The last two variables are counted
//! in closed form: `a xy + b x + c y + d = 0` has `q - 1` or `2q - 1`
//! solutions when `a != 0` (as `bc - ad` is nonzero or zero), `q` when
//! `a = 0` and `(b, c) != 0`, and `q^2` or `0` otherwise.

use crate::exec::Exec;
use crate::graph::{Graph, GraphError};
use crate::poly::MPoly;
use crate::psi::{psi_det, psi_trees, PsiError};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Serialize, Serializer};
use std::time::Instant;
use thiserror::Error;

/// Default refusal threshold on `q^(N-1)`.
pub const DEFAULT_BUDGET: u64 = 10_000_000_000;
pub const MAX_COUNT_VARS: usize = 12;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CountError {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("modulus {0} is too large")]
    ModulusTooLarge(u64),
    #[error("job needs {steps} steps, above the budget of {budget}; use force to run anyway")]
    BudgetExceeded { steps: u128, budget: u64 },
    #[error("{0} variables; point counting supports at most {MAX_COUNT_VARS}")]
    TooManyVariables(usize),
    #[error("polynomial is not multilinear")]
    NotMultilinear,
    #[error("polynomial is not homogeneous")]
    NotHomogeneous,
    #[error(transparent)]
    Psi(#[from] PsiError),
    #[error("fit of degree {degree} needs {needed} distinct primes, got {got}")]
    InsufficientPoints {
        degree: usize,
        needed: usize,
        got: usize,
    },
    #[error("records for prime {0} disagree")]
    InconsistentRecords(u64),
    #[error("records come from different graphs")]
    MixedGraphs,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CountOptions {
    pub budget: u64,
    pub force: bool,
    pub exec: Exec,
    /// Record wall time in the output.
    pub timing: bool,
}

impl Default for CountOptions {
    fn default() -> Self {
        CountOptions {
            budget: DEFAULT_BUDGET,
            force: false,
            exec: Exec::default(),
            timing: false,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PointCountRecord {
    pub graph_id: String,
    pub q: u64,
    pub variables: usize,
    pub affine_zero_count: u64,
    pub projective_count: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub wall_time_secs: Option<f64>,
}

pub fn is_prime(q: u64) -> bool {
    q >= 2 && (2..).take_while(|d| d * d <= q).all(|d| q % d != 0)
}

fn check_job(psi: &MPoly, q: u64, opts: &CountOptions) -> Result<(), CountError> {
    if !is_prime(q) {
        return Err(CountError::NotPrime(q));
    }
    if q > u32::MAX as u64 {
        return Err(CountError::ModulusTooLarge(q));
    }
    let n = psi.nvars();
    if n > MAX_COUNT_VARS {
        return Err(CountError::TooManyVariables(n));
    }
    if !psi.is_multilinear() {
        return Err(CountError::NotMultilinear);
    }
    let steps = (q as u128).pow(n.saturating_sub(1) as u32);
    if steps > opts.budget as u128 && !opts.force {
        return Err(CountError::BudgetExceeded {
            steps,
            budget: opts.budget,
        });
    }
    Ok(())
}

pub fn affine_zeros(psi: &MPoly, q: u64) -> Result<u64, CountError> {
    affine_zeros_with(psi, q, &CountOptions::default())
}

/// Number of points of `F_q^N` where `psi` vanishes.
pub fn affine_zeros_with(psi: &MPoly, q: u64, opts: &CountOptions) -> Result<u64, CountError> {
    check_job(psi, q, opts)?;
    let n = psi.nvars();
    let mut table = vec![0u64; 1 << n];
    for (mono, c) in psi.terms() {
        let idx = (0..n)
            .filter(|&v| mono.exponent(v) == 1)
            .fold(0, |acc, v| acc | 1 << v);
        table[idx] = c.rem_euclid(q as i128) as u64;
    }
    Ok(match n {
        0 => u64::from(table[0] == 0),
        1 => match (table[1], table[0]) {
            (0, 0) => q,
            (0, _) => 0,
            _ => 1,
        },
        _ => count_table(&table, n, q, opts.exec),
    })
}

/// Substitutes `value` for the top variable of `src`.
fn specialize(src: &[u64], value: u64, q: u64, dst: &mut [u64]) {
    let half = dst.len();
    for i in 0..half {
        dst[i] = (src[i] + value * src[i + half]) % q;
    }
}

fn count_table(table: &[u64], n: usize, q: u64, exec: Exec) -> u64 {
    let free = n - 2;
    let mut outer = 0;
    let mut chunks = 1u64;
    while outer < free && chunks < 256 {
        outer += 1;
        chunks *= q;
    }
    let partial = exec.map(chunks as usize, |chunk| {
        let mut levels: Vec<Vec<u64>> = (0..=free).map(|d| vec![0; 1 << (n - d)]).collect();
        levels[0].copy_from_slice(table);
        let mut rest = chunk as u64;
        for d in 0..outer {
            let (head, tail) = levels.split_at_mut(d + 1);
            specialize(&head[d], rest % q, q, &mut tail[0]);
            rest /= q;
        }
        descend(&mut levels, outer, free, q)
    });
    partial.into_iter().sum()
}

fn descend(levels: &mut [Vec<u64>], depth: usize, free: usize, q: u64) -> u64 {
    if depth == free {
        return count_bilinear(&levels[depth], q);
    }
    let mut total = 0;
    for value in 0..q {
        let (head, tail) = levels.split_at_mut(depth + 1);
        specialize(&head[depth], value, q, &mut tail[0]);
        total += descend(levels, depth + 1, free, q);
    }
    total
}

fn count_bilinear(t: &[u64], q: u64) -> u64 {
    let (d, b, c, a) = (t[0], t[1], t[2], t[3]);
    if a != 0 {
        if (b * c) % q == (a * d) % q {
            2 * q - 1
        } else {
            q - 1
        }
    } else if b != 0 || c != 0 {
        q
    } else if d == 0 {
        q * q
    } else {
        0
    }
}

/// `Ψ` of a graph: the determinant form when connected, the forest sum otherwise.
pub fn counting_polynomial(g: &Graph) -> Result<MPoly, CountError> {
    match psi_det(g) {
        Ok(p) => Ok(p),
        Err(PsiError::Graph(GraphError::Disconnected(_))) => Ok(psi_trees(g)?),
        Err(e) => Err(e.into()),
    }
}

pub fn count_projective(g: &Graph, q: u64) -> Result<PointCountRecord, CountError> {
    count_projective_with(g, q, &CountOptions::default())
}

pub fn count_projective_with(
    g: &Graph,
    q: u64,
    opts: &CountOptions,
) -> Result<PointCountRecord, CountError> {
    count_projective_psi(&counting_polynomial(g)?, g.id(), q, opts)
}

/// Projective count of the hypersurface of a homogeneous polynomial.
pub fn count_projective_psi(
    psi: &MPoly,
    graph_id: String,
    q: u64,
    opts: &CountOptions,
) -> Result<PointCountRecord, CountError> {
    if psi.homogeneous_degree().is_none() {
        return Err(CountError::NotHomogeneous);
    }
    let start = Instant::now();
    let affine = affine_zeros_with(psi, q, opts)?;
    let elapsed = start.elapsed().as_secs_f64();
    // a nonzero constant has no zeros at all
    assert!(
        affine == 0 || (affine - 1) % (q - 1) == 0,
        "affine zero count {affine} of a homogeneous polynomial is not 1 mod {}",
        q - 1
    );
    Ok(PointCountRecord {
        graph_id,
        q,
        variables: psi.nvars(),
        affine_zero_count: affine,
        projective_count: affine.saturating_sub(1) / (q - 1),
        wall_time_secs: opts.timing.then_some(elapsed),
    })
}

/// Polynomial in `q` with rational coefficients, constant term first.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CountPolynomial {
    pub coefficients: Vec<BigRational>,
}

impl Serialize for CountPolynomial {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let strs: Vec<String> = self.coefficients.iter().map(|c| c.to_string()).collect();
        strs.serialize(s)
    }
}

impl CountPolynomial {
    pub fn degree(&self) -> usize {
        self.coefficients.len().saturating_sub(1)
    }

    pub fn is_integral(&self) -> bool {
        self.coefficients.iter().all(|c| c.is_integer())
    }

    pub fn integer_coefficients(&self) -> Option<Vec<BigInt>> {
        self.coefficients
            .iter()
            .map(|c| c.is_integer().then(|| c.to_integer()))
            .collect()
    }

    pub fn eval(&self, q: u64) -> BigRational {
        let x = BigRational::from_integer(BigInt::from(q));
        self.coefficients
            .iter()
            .rev()
            .fold(BigRational::zero(), |acc, c| acc * &x + c)
    }

    fn trimmed(mut self) -> Self {
        while self.coefficients.len() > 1 && self.coefficients.last().is_some_and(|c| c.is_zero()) {
            self.coefficients.pop();
        }
        self
    }
}

impl std::fmt::Display for CountPolynomial {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let mut first = true;
        for (k, c) in self.coefficients.iter().enumerate().rev() {
            if c.is_zero() && !(first && k == 0) {
                continue;
            }
            let sign = if c.is_negative() { "-" } else { "+" };
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            let abs = c.abs();
            match k {
                0 => write!(f, "{abs}")?,
                _ if abs.is_one() => {}
                _ => write!(f, "{abs}*")?,
            }
            match k {
                0 => {}
                1 => write!(f, "q")?,
                _ => write!(f, "q^{k}")?,
            }
            first = false;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FitReport {
    pub graph_id: String,
    pub degree: usize,
    pub fit_primes: Vec<u64>,
    pub polynomial: CountPolynomial,
    pub display: String,
    pub integral: bool,
    /// Agreement at primes beyond the ones used for the fit, if any.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub extra_points_match: Option<bool>,
}

/// Lagrange fit of projective counts; `degree` defaults to `N - 2`. The
/// smallest `degree + 1` primes are used and the rest are checked.
/// Non-integral coefficients are reported in `integral`, not as an error.
pub fn fit_count_polynomial(
    records: &[PointCountRecord],
    degree: Option<usize>,
) -> Result<FitReport, CountError> {
    let Some(first) = records.first() else {
        return Err(CountError::InsufficientPoints {
            degree: degree.unwrap_or(0),
            needed: degree.unwrap_or(0) + 1,
            got: 0,
        });
    };
    if records.iter().any(|r| r.graph_id != first.graph_id) {
        return Err(CountError::MixedGraphs);
    }
    let degree = degree.unwrap_or(first.variables.saturating_sub(2));
    let mut points: Vec<(u64, u64)> = Vec::new();
    let mut sorted: Vec<&PointCountRecord> = records.iter().collect();
    sorted.sort_by_key(|r| r.q);
    for r in sorted {
        match points.last() {
            Some(&(q, c)) if q == r.q => {
                if c != r.projective_count {
                    return Err(CountError::InconsistentRecords(q));
                }
            }
            _ => points.push((r.q, r.projective_count)),
        }
    }
    if points.len() < degree + 1 {
        return Err(CountError::InsufficientPoints {
            degree,
            needed: degree + 1,
            got: points.len(),
        });
    }
    let (fit, extra) = points.split_at(degree + 1);
    let polynomial = lagrange(fit);
    let extra_points_match = (!extra.is_empty()).then(|| {
        extra
            .iter()
            .all(|&(q, c)| polynomial.eval(q) == BigRational::from_integer(c.into()))
    });
    Ok(FitReport {
        graph_id: first.graph_id.clone(),
        degree,
        fit_primes: fit.iter().map(|p| p.0).collect(),
        display: polynomial.to_string(),
        integral: polynomial.is_integral(),
        polynomial,
        extra_points_match,
    })
}

fn lagrange(points: &[(u64, u64)]) -> CountPolynomial {
    let n = points.len();
    let mut coeffs = vec![BigRational::zero(); n];
    for (i, &(xi, yi)) in points.iter().enumerate() {
        let mut basis = vec![BigRational::one()];
        let mut denom = BigRational::one();
        for (j, &(xj, _)) in points.iter().enumerate() {
            if i == j {
                continue;
            }
            let xj = BigRational::from_integer(xj.into());
            let mut next = vec![BigRational::zero(); basis.len() + 1];
            for (k, b) in basis.iter().enumerate() {
                next[k + 1] += b;
                next[k] -= b * &xj;
            }
            basis = next;
            denom *= BigRational::from_integer(xi.into()) - xj;
        }
        let scale = BigRational::from_integer(yi.into()) / denom;
        for (c, b) in coeffs.iter_mut().zip(basis) {
            *c += b * &scale;
        }
    }
    CountPolynomial {
        coefficients: coeffs,
    }
    .trimmed()
}

/// Exact agreement of the polynomial with every held-out record.
pub fn validate(poly: &CountPolynomial, holdout: &[PointCountRecord]) -> bool {
    holdout.iter().all(|r| {
        let v = poly.eval(r.q);
        v.is_integer() && v.to_integer().to_u64() == Some(r.projective_count)
    })
}
