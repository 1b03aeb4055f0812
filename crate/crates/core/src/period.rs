//! Monte Carlo estimate of the parametric period
//! `∫_{[0,∞)^{N-1}} dA / Ψ(A)^2` in the chart `A_k = 1`.
//!
//! This is the projective integral of `Ω / Ψ^2` over the coordinate simplex;
//! no rational prefactor and no power of π is included.
//!
//! Each free coordinate is sampled as `A = (u / (1 - u))^p` with `u`
//! uniform on `[0, 1)`, weighted by the Jacobian `p v^{p-1} / (1 - u)^2`
//! where `v = u / (1 - u)`. `Ψ` is evaluated from its monomials.

use crate::divergence::{is_pld, DivergenceError, PldReason};
use crate::exec::Exec;
use crate::graph::{Graph, GraphError};
use crate::psi::{psi_trees, PsiError};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

pub const DEFAULT_BATCHES: usize = 100;
pub const DEFAULT_EXPONENT: u32 = 2;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PeriodError {
    #[error("period diverges: {}", describe(.reason, .witness))]
    ConvergenceRefused {
        reason: PldReason,
        witness: Option<Graph>,
    },
    #[error(transparent)]
    Divergence(#[from] DivergenceError),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Psi(#[from] PsiError),
    #[error("chart edge {chart} out of range for {edges} edges")]
    ChartOutOfRange { chart: usize, edges: usize },
    #[error("sample count must be positive")]
    NoSamples,
    #[error("exponent must be positive")]
    BadExponent,
}

fn describe(reason: &PldReason, witness: &Option<Graph>) -> String {
    let what = match reason {
        PldReason::Primitive => "primitive".to_string(),
        PldReason::Disconnected { components } => format!("graph has {components} components"),
        PldReason::NotLogDivergent { class } => format!("graph is {class:?}, not log divergent"),
        PldReason::DivergentSubgraph { edges, class } => {
            format!("subgraph on edges {edges:?} is {class:?}")
        }
    };
    match witness {
        Some(w) => format!("{what}; witness has {} edges", w.edge_count()),
        None => what,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PeriodOptions {
    /// Edge whose variable is set to 1; defaults to the last edge.
    pub chart: Option<usize>,
    /// Transform exponent `p`; `p = 1` is the plain `u / (1 - u)` map.
    pub exponent: Option<u32>,
    pub batches: usize,
    pub exec: Exec,
}

impl Default for PeriodOptions {
    fn default() -> Self {
        PeriodOptions {
            chart: None,
            exponent: None,
            batches: DEFAULT_BATCHES,
            exec: Exec::default(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PeriodEstimate {
    pub graph_id: String,
    pub mean: f64,
    pub standard_error: f64,
    pub samples: u64,
    pub seed: u64,
    pub accepted: u64,
    /// Samples dropped because the weight was not finite.
    pub rejected: u64,
    pub chart: usize,
    pub exponent: u32,
    pub batches: usize,
}

pub fn estimate_period(g: &Graph, samples: u64, seed: u64) -> Result<PeriodEstimate, PeriodError> {
    estimate_period_with(g, samples, seed, &PeriodOptions::default())
}

/// Refuses graphs that are not primitively log divergent, naming the witness.
pub fn estimate_period_with(
    g: &Graph,
    samples: u64,
    seed: u64,
    opts: &PeriodOptions,
) -> Result<PeriodEstimate, PeriodError> {
    if samples == 0 {
        return Err(PeriodError::NoSamples);
    }
    let verdict = is_pld(g)?;
    if !verdict.pld {
        return Err(PeriodError::ConvergenceRefused {
            reason: verdict.reason,
            witness: verdict.witness,
        });
    }
    let n = g.edge_count();
    let chart = opts.chart.unwrap_or(n - 1);
    if chart >= n {
        return Err(PeriodError::ChartOutOfRange { chart, edges: n });
    }
    let exponent = opts.exponent.unwrap_or(DEFAULT_EXPONENT);
    if exponent == 0 {
        return Err(PeriodError::BadExponent);
    }
    let integrand = Integrand::new(g, chart, exponent)?;
    let batches = opts.batches.max(1).min(samples as usize);
    let per = samples / batches as u64;
    let extra = samples % batches as u64;
    let stats = opts.exec.map(batches, |b| {
        let size = per + u64::from((b as u64) < extra);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(b as u64);
        integrand.batch(size, &mut rng)
    });
    let accepted: u64 = stats.iter().map(|s| s.accepted).sum();
    let rejected: u64 = stats.iter().map(|s| s.rejected).sum();
    let total: f64 = stats.iter().map(|s| s.sum).sum();
    let mean = if accepted == 0 {
        0.0
    } else {
        total / accepted as f64
    };
    let means: Vec<f64> = stats
        .iter()
        .filter(|s| s.accepted > 0)
        .map(|s| s.sum / s.accepted as f64)
        .collect();
    let standard_error = if means.len() >= 2 {
        let k = means.len() as f64;
        let ss: f64 = means.iter().map(|m| (m - mean).powi(2)).sum();
        (ss / (k * (k - 1.0))).sqrt()
    } else if accepted >= 2 {
        let sq: f64 = stats.iter().map(|s| s.sum_sq).sum();
        let var = (sq / accepted as f64 - mean * mean).max(0.0);
        (var / (accepted - 1) as f64).sqrt()
    } else {
        0.0
    };
    Ok(PeriodEstimate {
        graph_id: g.id(),
        mean,
        standard_error,
        samples,
        seed,
        accepted,
        rejected,
        chart,
        exponent,
        batches,
    })
}

#[derive(Clone, Copy, Debug, Default)]
struct BatchStats {
    sum: f64,
    sum_sq: f64,
    accepted: u64,
    rejected: u64,
}

struct Integrand {
    chart: usize,
    exponent: i32,
    edges: usize,
    /// Edge indices of each monomial of `Ψ`.
    monomials: Vec<Vec<usize>>,
}

impl Integrand {
    fn new(g: &Graph, chart: usize, exponent: u32) -> Result<Self, PsiError> {
        let psi = psi_trees(g)?;
        let n = g.edge_count();
        let monomials = psi
            .terms()
            .iter()
            .map(|(mono, _)| (0..n).filter(|&e| mono.exponent(e) == 1).collect())
            .collect();
        Ok(Integrand {
            chart,
            exponent: exponent as i32,
            edges: n,
            monomials,
        })
    }

    fn psi(&self, a: &[f64]) -> f64 {
        self.monomials
            .iter()
            .map(|m| m.iter().map(|&e| a[e]).product::<f64>())
            .sum()
    }

    fn batch(&self, size: u64, rng: &mut ChaCha8Rng) -> BatchStats {
        let p = self.exponent;
        let mut a = vec![1.0f64; self.edges];
        let mut s = BatchStats::default();
        for _ in 0..size {
            let mut jac = 1.0;
            for (e, slot) in a.iter_mut().enumerate() {
                if e == self.chart {
                    continue;
                }
                let u: f64 = rng.random();
                let v = u / (1.0 - u);
                jac *= p as f64 * v.powi(p - 1) / ((1.0 - u) * (1.0 - u));
                *slot = v.powi(p);
            }
            let d = self.psi(&a);
            let w = jac / (d * d);
            if d > 0.0 && w.is_finite() {
                s.sum += w;
                s.sum_sq += w * w;
                s.accepted += 1;
            } else {
                s.rejected += 1;
            }
        }
        s
    }
}
