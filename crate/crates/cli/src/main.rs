use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use graphyps::divergence::{classify_pld_opts, is_pld};
use graphyps::families::{by_name, glue, GlueMatching};
use graphyps::identities::selftest;
use graphyps::period::{estimate_period_with, PeriodOptions, DEFAULT_BATCHES};
use graphyps::pointcount::{count_projective_with, fit_count_polynomial, validate, CountOptions};
use graphyps::psi::{psi_det_with, psi_trees, PaperCoordinates};
use graphyps::{Exec, Graph};
use serde::Serialize;
use serde_json::json;
use std::io::{Read, Write};
use std::process::ExitCode;

/// Exact computations on Feynman graph hypersurfaces.
#[derive(Parser)]
#[command(name = "graphyps", version)]
struct Cli {
    /// Worker threads; defaults to GRAPHYPS_THREADS, then to all cores.
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print a family member as graph JSON: ws N, zz N, gzz L1 .. Lt, k4, xx5, st5,
    /// zz5-drawn, xx5-drawn.
    Family { name: String, params: Vec<usize> },
    /// First Betti number and component count.
    Betti { graph: String },
    /// First graph polynomial as polynomial JSON.
    Psi(PsiArgs),
    /// Primitive log divergence test.
    Pld {
        graph: String,
        /// Also report the reason and any low-degree vertex.
        #[arg(long)]
        explain: bool,
    },
    /// Primitive graphs with a given loop number, up to isomorphism.
    Classify {
        #[arg(long)]
        loops: usize,
        /// Allow six loops.
        #[arg(long)]
        experimental: bool,
    },
    /// Glue two graphs along one edge each.
    Glue {
        g1: String,
        e1: usize,
        g2: String,
        e2: usize,
        /// Identify tail with head instead of tail with tail.
        #[arg(long)]
        tail_to_head: bool,
    },
    /// Determinant identity checks.
    Identities {
        #[command(subcommand)]
        action: IdentitiesAction,
    },
    /// Projective point counts over prime fields.
    Count(CountArgs),
    /// Monte Carlo estimate of the period integral.
    Period(PeriodArgs),
}

#[derive(Args)]
struct PsiArgs {
    graph: String,
    /// Sum over spanning forests.
    #[arg(long, conflicts_with = "det")]
    trees: bool,
    /// Determinant of the graph matrix (default).
    #[arg(long)]
    det: bool,
    /// Use a randomized spanning-tree cycle basis.
    #[arg(long, conflicts_with = "trees")]
    basis_seed: Option<u64>,
    /// Rewrite in the named A/B coordinates (drawn ZZ5 and XX5 only).
    #[arg(long)]
    paper_coords: bool,
}

#[derive(Subcommand)]
enum IdentitiesAction {
    /// Randomized and symbolic self-test with a pass/fail tally per identity.
    Selftest {
        /// Matrix sizes, as `a..b` (inclusive) or a comma list.
        #[arg(long, default_value = "2..6", value_parser = parse_sizes)]
        sizes: Sizes,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Args)]
struct CountArgs {
    graph: String,
    /// Primes to count over.
    #[arg(long, value_delimiter = ',', required = true)]
    q: Vec<u64>,
    /// Fit a counting polynomial to the projective counts.
    #[arg(long)]
    fit: bool,
    /// Fit degree; defaults to N - 2.
    #[arg(long, requires = "fit")]
    degree: Option<usize>,
    /// Primes held out from the fit and compared exactly.
    #[arg(long, value_delimiter = ',', requires = "fit")]
    holdout: Vec<u64>,
    /// Refusal threshold on q^(N-1).
    #[arg(long, default_value_t = graphyps::pointcount::DEFAULT_BUDGET)]
    budget: u64,
    /// Run jobs above the budget.
    #[arg(long)]
    force: bool,
    /// Include wall time in each record (output is then not reproducible).
    #[arg(long)]
    timing: bool,
}

#[derive(Args)]
struct PeriodArgs {
    graph: String,
    #[arg(long)]
    samples: u64,
    #[arg(long)]
    seed: u64,
    /// Edge set to 1; defaults to the last edge.
    #[arg(long)]
    chart: Option<usize>,
    /// Exponent of the half-line transform.
    #[arg(long)]
    exponent: Option<u32>,
    #[arg(long, default_value_t = DEFAULT_BATCHES)]
    batches: usize,
}

#[derive(Clone, Debug)]
struct Sizes(Vec<usize>);

fn parse_sizes(s: &str) -> Result<Sizes, String> {
    let bad = || format!("expected `a..b` or a comma list, got `{s}`");
    if let Some((a, b)) = s.split_once("..") {
        let a: usize = a.trim().parse().map_err(|_| bad())?;
        let b: usize = b.trim().parse().map_err(|_| bad())?;
        if a > b {
            return Err(bad());
        }
        return Ok(Sizes((a..=b).collect()));
    }
    s.split(',')
        .map(|x| x.trim().parse().map_err(|_| bad()))
        .collect::<Result<_, _>>()
        .map(Sizes)
}

fn read_graph(src: &str) -> Result<Graph> {
    let text = if src == "-" {
        let mut buf = String::new();
        std::io::stdin()
            .read_to_string(&mut buf)
            .context("reading graph from stdin")?;
        buf
    } else {
        std::fs::read_to_string(src).with_context(|| format!("reading {src}"))?
    };
    serde_json::from_str(&text).with_context(|| format!("parsing graph JSON from {src}"))
}

/// Serializes through `Value`, whose maps keep keys sorted.
fn emit<T: Serialize>(value: &T) -> Result<()> {
    let v = serde_json::to_value(value)?;
    let mut out = std::io::stdout().lock();
    match writeln!(out, "{}", serde_json::to_string(&v)?) {
        Err(e) if e.kind() == std::io::ErrorKind::BrokenPipe => Ok(()),
        r => Ok(r?),
    }
}

fn exec_for(threads: Option<usize>) -> Result<Exec> {
    let threads = match threads {
        Some(t) => Some(t),
        None => match std::env::var("GRAPHYPS_THREADS") {
            Ok(s) => Some(
                s.trim()
                    .parse()
                    .with_context(|| format!("GRAPHYPS_THREADS={s} is not a number"))?,
            ),
            Err(_) => None,
        },
    };
    if threads == Some(0) {
        bail!("thread count must be positive");
    }
    #[cfg(feature = "parallel")]
    {
        if let Some(t) = threads {
            rayon::ThreadPoolBuilder::new()
                .num_threads(t)
                .build_global()
                .context("configuring the thread pool")?;
        }
        Ok(if threads == Some(1) {
            Exec::Sequential
        } else {
            Exec::Parallel
        })
    }
    #[cfg(not(feature = "parallel"))]
    {
        let _ = threads;
        Ok(Exec::Sequential)
    }
}

fn run(cli: Cli) -> Result<bool> {
    let exec = exec_for(cli.threads)?;
    match cli.command {
        Command::Family { name, params } => emit(&by_name(&name, &params)?)?,
        Command::Betti { graph } => {
            let g = read_graph(&graph)?;
            emit(&json!({
                "betti": g.betti(),
                "components": g.connected_components(),
                "edges": g.edge_count(),
                "vertices": g.vertex_count(),
            }))?;
        }
        Command::Psi(args) => {
            let g = read_graph(&args.graph)?;
            let psi = if args.trees {
                psi_trees(&g)?
            } else {
                let table = match args.basis_seed {
                    Some(seed) => g.shuffled_cycle_basis(seed)?,
                    None => g.cycle_basis()?,
                };
                psi_det_with(&g, &table, exec)?
            };
            if args.paper_coords {
                let coords = PaperCoordinates::for_graph(&g)
                    .context("named coordinates exist only for the drawn ZZ5 and XX5 labelings")?;
                let mut v = serde_json::to_value(coords.apply(&psi)?)?;
                v["names"] = json!(coords.names);
                emit(&v)?;
            } else {
                emit(&psi)?;
            }
        }
        Command::Pld { graph, explain } => {
            let verdict = is_pld(&read_graph(&graph)?)?;
            let mut v = json!({ "pld": verdict.pld, "witness": verdict.witness });
            if explain {
                v["reason"] = serde_json::to_value(&verdict.reason)?;
                v["low_degree_vertex"] = json!(verdict.low_degree_vertex);
            }
            emit(&v)?;
        }
        Command::Classify {
            loops,
            experimental,
        } => emit(&classify_pld_opts(loops, experimental, exec)?)?,
        Command::Glue {
            g1,
            e1,
            g2,
            e2,
            tail_to_head,
        } => {
            let matching = if tail_to_head {
                GlueMatching::TailToHead
            } else {
                GlueMatching::TailToTail
            };
            let r = glue(&read_graph(&g1)?, e1, &read_graph(&g2)?, e2, matching)?;
            if !r.simple {
                eprintln!("note: the glued graph has parallel edges");
            }
            emit(&r.graph)?;
        }
        Command::Identities {
            action:
                IdentitiesAction::Selftest {
                    sizes,
                    trials,
                    seed,
                },
        } => {
            let report = selftest(&sizes.0, trials, seed, exec)?;
            emit(&report)?;
            return Ok(report.all_passed());
        }
        Command::Count(args) => return count(args, exec),
        Command::Period(args) => {
            let g = read_graph(&args.graph)?;
            let opts = PeriodOptions {
                chart: args.chart,
                exponent: args.exponent,
                batches: args.batches,
                exec,
            };
            emit(&estimate_period_with(&g, args.samples, args.seed, &opts)?)?;
        }
    }
    Ok(true)
}

fn count(args: CountArgs, exec: Exec) -> Result<bool> {
    let g = read_graph(&args.graph)?;
    let opts = CountOptions {
        budget: args.budget,
        force: args.force,
        exec,
        timing: args.timing,
    };
    let records = args
        .q
        .iter()
        .map(|&q| count_projective_with(&g, q, &opts))
        .collect::<Result<Vec<_>, _>>()?;
    if !args.fit {
        emit(&records)?;
        return Ok(true);
    }
    let fit = fit_count_polynomial(&records, args.degree)?;
    let holdout = args
        .holdout
        .iter()
        .map(|&q| count_projective_with(&g, q, &opts))
        .collect::<Result<Vec<_>, _>>()?;
    let valid = validate(&fit.polynomial, &holdout);
    let mut v = json!({ "records": records, "fit": fit });
    if !holdout.is_empty() {
        v["holdout"] = json!({ "records": holdout, "valid": valid });
    }
    emit(&v)?;
    Ok(fit.integral && valid && fit.extra_points_match != Some(false))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
