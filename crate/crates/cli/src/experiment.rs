//! Seeded experiment grids: one `TrialRecord` per (family, n, ε, algorithm,
//! trial), written as versioned CSV in a fixed row order, plus per-cell
//! summary statistics.
//!
//! Every field except `elapsed_ms` is a pure function of the configuration,
//! so reruns reproduce the data columns byte for byte. Trials run
//! concurrently; each owns a private session over the shared graph.

use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::time::Instant;

use anyhow::{anyhow, bail, Context, Result};
use rayon::prelude::*;

use qcolor::graph::{read_edge_list, validate_coloring, Coloring, Graph};
use qcolor::greedy::{discover_max_degree, greedy_color};
use qcolor::oracle::{Budget, OracleError, OracleSession, QueryCounts};
use qcolor::quantum::{quantum_color, quantum_color_auto};
use qcolor::randomized::{color_auto, lv_color, mc_color, Epsilon, EpsilonParams};

use crate::family::FamilySpec;
use crate::seed::SeedMix;
use crate::stats;

pub const CSV_SCHEMA: &str = "qc1";
pub const CSV_HEADER: &str =
    "schema,algo,family,n,delta,epsilon,seed,pair_q,nbr_q,quantum_q,paper_charge,valid,failed,elapsed_ms";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Algo {
    Greedy,
    Lv,
    Mc,
    Quantum,
    AutoClassical,
    AutoQuantum,
}

impl Algo {
    /// Algorithms that require εΔ ≥ 1 up front (the auto dispatchers fall
    /// back to greedy on their own).
    fn needs_epsilon_delta(&self) -> bool {
        matches!(self, Algo::Lv | Algo::Mc | Algo::Quantum)
    }
}

impl fmt::Display for Algo {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Algo::Greedy => "greedy",
            Algo::Lv => "lv",
            Algo::Mc => "mc",
            Algo::Quantum => "quantum",
            Algo::AutoClassical => "auto-classical",
            Algo::AutoQuantum => "auto-quantum",
        })
    }
}

impl FromStr for Algo {
    type Err = anyhow::Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s.trim() {
            "greedy" => Algo::Greedy,
            "lv" => Algo::Lv,
            "mc" => Algo::Mc,
            "quantum" => Algo::Quantum,
            "auto-classical" => Algo::AutoClassical,
            "auto-quantum" => Algo::AutoQuantum,
            other => bail!("unknown algorithm {other:?} (expected one of greedy, lv, mc, quantum, auto-classical, auto-quantum)"),
        })
    }
}

/// One experiment row.
#[derive(Debug, Clone)]
pub struct TrialRecord {
    pub algo: Algo,
    pub family: String,
    pub n: usize,
    pub delta: usize,
    pub epsilon: Epsilon,
    pub seed: u64,
    pub pair_q: u64,
    pub nbr_q: u64,
    pub quantum_q: u64,
    pub paper_charge: f64,
    pub valid: bool,
    pub failed: bool,
    pub elapsed_ms: u64,
}

impl TrialRecord {
    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{},{},{},{:.3},{},{},{}",
            CSV_SCHEMA,
            self.algo,
            self.family,
            self.n,
            self.delta,
            self.epsilon.as_f64(),
            self.seed,
            self.pair_q,
            self.nbr_q,
            self.quantum_q,
            self.paper_charge,
            self.valid,
            self.failed,
            self.elapsed_ms
        )
    }

    pub fn total_queries(&self) -> u64 {
        self.pair_q + self.nbr_q + self.quantum_q
    }
}

/// Grid definition, buildable from CLI flags or a key-value config file.
#[derive(Debug, Clone)]
pub struct ExperimentConfig {
    pub family: FamilySpec,
    pub sizes: Vec<usize>,
    pub epsilons: Vec<Epsilon>,
    pub algorithms: Vec<Algo>,
    pub trials_per_cell: usize,
    pub base_seed: u64,
    pub output_path: PathBuf,
    pub mc_exponent: u32,
    pub budget: Option<u64>,
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<()> {
        if self.sizes.is_empty() {
            bail!("sizes must be non-empty");
        }
        if self.trials_per_cell == 0 {
            bail!("trials_per_cell must be at least 1");
        }
        if self.epsilons.is_empty() || self.algorithms.is_empty() {
            bail!("epsilons and algorithms must be non-empty");
        }
        Ok(())
    }

    /// Parses `key = value` lines (`#` comments allowed). Keys: family,
    /// sizes, epsilons, algorithms, trials, seed, out, mc_exponent, budget.
    pub fn from_file(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path)
            .with_context(|| format!("reading config {}", path.display()))?;
        let mut family = None;
        let mut sizes = Vec::new();
        let mut epsilons = Vec::new();
        let mut algorithms = Vec::new();
        let mut trials = 1usize;
        let mut seed = 0u64;
        let mut out = None;
        let mut mc_exponent = 2u32;
        let mut budget = None;
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap().trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| anyhow!("config line {}: expected key = value", idx + 1))?;
            let value = value.trim();
            match key.trim() {
                "family" => family = Some(value.parse()?),
                "sizes" => sizes = parse_list(value)?,
                "epsilons" => {
                    epsilons = value
                        .split(',')
                        .map(|e| e.trim().parse::<Epsilon>())
                        .collect::<std::result::Result<_, _>>()?
                }
                "algorithms" => {
                    algorithms = value
                        .split(',')
                        .map(|a| a.parse::<Algo>())
                        .collect::<Result<_>>()?
                }
                "trials" => trials = value.parse()?,
                "seed" => seed = value.parse()?,
                "out" => out = Some(PathBuf::from(value)),
                "mc_exponent" => mc_exponent = value.parse()?,
                "budget" => budget = Some(value.parse()?),
                other => bail!("config line {}: unknown key {other:?}", idx + 1),
            }
        }
        let cfg = Self {
            family: family.ok_or_else(|| anyhow!("config missing `family`"))?,
            sizes,
            epsilons,
            algorithms,
            trials_per_cell: trials,
            base_seed: seed,
            output_path: out.ok_or_else(|| anyhow!("config missing `out`"))?,
            mc_exponent,
            budget,
        };
        cfg.validate()?;
        Ok(cfg)
    }
}

fn parse_list(value: &str) -> Result<Vec<usize>> {
    value
        .split(',')
        .map(|v| v.trim().parse::<usize>().map_err(Into::into))
        .collect()
}

/// Outcome of running one algorithm against one session.
struct Execution {
    coloring: Option<Coloring>,
    counts: QueryCounts,
    paper_charge: f64,
    failed: bool,
}

/// Runs `algo` on a fresh session over `g`. Budget exhaustion from an
/// ambient `--budget` cap surfaces as `failed`, not an error.
fn execute(
    g: &Graph,
    algo: Algo,
    epsilon: Epsilon,
    seed: u64,
    budget: Option<u64>,
    mc_exponent: u32,
) -> Result<Execution> {
    let mut s = match budget {
        Some(cap) => OracleSession::with_budget(g, Budget::total(cap)),
        None => OracleSession::new(g),
    };
    let n = g.vertex_count();
    let run =
        |s: &mut OracleSession| -> std::result::Result<(Option<Coloring>, f64, bool), OracleError> {
            match algo {
                Algo::Greedy => {
                    let delta = discover_max_degree(s)?;
                    Ok((Some(greedy_color(s, delta)?), 0.0, false))
                }
                Algo::Lv => {
                    let delta = discover_max_degree(s)?;
                    let params = params_for(n, delta, epsilon)?;
                    Ok((Some(lv_color(s, &params, seed)?), 0.0, false))
                }
                Algo::Mc => {
                    let delta = discover_max_degree(s)?;
                    let params = params_for(n, delta, epsilon)?;
                    let outcome = mc_color(s, &params, seed, mc_exponent);
                    let failed = outcome.failed();
                    Ok((outcome.coloring(), 0.0, failed))
                }
                Algo::Quantum => {
                    let delta = discover_max_degree(s)?;
                    let params = params_for(n, delta, epsilon)?;
                    let out = quantum_color(s, &params, seed)?;
                    let failed = out.failed();
                    Ok((out.coloring, out.paper_charge, failed))
                }
                Algo::AutoClassical => Ok((Some(color_auto(s, epsilon, seed)?), 0.0, false)),
                Algo::AutoQuantum => {
                    let out = quantum_color_auto(s, epsilon, seed)?;
                    Ok((Some(out.coloring), out.paper_charge, out.quantum_failed))
                }
            }
        };
    match run(&mut s) {
        Ok((coloring, paper_charge, failed)) => Ok(Execution {
            coloring,
            counts: s.snapshot(),
            paper_charge,
            failed,
        }),
        Err(OracleError::BudgetExhausted { .. }) => Ok(Execution {
            coloring: None,
            counts: s.snapshot(),
            paper_charge: 0.0,
            failed: true,
        }),
        Err(other) => Err(other.into()),
    }
}

fn params_for(
    n: usize,
    delta: usize,
    epsilon: Epsilon,
) -> std::result::Result<EpsilonParams, OracleError> {
    // Infeasible cells are filtered before trials run; reaching this with
    // eps*delta < 1 would be a planner bug.
    Ok(EpsilonParams::new(n, delta, epsilon).expect("cell feasibility checked upfront"))
}

/// Per-cell aggregates over total queries plus validity/failure rates.
#[derive(Debug, Clone)]
pub struct CellSummary {
    pub algo: Algo,
    pub n: usize,
    pub delta: usize,
    pub epsilon: Epsilon,
    pub trials: usize,
    pub mean_total: f64,
    pub median_total: f64,
    pub p95_total: f64,
    pub validity_rate: f64,
    pub failure_rate: f64,
}

#[derive(Debug, Clone, Default)]
pub struct ExperimentSummary {
    pub cells: Vec<CellSummary>,
    pub skipped: Vec<String>,
    pub rows: usize,
}

impl fmt::Display for ExperimentSummary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "{:<15} {:>6} {:>6} {:>7} {:>7} {:>12} {:>12} {:>12} {:>7} {:>7}",
            "algo", "n", "delta", "eps", "trials", "mean_q", "median_q", "p95_q", "valid", "failed"
        )?;
        for c in &self.cells {
            writeln!(
                f,
                "{:<15} {:>6} {:>6} {:>7} {:>7} {:>12.1} {:>12.1} {:>12.1} {:>6.1}% {:>6.1}%",
                c.algo.to_string(),
                c.n,
                c.delta,
                c.epsilon.to_string(),
                c.trials,
                c.mean_total,
                c.median_total,
                c.p95_total,
                100.0 * c.validity_rate,
                100.0 * c.failure_rate,
            )?;
        }
        for s in &self.skipped {
            writeln!(f, "skipped: {s}")?;
        }
        write!(f, "{} rows", self.rows)
    }
}

/// Runs the whole grid and writes the CSV. Rows appear in deterministic
/// (size, epsilon, algorithm, trial) order regardless of scheduling.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<ExperimentSummary> {
    cfg.validate()?;
    let family_name = cfg.family.to_string();
    let mut summary = ExperimentSummary::default();
    let mut rows: Vec<TrialRecord> = Vec::new();

    for &n in &cfg.sizes {
        let graph_seed = SeedMix::new(cfg.base_seed)
            .with_str(&family_name)
            .with_u64(n as u64)
            .with_str("graph")
            .finish();
        let graph = match cfg.family.instantiate(n, graph_seed) {
            Ok(g) => g,
            Err(err) => {
                summary
                    .skipped
                    .push(format!("family {family_name} at n={n}: {err}"));
                continue;
            }
        };
        let delta = graph.max_degree();
        for &epsilon in &cfg.epsilons {
            for &algo in &cfg.algorithms {
                if algo.needs_epsilon_delta() && !epsilon.times_delta_at_least_one(delta) {
                    summary.skipped.push(format!(
                        "{algo} at n={n}, delta={delta}, eps={epsilon}: eps*delta < 1"
                    ));
                    continue;
                }
                let cell_records: Vec<TrialRecord> = (0..cfg.trials_per_cell)
                    .into_par_iter()
                    .map(|trial| {
                        let seed = SeedMix::new(cfg.base_seed)
                            .with_str(&family_name)
                            .with_u64(n as u64)
                            .with_u64(epsilon.numerator())
                            .with_u64(epsilon.denominator())
                            .with_str(&algo.to_string())
                            .with_u64(trial as u64)
                            .finish();
                        let start = Instant::now();
                        let exec =
                            execute(&graph, algo, epsilon, seed, cfg.budget, cfg.mc_exponent)
                                .expect("trial hit an unrecoverable oracle error");
                        let valid = exec
                            .coloring
                            .as_ref()
                            .map(|col| validate_coloring(&graph, col).unwrap().proper)
                            .unwrap_or(false);
                        TrialRecord {
                            algo,
                            family: family_name.clone(),
                            n,
                            delta,
                            epsilon,
                            seed,
                            pair_q: exec.counts.pair,
                            nbr_q: exec.counts.neighbor,
                            quantum_q: exec.counts.quantum,
                            paper_charge: exec.paper_charge,
                            valid,
                            failed: exec.failed,
                            elapsed_ms: start.elapsed().as_millis() as u64,
                        }
                    })
                    .collect();

                let totals: Vec<f64> = cell_records
                    .iter()
                    .map(|r| r.total_queries() as f64)
                    .collect();
                summary.cells.push(CellSummary {
                    algo,
                    n,
                    delta,
                    epsilon,
                    trials: cell_records.len(),
                    mean_total: stats::mean(&totals),
                    median_total: stats::median(&totals),
                    p95_total: stats::p95(&totals),
                    validity_rate: cell_records.iter().filter(|r| r.valid).count() as f64
                        / cell_records.len() as f64,
                    failure_rate: cell_records.iter().filter(|r| r.failed).count() as f64
                        / cell_records.len() as f64,
                });
                rows.extend(cell_records);
            }
        }
    }

    let mut csv = String::from(CSV_HEADER);
    csv.push('\n');
    for row in &rows {
        csv.push_str(&row.csv_row());
        csv.push('\n');
    }
    fs::write(&cfg.output_path, csv)
        .with_context(|| format!("writing {}", cfg.output_path.display()))?;
    summary.rows = rows.len();
    Ok(summary)
}

/// Runs one algorithm on one graph file, writes `vertex color` lines to
/// `out`, and prints a stats line.
pub fn run_single(
    graph_path: &Path,
    algo: Algo,
    epsilon: Epsilon,
    seed: u64,
    budget: Option<u64>,
    mc_exponent: u32,
    out: &Path,
) -> Result<()> {
    let text = fs::read_to_string(graph_path)
        .with_context(|| format!("reading graph {}", graph_path.display()))?;
    let graph = read_edge_list(&text)?;
    let delta = graph.max_degree();
    if algo.needs_epsilon_delta() && !epsilon.times_delta_at_least_one(delta) {
        bail!("{algo} needs eps*delta >= 1, got eps={epsilon} delta={delta}");
    }
    let exec = execute(&graph, algo, epsilon, seed, budget, mc_exponent)?;
    match &exec.coloring {
        Some(col) => {
            let mut lines = String::new();
            for v in 0..graph.vertex_count() {
                lines.push_str(&format!("{v} {}\n", col.get(v).expect("total coloring")));
            }
            fs::write(out, lines).with_context(|| format!("writing {}", out.display()))?;
            let report = validate_coloring(&graph, col)?;
            println!(
                "algo={algo} n={} delta={delta} eps={epsilon} seed={seed} pair={} nbr={} quantum={} paper_charge={:.3} colors={} proper={}",
                graph.vertex_count(),
                exec.counts.pair,
                exec.counts.neighbor,
                exec.counts.quantum,
                exec.paper_charge,
                col.distinct_colors(),
                report.proper,
            );
        }
        None => {
            println!(
                "algo={algo} n={} delta={delta} eps={epsilon} seed={seed} pair={} nbr={} quantum={} paper_charge={:.3} FAILED (budget)",
                graph.vertex_count(),
                exec.counts.pair,
                exec.counts.neighbor,
                exec.counts.quantum,
                exec.paper_charge,
            );
        }
    }
    Ok(())
}
