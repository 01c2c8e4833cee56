//! `qcolor` — generate query-model benchmark graphs, color them with the
//! greedy/randomized/quantum-simulated algorithms, and run seeded
//! experiment grids that emit reproducible CSV tables.

mod calibrate;
mod experiment;
mod family;
mod seed;
mod stats;

use std::fs;
use std::path::PathBuf;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand};

use experiment::{Algo, ExperimentConfig};
use family::FamilySpec;
use qcolor::graph::write_edge_list;
use qcolor::randomized::Epsilon;

#[derive(Parser)]
#[command(
    name = "qcolor",
    version,
    about = "Query-model graph coloring laboratory"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a benchmark graph and write it as an edge list.
    Gen(GenArgs),
    /// Color one graph file and write `vertex color` lines.
    Color(ColorArgs),
    /// Run a seeded experiment grid and write one CSV row per trial.
    Bench(BenchArgs),
    /// Measure base conflict-search success rates against the closed form.
    CalibrateGrover(CalibrateArgs),
}

#[derive(Args)]
struct GenArgs {
    /// Family spec: single-edge, `gnp:<p>`, `regular:<d|n/k|sqrt[+c]>`.
    #[arg(long)]
    family: FamilySpec,
    /// Number of vertices.
    #[arg(long)]
    n: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output edge-list path.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct ColorArgs {
    /// Input graph in edge-list format.
    graph: PathBuf,
    /// One of: greedy, lv, mc, quantum, auto-classical, auto-quantum.
    #[arg(long)]
    algo: Algo,
    #[arg(long, default_value = "1")]
    epsilon: Epsilon,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output coloring path.
    #[arg(long)]
    out: PathBuf,
    /// Optional hard cap on total queries.
    #[arg(long)]
    budget: Option<u64>,
    /// Failure exponent k for the Monte Carlo conversion.
    #[arg(long, default_value_t = 2)]
    mc_exponent: u32,
}

#[derive(Args)]
struct BenchArgs {
    /// Key-value config file; individual flags below override its fields.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    family: Option<FamilySpec>,
    /// Comma-separated sizes, e.g. 256,512,1024.
    #[arg(long, value_delimiter = ',')]
    n: Vec<usize>,
    /// Comma-separated epsilons, e.g. 0.5,1,2.
    #[arg(long, value_delimiter = ',')]
    epsilon: Vec<Epsilon>,
    /// Comma-separated algorithms.
    #[arg(long, value_delimiter = ',')]
    algo: Vec<Algo>,
    #[arg(long)]
    trials: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    out: Option<PathBuf>,
    /// Optional hard cap on total queries per trial.
    #[arg(long)]
    budget: Option<u64>,
    #[arg(long)]
    mc_exponent: Option<u32>,
}

#[derive(Args)]
struct CalibrateArgs {
    /// Comma-separated class sizes N.
    #[arg(long, value_delimiter = ',')]
    sizes: Vec<usize>,
    /// Comma-separated conflict counts k.
    #[arg(long, value_delimiter = ',')]
    marked: Vec<usize>,
    #[arg(long, default_value_t = 10_000)]
    trials: u32,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output CSV path.
    #[arg(long)]
    out: PathBuf,
}

impl BenchArgs {
    fn into_config(self) -> Result<ExperimentConfig> {
        let mut cfg = match &self.config {
            Some(path) => ExperimentConfig::from_file(path)?,
            None => ExperimentConfig {
                family: self
                    .family
                    .context("--family is required without --config")?,
                sizes: Vec::new(),
                epsilons: Vec::new(),
                algorithms: Vec::new(),
                trials_per_cell: 1,
                base_seed: 0,
                output_path: PathBuf::new(),
                mc_exponent: 2,
                budget: None,
            },
        };
        if let Some(family) = self.family {
            cfg.family = family;
        }
        if !self.n.is_empty() {
            cfg.sizes = self.n;
        }
        if !self.epsilon.is_empty() {
            cfg.epsilons = self.epsilon;
        }
        if !self.algo.is_empty() {
            cfg.algorithms = self.algo;
        }
        if let Some(trials) = self.trials {
            cfg.trials_per_cell = trials;
        }
        if let Some(seed) = self.seed {
            cfg.base_seed = seed;
        }
        if let Some(out) = self.out {
            cfg.output_path = out;
        }
        if let Some(k) = self.mc_exponent {
            cfg.mc_exponent = k;
        }
        if self.budget.is_some() {
            cfg.budget = self.budget;
        }
        anyhow::ensure!(
            !cfg.output_path.as_os_str().is_empty(),
            "--out is required without --config"
        );
        cfg.validate()?;
        Ok(cfg)
    }
}

fn main() -> Result<()> {
    match Cli::parse().command {
        Command::Gen(args) => {
            let graph = args.family.instantiate(args.n, args.seed)?;
            fs::write(&args.out, write_edge_list(&graph))
                .with_context(|| format!("writing {}", args.out.display()))?;
            println!(
                "family={} n={} delta={} edges={} seed={} -> {}",
                args.family,
                graph.vertex_count(),
                graph.max_degree(),
                graph.edge_count(),
                args.seed,
                args.out.display()
            );
        }
        Command::Color(args) => {
            experiment::run_single(
                &args.graph,
                args.algo,
                args.epsilon,
                args.seed,
                args.budget,
                args.mc_exponent,
                &args.out,
            )?;
        }
        Command::Bench(args) => {
            let cfg = args.into_config()?;
            let summary = experiment::run_experiment(&cfg)?;
            println!("{summary}");
            println!("wrote {}", cfg.output_path.display());
        }
        Command::CalibrateGrover(args) => {
            let cells = calibrate::run_grover_calibration(
                &args.sizes,
                &args.marked,
                args.trials,
                args.seed,
            )?;
            fs::write(&args.out, calibrate::calibration_csv(&cells))
                .with_context(|| format!("writing {}", args.out.display()))?;
            let flagged: Vec<_> = cells.iter().filter(|c| c.flagged).collect();
            println!(
                "{} cells, {} flagged below 2/3 - 3 sigma -> {}",
                cells.len(),
                flagged.len(),
                args.out.display()
            );
            for cell in flagged {
                println!(
                    "FLAGGED N={} k={}: empirical {:.4} predicted {:.4}",
                    cell.n_class, cell.k, cell.empirical, cell.predicted
                );
            }
        }
    }
    Ok(())
}
