//! Empirical calibration of the base conflict search against its
//! closed-form prediction, cell by cell over (class size, conflict count).

use anyhow::Result;
use rayon::prelude::*;

use qcolor::graph::Graph;
use qcolor::grover::{find_conflict, find_conflict_success_prob};
use qcolor::oracle::OracleSession;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::seed::SeedMix;

pub const CALIBRATION_HEADER: &str =
    "n_class,k,trials,successes,empirical,predicted,abs_gap,flagged";

#[derive(Debug, Clone)]
pub struct CalibrationCell {
    pub n_class: usize,
    pub k: usize,
    pub trials: u32,
    pub successes: u32,
    pub empirical: f64,
    pub predicted: f64,
    /// Empirical rate fell below 2/3 − 3σ (only meaningful for k ≥ 1).
    pub flagged: bool,
}

impl CalibrationCell {
    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{:.6},{:.6},{:.6},{}",
            self.n_class,
            self.k,
            self.trials,
            self.successes,
            self.empirical,
            self.predicted,
            (self.empirical - self.predicted).abs(),
            self.flagged
        )
    }
}

/// Runs `trials` base searches per (N, k) cell on a gadget graph whose
/// class `0..N` has exactly `k` members adjacent to the probe vertex.
pub fn run_grover_calibration(
    sizes: &[usize],
    marked_counts: &[usize],
    trials: u32,
    base_seed: u64,
) -> Result<Vec<CalibrationCell>> {
    anyhow::ensure!(!sizes.is_empty() && !marked_counts.is_empty(), "empty grid");
    let mut cells = Vec::new();
    for &n_class in sizes {
        for &k in marked_counts {
            if k > n_class {
                continue;
            }
            let g = Graph::from_edges(n_class + 1, (0..k).map(|u| (u, n_class)))
                .expect("gadget graph is simple");
            let class: Vec<usize> = (0..n_class).collect();
            let cell_seed = SeedMix::new(base_seed)
                .with_u64(n_class as u64)
                .with_u64(k as u64)
                .finish();
            let successes: u32 = (0..trials)
                .into_par_iter()
                .map(|trial| {
                    let mut s = OracleSession::new(&g);
                    let mut rng = ChaCha8Rng::seed_from_u64(cell_seed);
                    rng.set_stream(u64::from(trial));
                    match find_conflict(&mut s, n_class, &class, &mut rng).unwrap() {
                        Some(u) => {
                            assert!(u < k, "false positive in calibration");
                            1
                        }
                        None => 0,
                    }
                })
                .sum();
            let empirical = f64::from(successes) / f64::from(trials);
            let predicted = find_conflict_success_prob(n_class, k).expect("valid cell");
            let sigma = (empirical * (1.0 - empirical) / f64::from(trials)).sqrt();
            cells.push(CalibrationCell {
                n_class,
                k,
                trials,
                successes,
                empirical,
                predicted,
                flagged: k >= 1 && empirical < 2.0 / 3.0 - 3.0 * sigma,
            });
        }
    }
    Ok(cells)
}

pub fn calibration_csv(cells: &[CalibrationCell]) -> String {
    let mut out = String::from(CALIBRATION_HEADER);
    out.push('\n');
    for cell in cells {
        out.push_str(&cell.csv_row());
        out.push('\n');
    }
    out
}
