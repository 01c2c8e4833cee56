//! Randomized coloring with small-class filtering and amplified quantum
//! conflict search, under the fixed-query-budget accounting scheme, plus
//! the greedy dispatcher for small Δ.
//!
//! Two kinds of counting coexist: the *paper charge* (a fixed
//! 2√(n/(εΔ))·log₂n bookkeeping increment per conflict-finding call, summed
//! against the halting budget T) and the session's true query counters.
//! Both are reported so the bookkeeping scheme can be audited against the
//! measured cost.

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::graph::Coloring;
use crate::greedy::{discover_max_degree, greedy_color};
use crate::grover::find_conflict_amplified;
use crate::oracle::{OracleError, OracleSession};
use crate::randomized::{Epsilon, EpsilonParams, ParamError, PartialColoring};

/// The budget quantities of one run: halting budget T, fixed per-call
/// charge, the small-class size threshold, and the per-vertex allowance ℓ.
/// Logs are base 2 throughout.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuantumBudget {
    /// T = 9·ε^(-3/2)·(log₂ n)²·√(n³/Δ)
    pub total: f64,
    /// 2·√(n/(εΔ))·log₂ n, added for every conflict found
    pub per_call_charge: f64,
    /// 2n/(εΔ); classes larger than this are redrawn unqueried
    pub small_class_threshold: f64,
    /// ℓ = T/n = 9·ε^(-3/2)·(log₂ n)²·√(n/Δ)
    pub per_vertex: f64,
    n: usize,
    delta: usize,
    epsilon: Epsilon,
}

impl QuantumBudget {
    /// Exact form of `size > 2n/(εΔ)`: size·εnum·Δ > 2·n·εden, so threshold
    /// comparisons cannot wobble with floating point.
    pub fn class_too_large(&self, size: usize) -> bool {
        let lhs = size as u128 * self.epsilon.numerator() as u128 * self.delta as u128;
        let rhs = 2 * self.n as u128 * self.epsilon.denominator() as u128;
        lhs > rhs
    }
}

/// Evaluates the budget quantities for (n, Δ, ε). Requires Δ ≥ 1 and εΔ ≥ 1.
pub fn budget_values(
    n: usize,
    delta: usize,
    epsilon: Epsilon,
) -> Result<QuantumBudget, ParamError> {
    if n == 0 {
        return Err(ParamError::ZeroVertices);
    }
    if delta == 0 || !epsilon.times_delta_at_least_one(delta) {
        return Err(ParamError::EpsilonDeltaTooSmall { delta });
    }
    let nf = n as f64;
    let df = delta as f64;
    let e = epsilon.as_f64();
    let log2n = nf.log2();
    let total = 9.0 * e.powf(-1.5) * log2n * log2n * (nf.powi(3) / df).sqrt();
    Ok(QuantumBudget {
        total,
        per_call_charge: 2.0 * (nf / (e * df)).sqrt() * log2n,
        small_class_threshold: 2.0 * nf / (e * df),
        per_vertex: 9.0 * e.powf(-1.5) * log2n * log2n * (nf / df).sqrt(),
        n,
        delta,
        epsilon,
    })
}

/// Full record of one run: the coloring (None when the paper charge
/// exceeded T first), both accounting totals and per-vertex diagnostics.
#[derive(Debug, Clone, PartialEq)]
pub struct QuantumOutcome {
    pub coloring: Option<Coloring>,
    /// Accrued bookkeeping charge at the end of the run.
    pub paper_charge: f64,
    /// Conflict-search invocations (all of them, found or not).
    pub find_conflict_calls: u64,
    /// Calls per vertex, in coloring order (shorter than n on Failure).
    pub per_vertex_calls: Vec<u32>,
    /// Color redraws that were rejected by the size threshold alone.
    pub large_class_redraws: u64,
    /// Calls that found a conflict (each adds `per_call_charge`).
    pub conflicts_found: u64,
    /// Session quantum queries consumed by the conflict-finding calls,
    /// split by whether the call found a conflict.
    pub quantum_on_conflict_calls: u64,
    pub quantum_on_clear_calls: u64,
}

impl QuantumOutcome {
    pub fn failed(&self) -> bool {
        self.coloring.is_none()
    }
}

/// Colors with palette ⌈(1+ε)Δ⌉: per vertex, draw a uniform color, redraw
/// unqueried while the class is oversized, otherwise run the amplified
/// conflict search; a found conflict adds the fixed paper charge and
/// redraws, no conflict assigns. Halts with Failure as soon as the accrued
/// charge exceeds T. A returned coloring missed a conflict only if some
/// amplified search produced a false negative.
pub fn quantum_color(
    s: &mut OracleSession,
    params: &EpsilonParams,
    seed: u64,
) -> Result<QuantumOutcome, OracleError> {
    let budget =
        budget_values(params.n, params.delta, params.epsilon).expect("params are pre-validated");
    quantum_color_with_budget(s, params, seed, &budget)
}

/// As [`quantum_color`] but with caller-supplied budget quantities.
pub fn quantum_color_with_budget(
    s: &mut OracleSession,
    params: &EpsilonParams,
    seed: u64,
    budget: &QuantumBudget,
) -> Result<QuantumOutcome, OracleError> {
    let n = s.vertex_count();
    debug_assert_eq!(n, params.n);
    let palette = params.palette as u32;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut partial = PartialColoring::new(n, params.palette);
    let mut outcome = QuantumOutcome {
        coloring: None,
        paper_charge: 0.0,
        find_conflict_calls: 0,
        per_vertex_calls: Vec::with_capacity(n),
        large_class_redraws: 0,
        conflicts_found: 0,
        quantum_on_conflict_calls: 0,
        quantum_on_clear_calls: 0,
    };
    for v in 0..n {
        let mut calls_here = 0u32;
        loop {
            let c = rng.random_range(1..=palette);
            if budget.class_too_large(partial.class_size(c)) {
                outcome.large_class_redraws += 1;
                continue;
            }
            debug_assert!(!budget.class_too_large(partial.class_size(c)));
            calls_here += 1;
            outcome.find_conflict_calls += 1;
            let quantum_before = s.snapshot().quantum;
            let found = find_conflict_amplified(s, v, partial.class(c), &mut rng)?;
            let spent = s.snapshot().quantum - quantum_before;
            match found {
                Some(_) => {
                    outcome.conflicts_found += 1;
                    outcome.quantum_on_conflict_calls += spent;
                    outcome.paper_charge += budget.per_call_charge;
                    if outcome.paper_charge > budget.total {
                        outcome.per_vertex_calls.push(calls_here);
                        return Ok(outcome);
                    }
                }
                None => {
                    outcome.quantum_on_clear_calls += spent;
                    partial.assign(v, c);
                    break;
                }
            }
        }
        outcome.per_vertex_calls.push(calls_here);
    }
    outcome.coloring = Some(partial.into_coloring());
    Ok(outcome)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Route {
    Greedy,
    Quantum,
}

impl fmt::Display for Route {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Greedy => "greedy",
            Self::Quantum => "quantum",
        })
    }
}

/// Result of the dispatching front end; the coloring is always present
/// because a budget Failure falls back to greedy.
#[derive(Debug, Clone, PartialEq)]
pub struct QuantumAutoOutcome {
    pub coloring: Coloring,
    pub route: Route,
    /// True when the quantum run hit Failure and greedy supplied the output.
    pub quantum_failed: bool,
    pub paper_charge: f64,
}

/// True when the dispatcher prefers greedy: Δ < n^(1/3)/ε, evaluated
/// exactly as (εΔ)³ < n.
pub fn greedy_route_quantum(n: usize, delta: usize, epsilon: Epsilon) -> bool {
    let base = (epsilon.numerator() as u128).checked_mul(delta as u128);
    let lhs = base
        .and_then(|b| b.checked_mul(b))
        .and_then(|sq| sq.checked_mul(base.unwrap()));
    let den = epsilon.denominator() as u128;
    let rhs = den
        .checked_mul(den)
        .and_then(|d2| d2.checked_mul(den))
        .and_then(|d3| d3.checked_mul(n as u128));
    match (lhs, rhs) {
        (Some(l), Some(r)) => l < r,
        // Out of u128 range only for astronomical inputs; fall back to floats.
        _ => (epsilon.as_f64() * delta as f64).powi(3) < n as f64,
    }
}

/// Discovers Δ, routes to greedy for small Δ and to [`quantum_color`]
/// otherwise, and converts a quantum Failure into a greedy fallback so the
/// output coloring is always proper.
pub fn quantum_color_auto(
    s: &mut OracleSession,
    epsilon: Epsilon,
    seed: u64,
) -> Result<QuantumAutoOutcome, OracleError> {
    auto_with(s, epsilon, seed, budget_values)
}

fn auto_with(
    s: &mut OracleSession,
    epsilon: Epsilon,
    seed: u64,
    make_budget: impl Fn(usize, usize, Epsilon) -> Result<QuantumBudget, ParamError>,
) -> Result<QuantumAutoOutcome, OracleError> {
    let n = s.vertex_count();
    let delta = discover_max_degree(s)?;
    if greedy_route_quantum(n, delta, epsilon) {
        let coloring = greedy_color(s, delta)?;
        return Ok(QuantumAutoOutcome {
            coloring,
            route: Route::Greedy,
            quantum_failed: false,
            paper_charge: 0.0,
        });
    }
    let params = EpsilonParams::new(n, delta, epsilon)
        .expect("quantum route implies epsilon*delta >= n^(1/3) >= 1");
    let budget = make_budget(n, delta, epsilon).expect("same preconditions as params");
    let outcome = quantum_color_with_budget(s, &params, seed, &budget)?;
    let paper_charge = outcome.paper_charge;
    match outcome.coloring {
        Some(coloring) => Ok(QuantumAutoOutcome {
            coloring,
            route: Route::Quantum,
            quantum_failed: false,
            paper_charge,
        }),
        None => {
            let coloring = greedy_color(s, delta)?;
            Ok(QuantumAutoOutcome {
                coloring,
                route: Route::Quantum,
                quantum_failed: true,
                paper_charge,
            })
        }
    }
}
