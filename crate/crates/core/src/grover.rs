//! Exact classical simulation of bounded-error quantum search over a vertex
//! set, with unknown marked count.
//!
//! The production path models each search round in the two-dimensional
//! invariant subspace spanned by the uniform superpositions of marked and
//! unmarked elements: after `r` iterations from the uniform state the marked
//! mass is sin²((2r+1)·asin(√(k/N))), so a measurement is sampled as
//! "marked side with that probability, uniform within the side". A small
//! full-statevector simulator serves as an independent cross-check oracle.
//!
//! `find_conflict` searches a class for a neighbor of `v` using a doubling
//! round schedule (t = 1, 2, 4, ..., then t = N), running ⌊(π/4)√(N/t)⌋
//! simulated iterations per round and verifying every measured candidate
//! with one classical pair query. Verification makes false positives
//! impossible; the doubling schedule keeps the success probability at or
//! above 3/4 for every nonzero conflict count while spending O(√N) queries.

use std::f64::consts::FRAC_PI_4;
use std::fmt;

use rand::Rng;

use crate::graph::Vertex;
use crate::oracle::{OracleError, OracleSession};

/// Largest statevector the reference simulator will allocate.
pub const STATEVECTOR_LIMIT: usize = 1 << 14;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GroverError {
    BadParams(String),
    TooLarge { n: usize, max: usize },
}

impl fmt::Display for GroverError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::BadParams(msg) => write!(f, "bad parameters: {msg}"),
            Self::TooLarge { n, max } => write!(f, "search space {n} exceeds limit {max}"),
        }
    }
}

impl std::error::Error for GroverError {}

/// One bounded-error search configuration: space size N, hidden marked
/// count k, iteration count r.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GroverInstance {
    pub search_space: usize,
    pub marked_count: usize,
    pub iterations: u64,
}

/// Result of one simulated bounded-error search.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GroverOutcome {
    /// Vertex sampled on the final measurement, if any round measured one.
    pub candidate: Option<Vertex>,
    /// True only when the classical verification query confirmed the
    /// candidate, so a verified candidate is never a false positive.
    pub verified: bool,
    pub quantum_queries: u64,
    pub classical_queries: u64,
}

/// Probability that measuring after `r` iterations from the uniform state
/// over `n` elements yields one of the `k` marked ones.
pub fn grover_success_prob(n: usize, k: usize, r: u64) -> Result<f64, GroverError> {
    if n == 0 {
        return Err(GroverError::BadParams("empty search space".into()));
    }
    if k > n {
        return Err(GroverError::BadParams(format!("k={k} exceeds N={n}")));
    }
    if k == 0 {
        return Ok(0.0);
    }
    if k == n {
        return Ok(1.0);
    }
    let theta = ((k as f64) / (n as f64)).sqrt().asin();
    let amp = ((2 * r + 1) as f64 * theta).sin();
    Ok((amp * amp).clamp(0.0, 1.0))
}

/// Iteration counts for the doubling round schedule over a space of size
/// `n`: one round per t = 1, 2, 4, ... below n, then a final t = n round,
/// each running ⌊(π/4)√(n/t)⌋ iterations. The final round always has zero
/// iterations (a bare uniform sample), so every marked fraction keeps a
/// positive floor.
pub fn iteration_schedule(n: usize) -> Vec<u64> {
    if n == 0 {
        return Vec::new();
    }
    let mut ts = Vec::new();
    let mut t = 1usize;
    while t < n {
        ts.push(t);
        t *= 2;
    }
    ts.push(n);
    ts.into_iter()
        .map(|t| (FRAC_PI_4 * ((n as f64) / (t as f64)).sqrt()).floor() as u64)
        .collect()
}

/// Total simulated oracle applications of one full schedule (zero-conflict
/// calls always pay this much).
pub fn schedule_quantum_cost(n: usize) -> u64 {
    iteration_schedule(n).iter().sum()
}

/// Probability that at least one schedule round measures a marked element,
/// from the closed form. This is the predicted success rate of the base
/// search when `k` of `n` class members conflict.
pub fn find_conflict_success_prob(n: usize, k: usize) -> Result<f64, GroverError> {
    let mut fail = 1.0;
    for r in iteration_schedule(n) {
        fail *= 1.0 - grover_success_prob(n, k, r)?;
    }
    Ok(1.0 - fail)
}

/// Probabilities after `r` exact search iterations from the uniform state,
/// by direct statevector simulation. Independent of the closed form.
pub fn statevector_reference(n: usize, marked: &[usize], r: u64) -> Result<Vec<f64>, GroverError> {
    if n == 0 {
        return Err(GroverError::BadParams("empty search space".into()));
    }
    if n > STATEVECTOR_LIMIT {
        return Err(GroverError::TooLarge {
            n,
            max: STATEVECTOR_LIMIT,
        });
    }
    let mut is_marked = vec![false; n];
    for &m in marked {
        if m >= n {
            return Err(GroverError::BadParams(format!("marked {m} >= N={n}")));
        }
        if is_marked[m] {
            return Err(GroverError::BadParams(format!("marked {m} repeated")));
        }
        is_marked[m] = true;
    }
    let mut amps = vec![1.0 / (n as f64).sqrt(); n];
    for _ in 0..r {
        // Phase oracle, then reflection about the uniform state.
        for (a, &m) in amps.iter_mut().zip(&is_marked) {
            if m {
                *a = -*a;
            }
        }
        let mean = amps.iter().sum::<f64>() / n as f64;
        for a in &mut amps {
            *a = 2.0 * mean - *a;
        }
    }
    Ok(amps.into_iter().map(|a| a * a).collect())
}

/// Samples a measurement of the post-iteration state: a uniform marked
/// element with probability [`grover_success_prob`], otherwise a uniform
/// unmarked one. `marked` must be sorted and contain `inst.marked_count`
/// distinct elements of `[0, N)`.
pub fn measure_grover<R: Rng + ?Sized>(
    inst: &GroverInstance,
    marked: &[usize],
    rng: &mut R,
) -> usize {
    let n = inst.search_space;
    let k = inst.marked_count;
    assert_eq!(marked.len(), k, "marked set size must match instance");
    debug_assert!(
        marked.windows(2).all(|w| w[0] < w[1]),
        "marked must be sorted"
    );
    let p = grover_success_prob(n, k, inst.iterations).expect("valid instance");
    if k > 0 && (k == n || rng.random_bool(p)) {
        marked[rng.random_range(0..k)]
    } else {
        let rank = rng.random_range(0..n - k);
        nth_excluded(marked, rank)
    }
}

/// The `rank`-th (0-based) element of `[0, n)` minus the sorted `excluded`.
fn nth_excluded(excluded: &[usize], rank: usize) -> usize {
    let mut rank = rank;
    let mut next = 0usize;
    for &m in excluded {
        let gap = m - next;
        if rank < gap {
            return next + rank;
        }
        rank -= gap;
        next = m + 1;
    }
    next + rank
}

/// Runs the full base search over `class` (size N): for each schedule round,
/// simulate the iterations, measure a candidate, and spend one classical
/// pair query verifying it. Stops at the first verified conflict.
pub fn find_conflict_outcome<R: Rng + ?Sized>(
    s: &mut OracleSession,
    v: Vertex,
    class: &[Vertex],
    rng: &mut R,
) -> Result<GroverOutcome, OracleError> {
    debug_assert!(!class.contains(&v), "v must not belong to the class");
    let n = class.len();
    if n == 0 {
        return Ok(GroverOutcome {
            candidate: None,
            verified: false,
            quantum_queries: 0,
            classical_queries: 0,
        });
    }
    // The simulator reads the hidden graph only to parameterize the
    // rotation; the calling algorithm never sees k or the marked set.
    let graph = s.hidden_graph();
    let marked: Vec<usize> = (0..n)
        .filter(|&idx| graph.has_edge(class[idx], v))
        .collect();
    let mut outcome = GroverOutcome {
        candidate: None,
        verified: false,
        quantum_queries: 0,
        classical_queries: 0,
    };
    for r in iteration_schedule(n) {
        if r > 0 {
            s.charge_quantum(r)?;
            outcome.quantum_queries += r;
        }
        let inst = GroverInstance {
            search_space: n,
            marked_count: marked.len(),
            iterations: r,
        };
        let candidate = class[measure_grover(&inst, &marked, rng)];
        let present = s.pair_query(candidate, v)?;
        outcome.classical_queries += 1;
        outcome.candidate = Some(candidate);
        if present {
            outcome.verified = true;
            return Ok(outcome);
        }
    }
    Ok(outcome)
}

/// Base search returning just the verified conflicting vertex, if any.
pub fn find_conflict<R: Rng + ?Sized>(
    s: &mut OracleSession,
    v: Vertex,
    class: &[Vertex],
    rng: &mut R,
) -> Result<Option<Vertex>, OracleError> {
    let outcome = find_conflict_outcome(s, v, class, rng)?;
    Ok(if outcome.verified {
        outcome.candidate
    } else {
        None
    })
}

/// Repetition count that drives the amplified false-negative rate below
/// n⁻³: per-repetition failure is at most 1/4, and (1/4)^⌈3·log₂ n⌉ ≤ n⁻⁶.
pub fn amplification_rounds(n: usize) -> u32 {
    ((3.0 * (n.max(2) as f64).log2()).ceil() as u32).max(1)
}

/// Repeats the base search up to ⌈3·log₂ n⌉ times (n = graph size),
/// returning the first verified conflict. Never a false positive; returns
/// `None` only if every repetition came up empty.
pub fn find_conflict_amplified<R: Rng + ?Sized>(
    s: &mut OracleSession,
    v: Vertex,
    class: &[Vertex],
    rng: &mut R,
) -> Result<Option<Vertex>, OracleError> {
    if class.is_empty() {
        return Ok(None);
    }
    for _ in 0..amplification_rounds(s.vertex_count()) {
        if let Some(u) = find_conflict(s, v, class, rng)? {
            return Ok(Some(u));
        }
    }
    Ok(None)
}
