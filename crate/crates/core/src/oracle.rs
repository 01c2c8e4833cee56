//! The only access path from algorithms to the hidden graph: classical pair
//! queries, classical neighbor queries and quantum-query charging, all
//! counted exactly, with optional budget enforcement.
//!
//! A session is single-threaded. Concurrent trials each own a private
//! session over a shared immutable [`Graph`].

use std::fmt;

use crate::graph::{Graph, Vertex};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QueryKind {
    Pair,
    Neighbor,
    Quantum,
}

impl fmt::Display for QueryKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Pair => "pair",
            Self::Neighbor => "neighbor",
            Self::Quantum => "quantum",
        })
    }
}

/// A hard cap on the designated combination of counters. No query is
/// answered once the designated total would exceed `cap`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Budget {
    pub cap: u64,
    pub pair: bool,
    pub neighbor: bool,
    pub quantum: bool,
}

impl Budget {
    /// Cap on pair + neighbor + quantum combined.
    pub fn total(cap: u64) -> Self {
        Self {
            cap,
            pair: true,
            neighbor: true,
            quantum: true,
        }
    }

    pub fn pair_only(cap: u64) -> Self {
        Self {
            cap,
            pair: true,
            neighbor: false,
            quantum: false,
        }
    }

    fn includes(&self, kind: QueryKind) -> bool {
        match kind {
            QueryKind::Pair => self.pair,
            QueryKind::Neighbor => self.neighbor,
            QueryKind::Quantum => self.quantum,
        }
    }

    /// The designated total this budget counts, for a given snapshot.
    pub fn designated(&self, counts: QueryCounts) -> u64 {
        let mut total = 0;
        if self.pair {
            total += counts.pair;
        }
        if self.neighbor {
            total += counts.neighbor;
        }
        if self.quantum {
            total += counts.quantum;
        }
        total
    }

    /// Headroom left before this budget refuses a designated query.
    pub fn remaining(&self, counts: QueryCounts) -> u64 {
        self.cap.saturating_sub(self.designated(counts))
    }
}

/// Errors raised by a session. Budget exhaustion is a recoverable signal:
/// counters are left untouched and the session stays usable.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum OracleError {
    SelfPair { v: Vertex },
    VertexOutOfRange { v: Vertex, n: usize },
    NeighborIndexZero,
    BudgetExhausted { cap: u64, would_use: u64 },
}

impl fmt::Display for OracleError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::SelfPair { v } => write!(f, "pair query ({v}, {v}) is a self-pair"),
            Self::VertexOutOfRange { v, n } => write!(f, "vertex {v} out of range for n={n}"),
            Self::NeighborIndexZero => write!(f, "neighbor index is 1-based, got 0"),
            Self::BudgetExhausted { cap, would_use } => {
                write!(
                    f,
                    "budget exhausted: cap {cap}, query would use {would_use}"
                )
            }
        }
    }
}

impl std::error::Error for OracleError {}

/// Consistent counter snapshot, component-wise non-decreasing over time.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct QueryCounts {
    pub pair: u64,
    pub neighbor: u64,
    pub quantum: u64,
}

impl QueryCounts {
    pub fn total(&self) -> u64 {
        self.pair + self.neighbor + self.quantum
    }
}

/// One audit-log entry; `cumulative` is the running total for that kind.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ChargeEntry {
    pub kind: QueryKind,
    pub amount: u64,
    pub cumulative: u64,
}

/// Instrumented access point over a hidden graph.
pub struct OracleSession<'g> {
    graph: &'g Graph,
    counts: QueryCounts,
    budget: Option<Budget>,
    log: Option<Vec<ChargeEntry>>,
}

impl<'g> OracleSession<'g> {
    pub fn new(graph: &'g Graph) -> Self {
        Self {
            graph,
            counts: QueryCounts::default(),
            budget: None,
            log: None,
        }
    }

    pub fn with_budget(graph: &'g Graph, budget: Budget) -> Self {
        let mut s = Self::new(graph);
        s.budget = Some(budget);
        s
    }

    /// Number of vertices; public knowledge in the query model.
    pub fn vertex_count(&self) -> usize {
        self.graph.vertex_count()
    }

    /// Simulator-side access to the hidden input. Never exposed to the
    /// coloring algorithms themselves.
    pub(crate) fn hidden_graph(&self) -> &'g Graph {
        self.graph
    }

    pub fn budget(&self) -> Option<Budget> {
        self.budget
    }

    /// Replaces the budget, returning the previous one.
    pub fn swap_budget(&mut self, budget: Option<Budget>) -> Option<Budget> {
        std::mem::replace(&mut self.budget, budget)
    }

    /// Turns on the append-only charge log (off by default; large runs
    /// produce one entry per query).
    pub fn enable_charge_log(&mut self) {
        if self.log.is_none() {
            self.log = Some(Vec::new());
        }
    }

    pub fn charge_log(&self) -> Option<&[ChargeEntry]> {
        self.log.as_deref()
    }

    /// Charge-log export as CSV rows `kind,amount,cumulative`.
    pub fn charge_log_csv(&self) -> String {
        let mut out = String::from("kind,amount,cumulative\n");
        for entry in self.log.as_deref().unwrap_or(&[]) {
            out.push_str(&format!(
                "{},{},{}\n",
                entry.kind, entry.amount, entry.cumulative
            ));
        }
        out
    }

    pub fn snapshot(&self) -> QueryCounts {
        self.counts
    }

    /// Checks the budget for a pending charge, then applies it.
    fn charge(&mut self, kind: QueryKind, amount: u64) -> Result<(), OracleError> {
        if let Some(budget) = self.budget {
            if budget.includes(kind) {
                let would_use = budget.designated(self.counts) + amount;
                if would_use > budget.cap {
                    return Err(OracleError::BudgetExhausted {
                        cap: budget.cap,
                        would_use,
                    });
                }
            }
        }
        let counter = match kind {
            QueryKind::Pair => &mut self.counts.pair,
            QueryKind::Neighbor => &mut self.counts.neighbor,
            QueryKind::Quantum => &mut self.counts.quantum,
        };
        *counter += amount;
        let cumulative = *counter;
        if let Some(log) = &mut self.log {
            log.push(ChargeEntry {
                kind,
                amount,
                cumulative,
            });
        }
        Ok(())
    }

    /// Adjacency-matrix probe: is edge `(i, j)` present? Costs one pair query.
    pub fn pair_query(&mut self, i: Vertex, j: Vertex) -> Result<bool, OracleError> {
        let n = self.graph.vertex_count();
        if i == j {
            return Err(OracleError::SelfPair { v: i });
        }
        if i >= n {
            return Err(OracleError::VertexOutOfRange { v: i, n });
        }
        if j >= n {
            return Err(OracleError::VertexOutOfRange { v: j, n });
        }
        self.charge(QueryKind::Pair, 1)?;
        Ok(self.graph.has_edge(i, j))
    }

    /// Adjacency-list probe: the `j`-th neighbor of `i` (1-based) in sorted
    /// order, or `None` when `j > deg(i)`. Costs one neighbor query either way.
    pub fn neighbor_query(&mut self, i: Vertex, j: usize) -> Result<Option<Vertex>, OracleError> {
        let n = self.graph.vertex_count();
        if i >= n {
            return Err(OracleError::VertexOutOfRange { v: i, n });
        }
        if j == 0 {
            return Err(OracleError::NeighborIndexZero);
        }
        self.charge(QueryKind::Neighbor, 1)?;
        Ok(self.graph.neighbor_at(i, j))
    }

    /// Accounting hook for simulated oracle-unitary applications.
    pub fn charge_quantum(&mut self, amount: u64) -> Result<(), OracleError> {
        self.charge(QueryKind::Quantum, amount)
    }
}
