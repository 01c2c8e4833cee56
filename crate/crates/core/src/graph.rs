//! Immutable simple graphs, deterministic generators, edge-list IO and
//! proper-coloring validation.
//!
//! Vertices are `0..n-1`. Adjacency lists are strictly increasing, symmetric
//! and loop-free; the maximum degree is cached at construction. Graphs never
//! change after construction, so many concurrent sessions can share one.

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub type Vertex = usize;

/// Errors from graph construction, generation and coloring validation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GraphError {
    InvalidParam(String),
    SelfLoop { v: Vertex },
    DuplicateEdge { u: Vertex, v: Vertex },
    VertexOutOfRange { v: Vertex, n: usize },
    GenerationFailed(String),
    AssignmentLength { expected: usize, got: usize },
}

impl fmt::Display for GraphError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::InvalidParam(msg) => write!(f, "invalid parameter: {msg}"),
            Self::SelfLoop { v } => write!(f, "self-loop at vertex {v}"),
            Self::DuplicateEdge { u, v } => write!(f, "duplicate edge ({u}, {v})"),
            Self::VertexOutOfRange { v, n } => {
                write!(f, "vertex {v} out of range for n={n}")
            }
            Self::GenerationFailed(msg) => write!(f, "generation failed: {msg}"),
            Self::AssignmentLength { expected, got } => {
                write!(f, "assignment length {got} does not match n={expected}")
            }
        }
    }
}

impl std::error::Error for GraphError {}

/// Errors from parsing the edge-list text format, with 1-based line numbers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum EdgeListError {
    MissingHeader,
    Malformed { line: usize, reason: String },
    SelfLoop { line: usize },
    DuplicateEdge { line: usize },
    VertexOutOfRange { line: usize },
}

impl fmt::Display for EdgeListError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::MissingHeader => write!(f, "missing vertex-count header line"),
            Self::Malformed { line, reason } => write!(f, "line {line}: {reason}"),
            Self::SelfLoop { line } => write!(f, "line {line}: self-loop"),
            Self::DuplicateEdge { line } => write!(f, "line {line}: duplicate edge"),
            Self::VertexOutOfRange { line } => write!(f, "line {line}: vertex out of range"),
        }
    }
}

impl std::error::Error for EdgeListError {}

/// An immutable undirected simple graph with sorted adjacency lists.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    adj: Vec<Vec<Vertex>>,
    max_degree: usize,
}

impl Graph {
    /// Builds a graph from an edge list. Rejects self-loops, duplicate edges
    /// and out-of-range endpoints.
    pub fn from_edges<I>(n: usize, edges: I) -> Result<Self, GraphError>
    where
        I: IntoIterator<Item = (Vertex, Vertex)>,
    {
        let mut adj = vec![Vec::new(); n];
        for (u, v) in edges {
            if u == v {
                return Err(GraphError::SelfLoop { v });
            }
            if u >= n {
                return Err(GraphError::VertexOutOfRange { v: u, n });
            }
            if v >= n {
                return Err(GraphError::VertexOutOfRange { v, n });
            }
            adj[u].push(v);
            adj[v].push(u);
        }
        for (u, nbrs) in adj.iter_mut().enumerate() {
            nbrs.sort_unstable();
            if nbrs.windows(2).any(|w| w[0] == w[1]) {
                let dup = nbrs.windows(2).find(|w| w[0] == w[1]).unwrap()[0];
                return Err(GraphError::DuplicateEdge {
                    u: u.min(dup),
                    v: u.max(dup),
                });
            }
        }
        let max_degree = adj.iter().map(Vec::len).max().unwrap_or(0);
        Ok(Self { adj, max_degree })
    }

    pub fn vertex_count(&self) -> usize {
        self.adj.len()
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(Vec::len).sum::<usize>() / 2
    }

    pub fn degree(&self, v: Vertex) -> usize {
        self.adj[v].len()
    }

    /// Cached maximum degree Δ.
    pub fn max_degree(&self) -> usize {
        self.max_degree
    }

    /// Neighbors of `v` in strictly increasing order.
    pub fn neighbors(&self, v: Vertex) -> &[Vertex] {
        &self.adj[v]
    }

    /// The `j`-th neighbor of `v` (1-based), or `None` past the degree.
    pub fn neighbor_at(&self, v: Vertex, j: usize) -> Option<Vertex> {
        if j == 0 {
            return None;
        }
        self.adj[v].get(j - 1).copied()
    }

    pub fn has_edge(&self, u: Vertex, v: Vertex) -> bool {
        u != v && self.adj[u].binary_search(&v).is_ok()
    }

    /// All edges `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (Vertex, Vertex)> + '_ {
        self.adj.iter().enumerate().flat_map(|(u, nbrs)| {
            nbrs.iter()
                .copied()
                .filter(move |&v| u < v)
                .map(move |v| (u, v))
        })
    }
}

/// A vertex-to-color assignment under a palette `1..=palette_size`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Coloring {
    assignment: Vec<Option<u32>>,
    palette_size: usize,
}

impl Coloring {
    /// A fully unassigned coloring over `n` vertices.
    pub fn new(n: usize, palette_size: usize) -> Self {
        Self {
            assignment: vec![None; n],
            palette_size,
        }
    }

    /// Assigns color `c` to `v`. Colors live in `1..=palette_size`.
    pub fn assign(&mut self, v: Vertex, c: u32) {
        assert!(
            c >= 1 && (c as usize) <= self.palette_size,
            "color {c} outside palette 1..={}",
            self.palette_size
        );
        self.assignment[v] = Some(c);
    }

    pub fn get(&self, v: Vertex) -> Option<u32> {
        self.assignment[v]
    }

    pub fn vertex_count(&self) -> usize {
        self.assignment.len()
    }

    pub fn palette_size(&self) -> usize {
        self.palette_size
    }

    pub fn assigned_count(&self) -> usize {
        self.assignment.iter().filter(|c| c.is_some()).count()
    }

    pub fn is_total(&self) -> bool {
        self.assignment.iter().all(|c| c.is_some())
    }

    pub fn max_color_used(&self) -> Option<u32> {
        self.assignment.iter().flatten().copied().max()
    }

    pub fn distinct_colors(&self) -> usize {
        let mut seen: Vec<u32> = self.assignment.iter().flatten().copied().collect();
        seen.sort_unstable();
        seen.dedup();
        seen.len()
    }
}

/// Outcome of checking a coloring against a graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValidityReport {
    pub proper: bool,
    /// Edges `(u, v)` with `u < v` whose endpoints share a color.
    pub monochromatic_edges: Vec<(Vertex, Vertex)>,
    pub uncolored: Vec<Vertex>,
}

/// Checks that every vertex is assigned and no edge is monochromatic,
/// enumerating all violations.
pub fn validate_coloring(g: &Graph, col: &Coloring) -> Result<ValidityReport, GraphError> {
    let n = g.vertex_count();
    if col.vertex_count() != n {
        return Err(GraphError::AssignmentLength {
            expected: n,
            got: col.vertex_count(),
        });
    }
    let uncolored: Vec<Vertex> = (0..n).filter(|&v| col.get(v).is_none()).collect();
    let monochromatic_edges: Vec<(Vertex, Vertex)> = g
        .edges()
        .filter(|&(u, v)| matches!((col.get(u), col.get(v)), (Some(a), Some(b)) if a == b))
        .collect();
    Ok(ValidityReport {
        proper: uncolored.is_empty() && monochromatic_edges.is_empty(),
        monochromatic_edges,
        uncolored,
    })
}

/// A graph on `n` vertices whose only edge is `(i, j)`; Δ = 1.
pub fn gen_single_edge(n: usize, i: Vertex, j: Vertex) -> Result<Graph, GraphError> {
    if i == j {
        return Err(GraphError::SelfLoop { v: i });
    }
    if i >= n {
        return Err(GraphError::VertexOutOfRange { v: i, n });
    }
    if j >= n {
        return Err(GraphError::VertexOutOfRange { v: j, n });
    }
    Graph::from_edges(n, [(i.min(j), i.max(j))])
}

/// Erdős–Rényi G(n, p), deterministic per seed.
pub fn gen_gnp(n: usize, p: f64, seed: u64) -> Result<Graph, GraphError> {
    if !(0.0..=1.0).contains(&p) {
        return Err(GraphError::InvalidParam(format!(
            "edge probability {p} outside [0, 1]"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges = Vec::new();
    for u in 0..n {
        for v in (u + 1)..n {
            if rng.random_bool(p) {
                edges.push((u, v));
            }
        }
    }
    Graph::from_edges(n, edges)
}

/// Near-regular graph with max degree exactly `target_delta`.
///
/// For small expected collision counts this draws clean configuration-model
/// stub pairings (retrying with derived streams until one is simple, which
/// is then exactly `target_delta`-regular). Dense targets fall back to a
/// seeded random relabeling of the circulant with offsets `1..=d/2` (plus
/// the antipodal offset when `d` is odd), which is always exactly regular.
/// Requires `1 <= target_delta < n` and `n * target_delta` even.
pub fn gen_regular_like(n: usize, target_delta: usize, seed: u64) -> Result<Graph, GraphError> {
    if target_delta == 0 || target_delta >= n {
        return Err(GraphError::GenerationFailed(format!(
            "target degree {target_delta} infeasible for n={n}"
        )));
    }
    if !(n * target_delta).is_multiple_of(2) {
        return Err(GraphError::GenerationFailed(format!(
            "n*target_delta = {}*{} is odd, no such graph",
            n, target_delta
        )));
    }

    let d = target_delta;
    // Expected self-loop + duplicate pair count of a uniform stub pairing.
    let dm1 = (d - 1) as f64;
    let expected_collisions = dm1 / 2.0 + dm1 * dm1 / 4.0;
    if expected_collisions <= 8.0 {
        let max_attempts = 20_000usize.min(40_000_000 / (n * d + 1)).max(16);
        for attempt in 0..max_attempts as u64 {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(attempt);
            if let Some(g) = clean_stub_pairing(n, d, &mut rng) {
                return Ok(g);
            }
        }
    }

    // Circulant fallback: exact d-regular for every feasible (n, d).
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(u64::MAX);
    let mut relabel: Vec<Vertex> = (0..n).collect();
    shuffle(&mut relabel, &mut rng);
    let mut edges = Vec::with_capacity(n * d / 2);
    for offset in 1..=(d / 2) {
        for i in 0..n {
            let j = (i + offset) % n;
            edges.push((relabel[i], relabel[j]));
        }
    }
    if d % 2 == 1 {
        for i in 0..n / 2 {
            edges.push((relabel[i], relabel[i + n / 2]));
        }
    }
    let edges: Vec<(Vertex, Vertex)> = edges
        .into_iter()
        .map(|(u, v)| (u.min(v), u.max(v)))
        .collect();
    let mut dedup = edges;
    dedup.sort_unstable();
    dedup.dedup();
    let g = Graph::from_edges(n, dedup)?;
    debug_assert_eq!(g.max_degree(), d);
    Ok(g)
}

/// One stub-matching attempt; `Some` only if the pairing is simple.
fn clean_stub_pairing(n: usize, d: usize, rng: &mut ChaCha8Rng) -> Option<Graph> {
    let mut stubs: Vec<Vertex> = (0..n).flat_map(|v| std::iter::repeat_n(v, d)).collect();
    shuffle(&mut stubs, rng);
    let mut edges = Vec::with_capacity(stubs.len() / 2);
    for pair in stubs.chunks_exact(2) {
        let (u, v) = (pair[0].min(pair[1]), pair[0].max(pair[1]));
        if u == v {
            return None;
        }
        edges.push((u, v));
    }
    edges.sort_unstable();
    if edges.windows(2).any(|w| w[0] == w[1]) {
        return None;
    }
    let g = Graph::from_edges(n, edges).expect("simple pairing");
    debug_assert_eq!(g.max_degree(), d);
    Some(g)
}

fn shuffle<T>(items: &mut [T], rng: &mut ChaCha8Rng) {
    for i in (1..items.len()).rev() {
        let j = rng.random_range(0..=i);
        items.swap(i, j);
    }
}

/// Parses the edge-list text format: header line `n`, then one `u v` line
/// per edge with `u < v`.
pub fn read_edge_list(text: &str) -> Result<Graph, EdgeListError> {
    let mut lines = text.lines().enumerate();
    let (_, header) = lines.next().ok_or(EdgeListError::MissingHeader)?;
    let n: usize = header
        .trim()
        .parse()
        .map_err(|_| EdgeListError::Malformed {
            line: 1,
            reason: format!("expected vertex count, got {header:?}"),
        })?;
    let mut edges: Vec<(Vertex, Vertex)> = Vec::new();
    let mut seen: std::collections::HashSet<(Vertex, Vertex)> = std::collections::HashSet::new();
    for (idx, raw) in lines {
        let line = idx + 1;
        let mut fields = raw.split_whitespace();
        let (u, v) = match (fields.next(), fields.next(), fields.next()) {
            (Some(a), Some(b), None) => {
                let parse = |s: &str| {
                    s.parse::<usize>().map_err(|_| EdgeListError::Malformed {
                        line,
                        reason: format!("expected vertex id, got {s:?}"),
                    })
                };
                (parse(a)?, parse(b)?)
            }
            _ => {
                return Err(EdgeListError::Malformed {
                    line,
                    reason: format!("expected `u v`, got {raw:?}"),
                })
            }
        };
        if u == v {
            return Err(EdgeListError::SelfLoop { line });
        }
        if u > v {
            return Err(EdgeListError::Malformed {
                line,
                reason: format!("endpoints not increasing: {u} {v}"),
            });
        }
        if v >= n {
            return Err(EdgeListError::VertexOutOfRange { line });
        }
        if !seen.insert((u, v)) {
            return Err(EdgeListError::DuplicateEdge { line });
        }
        edges.push((u, v));
    }
    Ok(Graph::from_edges(n, edges).expect("parser enforced graph invariants"))
}

/// Writes the canonical edge-list form: `n`, then sorted `u v` lines.
pub fn write_edge_list(g: &Graph) -> String {
    let mut out = format!("{}\n", g.vertex_count());
    for (u, v) in g.edges() {
        out.push_str(&format!("{u} {v}\n"));
    }
    out
}
