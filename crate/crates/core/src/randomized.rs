//! Las Vegas (1+ε)Δ coloring by random color trials checked with classical
//! pair queries, its Monte Carlo conversion, and the greedy/randomized
//! dispatcher.
//!
//! ε is carried as an exact rational so palette sizes and dispatch
//! thresholds never depend on floating-point rounding.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::graph::{Coloring, Vertex};
use crate::greedy::{discover_max_degree, greedy_color};
use crate::oracle::{Budget, OracleError, OracleSession};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ParamError {
    ZeroDenominator,
    ZeroEpsilon,
    EpsilonDeltaTooSmall { delta: usize },
    ZeroVertices,
    BadEpsilonLiteral(String),
}

impl fmt::Display for ParamError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::ZeroDenominator => write!(f, "epsilon denominator is zero"),
            Self::ZeroEpsilon => write!(f, "epsilon must be positive"),
            Self::EpsilonDeltaTooSmall { delta } => {
                write!(f, "epsilon * delta < 1 at delta={delta}; randomized path needs at least one spare color")
            }
            Self::ZeroVertices => write!(f, "graph has no vertices"),
            Self::BadEpsilonLiteral(s) => write!(f, "cannot parse epsilon from {s:?}"),
        }
    }
}

impl std::error::Error for ParamError {}

/// A positive rational ε, reduced at construction.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Epsilon {
    num: u64,
    den: u64,
}

impl Epsilon {
    pub fn new(num: u64, den: u64) -> Result<Self, ParamError> {
        if den == 0 {
            return Err(ParamError::ZeroDenominator);
        }
        if num == 0 {
            return Err(ParamError::ZeroEpsilon);
        }
        let g = gcd(num, den);
        Ok(Self {
            num: num / g,
            den: den / g,
        })
    }

    pub fn numerator(&self) -> u64 {
        self.num
    }

    pub fn denominator(&self) -> u64 {
        self.den
    }

    pub fn as_f64(&self) -> f64 {
        self.num as f64 / self.den as f64
    }

    /// ε·Δ ≥ 1, the validity floor of the randomized palette.
    pub fn times_delta_at_least_one(&self, delta: usize) -> bool {
        (self.num as u128) * (delta as u128) >= self.den as u128
    }

    /// ⌈ε·Δ⌉ in exact arithmetic.
    pub fn ceil_times(&self, delta: usize) -> usize {
        let num = self.num as u128 * delta as u128;
        let den = self.den as u128;
        (num.div_ceil(den)) as usize
    }
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

impl fmt::Display for Epsilon {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den == 1 {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{}/{}", self.num, self.den)
        }
    }
}

impl FromStr for Epsilon {
    type Err = ParamError;

    /// Accepts integers (`2`), decimals (`0.25`) and fractions (`1/3`).
    fn from_str(s: &str) -> Result<Self, ParamError> {
        let bad = || ParamError::BadEpsilonLiteral(s.to_string());
        let s = s.trim();
        if let Some((a, b)) = s.split_once('/') {
            let num: u64 = a.trim().parse().map_err(|_| bad())?;
            let den: u64 = b.trim().parse().map_err(|_| bad())?;
            return Epsilon::new(num, den);
        }
        if let Some((whole, frac)) = s.split_once('.') {
            let whole: u64 = if whole.is_empty() {
                0
            } else {
                whole.parse().map_err(|_| bad())?
            };
            if frac.is_empty() || frac.len() > 9 || !frac.bytes().all(|b| b.is_ascii_digit()) {
                return Err(bad());
            }
            let scale = 10u64.pow(frac.len() as u32);
            let frac: u64 = frac.parse().map_err(|_| bad())?;
            return Epsilon::new(whole * scale + frac, scale);
        }
        let num: u64 = s.parse().map_err(|_| bad())?;
        Epsilon::new(num, 1)
    }
}

/// Palette size L = ⌈(1+ε)Δ⌉; requires εΔ ≥ 1 so a vertex always has at
/// least one valid color.
pub fn palette_size(delta: usize, epsilon: Epsilon) -> Result<usize, ParamError> {
    if !epsilon.times_delta_at_least_one(delta) {
        return Err(ParamError::EpsilonDeltaTooSmall { delta });
    }
    Ok(delta + epsilon.ceil_times(delta))
}

/// Validated parameters of one randomized-coloring run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EpsilonParams {
    pub n: usize,
    pub delta: usize,
    pub epsilon: Epsilon,
    pub palette: usize,
}

impl EpsilonParams {
    pub fn new(n: usize, delta: usize, epsilon: Epsilon) -> Result<Self, ParamError> {
        if n == 0 {
            return Err(ParamError::ZeroVertices);
        }
        let palette = palette_size(delta, epsilon)?;
        Ok(Self {
            n,
            delta,
            epsilon,
            palette,
        })
    }

    /// √(n/ε), the Δ value where greedy and randomized costs cross.
    pub fn dispatch_threshold(&self) -> f64 {
        (self.n as f64 / self.epsilon.as_f64()).sqrt()
    }
}

/// The per-color vertex classes χ(c) plus the vertex→color assignment under
/// construction. Classes stay sorted because vertices are colored in
/// increasing identifier order.
#[derive(Debug, Clone)]
pub struct PartialColoring {
    classes: Vec<Vec<Vertex>>,
    assignment: Vec<Option<u32>>,
    palette: usize,
}

impl PartialColoring {
    pub fn new(n: usize, palette: usize) -> Self {
        Self {
            classes: vec![Vec::new(); palette],
            assignment: vec![None; n],
            palette,
        }
    }

    /// Members of χ(c) in increasing vertex order. Colors are 1-based.
    pub fn class(&self, c: u32) -> &[Vertex] {
        &self.classes[(c - 1) as usize]
    }

    pub fn class_size(&self, c: u32) -> usize {
        self.classes[(c - 1) as usize].len()
    }

    pub fn color_of(&self, v: Vertex) -> Option<u32> {
        self.assignment[v]
    }

    pub fn assigned_count(&self) -> usize {
        self.assignment.iter().filter(|c| c.is_some()).count()
    }

    pub fn assign(&mut self, v: Vertex, c: u32) {
        assert!(c >= 1 && (c as usize) <= self.palette, "color off palette");
        assert!(self.assignment[v].is_none(), "vertex {v} already colored");
        let class = &mut self.classes[(c - 1) as usize];
        debug_assert!(class.last().is_none_or(|&last| last < v));
        class.push(v);
        self.assignment[v] = Some(c);
    }

    pub fn into_coloring(self) -> Coloring {
        let mut col = Coloring::new(self.assignment.len(), self.palette);
        for (v, c) in self.assignment.iter().enumerate() {
            if let Some(c) = c {
                col.assign(v, *c);
            }
        }
        col
    }
}

/// Scans `class` in its stored order, spending one pair query per member,
/// returning the first vertex adjacent to `v` (early exit on the hit).
pub fn find_conflict_classical(
    s: &mut OracleSession,
    v: Vertex,
    class: &[Vertex],
) -> Result<Option<Vertex>, OracleError> {
    debug_assert!(!class.contains(&v));
    for &u in class {
        if s.pair_query(u, v)? {
            return Ok(Some(u));
        }
    }
    Ok(None)
}

/// Las Vegas (1+ε)Δ coloring: per vertex, draw a uniform color and keep it
/// iff the class holds no neighbor (checked exhaustively with pair
/// queries). Always returns a proper ⌈(1+ε)Δ⌉-coloring; only the query
/// count is random, and it is a pure function of (graph, params, seed).
pub fn lv_color(
    s: &mut OracleSession,
    params: &EpsilonParams,
    seed: u64,
) -> Result<Coloring, OracleError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    lv_color_with_rng(s, params, &mut rng)
}

fn lv_color_with_rng(
    s: &mut OracleSession,
    params: &EpsilonParams,
    rng: &mut ChaCha8Rng,
) -> Result<Coloring, OracleError> {
    let n = s.vertex_count();
    debug_assert_eq!(n, params.n);
    let palette = params.palette as u32;
    let mut partial = PartialColoring::new(n, params.palette);
    for v in 0..n {
        loop {
            let c = rng.random_range(1..=palette);
            if find_conflict_classical(s, v, partial.class(c))?.is_none() {
                partial.assign(v, c);
                break;
            }
        }
    }
    Ok(partial.into_coloring())
}

/// Outcome of the Monte Carlo conversion: either the Las Vegas coloring, or
/// the evidence that the query cap cut it short.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum McOutcome {
    Colored(Coloring),
    Exhausted { cap: u64 },
}

impl McOutcome {
    pub fn coloring(self) -> Option<Coloring> {
        match self {
            Self::Colored(c) => Some(c),
            Self::Exhausted { .. } => None,
        }
    }

    pub fn failed(&self) -> bool {
        matches!(self, Self::Exhausted { .. })
    }
}

/// Query cap for the Monte Carlo conversion with failure target n^-k:
/// 4·k·log₂(n) times the expected-cost bound min(n²/(εΔ), ε^(-1/2)·n^(3/2)).
pub fn mc_query_cap(params: &EpsilonParams, k: u32) -> u64 {
    let n = params.n as f64;
    let eps = params.epsilon.as_f64();
    let expected_bound = (n * n / (eps * params.delta as f64)).min(n.powf(1.5) / eps.sqrt());
    (4.0 * f64::from(k) * n.log2() * expected_bound).ceil() as u64
}

/// Runs [`lv_color`] under [`mc_query_cap`] queries; the cap being hit is
/// the only failure mode.
pub fn mc_color(s: &mut OracleSession, params: &EpsilonParams, seed: u64, k: u32) -> McOutcome {
    mc_color_with_cap(s, params, seed, mc_query_cap(params, k))
}

/// Monte Carlo conversion with an explicit cap on total queries consumed by
/// the run. An ambient session budget keeps binding: the run may spend at
/// most min(cap, ambient headroom), and the previous budget is restored
/// afterwards.
pub fn mc_color_with_cap(
    s: &mut OracleSession,
    params: &EpsilonParams,
    seed: u64,
    cap: u64,
) -> McOutcome {
    let counts = s.snapshot();
    let allowed = match s.budget() {
        Some(ambient) => cap.min(ambient.remaining(counts)),
        None => cap,
    };
    let prev = s.swap_budget(Some(Budget::total(counts.total() + allowed)));
    let result = lv_color(s, params, seed);
    s.swap_budget(prev);
    match result {
        Ok(coloring) => McOutcome::Colored(coloring),
        Err(OracleError::BudgetExhausted { .. }) => McOutcome::Exhausted { cap },
        Err(other) => unreachable!("lv_color only issues valid queries: {other}"),
    }
}

/// True when the dispatcher prefers greedy: Δ² ≤ n/ε (equivalently
/// Δ²·ε ≤ n) or εΔ < 1, decided in exact integer arithmetic.
pub fn greedy_route(n: usize, delta: usize, epsilon: Epsilon) -> bool {
    let d = delta as u128;
    let crossover =
        d * d * epsilon.numerator() as u128 <= n as u128 * epsilon.denominator() as u128;
    crossover || !epsilon.times_delta_at_least_one(delta)
}

/// Discovers Δ, then colors greedily when `greedy_route` says so (palette
/// Δ+1) and by [`lv_color`] otherwise (palette ⌈(1+ε)Δ⌉). Always proper.
pub fn color_auto(
    s: &mut OracleSession,
    epsilon: Epsilon,
    seed: u64,
) -> Result<Coloring, OracleError> {
    let n = s.vertex_count();
    let delta = discover_max_degree(s)?;
    if greedy_route(n, delta, epsilon) {
        greedy_color(s, delta)
    } else {
        let params = EpsilonParams::new(n, delta, epsilon)
            .expect("non-greedy route implies epsilon*delta >= 1");
        lv_color(s, &params, seed)
    }
}
