//! Baseline greedy coloring with a palette of Δ+1 colors, driven purely by
//! neighbor queries, plus max-degree discovery by per-vertex binary search.

use crate::graph::Coloring;
use crate::oracle::{OracleError, OracleSession};

/// Discovers the exact max degree Δ of the hidden graph.
///
/// Binary-searches at every vertex for the largest 1-based index answered
/// with a neighbor rather than Null, using at most ⌈log₂(n+1)⌉ neighbor
/// queries per vertex (within the n·(⌈log₂ n⌉+2) allowance).
pub fn discover_max_degree(s: &mut OracleSession) -> Result<usize, OracleError> {
    let n = s.vertex_count();
    let mut delta = 0;
    for v in 0..n {
        // Invariant: index lo is known non-Null (0 = virtual anchor),
        // index hi is known Null (n+1 is virtually Null since deg < n).
        let mut lo = 0usize;
        let mut hi = n + 1;
        while lo + 1 < hi {
            let mid = lo + (hi - lo) / 2;
            if s.neighbor_query(v, mid)?.is_some() {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        delta = delta.max(lo);
    }
    Ok(delta)
}

/// Colors every vertex with the lowest color in `1..=delta+1` unused among
/// its already-colored neighbors, reading each neighbor list through
/// neighbor queries `1..=deg+1` (the Null answer terminates the scan).
///
/// `delta` must be the true max degree; the output is then always a proper
/// coloring over the palette `[1, Δ+1]`.
pub fn greedy_color(s: &mut OracleSession, delta: usize) -> Result<Coloring, OracleError> {
    let n = s.vertex_count();
    let palette = delta + 1;
    let mut coloring = Coloring::new(n, palette);
    let mut used = vec![false; palette + 1];
    for v in 0..n {
        let mut marked: Vec<u32> = Vec::new();
        let mut j = 1;
        while let Some(u) = s.neighbor_query(v, j)? {
            if let Some(c) = coloring.get(u) {
                if !used[c as usize] {
                    used[c as usize] = true;
                    marked.push(c);
                }
            }
            j += 1;
        }
        let c = (1..=palette as u32)
            .find(|&c| !used[c as usize])
            .expect("a vertex has at most delta neighbors, so some color is free");
        coloring.assign(v, c);
        for c in marked {
            used[c as usize] = false;
        }
    }
    Ok(coloring)
}
