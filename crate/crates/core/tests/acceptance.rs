//! Acceptance suite: one test per criterion, each printing a PASS line with
//! its measured numbers (visible with `--nocapture`). Statistical checks run
//! on fixed seeds, so outcomes are reproducible bit for bit.

use rayon::prelude::*;

use qcolor::graph::{gen_regular_like, gen_single_edge, validate_coloring, Coloring, Graph};
use qcolor::greedy::{discover_max_degree, greedy_color};
use qcolor::grover::{
    find_conflict, find_conflict_amplified, grover_success_prob, statevector_reference,
};
use qcolor::oracle::OracleSession;
use qcolor::quantum::{budget_values, greedy_route_quantum, quantum_color, quantum_color_auto};
use qcolor::randomized::{color_auto, greedy_route, lv_color, mc_color, Epsilon, EpsilonParams};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn eps(s: &str) -> Epsilon {
    s.parse().unwrap()
}

/// Properness oracle independent of `validate_coloring`.
fn brute_force_proper(g: &Graph, col: &Coloring) -> bool {
    (0..g.vertex_count()).all(|v| match col.get(v) {
        None => false,
        Some(cv) => g.neighbors(v).iter().all(|&u| col.get(u) != Some(cv)),
    })
}

fn fit_log_log_slope(points: &[(f64, f64)]) -> f64 {
    let n = points.len() as f64;
    let (mut sx, mut sy, mut sxx, mut sxy) = (0.0, 0.0, 0.0, 0.0);
    for &(x, y) in points {
        let (lx, ly) = (x.ln(), y.ln());
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    (n * sxy - sx * sy) / (n * sxx - sx * sx)
}

// Criterion 1: the Las Vegas algorithm never emits an invalid coloring.
// 10,900 runs across n in {16..4096} and eps in {1/4, 1/2, 1, 2}, all with
// eps*delta >= 1. Tolerance: zero.
#[test]
fn criterion_1_las_vegas_validity() {
    let cells: &[(usize, usize, u64, u64)] = &[
        (16, 8, 1600, 0x0100),
        (64, 16, 800, 0x0200),
        (256, 32, 250, 0x0300),
        (1024, 128, 60, 0x0400),
        (4096, 256, 15, 0x0500),
    ];
    let epsilons = ["0.25", "0.5", "1", "2"];
    let mut runs = 0u64;
    let mut invalid = 0u64;
    for &(n, delta, trials, cell) in cells {
        let g = gen_regular_like(n, delta, 900 + n as u64).unwrap();
        assert_eq!(g.max_degree(), delta);
        for e in epsilons {
            let params = EpsilonParams::new(n, delta, eps(e)).unwrap();
            let bad: u64 = (0..trials)
                .into_par_iter()
                .map(|trial| {
                    let mut s = OracleSession::new(&g);
                    let col = lv_color(&mut s, &params, cell + trial).unwrap();
                    let ok = validate_coloring(&g, &col).unwrap().proper
                        && brute_force_proper(&g, &col)
                        && col.max_color_used().unwrap() as usize <= params.palette;
                    u64::from(!ok)
                })
                .sum();
            invalid += bad;
            runs += trials;
        }
    }
    assert!(runs >= 10_000, "need at least 10,000 runs, got {runs}");
    assert_eq!(invalid, 0, "invalid Las Vegas colorings out of {runs}");
    println!("criterion 1 PASS: {runs} lv runs, 0 invalid colorings");
}

// Criterion 2: per-vertex expected pair queries stay under 1.2 * n/(eps*delta)
// on near-regular graphs with delta >= sqrt(n/eps), 1000 trials per cell.
#[test]
fn criterion_2_per_vertex_query_bound() {
    let cells: &[(usize, usize, &str)] = &[
        (1024, 32, "1"),
        (1024, 64, "1"),
        (1024, 256, "1"),
        (1024, 128, "0.25"),
        (256, 12, "2"),
        (256, 32, "2"),
    ];
    for &(n, delta, e) in cells {
        let epsilon = eps(e);
        // Cell admissibility: delta^2 * eps >= n.
        assert!(
            (delta as u128).pow(2) * epsilon.numerator() as u128
                >= n as u128 * epsilon.denominator() as u128,
            "cell ({n}, {delta}, {e}) is under the crossover"
        );
        let g = gen_regular_like(n, delta, 77).unwrap();
        let params = EpsilonParams::new(n, delta, epsilon).unwrap();
        let trials = 1000u64;
        let total_pair: u64 = (0..trials)
            .into_par_iter()
            .map(|trial| {
                let mut s = OracleSession::new(&g);
                lv_color(&mut s, &params, 0xbeef + trial).unwrap();
                s.snapshot().pair
            })
            .sum();
        let mean_per_vertex = total_pair as f64 / trials as f64 / n as f64;
        let bound = 1.2 * n as f64 / (epsilon.as_f64() * delta as f64);
        assert!(
            mean_per_vertex <= bound,
            "cell ({n}, {delta}, {e}): {mean_per_vertex:.3} > {bound:.3}"
        );
        println!(
            "criterion 2 cell (n={n}, delta={delta}, eps={e}): {mean_per_vertex:.3} <= {bound:.3}"
        );
    }
    println!("criterion 2 PASS: per-vertex means under 1.2*n/(eps*delta) in all cells");
}

// Criterion 3: total queries of the randomized algorithm scale like n^1.5
// at the dispatch crossover (delta just above sqrt(n)), eps = 1. Slope of
// the log-log fit must land in [1.35, 1.65] and the mean stays under
// 3*n*sqrt(n) at every size.
#[test]
fn criterion_3_classical_scaling() {
    let sizes: &[(usize, usize)] = &[(256, 17), (512, 24), (1024, 33), (2048, 46), (4096, 65)];
    let trials = 120u64;
    let mut points = Vec::new();
    for &(n, delta) in sizes {
        let g = gen_regular_like(n, delta, 40_000 + n as u64).unwrap();
        let params = EpsilonParams::new(n, delta, eps("1")).unwrap();
        assert!(
            !greedy_route(n, delta, eps("1")),
            "cell must be on the lv side"
        );
        let total: u64 = (0..trials)
            .into_par_iter()
            .map(|trial| {
                let mut s = OracleSession::new(&g);
                lv_color(&mut s, &params, 0xca11 + trial).unwrap();
                s.snapshot().total()
            })
            .sum();
        let mean = total as f64 / trials as f64;
        let cap = 3.0 * (n as f64).powf(1.5);
        assert!(
            mean <= cap,
            "n={n}: mean {mean:.0} exceeds 3*n*sqrt(n) = {cap:.0}"
        );
        println!("criterion 3 point: n={n} delta={delta} mean queries {mean:.0} (cap {cap:.0})");
        points.push((n as f64, mean));
    }
    let slope = fit_log_log_slope(&points);
    assert!(
        (1.35..=1.65).contains(&slope),
        "fitted slope {slope:.3} outside [1.35, 1.65]"
    );
    println!("criterion 3 PASS: fitted slope {slope:.3} in [1.35, 1.65]");
}

// Criterion 4: base conflict search succeeds with rate >= 2/3 - 3 sigma on
// every (N, k) grid cell, 10^4 trials each, and never returns a vertex that
// is not a true neighbor (zero tolerance).
#[test]
fn criterion_4_find_conflict_base_success() {
    let trials = 10_000u32;
    for &n_class in &[4usize, 8, 16, 64, 256] {
        for &k in &[1usize, 2, 3, 5] {
            if k > n_class {
                continue;
            }
            let g = Graph::from_edges(n_class + 1, (0..k).map(|u| (u, n_class))).unwrap();
            let class: Vec<usize> = (0..n_class).collect();
            let hits: u32 = (0..trials)
                .into_par_iter()
                .map(|trial| {
                    let mut s = OracleSession::new(&g);
                    let mut rng =
                        ChaCha8Rng::seed_from_u64(0x4000_0000 + (n_class * 31 + k) as u64);
                    rng.set_stream(u64::from(trial));
                    match find_conflict(&mut s, n_class, &class, &mut rng).unwrap() {
                        Some(u) => {
                            assert!(u < k, "false positive: {u} is not a neighbor");
                            1
                        }
                        None => 0,
                    }
                })
                .sum();
            let rate = f64::from(hits) / f64::from(trials);
            let sigma = (rate * (1.0 - rate) / f64::from(trials)).sqrt();
            assert!(
                rate >= 2.0 / 3.0 - 3.0 * sigma,
                "cell (N={n_class}, k={k}): success {rate:.4} below 2/3 - 3 sigma"
            );
            println!("criterion 4 cell (N={n_class:3}, k={k}): success {rate:.4}");
        }
    }
    println!("criterion 4 PASS: all grid cells >= 2/3 - 3 sigma, no false positives");
}

// Criterion 5: closed-form success probabilities match the statevector
// reference within 1e-9 over the exhaustive grid N <= 256, k <= N, r <= 50.
#[test]
fn criterion_5_grover_simulator_exactness() {
    let worst = (1..=256usize)
        .into_par_iter()
        .map(|n| {
            let mut worst = 0.0f64;
            for k in 0..=n {
                let marked: Vec<usize> = (0..k).collect();
                // March the statevector once, checking every r on the way.
                let mut probs = statevector_reference(n, &marked, 0).unwrap();
                for r in 0..=50u64 {
                    if r > 0 {
                        probs = statevector_reference(n, &marked, r).unwrap();
                    }
                    let mass: f64 = marked.iter().map(|&m| probs[m]).sum();
                    let closed = grover_success_prob(n, k, r).unwrap();
                    worst = worst.max((mass - closed).abs());
                }
            }
            worst
        })
        .reduce(|| 0.0, f64::max);
    assert!(
        worst <= 1e-9,
        "worst closed-form gap {worst:e} exceeds 1e-9"
    );
    println!("criterion 5 PASS: worst |closed form - statevector| = {worst:.2e}");
}

// Criterion 6: at n = 2048, delta = n/2, eps = 1, at least 99% of 1000
// seeded runs finish under the halting budget with a proper coloring, and
// every emitted coloring validates.
#[test]
fn criterion_6_quantum_color_reliability() {
    let (n, delta) = (2048usize, 1024usize);
    let g = gen_regular_like(n, delta, 4242).unwrap();
    let params = EpsilonParams::new(n, delta, eps("1")).unwrap();
    let budget = budget_values(n, delta, eps("1")).unwrap();
    let outcomes: Vec<(bool, bool)> = (0..1000u64)
        .into_par_iter()
        .map(|seed| {
            let mut s = OracleSession::new(&g);
            let out = quantum_color(&mut s, &params, seed).unwrap();
            assert!(out.paper_charge <= budget.total || out.failed());
            match out.coloring {
                Some(col) => {
                    let proper = validate_coloring(&g, &col).unwrap().proper;
                    assert!(proper, "emitted coloring fails validation at seed {seed}");
                    (true, proper)
                }
                None => (false, false),
            }
        })
        .collect();
    let good = outcomes.iter().filter(|&&(done, ok)| done && ok).count();
    assert!(
        good >= 990,
        "only {good}/1000 runs finished under budget with a proper coloring"
    );
    println!("criterion 6 PASS: {good}/1000 proper colorings under budget T");
}

// Criterion 7: the budget quantities reproduce their defining formulas on
// hand-evaluated cells.
#[test]
fn criterion_7_budget_arithmetic() {
    let b = budget_values(1024, 512, eps("1")).unwrap();
    assert!((b.total - 900.0 * 1024.0 * std::f64::consts::SQRT_2).abs() < 1e-6);
    assert!((b.per_call_charge - 20.0 * std::f64::consts::SQRT_2).abs() < 1e-12);
    assert!((b.small_class_threshold - 4.0).abs() < 1e-12);
    assert!((b.per_vertex - b.total / 1024.0).abs() < 1e-9);

    let b = budget_values(1024, 64, eps("0.5")).unwrap();
    assert!((b.small_class_threshold - 64.0).abs() < 1e-12);
    let expect_total = 9.0 * 0.5f64.powf(-1.5) * 100.0 * (1024f64.powi(3) / 64.0).sqrt();
    assert!((b.total - expect_total).abs() < 1e-6);

    for (n, d, e) in [(100usize, 10usize, "2"), (4096, 64, "0.25"), (17, 5, "1")] {
        let b = budget_values(n, d, eps(e)).unwrap();
        assert!((b.per_vertex - b.total / n as f64).abs() <= 1e-9 * b.per_vertex.abs());
    }
    println!("criterion 7 PASS: budget quantities match hand-evaluated formulas");
}

// Criterion 8: both dispatchers pick greedy exactly per their thresholds,
// probed exhaustively at +/-1 around every boundary, plus end-to-end route
// signatures on boundary graphs.
#[test]
fn criterion_8_dispatch_boundaries() {
    let grid = ["0.25", "0.5", "1", "2", "3"];
    for e in grid {
        let epsilon = eps(e);
        let (num, den) = (epsilon.numerator() as u128, epsilon.denominator() as u128);
        for n in 1usize..=400 {
            let mut prev = true;
            for delta in 1..=n {
                let classical = greedy_route(n, delta, epsilon);
                let d = delta as u128;
                let expect = d * d * num <= n as u128 * den || d * num < den;
                assert_eq!(
                    classical, expect,
                    "classical route at (n={n}, d={delta}, e={e})"
                );
                assert!(!(classical && !prev), "classical route not downward closed");
                prev = classical;

                let quantum = greedy_route_quantum(n, delta, epsilon);
                let cube = (d * num).pow(3);
                let expect = cube < n as u128 * den.pow(3);
                assert_eq!(
                    quantum, expect,
                    "quantum route at (n={n}, d={delta}, e={e})"
                );
            }
        }
    }

    // End to end: at n=18, eps=1 the classical crossover is delta=4.
    let at = gen_regular_like(18, 4, 1).unwrap();
    let mut s = OracleSession::new(&at);
    color_auto(&mut s, eps("1"), 0).unwrap();
    assert_eq!(
        s.snapshot().pair,
        0,
        "delta at crossover must color greedily"
    );
    let above = gen_regular_like(18, 5, 1).unwrap();
    let mut s = OracleSession::new(&above);
    color_auto(&mut s, eps("1"), 0).unwrap();
    assert!(
        s.snapshot().pair > 0,
        "delta above crossover must go randomized"
    );

    // Quantum crossover at n=66, eps=1 sits between delta=4 (4^3 < 66) and 5.
    let at = gen_regular_like(66, 4, 1).unwrap();
    let mut s = OracleSession::new(&at);
    quantum_color_auto(&mut s, eps("1"), 0).unwrap();
    assert_eq!(s.snapshot().quantum, 0);
    let above = gen_regular_like(66, 5, 1).unwrap();
    let mut s = OracleSession::new(&above);
    quantum_color_auto(&mut s, eps("1"), 0).unwrap();
    assert!(s.snapshot().quantum > 0);

    println!("criterion 8 PASS: dispatch rules exact at all boundaries");
}

// Criterion 9: on single-edge graphs every algorithm colors the two
// endpoints differently, and the amplified search over S = V \ {v} locates
// the edge in 10^5 of 10^5 trials at n = 256.
#[test]
fn criterion_9_single_edge_family() {
    let n = 256;
    let (i, j) = (37usize, 201usize);
    let g = gen_single_edge(n, i, j).unwrap();
    let params = EpsilonParams::new(n, 1, eps("1")).unwrap();

    let mut colorings: Vec<(&str, Coloring)> = Vec::new();
    let mut s = OracleSession::new(&g);
    let delta = discover_max_degree(&mut s).unwrap();
    assert_eq!(delta, 1);
    colorings.push(("greedy", greedy_color(&mut s, delta).unwrap()));
    let mut s = OracleSession::new(&g);
    colorings.push(("lv", lv_color(&mut s, &params, 7).unwrap()));
    let mut s = OracleSession::new(&g);
    colorings.push((
        "mc",
        mc_color(&mut s, &params, 7, 2)
            .coloring()
            .expect("cap is generous"),
    ));
    let mut s = OracleSession::new(&g);
    colorings.push((
        "quantum",
        quantum_color(&mut s, &params, 7)
            .unwrap()
            .coloring
            .expect("budget is generous"),
    ));
    let mut s = OracleSession::new(&g);
    colorings.push(("auto-classical", color_auto(&mut s, eps("1"), 7).unwrap()));
    let mut s = OracleSession::new(&g);
    colorings.push((
        "auto-quantum",
        quantum_color_auto(&mut s, eps("1"), 7).unwrap().coloring,
    ));
    for (name, col) in &colorings {
        assert!(
            validate_coloring(&g, col).unwrap().proper,
            "{name} output is improper"
        );
        assert_ne!(col.get(i), col.get(j), "{name} merged the edge endpoints");
    }

    // Amplified search from endpoint i over everything else.
    let class: Vec<usize> = (0..n).filter(|&u| u != i).collect();
    let failures: u32 = (0..100_000u32)
        .into_par_iter()
        .map(|trial| {
            let mut s = OracleSession::new(&g);
            let mut rng = ChaCha8Rng::seed_from_u64(0x51ed);
            rng.set_stream(u64::from(trial));
            match find_conflict_amplified(&mut s, i, &class, &mut rng).unwrap() {
                Some(u) => {
                    assert_eq!(u, j, "false positive {u}");
                    0
                }
                None => 1,
            }
        })
        .sum();
    assert_eq!(
        failures, 0,
        "amplified search missed the edge {failures} times"
    );
    println!("criterion 9 PASS: 6 algorithms proper; 0 misses in 100000 amplified searches");
}
