//! End-to-end checks of the `qcolor` binary: gen → color → bench →
//! calibrate-grover, including the CSV determinism contract.

use std::fs;
use std::path::PathBuf;
use std::process::{Command, Output};

fn qcolor(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qcolor"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn workdir(tag: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("qcolor-cli-{}-{tag}", std::process::id()));
    fs::create_dir_all(&dir).unwrap();
    dir
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

/// CSV lines with the trailing elapsed_ms column removed; timing is the one
/// field outside the determinism contract.
fn data_columns(path: &PathBuf) -> Vec<String> {
    fs::read_to_string(path)
        .unwrap()
        .lines()
        .map(|l| l.rsplit_once(',').unwrap().0.to_string())
        .collect()
}

#[test]
fn gen_writes_canonical_edge_list() {
    let dir = workdir("gen");
    let out = dir.join("k5ish.edges");
    let run = qcolor(&[
        "gen",
        "--family",
        "regular:4",
        "--n",
        "5",
        "--seed",
        "3",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert!(
        run.status.success(),
        "{}",
        String::from_utf8_lossy(&run.stderr)
    );
    let text = fs::read_to_string(&out).unwrap();
    assert_eq!(
        text,
        "5\n0 1\n0 2\n0 3\n0 4\n1 2\n1 3\n1 4\n2 3\n2 4\n3 4\n"
    );
    assert!(stdout(&run).contains("delta=4"));
    fs::remove_dir_all(&dir).ok();
}

#[test]
fn color_greedy_on_single_edge_leaves_isolated_vertices_on_color_one() {
    let dir = workdir("color");
    let graph = dir.join("g.edges");
    fs::write(&graph, "16\n2 5\n").unwrap();
    let coloring = dir.join("g.coloring");
    let run = qcolor(&[
        "color",
        graph.to_str().unwrap(),
        "--algo",
        "greedy",
        "--out",
        coloring.to_str().unwrap(),
    ]);
    assert!(
        run.status.success(),
        "{}",
        String::from_utf8_lossy(&run.stderr)
    );
    let got = fs::read_to_string(&coloring).unwrap();
    let expect: String = (0..16)
        .map(|v| format!("{v} {}\n", if v == 5 { 2 } else { 1 }))
        .collect();
    assert_eq!(got, expect);
    assert!(stdout(&run).contains("proper=true"));
    fs::remove_dir_all(&dir).ok();
}

#[test]
fn color_rejects_missing_graph_file() {
    let run = qcolor(&[
        "color",
        "/nonexistent/graph.edges",
        "--algo",
        "greedy",
        "--out",
        "/tmp/never-written.coloring",
    ]);
    assert!(!run.status.success());
    assert_ne!(run.status.code(), Some(0));
}

#[test]
fn bench_single_cell_emits_one_valid_row() {
    let dir = workdir("bench-one");
    let out = dir.join("rows.csv");
    let run = qcolor(&[
        "bench",
        "--family",
        "gnp:0.5",
        "--n",
        "8",
        "--epsilon",
        "1",
        "--algo",
        "greedy",
        "--trials",
        "1",
        "--seed",
        "0",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert!(
        run.status.success(),
        "{}",
        String::from_utf8_lossy(&run.stderr)
    );
    let lines: Vec<String> = fs::read_to_string(&out)
        .unwrap()
        .lines()
        .map(String::from)
        .collect();
    assert_eq!(lines.len(), 2);
    assert_eq!(
        lines[0],
        "schema,algo,family,n,delta,epsilon,seed,pair_q,nbr_q,quantum_q,paper_charge,valid,failed,elapsed_ms"
    );
    assert!(lines[1].contains(",true,false,"));
    fs::remove_dir_all(&dir).ok();
}

#[test]
fn bench_reruns_reproduce_every_data_column() {
    let dir = workdir("bench-det");
    let (a, b) = (dir.join("a.csv"), dir.join("b.csv"));
    for out in [&a, &b] {
        let run = qcolor(&[
            "bench",
            "--family",
            "regular:8",
            "--n",
            "32,64",
            "--epsilon",
            "0.5,1",
            "--algo",
            "greedy,lv,mc,quantum,auto-classical,auto-quantum",
            "--trials",
            "3",
            "--seed",
            "42",
            "--out",
            out.to_str().unwrap(),
        ]);
        assert!(
            run.status.success(),
            "{}",
            String::from_utf8_lossy(&run.stderr)
        );
    }
    let rows = data_columns(&a);
    assert_eq!(rows, data_columns(&b));
    // 2 sizes x 2 eps x 6 algos x 3 trials, plus the header.
    assert_eq!(rows.len(), 1 + 2 * 2 * 6 * 3);
    for row in rows.iter().skip(1) {
        if row.contains(",greedy,") || row.contains(",lv,") {
            assert!(row.contains(",true,false"), "invalid las-vegas row: {row}");
        }
    }
    fs::remove_dir_all(&dir).ok();
}

#[test]
fn bench_budget_exhaustion_marks_trials_failed() {
    let dir = workdir("bench-budget");
    let out = dir.join("capped.csv");
    let run = qcolor(&[
        "bench",
        "--family",
        "gnp:0.5",
        "--n",
        "32",
        "--epsilon",
        "1",
        "--algo",
        "greedy,lv",
        "--trials",
        "2",
        "--seed",
        "1",
        "--budget",
        "10",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert!(run.status.success(), "{}", String::from_utf8_lossy(&run.stderr));
    let text = fs::read_to_string(&out).unwrap();
    for row in text.lines().skip(1) {
        assert!(row.contains(",false,true,"), "capped row not failed: {row}");
    }
    fs::remove_dir_all(&dir).ok();
}

#[test]
fn bench_config_file_matches_flags() {
    let dir = workdir("bench-cfg");
    let (by_cfg, by_flags) = (dir.join("cfg.csv"), dir.join("flags.csv"));
    let cfg = dir.join("grid.cfg");
    fs::write(
        &cfg,
        format!(
            "family = gnp:0.25\nsizes = 16\nepsilons = 1\nalgorithms = lv\ntrials = 4\nseed = 7\nout = {}\n",
            by_cfg.display()
        ),
    )
    .unwrap();
    let run = qcolor(&["bench", "--config", cfg.to_str().unwrap()]);
    assert!(
        run.status.success(),
        "{}",
        String::from_utf8_lossy(&run.stderr)
    );
    let run = qcolor(&[
        "bench",
        "--family",
        "gnp:0.25",
        "--n",
        "16",
        "--epsilon",
        "1",
        "--algo",
        "lv",
        "--trials",
        "4",
        "--seed",
        "7",
        "--out",
        by_flags.to_str().unwrap(),
    ]);
    assert!(
        run.status.success(),
        "{}",
        String::from_utf8_lossy(&run.stderr)
    );
    assert_eq!(data_columns(&by_cfg), data_columns(&by_flags));
    fs::remove_dir_all(&dir).ok();
}

#[test]
fn calibrate_grover_reports_exact_and_null_cells() {
    let dir = workdir("calibrate");
    let out = dir.join("cal.csv");
    let run = qcolor(&[
        "calibrate-grover",
        "--sizes",
        "4,8",
        "--marked",
        "0,1",
        "--trials",
        "400",
        "--seed",
        "5",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert!(
        run.status.success(),
        "{}",
        String::from_utf8_lossy(&run.stderr)
    );
    let text = fs::read_to_string(&out).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(
        lines[0],
        "n_class,k,trials,successes,empirical,predicted,abs_gap,flagged"
    );
    // (4, 1) rotates exactly onto the marked side: all 400 hits.
    assert!(lines.iter().any(|l| l.starts_with("4,1,400,400,")));
    // k = 0 rows never succeed and are never flagged.
    for line in lines.iter().filter(|l| l.contains(",0,400,")) {
        assert!(line.ends_with("false"));
    }
    assert!(stdout(&run).contains("0 flagged"));
    fs::remove_dir_all(&dir).ok();
}
