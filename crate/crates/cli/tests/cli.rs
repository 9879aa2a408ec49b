use std::fs;
use std::process::{Command, Output};

use gossip_bounds_core::experiments::{FIG1_HEADER, FIG2_HEADER};
use gossip_bounds_core::gossip::ErrorSeries;
use gossip_bounds_core::graph::Graph;

fn cli(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gossip-bounds"))
        .args(args)
        .output()
        .unwrap()
}

fn stdout(args: &[&str]) -> String {
    let out = cli(args);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

fn parse_graph(text: &str) -> Graph {
    Graph::load_edgelist(text.as_bytes()).unwrap()
}

#[test]
fn graph_gen_sizes() {
    let g = parse_graph(&stdout(&["graph-gen", "complete", "--nodes", "4"]));
    assert_eq!((g.node_count(), g.edge_count()), (4, 6));
    let g = parse_graph(&stdout(&["graph-gen", "chain", "--nodes", "100"]));
    assert_eq!((g.node_count(), g.edge_count()), (100, 99));
}

#[test]
fn graph_gen_ba_is_deterministic_on_disk() {
    let dir = tempfile::tempdir().unwrap();
    let paths: Vec<_> = ["a.txt", "b.txt"]
        .iter()
        .map(|name| {
            let p = dir.path().join(name);
            let args = [
                "graph-gen",
                "ba",
                "--nodes",
                "50",
                "--attach",
                "2",
                "--seed",
                "7",
            ];
            let out = cli(&[&args[..], &["--out", p.to_str().unwrap()]].concat());
            assert!(out.status.success());
            p
        })
        .collect();
    let a = fs::read(&paths[0]).unwrap();
    assert_eq!(a, fs::read(&paths[1]).unwrap());
    let g = parse_graph(std::str::from_utf8(&a).unwrap());
    assert_eq!(g.edge_count(), 3 + 47 * 2);
    assert!(g.is_connected());
}

#[test]
fn single_node_diffusion_takes_no_messages() {
    let text = stdout(&["diffusion", "--nodes", "1", "--trials", "5"]);
    let trials: Vec<&str> = text
        .split("trial,t_final\n")
        .nth(1)
        .unwrap()
        .lines()
        .collect();
    assert_eq!(trials, ["0,0", "1,0", "2,0", "3,0", "4,0"]);
}

#[test]
fn diffusion_writes_stats_next_to_bounds() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    let status = cli(&[
        "diffusion",
        "--nodes",
        "100",
        "--trials",
        "50",
        "--seed",
        "11",
        "--out",
        out,
    ]);
    assert!(status.status.success());
    let stats = fs::read_to_string(dir.path().join("stats.csv")).unwrap();
    let row: Vec<f64> = stats
        .lines()
        .nth(1)
        .unwrap()
        .split(',')
        .map(|v| v.parse().unwrap())
        .collect();
    let (mean, std, per_node) = (row[2], row[3], row[9]);
    // Exact mean per node is 10.2512; allow four standard errors.
    assert!((per_node - 10.2512).abs() <= 4.0 * std / (50f64.sqrt() * 100.0));
    assert_eq!(mean / 100.0, per_node);

    let bounds = fs::read_to_string(dir.path().join("bounds.csv")).unwrap();
    assert!(bounds.contains("node-uniform,exact-complete"));
    assert!(bounds.contains("complete/principal") && bounds.contains("complete/paper-literal"));
    assert!(bounds.contains("edge-uniform,cheeger-lower"));
    let trials = fs::read_to_string(dir.path().join("trials.csv")).unwrap();
    assert_eq!(trials.lines().count(), 51);
}

#[test]
fn loads_graph_files() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("g.txt");
    fs::write(&path, stdout(&["graph-gen", "chain", "--nodes", "6"])).unwrap();
    let report = stdout(&[
        "bounds-report",
        "--graph",
        path.to_str().unwrap(),
        "--variant",
        "principal",
    ]);
    let lines: Vec<&str> = report.lines().collect();
    assert_eq!(lines.len(), 3);
    assert!(lines[1].ends_with("cheeger/principal"));
    assert!(lines[2].ends_with("spectral/principal"));
}

#[test]
fn reproduce_writes_csv_and_svg() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    let base = ["--sizes", "10,20", "--trials", "10", "--out", out];
    for fig in ["fig1", "fig2"] {
        let res = cli(&[&["reproduce", fig, "--svg"][..], &base].concat());
        assert!(
            res.status.success(),
            "{}",
            String::from_utf8_lossy(&res.stderr)
        );
    }
    let fig1 = fs::read_to_string(dir.path().join("fig1.csv")).unwrap();
    assert!(fig1.starts_with(FIG1_HEADER));
    assert_eq!(fig1.lines().count(), 3);
    let fig2 = fs::read_to_string(dir.path().join("fig2.csv")).unwrap();
    assert!(fig2.starts_with(FIG2_HEADER));
    assert!(fs::read_to_string(dir.path().join("fig2.svg"))
        .unwrap()
        .starts_with("<svg"));

    let res = cli(&["reproduce", "fig3", "--sizes", "12", "--out", out]);
    assert!(res.status.success());
    let fig3 = fs::read_to_string(dir.path().join("fig3.csv")).unwrap();
    assert!(fig3.starts_with(ErrorSeries::CSV_HEADER));
    assert_eq!(fig3.lines().count(), 1 + 1 + 50 * 12);
    assert!(!dir.path().join("fig3.svg").exists());
}

#[test]
fn gossip_trace_without_matrix_reports_inf_bounds() {
    let text = stdout(&[
        "gossip-trace",
        "--nodes",
        "8",
        "--steps",
        "10",
        "--no-matrix",
    ]);
    let last = text.lines().last().unwrap();
    assert!(last.starts_with("10,"));
    assert!(last.contains(",inf,inf,"));
}

#[test]
fn exit_codes() {
    assert_eq!(cli(&["--help"]).status.code(), Some(0));
    assert_eq!(cli(&["--version"]).status.code(), Some(0));
    assert_eq!(cli(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(
        cli(&["diffusion", "--sampling", "sideways", "--nodes", "3"])
            .status
            .code(),
        Some(1)
    );
    assert_eq!(cli(&["diffusion"]).status.code(), Some(1));
    assert_eq!(
        cli(&["reproduce", "fig1", "--delta", "1.5"]).status.code(),
        Some(1)
    );
    let missing = cli(&["bounds-report", "--graph", "/nonexistent/graph.txt"]);
    assert_eq!(missing.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&missing.stderr).contains("error:"));
    assert!(missing.stdout.is_empty());
}

#[test]
fn disconnected_graph_is_a_runtime_error() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("g.txt");
    fs::write(&path, "4 2\n0 1\n2 3\n").unwrap();
    let out = cli(&["diffusion", "--graph", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
}
