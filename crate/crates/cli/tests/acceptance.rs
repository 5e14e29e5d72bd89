//! Acceptance suite. Each test covers one criterion and prints a single
//! `[PASS]`/`[FAIL]` line; run with `--nocapture` to see them all.

use std::fs;
use std::path::Path;
use std::process::Command;
use std::time::Instant;

use graph_sampen::experiments::{er_realisation, run_er_sweep, run_logistic_sweep, ErSweepConfig, LogisticSweepConfig};
use graph_sampen::io::{EntropyCell, RowKind, SweepRecord};
use graph_sampen::synthetic::{er_digraph, path_graph, uniform_signal, ERConfig};
use graph_sampen::{
    build_embeddings, build_hop_structure, classical_sampen, match_counts_with, sampen_graph, EntropyValue, Graph,
    GraphSignal, MatchKernel, SampEnParams,
};

fn verdict(id: u32, name: &str, ok: bool, detail: &str) {
    let tag = if ok { "PASS" } else { "FAIL" };
    println!("[{tag}] criterion {id}: {name}: {detail}");
    assert!(ok, "criterion {id} ({name}) failed: {detail}");
}

fn summary_mean(rows: &[SweepRecord], variant: &str, param: f64, m: usize) -> f64 {
    let row = rows
        .iter()
        .find(|r| r.row_kind == RowKind::Summary && r.variant == variant && r.param_value == param && r.m == m)
        .unwrap_or_else(|| panic!("no summary for {variant} {param} m={m}"));
    match row.entropy {
        EntropyCell::Value(v) => v,
        other => panic!("summary entropy undefined: {other:?}"),
    }
}

#[test]
fn c1_directed_path_reduces_to_classical() {
    let mut worst: f64 = 0.0;
    let mut all_defined = true;
    for seed in 0..100u64 {
        let x = uniform_signal(1000, 0.0, 1.0, seed).unwrap();
        let g = path_graph(1000, true).unwrap();
        let graph = sampen_graph(&g, &x, 2, 0.2).unwrap();
        let classical = classical_sampen(x.values(), 2, 0.2).unwrap();
        match (graph.value, classical.value) {
            (EntropyValue::Defined(a), EntropyValue::Defined(b)) => worst = worst.max((a - b).abs()),
            _ => all_defined = false,
        }
    }
    verdict(
        1,
        "path reduction",
        all_defined && worst <= 1e-12,
        &format!("max |graph - classical| = {worst:e} over 100 series (tol 1e-12)"),
    );
}

#[test]
fn c2_logistic_order_chaos_sensitivity() {
    let start = Instant::now();
    let mut means = Vec::new();
    for rho in [3.2, 3.5, 3.9] {
        let cfg = LogisticSweepConfig {
            rho_min: rho,
            rho_max: rho,
            n_seeds: 20,
            record_timing: false,
            ..Default::default()
        };
        let rows = run_logistic_sweep(&cfg).unwrap();
        means.push(summary_mean(&rows, "directed_path", rho, 2));
    }
    let secs = start.elapsed().as_secs_f64();
    let (p2, p4, chaos) = (means[0], means[1], means[2]);
    let ok = p2 <= 0.01 && chaos >= 0.3 && chaos > p4 && p4 > p2 && secs < 60.0;
    verdict(
        2,
        "logistic sensitivity",
        ok,
        &format!(
            "mean SampEn_G rho=3.2: {p2:.6} (<= 0.01), rho=3.5: {p4:.6}, rho=3.9: {chaos:.6} (>= 0.3); \
             need 3.9 > 3.5 > 3.2; {secs:.1} s (< 60 s)"
        ),
    );
}

#[test]
fn c3_er_connectivity_monotonicity() {
    let cfg = ErSweepConfig {
        n_nodes: 2700,
        k_values: vec![3.0, 4.0, 5.0, 6.0, 12.0],
        m_values: vec![2, 3],
        r: 0.2,
        n_realisations: 20,
        record_timing: false,
        ..Default::default()
    };
    let rows = run_er_sweep(&cfg).unwrap();
    let m2: Vec<f64> = [3.0, 4.0, 5.0, 6.0]
        .iter()
        .map(|&k| summary_mean(&rows, "graph", k, 2))
        .collect();
    let decreasing = m2.windows(2).all(|w| w[1] < w[0]);
    let (k3, k12) = (
        summary_mean(&rows, "graph", 3.0, 3),
        summary_mean(&rows, "graph", 12.0, 3),
    );
    verdict(
        3,
        "ER monotonicity",
        decreasing && k12 * 2.0 <= k3,
        &format!("m=2 means for K=3..6: {m2:.4?} (strictly decreasing); m=3: K=3 {k3:.4}, K=12 {k12:.6} (ratio >= 2)"),
    );
}

#[test]
fn c4_runtime_envelope() {
    let (g, x) = er_realisation(2700, 10.0, 0, 0).unwrap();
    let mut times = Vec::new();
    for m in 1..=3 {
        let start = Instant::now();
        let res = sampen_graph(&g, &x, m, 0.2).unwrap();
        let ms = start.elapsed().as_secs_f64() * 1e3;
        println!("  N=2700 K=10 m={m}: {ms:.1} ms, entropy {}", res.value);
        times.push(ms);
    }
    verdict(
        4,
        "runtime envelope",
        times[2] <= 30_000.0,
        &format!(
            "m=1 {:.1} ms, m=2 {:.1} ms, m=3 {:.1} ms (bound 30 s for m=3)",
            times[0], times[1], times[2]
        ),
    );
}

/// Sum over walks of exactly `len` edges by recursive traversal.
fn walk_count(adj: &[Vec<f64>], from: usize, to: usize, len: usize) -> f64 {
    if len == 0 {
        return if from == to { 1.0 } else { 0.0 };
    }
    (0..adj.len())
        .filter(|&k| adj[from][k] != 0.0)
        .map(|k| adj[from][k] * walk_count(adj, k, to, len - 1))
        .sum()
}

fn dense(g: &Graph) -> Vec<Vec<f64>> {
    let mut a = vec![vec![0.0; g.n_nodes()]; g.n_nodes()];
    for i in 0..g.n_nodes() {
        for (j, w) in g.out_edges(i) {
            a[i][j] = w;
        }
    }
    a
}

fn undirected_copy(g: &Graph) -> Graph {
    let mut edges: Vec<(usize, usize)> = g.edge_list().iter().map(|&(u, v, _)| (u.min(v), u.max(v))).collect();
    edges.sort_unstable();
    edges.dedup();
    Graph::from_unweighted_edges(g.n_nodes(), false, edges).unwrap()
}

fn naive_pair_counts(short: &[Vec<f64>], long: &[Vec<f64>], eps: f64) -> (u64, u64) {
    let cheb = |u: &[f64], v: &[f64]| u.iter().zip(v).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
    let (mut b, mut a) = (0, 0);
    for i in 0..short.len() {
        for j in 0..short.len() {
            if i != j {
                b += (cheb(&short[i], &short[j]) <= eps) as u64;
                a += (cheb(&long[i], &long[j]) <= eps) as u64;
            }
        }
    }
    (b, a)
}

#[test]
fn c5_oracle_suites() {
    let mut walk_mismatch = 0;
    for seed in 0..50u64 {
        let n = 3 + (seed as usize % 6);
        let mut g = er_digraph(&ERConfig::new(n, 0.4 * (n - 1) as f64, seed)).unwrap();
        if seed % 2 == 1 {
            g = undirected_copy(&g);
        }
        let hops = build_hop_structure(&g, 4).unwrap();
        let adj = dense(&g);
        for len in 1..=4 {
            for i in 0..n {
                for j in 0..n {
                    if hops.power(len).get(i, j) != walk_count(&adj, i, j, len) {
                        walk_mismatch += 1;
                    }
                }
            }
        }
    }

    let mut kernel_mismatch = 0;
    let mut instances = 0;
    let mut largest = 0;
    for seed in 0..50u64 {
        let n = 20 + (seed as usize * 53) % 181;
        let m = 1 + seed as usize % 3;
        let g = er_digraph(&ERConfig::new(n, 4.0, 500 + seed)).unwrap();
        let x = uniform_signal(n, 0.01, 0.10, 900 + seed).unwrap();
        let hops = build_hop_structure(&g, m).unwrap();
        let emb = build_embeddings(&hops, &x, m).unwrap();
        let params = SampEnParams::for_signal(m, 0.2, &x).unwrap();
        let short: Vec<Vec<f64>> = emb.patterns_m().map(<[f64]>::to_vec).collect();
        let long: Vec<Vec<f64>> = emb.patterns_m1().map(<[f64]>::to_vec).collect();
        let want = naive_pair_counts(&short, &long, params.epsilon());
        for kernel in [MatchKernel::Direct, MatchKernel::SortedWindow] {
            let c = match_counts_with(&emb, &params, kernel, false).unwrap();
            if (c.b_matches, c.a_matches) != want {
                kernel_mismatch += 1;
            }
        }
        instances += 1;
        largest = largest.max(emb.n_valid());
    }
    verdict(
        5,
        "oracle suites",
        walk_mismatch == 0 && kernel_mismatch == 0 && largest <= 200,
        &format!(
            "(a) {walk_mismatch} walk-count mismatches over 50 graphs, L <= 4; \
             (b) {kernel_mismatch} kernel mismatches over {instances} instances (max {largest} valid nodes)"
        ),
    );
}

#[test]
fn c6_invariance_suite() {
    let mut failures = Vec::new();
    let mut checked = 0;
    for seed in 0..30u64 {
        let n = 30 + (seed as usize % 5) * 20;
        let mut g = er_digraph(&ERConfig::new(n, 3.0 + (seed % 4) as f64, seed)).unwrap();
        if seed % 3 == 0 {
            g = undirected_copy(&g);
        }
        let x = uniform_signal(n, 0.01, 0.10, 77 + seed).unwrap();
        let m = 1 + seed as usize % 3;
        let Ok(base) = sampen_graph(&g, &x, m, 0.2) else {
            continue;
        };
        checked += 1;

        for a in [-2.0, 0.5, 3.0] {
            for b in [-1.0, 0.0, 10.0] {
                let moved = sampen_graph(&g, &x.affine(a, b).unwrap(), m, 0.2).unwrap();
                if moved.counts != base.counts {
                    failures.push(format!("affine a={a} b={b} seed {seed}"));
                }
            }
        }

        let perm: Vec<usize> = (0..n).map(|i| (i * 7 + seed as usize) % n).collect();
        let perm = if is_permutation(&perm) {
            perm
        } else {
            (0..n).rev().collect()
        };
        let relabelled = sampen_graph(&g.permuted(&perm).unwrap(), &x.permuted(&perm).unwrap(), m, 0.2).unwrap();
        if relabelled.value != base.value {
            failures.push(format!("permutation seed {seed}"));
        }

        if base.counts.a_total > base.counts.b_total {
            failures.push(format!("a_total > b_total seed {seed}"));
        }

        let constant = GraphSignal::new(vec![0.042; n]).unwrap();
        if sampen_graph(&g, &constant, m, 0.2).unwrap().value != EntropyValue::Defined(0.0) {
            failures.push(format!("constant signal seed {seed}"));
        }
    }
    verdict(
        6,
        "invariance suite",
        failures.is_empty() && checked >= 25,
        &if failures.is_empty() {
            format!("affine, permutation, A <= B and constant-signal checks hold on {checked} instances")
        } else {
            failures.join("; ")
        },
    );
}

fn is_permutation(p: &[usize]) -> bool {
    let mut seen = vec![false; p.len()];
    p.iter().all(|&i| i < p.len() && !std::mem::replace(&mut seen[i], true))
}

fn run_cli(args: &[&str]) {
    let status = Command::new(env!("CARGO_BIN_EXE_graph-sampen"))
        .args(args)
        .stderr(std::process::Stdio::null())
        .status()
        .unwrap();
    assert!(status.success(), "{args:?} exited with {status}");
}

fn strip_runtime(path: &Path) -> Vec<String> {
    let text = fs::read_to_string(path).unwrap();
    let mut reader = csv::ReaderBuilder::new().from_reader(text.as_bytes());
    let runtime_col = reader
        .headers()
        .unwrap()
        .iter()
        .position(|h| h == "runtime_ms")
        .unwrap();
    reader
        .records()
        .map(|r| {
            let r = r.unwrap();
            r.iter()
                .enumerate()
                .filter(|(i, _)| *i != runtime_col)
                .map(|(_, f)| f)
                .collect::<Vec<_>>()
                .join(",")
        })
        .collect()
}

#[test]
fn c7_sweep_determinism() {
    let dir = tempfile::tempdir().unwrap();
    let out = |name: &str| dir.path().join(name).to_string_lossy().into_owned();
    let er = [
        "er-sweep",
        "--n-nodes",
        "300",
        "--k-list",
        "3,5,8",
        "--m-list",
        "1,2",
        "--n-realisations",
        "4",
        "--seed",
        "11",
    ];
    let logistic = [
        "logistic-sweep",
        "--rho-min",
        "3.6",
        "--rho-max",
        "3.9",
        "--rho-step",
        "0.1",
        "--n-samples",
        "300",
        "--n-seeds",
        "3",
    ];

    let mut identical = true;
    for (label, base) in [("er", &er[..]), ("logistic", &logistic[..])] {
        let mut files = Vec::new();
        for (k, threads) in ["1", "1", "4"].iter().enumerate() {
            let path = out(&format!("{label}_{k}.csv"));
            let mut args = vec!["--threads", threads];
            args.extend_from_slice(base);
            args.extend_from_slice(&["--out", &path, "--omit-timing"]);
            run_cli(&args);
            files.push(fs::read(&path).unwrap());
        }
        identical &= files.windows(2).all(|w| w[0] == w[1]);

        let mut timed = Vec::new();
        for threads in ["1", "3"] {
            let path = out(&format!("{label}_timed_{threads}.csv"));
            let mut args = vec!["--threads", threads];
            args.extend_from_slice(base);
            args.extend_from_slice(&["--out", &path]);
            run_cli(&args);
            timed.push(strip_runtime(Path::new(&path)));
        }
        identical &= timed[0] == timed[1];
    }
    verdict(
        7,
        "determinism",
        identical,
        "repeated sweeps byte-identical across runs and --threads 1/4 (timing omitted); \
         all non-timing columns identical with timing on",
    );
}
