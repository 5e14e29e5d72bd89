//! Brute-force references shared by the integration tests. Nothing here calls
//! into the matrix-power or matching code it is used to check.

#![allow(dead_code)]

use graph_sampen::Graph;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Adjacency as nested vectors, read edge by edge.
pub fn dense_adjacency(g: &Graph) -> Vec<Vec<f64>> {
    let n = g.n_nodes();
    let mut a = vec![vec![0.0; n]; n];
    for i in 0..n {
        for (j, w) in g.out_edges(i) {
            a[i][j] = w;
        }
    }
    a
}

/// Sum over all walks of exactly `len` edges from `from` to `to` of the
/// product of their edge weights, by recursive traversal.
pub fn walk_weight(adj: &[Vec<f64>], from: usize, to: usize, len: usize) -> f64 {
    if len == 0 {
        return if from == to { 1.0 } else { 0.0 };
    }
    let mut total = 0.0;
    for (k, &w) in adj[from].iter().enumerate() {
        if w != 0.0 {
            total += w * walk_weight(adj, k, to, len - 1);
        }
    }
    total
}

/// Every walk of exactly `len` edges starting at `from`, as (endpoint, weight).
pub fn enumerate_walks(adj: &[Vec<f64>], from: usize, len: usize) -> Vec<(usize, f64)> {
    let mut out = Vec::new();
    fn go(adj: &[Vec<f64>], at: usize, left: usize, weight: f64, out: &mut Vec<(usize, f64)>) {
        if left == 0 {
            out.push((at, weight));
            return;
        }
        for (k, &w) in adj[at].iter().enumerate() {
            if w != 0.0 {
                go(adj, k, left - 1, weight * w, out);
            }
        }
    }
    go(adj, from, len, 1.0, &mut out);
    out
}

/// Walk-multiplicity weighted average of the signal at walk endpoints.
pub fn walk_average(adj: &[Vec<f64>], x: &[f64], from: usize, len: usize) -> Option<f64> {
    if len == 0 {
        return Some(x[from]);
    }
    let walks = enumerate_walks(adj, from, len);
    let total: f64 = walks.iter().map(|w| w.1).sum();
    if walks.is_empty() || total == 0.0 {
        return None;
    }
    Some(walks.iter().map(|&(j, w)| w * x[j]).sum::<f64>() / total)
}

/// Nodes with at least one walk of each length 1..=m.
pub fn brute_valid_nodes(adj: &[Vec<f64>], m: usize) -> Vec<usize> {
    (0..adj.len())
        .filter(|&i| (1..=m).all(|len| !enumerate_walks(adj, i, len).is_empty()))
        .collect()
}

pub fn cheb(u: &[f64], v: &[f64]) -> f64 {
    let mut d: f64 = 0.0;
    for k in 0..u.len() {
        let diff = (u[k] - v[k]).abs();
        if diff > d {
            d = diff;
        }
    }
    d
}

/// Ordered-pair match counts at length m and m+1 by exhaustive double loop.
pub fn naive_counts(short: &[Vec<f64>], long: &[Vec<f64>], eps: f64) -> (u64, u64) {
    let n = short.len();
    let (mut b, mut a) = (0, 0);
    for i in 0..n {
        for j in 0..n {
            if i == j {
                continue;
            }
            if cheb(&short[i], &short[j]) <= eps {
                b += 1;
            }
            if cheb(&long[i], &long[j]) <= eps {
                a += 1;
            }
        }
    }
    (b, a)
}

pub fn pop_sd(x: &[f64]) -> f64 {
    let n = x.len() as f64;
    let mean = x.iter().sum::<f64>() / n;
    (x.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / n).sqrt()
}

/// Classical sample entropy straight from the series: N - m templates for
/// both lengths, unordered pairs, inclusive threshold.
pub fn naive_classical(x: &[f64], m: usize, r: f64) -> (u64, u64, Option<f64>) {
    let eps = r * pop_sd(x);
    let count = x.len() - m;
    let (mut b, mut a) = (0u64, 0u64);
    for i in 0..count {
        for j in i + 1..count {
            let mut d = 0.0f64;
            for k in 0..m {
                d = d.max((x[i + k] - x[j + k]).abs());
            }
            if d <= eps {
                b += 2;
                if (x[i + m] - x[j + m]).abs() <= eps {
                    a += 2;
                }
            }
        }
    }
    let value = (a > 0).then(|| -((a as f64) / (b as f64)).ln());
    (b, a, value)
}

pub fn uniform_series(seed: u64, n: usize) -> Vec<f64> {
    let mut r = rng(seed);
    (0..n).map(|_| r.gen::<f64>()).collect()
}

/// Random graph on `n` nodes with independent edge probability `p`.
pub fn random_graph(seed: u64, n: usize, p: f64, directed: bool, weighted: bool) -> Graph {
    let mut r = rng(seed);
    let mut edges = Vec::new();
    for i in 0..n {
        let start = if directed { 0 } else { i };
        for j in start..n {
            let allow_loop = i == j && r.gen_bool(0.1);
            if (i != j || allow_loop) && r.gen_bool(p) {
                let w = if weighted { r.gen_range(0.1..3.0) } else { 1.0 };
                edges.push((i, j, w));
            }
        }
    }
    Graph::from_edges(n, directed, edges).unwrap()
}

pub fn random_permutation(seed: u64, n: usize) -> Vec<usize> {
    use rand::seq::SliceRandom;
    let mut p: Vec<usize> = (0..n).collect();
    p.shuffle(&mut rng(seed));
    p
}
