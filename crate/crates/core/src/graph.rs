//! Graphs, adjacency powers with walk-count semantics, and hop degrees.
//!
//! Entry `(i, j)` of the `L`-th adjacency power is the number of walks of
//! exactly `L` edges from `i` to `j` (the sum of products of edge weights
//! along those walks for weighted graphs). Walks may revisit nodes and may
//! return to their origin, so on an undirected graph a node belongs to its own
//! 2-hop neighbourhood.

use rayon::prelude::*;

use crate::error::{Result, SampEnError};

/// Density (fraction of `n * n`) above which a power is stored densely.
pub const DEFAULT_DENSE_THRESHOLD: f64 = 0.25;

/// Square sparse matrix in compressed sparse row layout.
///
/// Column indices are strictly increasing within each row and every stored
/// value is non-zero.
#[derive(Debug, Clone, PartialEq)]
pub struct CsrMatrix {
    n: usize,
    row_ptr: Vec<usize>,
    col_idx: Vec<usize>,
    values: Vec<f64>,
}

impl CsrMatrix {
    /// Builds from `(row, col, value)` triplets already sorted by `(row, col)`
    /// without duplicates.
    fn from_sorted_triplets(n: usize, triplets: &[(usize, usize, f64)]) -> Self {
        let mut row_ptr = vec![0usize; n + 1];
        for &(i, _, _) in triplets {
            row_ptr[i + 1] += 1;
        }
        for i in 0..n {
            row_ptr[i + 1] += row_ptr[i];
        }
        CsrMatrix {
            n,
            row_ptr,
            col_idx: triplets.iter().map(|t| t.1).collect(),
            values: triplets.iter().map(|t| t.2).collect(),
        }
    }

    fn from_rows(n: usize, rows: Vec<(Vec<usize>, Vec<f64>)>) -> Self {
        let nnz = rows.iter().map(|r| r.0.len()).sum();
        let mut row_ptr = Vec::with_capacity(n + 1);
        let mut col_idx = Vec::with_capacity(nnz);
        let mut values = Vec::with_capacity(nnz);
        row_ptr.push(0);
        for (cols, vals) in rows {
            col_idx.extend_from_slice(&cols);
            values.extend_from_slice(&vals);
            row_ptr.push(col_idx.len());
        }
        CsrMatrix {
            n,
            row_ptr,
            col_idx,
            values,
        }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn nnz(&self) -> usize {
        self.values.len()
    }

    /// Column indices and values of row `i`.
    pub fn row(&self, i: usize) -> (&[usize], &[f64]) {
        let span = self.row_ptr[i]..self.row_ptr[i + 1];
        (&self.col_idx[span.clone()], &self.values[span])
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        let (cols, vals) = self.row(i);
        match cols.binary_search(&j) {
            Ok(k) => vals[k],
            Err(_) => 0.0,
        }
    }

    /// Iterates over all stored `(row, col, value)` entries in row-major order.
    pub fn triplets(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        (0..self.n).flat_map(move |i| {
            let (cols, vals) = self.row(i);
            cols.iter().zip(vals).map(move |(&j, &v)| (i, j, v))
        })
    }

    pub fn to_dense(&self) -> Vec<Vec<f64>> {
        let mut out = vec![vec![0.0; self.n]; self.n];
        for (i, j, v) in self.triplets() {
            out[i][j] = v;
        }
        out
    }
}

/// A graph over nodes `0..n_nodes` with non-negative edge weights.
///
/// Unweighted graphs carry weight `1.0` on every edge. Undirected graphs have
/// an exactly symmetric adjacency.
#[derive(Debug, Clone, PartialEq)]
pub struct Graph {
    directed: bool,
    adjacency: CsrMatrix,
}

impl Graph {
    /// Builds a graph from weighted edges.
    ///
    /// For undirected graphs each edge `(u, v, w)` is stored in both
    /// directions; listing both `(u, v)` and `(v, u)` is a duplicate. Self
    /// loops are accepted. Duplicate edges are rejected rather than summed.
    pub fn from_edges<I>(n_nodes: usize, directed: bool, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize, f64)>,
    {
        if n_nodes == 0 {
            return Err(SampEnError::InvalidGraph("graph must have at least one node".into()));
        }
        let mut triplets = Vec::new();
        for (u, v, w) in edges {
            if u >= n_nodes || v >= n_nodes {
                return Err(SampEnError::InvalidGraph(format!(
                    "edge ({u}, {v}) references a node outside 0..{n_nodes}"
                )));
            }
            if !(w.is_finite() && w > 0.0) {
                return Err(SampEnError::InvalidGraph(format!(
                    "edge ({u}, {v}) has non-positive or non-finite weight {w}"
                )));
            }
            triplets.push((u, v, w));
            if !directed && u != v {
                triplets.push((v, u, w));
            }
        }
        triplets.sort_by_key(|&(i, j, _)| (i, j));
        if let Some(pair) = triplets.windows(2).find(|p| (p[0].0, p[0].1) == (p[1].0, p[1].1)) {
            return Err(SampEnError::InvalidGraph(format!(
                "duplicate edge ({}, {})",
                pair[0].0, pair[0].1
            )));
        }
        Ok(Graph {
            directed,
            adjacency: CsrMatrix::from_sorted_triplets(n_nodes, &triplets),
        })
    }

    /// Unit-weight graph from unweighted edges.
    pub fn from_unweighted_edges<I>(n_nodes: usize, directed: bool, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        Self::from_edges(n_nodes, directed, edges.into_iter().map(|(u, v)| (u, v, 1.0)))
    }

    pub fn n_nodes(&self) -> usize {
        self.adjacency.dim()
    }

    pub fn is_directed(&self) -> bool {
        self.directed
    }

    pub fn adjacency(&self) -> &CsrMatrix {
        &self.adjacency
    }

    pub fn n_edges(&self) -> usize {
        self.adjacency.nnz()
    }

    /// Out-neighbours of `node` with their edge weights.
    pub fn out_edges(&self, node: usize) -> impl Iterator<Item = (usize, f64)> + '_ {
        let (cols, vals) = self.adjacency.row(node);
        cols.iter().copied().zip(vals.iter().copied())
    }

    /// Edges as they would be listed in an input file: every stored entry for
    /// directed graphs, only `u <= v` for undirected ones.
    pub fn edge_list(&self) -> Vec<(usize, usize, f64)> {
        self.adjacency
            .triplets()
            .filter(|&(i, j, _)| self.directed || i <= j)
            .collect()
    }

    /// Relabels nodes so that old node `i` becomes `perm[i]`.
    pub fn permuted(&self, perm: &[usize]) -> Result<Self> {
        check_permutation(perm, self.n_nodes())?;
        let edges = self.edge_list().into_iter().map(|(i, j, w)| (perm[i], perm[j], w));
        Graph::from_edges(self.n_nodes(), self.directed, edges)
    }
}

pub(crate) fn check_permutation(perm: &[usize], n: usize) -> Result<()> {
    let mut seen = vec![false; n];
    if perm.len() != n {
        return Err(SampEnError::InvalidParameter(format!(
            "permutation has length {} for {n} nodes",
            perm.len()
        )));
    }
    for &p in perm {
        if p >= n || std::mem::replace(&mut seen[p], true) {
            return Err(SampEnError::InvalidParameter("not a permutation".into()));
        }
    }
    Ok(())
}

/// One adjacency power, stored sparsely or densely depending on its fill.
///
/// Both layouts hold identical values; the dense one simply keeps zeros.
#[derive(Debug, Clone, PartialEq)]
pub enum PowerMatrix {
    Sparse(CsrMatrix),
    Dense { n: usize, values: Vec<f64> },
}

impl PowerMatrix {
    pub fn dim(&self) -> usize {
        match self {
            PowerMatrix::Sparse(m) => m.dim(),
            PowerMatrix::Dense { n, .. } => *n,
        }
    }

    pub fn is_dense(&self) -> bool {
        matches!(self, PowerMatrix::Dense { .. })
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        match self {
            PowerMatrix::Sparse(m) => m.get(i, j),
            PowerMatrix::Dense { n, values } => values[i * n + j],
        }
    }

    /// Non-zero entries of row `i` in increasing column order.
    pub fn row_entries(&self, i: usize) -> RowEntries<'_> {
        match self {
            PowerMatrix::Sparse(m) => {
                let (cols, vals) = m.row(i);
                RowEntries::Sparse(cols.iter().zip(vals.iter()))
            }
            PowerMatrix::Dense { n, values } => RowEntries::Dense(values[i * n..(i + 1) * n].iter().enumerate()),
        }
    }

    /// Number of non-zero entries.
    pub fn nnz(&self) -> usize {
        match self {
            PowerMatrix::Sparse(m) => m.nnz(),
            PowerMatrix::Dense { values, .. } => values.iter().filter(|v| **v != 0.0).count(),
        }
    }

    pub fn to_dense(&self) -> Vec<Vec<f64>> {
        let n = self.dim();
        (0..n).map(|i| (0..n).map(|j| self.get(i, j)).collect()).collect()
    }
}

pub enum RowEntries<'a> {
    Sparse(std::iter::Zip<std::slice::Iter<'a, usize>, std::slice::Iter<'a, f64>>),
    Dense(std::iter::Enumerate<std::slice::Iter<'a, f64>>),
}

impl Iterator for RowEntries<'_> {
    type Item = (usize, f64);

    fn next(&mut self) -> Option<(usize, f64)> {
        match self {
            RowEntries::Sparse(it) => it.next().map(|(&j, &v)| (j, v)),
            RowEntries::Dense(it) => it.find(|(_, v)| **v != 0.0).map(|(j, &v)| (j, v)),
        }
    }
}

/// Options for [`build_hop_structure_with`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HopOptions {
    /// Fraction of `n * n` non-zeros above which a power is stored densely.
    pub dense_threshold: f64,
}

impl Default for HopOptions {
    fn default() -> Self {
        HopOptions {
            dense_threshold: DEFAULT_DENSE_THRESHOLD,
        }
    }
}

/// Adjacency powers `A^1 ..= A^max_hop` of a graph and their row sums.
#[derive(Debug, Clone)]
pub struct HopStructure<'g> {
    graph: &'g Graph,
    powers: Vec<PowerMatrix>,
    hop_degrees: Vec<Vec<f64>>,
}

impl<'g> HopStructure<'g> {
    pub fn graph(&self) -> &'g Graph {
        self.graph
    }

    pub fn max_hop(&self) -> usize {
        self.powers.len()
    }

    /// `A^hop`, for `1 <= hop <= max_hop`.
    pub fn power(&self, hop: usize) -> &PowerMatrix {
        assert!(hop >= 1 && hop <= self.max_hop(), "hop {hop} out of range");
        &self.powers[hop - 1]
    }

    /// `deg^hop(node)`: total (weighted) number of `hop`-walks leaving `node`.
    pub fn hop_degree(&self, hop: usize, node: usize) -> f64 {
        assert!(hop >= 1 && hop <= self.max_hop(), "hop {hop} out of range");
        self.hop_degrees[hop - 1][node]
    }

    pub fn hop_degrees(&self, hop: usize) -> &[f64] {
        assert!(hop >= 1 && hop <= self.max_hop(), "hop {hop} out of range");
        &self.hop_degrees[hop - 1]
    }
}

/// [`build_hop_structure_with`] using the default dense threshold.
pub fn build_hop_structure(graph: &Graph, max_hop: usize) -> Result<HopStructure<'_>> {
    build_hop_structure_with(graph, max_hop, &HopOptions::default())
}

/// Computes `A^1 ..= A^max_hop` by repeated row-wise sparse multiplication.
///
/// Row `i` of `A^L` is accumulated as `sum_k A^{L-1}[i,k] * A[k,:]` with `k`
/// visited in increasing order, so every entry has a fixed summation order
/// independent of storage layout and thread count.
pub fn build_hop_structure_with<'g>(
    graph: &'g Graph,
    max_hop: usize,
    options: &HopOptions,
) -> Result<HopStructure<'g>> {
    if max_hop == 0 {
        return Err(SampEnError::InvalidParameter("max_hop must be at least 1".into()));
    }
    if !(0.0..=1.0).contains(&options.dense_threshold) {
        return Err(SampEnError::InvalidParameter(format!(
            "dense threshold {} is outside [0, 1]",
            options.dense_threshold
        )));
    }
    let n = graph.n_nodes();
    let adjacency = graph.adjacency();

    let mut powers = Vec::with_capacity(max_hop);
    let mut hop_degrees = Vec::with_capacity(max_hop);

    let first = choose_layout(adjacency.clone(), options.dense_threshold);
    hop_degrees.push(row_sums(&first, 1)?);
    powers.push(first);

    for hop in 2..=max_hop {
        let prev = powers.last().expect("at least one power");
        let rows: Vec<(Vec<usize>, Vec<f64>)> = (0..n)
            .into_par_iter()
            .map_init(|| vec![0.0f64; n], |acc, i| multiply_row(prev, adjacency, i, acc))
            .collect();
        if let Some(row) = rows.iter().position(|(_, v)| v.iter().any(|x| !x.is_finite())) {
            return Err(SampEnError::NonFinitePower { hop, row });
        }
        let next = choose_layout(CsrMatrix::from_rows(n, rows), options.dense_threshold);
        hop_degrees.push(row_sums(&next, hop)?);
        powers.push(next);
    }

    Ok(HopStructure {
        graph,
        powers,
        hop_degrees,
    })
}

/// One row of `prev * adjacency`, returned as sorted non-zero entries.
fn multiply_row(prev: &PowerMatrix, adjacency: &CsrMatrix, i: usize, acc: &mut [f64]) -> (Vec<usize>, Vec<f64>) {
    let mut touched = Vec::new();
    for (k, pik) in prev.row_entries(i) {
        let (cols, vals) = adjacency.row(k);
        for (&j, &akj) in cols.iter().zip(vals) {
            if acc[j] == 0.0 {
                touched.push(j);
            }
            acc[j] += pik * akj;
        }
    }
    touched.sort_unstable();
    touched.dedup();
    let mut cols = Vec::with_capacity(touched.len());
    let mut vals = Vec::with_capacity(touched.len());
    for j in touched {
        let v = std::mem::take(&mut acc[j]);
        // underflowed products leave no structural entry
        if v != 0.0 {
            cols.push(j);
            vals.push(v);
        }
    }
    (cols, vals)
}

fn choose_layout(m: CsrMatrix, dense_threshold: f64) -> PowerMatrix {
    let n = m.dim();
    let cells = (n as f64) * (n as f64);
    if n > 0 && (m.nnz() as f64) > dense_threshold * cells {
        let mut values = vec![0.0; n * n];
        for (i, j, v) in m.triplets() {
            values[i * n + j] = v;
        }
        PowerMatrix::Dense { n, values }
    } else {
        PowerMatrix::Sparse(m)
    }
}

fn row_sums(power: &PowerMatrix, hop: usize) -> Result<Vec<f64>> {
    let sums: Vec<f64> = (0..power.dim())
        .map(|i| power.row_entries(i).map(|(_, v)| v).sum())
        .collect();
    if let Some(row) = sums.iter().position(|s: &f64| !s.is_finite()) {
        return Err(SampEnError::NonFinitePower { hop, row });
    }
    Ok(sums)
}

/// Nodes with at least one walk of every length `1..=m`, in ascending order.
///
/// The same set gates both the `m`- and `(m+1)`-patterns.
pub fn valid_node_set(hops: &HopStructure<'_>, m: usize) -> Result<Vec<usize>> {
    if m == 0 || m > hops.max_hop() {
        return Err(SampEnError::InvalidParameter(format!(
            "m = {m} must lie in 1..={}",
            hops.max_hop()
        )));
    }
    let n = hops.graph().n_nodes();
    Ok((0..n)
        .filter(|&i| (1..=m).all(|hop| hops.hop_degree(hop, i) > 0.0))
        .collect())
}
