//! Multi-hop neighbourhood embeddings of a graph signal.
//!
//! Component `L` of a node's pattern is the walk-weighted mean of the signal
//! over the nodes reachable by walks of exactly `L` hops, with component 0 the
//! node's own value. On a directed path this is the classical delay embedding.

use rayon::prelude::*;

use crate::error::{Result, SampEnError};
use crate::graph::{valid_node_set, Graph, HopStructure};

/// Real values attached to the nodes of a graph.
#[derive(Debug, Clone, PartialEq)]
pub struct GraphSignal {
    values: Vec<f64>,
}

impl GraphSignal {
    /// Wraps `values`, rejecting non-finite entries.
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if let Some(node) = values.iter().position(|v| !v.is_finite()) {
            return Err(SampEnError::NonFiniteSignal { node });
        }
        Ok(GraphSignal { values })
    }

    /// Wraps `values` and checks the length against `graph`.
    pub fn for_graph(graph: &Graph, values: Vec<f64>) -> Result<Self> {
        let signal = Self::new(values)?;
        signal.check_aligned(graph)?;
        Ok(signal)
    }

    pub fn check_aligned(&self, graph: &Graph) -> Result<()> {
        if self.len() != graph.n_nodes() {
            return Err(SampEnError::SignalLength {
                expected: graph.n_nodes(),
                found: self.len(),
            });
        }
        Ok(())
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Moves old node `i`'s value to position `perm[i]`.
    pub fn permuted(&self, perm: &[usize]) -> Result<Self> {
        crate::graph::check_permutation(perm, self.len())?;
        let mut values = vec![0.0; self.len()];
        for (i, &p) in perm.iter().enumerate() {
            values[p] = self.values[i];
        }
        Ok(GraphSignal { values })
    }

    /// `a * x + b` applied to every value.
    pub fn affine(&self, a: f64, b: f64) -> Result<Self> {
        Self::new(self.values.iter().map(|x| a * x + b).collect())
    }

    /// Population standard deviation (normalised by the number of values).
    pub fn population_sd(&self) -> f64 {
        population_sd(&self.values)
    }
}

pub(crate) fn population_sd(values: &[f64]) -> f64 {
    if values.is_empty() {
        return 0.0;
    }
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let var = values.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / n;
    var.sqrt()
}

/// Patterns of length `m` and `m + 1` for every valid node.
///
/// Rows are stored flattened, row-major, in ascending node order.
#[derive(Debug, Clone, PartialEq)]
pub struct EmbeddingSet {
    m: usize,
    node_ids: Vec<usize>,
    patterns_m: Vec<f64>,
    patterns_m1: Vec<f64>,
}

impl EmbeddingSet {
    /// Assembles an embedding directly from `(m+1)`-patterns; the `m`-patterns
    /// are their prefixes.
    pub fn from_extended_patterns(m: usize, node_ids: Vec<usize>, patterns_m1: Vec<f64>) -> Result<Self> {
        if m == 0 {
            return Err(SampEnError::InvalidParameter("m must be at least 1".into()));
        }
        if patterns_m1.len() != node_ids.len() * (m + 1) {
            return Err(SampEnError::LengthMismatch {
                left: patterns_m1.len(),
                right: node_ids.len() * (m + 1),
            });
        }
        if patterns_m1.iter().any(|v| !v.is_finite()) {
            return Err(SampEnError::InvalidParameter("pattern entries must be finite".into()));
        }
        let patterns_m = patterns_m1
            .chunks_exact(m + 1)
            .flat_map(|row| row[..m].iter().copied())
            .collect();
        Ok(EmbeddingSet {
            m,
            node_ids,
            patterns_m,
            patterns_m1,
        })
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn node_ids(&self) -> &[usize] {
        &self.node_ids
    }

    pub fn n_valid(&self) -> usize {
        self.node_ids.len()
    }

    /// The `m`-pattern of the `k`-th valid node.
    pub fn pattern_m(&self, k: usize) -> &[f64] {
        &self.patterns_m[k * self.m..(k + 1) * self.m]
    }

    /// The `(m+1)`-pattern of the `k`-th valid node.
    pub fn pattern_m1(&self, k: usize) -> &[f64] {
        &self.patterns_m1[k * (self.m + 1)..(k + 1) * (self.m + 1)]
    }

    pub fn patterns_m(&self) -> impl Iterator<Item = &[f64]> {
        self.patterns_m.chunks_exact(self.m)
    }

    pub fn patterns_m1(&self) -> impl Iterator<Item = &[f64]> {
        self.patterns_m1.chunks_exact(self.m + 1)
    }
}

/// Walk-weighted mean of the signal over the `hop`-neighbourhood of `node`.
///
/// `hop = 0` returns the node's own value.
pub fn hop_mean(hops: &HopStructure<'_>, signal: &GraphSignal, node: usize, hop: usize) -> Result<f64> {
    signal.check_aligned(hops.graph())?;
    if node >= signal.len() {
        return Err(SampEnError::InvalidParameter(format!("node {node} out of range")));
    }
    if hop > hops.max_hop() {
        return Err(SampEnError::InvalidParameter(format!(
            "hop {hop} exceeds the computed maximum {}",
            hops.max_hop()
        )));
    }
    if hop == 0 {
        return Ok(signal.values()[node]);
    }
    let degree = hops.hop_degree(hop, node);
    if degree <= 0.0 {
        return Err(SampEnError::ZeroHopDegree { node, hop });
    }
    Ok(weighted_mean(hops, signal.values(), node, hop, degree))
}

/// Accumulated as offsets from the first reachable node's value, so a single
/// reachable node or a locally constant signal reproduces the value exactly.
fn weighted_mean(hops: &HopStructure<'_>, x: &[f64], node: usize, hop: usize, degree: f64) -> f64 {
    let mut entries = hops.power(hop).row_entries(node).peekable();
    let Some(&(first, _)) = entries.peek() else {
        return f64::NAN;
    };
    let base = x[first];
    let offset: f64 = entries.map(|(j, w)| w * (x[j] - base)).sum();
    base + offset / degree
}

/// Builds the `m`- and `(m+1)`-patterns of every node in the valid node set.
pub fn build_embeddings(hops: &HopStructure<'_>, signal: &GraphSignal, m: usize) -> Result<EmbeddingSet> {
    signal.check_aligned(hops.graph())?;
    let node_ids = valid_node_set(hops, m)?;
    if node_ids.is_empty() {
        return Err(SampEnError::NoValidPatterns { m });
    }
    let x = signal.values();
    let width = m + 1;
    let mut patterns_m1 = vec![0.0; node_ids.len() * width];
    patterns_m1
        .par_chunks_mut(width)
        .zip(node_ids.par_iter())
        .for_each(|(row, &node)| {
            row[0] = x[node];
            for (hop, slot) in row.iter_mut().enumerate().skip(1) {
                *slot = weighted_mean(hops, x, node, hop, hops.hop_degree(hop, node));
            }
        });
    EmbeddingSet::from_extended_patterns(m, node_ids, patterns_m1)
}
