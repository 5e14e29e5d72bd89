//! Match counting and sample entropy, for graph signals and for plain series.
//!
//! Two patterns match when their Chebyshev distance is at most `epsilon`
//! (inclusive), with `epsilon = r * SD` and SD the population standard
//! deviation of the full signal. Self-matches are excluded. The `m`- and
//! `(m+1)`-patterns are drawn from the same node set, so every
//! `(m+1)`-match is also an `m`-match.

use std::cmp::Ordering;
use std::fmt;

use rayon::prelude::*;

use crate::embedding::{build_embeddings, population_sd, EmbeddingSet, GraphSignal};
use crate::error::{Result, SampEnError};
use crate::graph::{build_hop_structure_with, Graph, HopOptions};

pub const DEFAULT_M: usize = 2;
pub const DEFAULT_R: f64 = 0.2;

/// Pattern length, tolerance factor and the resulting matching threshold.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SampEnParams {
    m: usize,
    r: f64,
    epsilon: f64,
}

impl SampEnParams {
    /// `epsilon = r * sd`.
    pub fn new(m: usize, r: f64, sd: f64) -> Result<Self> {
        if m == 0 {
            return Err(SampEnError::InvalidParameter("m must be at least 1".into()));
        }
        if !(r.is_finite() && r > 0.0) {
            return Err(SampEnError::InvalidParameter(format!("r must be positive, got {r}")));
        }
        if !(sd.is_finite() && sd >= 0.0) {
            return Err(SampEnError::InvalidParameter(format!(
                "invalid standard deviation {sd}"
            )));
        }
        Ok(SampEnParams { m, r, epsilon: r * sd })
    }

    pub fn for_signal(m: usize, r: f64, signal: &GraphSignal) -> Result<Self> {
        Self::new(m, r, signal.population_sd())
    }

    pub fn for_series(m: usize, r: f64, series: &[f64]) -> Result<Self> {
        Self::new(m, r, population_sd(series))
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn r(&self) -> f64 {
        self.r
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }
}

/// Per-node match fractions `B_i` and `A_i`, aligned with the embedding rows.
#[derive(Debug, Clone, PartialEq)]
pub struct PerNodeMatches {
    pub b: Vec<f64>,
    pub a: Vec<f64>,
}

/// Aggregate match fractions for one embedding.
#[derive(Debug, Clone, PartialEq)]
pub struct MatchCounts {
    /// `B^m(r)`: mean fraction of other patterns matching at length `m`.
    pub b_total: f64,
    /// `A^m(r)`: the same at length `m + 1`.
    pub a_total: f64,
    /// Ordered pairs `(i, j)`, `i != j`, matching at length `m`.
    pub b_matches: u64,
    /// Ordered pairs matching at length `m + 1`.
    pub a_matches: u64,
    pub n_valid: usize,
    pub per_node: Option<PerNodeMatches>,
}

impl MatchCounts {
    fn from_node_counts(b_counts: &[u64], a_counts: &[u64], keep_per_node: bool) -> Self {
        let n = b_counts.len();
        let b_matches: u64 = b_counts.iter().sum();
        let a_matches: u64 = a_counts.iter().sum();
        let others = (n - 1) as f64;
        // mean of B_i = sum_i c_i / (n - 1) / n, folded into one division
        let pairs = n as f64 * others;
        let per_node = keep_per_node.then(|| PerNodeMatches {
            b: b_counts.iter().map(|&c| c as f64 / others).collect(),
            a: a_counts.iter().map(|&c| c as f64 / others).collect(),
        });
        MatchCounts {
            b_total: b_matches as f64 / pairs,
            a_total: a_matches as f64 / pairs,
            b_matches,
            a_matches,
            n_valid: n,
            per_node,
        }
    }
}

/// Why an entropy could not be evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum UndefinedReason {
    /// No pair of `m`-patterns matched (`B^m = 0`).
    NoMMatches,
    /// Some `m`-patterns matched but none extended to `m + 1` (`A^m = 0`).
    NoM1Matches,
}

impl UndefinedReason {
    pub fn tag(self) -> &'static str {
        match self {
            UndefinedReason::NoMMatches => "no_m_matches",
            UndefinedReason::NoM1Matches => "no_m1_matches",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum EntropyValue {
    Defined(f64),
    Undefined(UndefinedReason),
}

impl EntropyValue {
    pub fn defined(self) -> Option<f64> {
        match self {
            EntropyValue::Defined(v) => Some(v),
            EntropyValue::Undefined(_) => None,
        }
    }
}

impl fmt::Display for EntropyValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EntropyValue::Defined(v) => write!(f, "{v}"),
            EntropyValue::Undefined(reason) => write!(f, "undefined:{}", reason.tag()),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EntropyResult {
    pub value: EntropyValue,
    pub counts: MatchCounts,
    pub params: SampEnParams,
}

impl EntropyResult {
    fn from_counts(counts: MatchCounts, params: SampEnParams) -> Self {
        let value = if counts.b_matches == 0 {
            EntropyValue::Undefined(UndefinedReason::NoMMatches)
        } else if counts.a_matches == 0 {
            EntropyValue::Undefined(UndefinedReason::NoM1Matches)
        } else {
            // A/B with the common pair count cancelled
            let ratio = counts.a_matches as f64 / counts.b_matches as f64;
            EntropyValue::Defined(-ratio.ln() + 0.0)
        };
        EntropyResult { value, counts, params }
    }
}

/// Strategy for the pairwise pattern scan. All kernels give identical counts.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum MatchKernel {
    /// Compare every pattern with every other one.
    #[default]
    Direct,
    /// Sort by the first component and only compare within an `epsilon`
    /// window along it.
    SortedWindow,
}

/// Tuning knobs that do not change results.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct SampEnOptions {
    pub hop: HopOptions,
    pub kernel: MatchKernel,
    /// Keep the per-node fractions `B_i` and `A_i` in the result.
    pub per_node: bool,
}

/// Maximum absolute component difference.
pub fn chebyshev(u: &[f64], v: &[f64]) -> Result<f64> {
    if u.len() != v.len() || u.is_empty() {
        return Err(SampEnError::LengthMismatch {
            left: u.len(),
            right: v.len(),
        });
    }
    Ok(u.iter().zip(v).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max))
}

#[inline]
fn within(u: &[f64], v: &[f64], epsilon: f64) -> bool {
    u.iter().zip(v).all(|(a, b)| (a - b).abs() <= epsilon)
}

/// Counts matching pattern pairs at lengths `m` and `m + 1` with the direct
/// kernel.
pub fn match_counts(emb: &EmbeddingSet, params: &SampEnParams) -> Result<MatchCounts> {
    match_counts_with(emb, params, MatchKernel::Direct, false)
}

pub fn match_counts_with(
    emb: &EmbeddingSet,
    params: &SampEnParams,
    kernel: MatchKernel,
    keep_per_node: bool,
) -> Result<MatchCounts> {
    if emb.m() != params.m() {
        return Err(SampEnError::InvalidParameter(format!(
            "embedding has m = {} but parameters have m = {}",
            emb.m(),
            params.m()
        )));
    }
    let n = emb.n_valid();
    if n < 2 {
        return Err(SampEnError::InsufficientPatterns { n_valid: n });
    }
    let (b, a) = match kernel {
        MatchKernel::Direct => direct_scan(emb, params.epsilon()),
        MatchKernel::SortedWindow => sorted_window_scan(emb, params.epsilon()),
    };
    Ok(MatchCounts::from_node_counts(&b, &a, keep_per_node))
}

/// Checks pair `(i, j)` at length `m`, then extends to `m + 1` through the
/// last component only.
#[inline]
fn pair_match(emb: &EmbeddingSet, m: usize, i: usize, j: usize, epsilon: f64) -> (u64, u64) {
    if !within(emb.pattern_m(i), emb.pattern_m(j), epsilon) {
        return (0, 0);
    }
    let extended = (emb.pattern_m1(i)[m] - emb.pattern_m1(j)[m]).abs() <= epsilon;
    (1, extended as u64)
}

fn direct_scan(emb: &EmbeddingSet, epsilon: f64) -> (Vec<u64>, Vec<u64>) {
    let n = emb.n_valid();
    let m = emb.m();
    (0..n)
        .into_par_iter()
        .map(|i| {
            (0..n).filter(|&j| j != i).fold((0u64, 0u64), |(b, a), j| {
                let (db, da) = pair_match(emb, m, i, j, epsilon);
                (b + db, a + da)
            })
        })
        .unzip()
}

fn sorted_window_scan(emb: &EmbeddingSet, epsilon: f64) -> (Vec<u64>, Vec<u64>) {
    let n = emb.n_valid();
    let m = emb.m();
    let key = |k: usize| emb.pattern_m(k)[0];
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&p, &q| match key(p).total_cmp(&key(q)) {
        Ordering::Equal => p.cmp(&q),
        other => other,
    });
    let keys: Vec<f64> = order.iter().map(|&k| key(k)).collect();

    let per_rank: Vec<(u64, u64)> = (0..n)
        .into_par_iter()
        .map(|p| {
            let i = order[p];
            let mut counts = (0u64, 0u64);
            let mut tally = |q: usize| {
                let (db, da) = pair_match(emb, m, i, order[q], epsilon);
                counts.0 += db;
                counts.1 += da;
            };
            for q in p + 1..n {
                if keys[q] - keys[p] > epsilon {
                    break;
                }
                tally(q);
            }
            for q in (0..p).rev() {
                if keys[p] - keys[q] > epsilon {
                    break;
                }
                tally(q);
            }
            counts
        })
        .collect();

    let mut b = vec![0u64; n];
    let mut a = vec![0u64; n];
    for (p, &(cb, ca)) in per_rank.iter().enumerate() {
        b[order[p]] = cb;
        a[order[p]] = ca;
    }
    (b, a)
}

/// Sample entropy of an embedding under fixed parameters.
pub fn entropy_of_embedding(
    emb: &EmbeddingSet,
    params: SampEnParams,
    kernel: MatchKernel,
    keep_per_node: bool,
) -> Result<EntropyResult> {
    let counts = match_counts_with(emb, &params, kernel, keep_per_node)?;
    Ok(EntropyResult::from_counts(counts, params))
}

/// Sample entropy of a graph signal with default options.
pub fn sampen_graph(graph: &Graph, signal: &GraphSignal, m: usize, r: f64) -> Result<EntropyResult> {
    sampen_graph_with(graph, signal, m, r, &SampEnOptions::default())
}

/// Sample entropy of a graph signal: hop powers up to `m`, embeddings over
/// the valid node set, pairwise matching, then `-ln(A^m / B^m)`.
pub fn sampen_graph_with(
    graph: &Graph,
    signal: &GraphSignal,
    m: usize,
    r: f64,
    options: &SampEnOptions,
) -> Result<EntropyResult> {
    signal.check_aligned(graph)?;
    let params = SampEnParams::for_signal(m, r, signal)?;
    let hops = build_hop_structure_with(graph, m, &options.hop)?;
    let emb = build_embeddings(&hops, signal, m)?;
    entropy_of_embedding(&emb, params, options.kernel, options.per_node)
}

/// Delay-1 embedding with `N - m` templates for both lengths.
pub fn delay_embedding(series: &[f64], m: usize) -> Result<EmbeddingSet> {
    let needed = m + 2;
    if m == 0 {
        return Err(SampEnError::InvalidParameter("m must be at least 1".into()));
    }
    if series.len() < needed {
        return Err(SampEnError::SeriesTooShort {
            len: series.len(),
            m,
            needed,
        });
    }
    let count = series.len() - m;
    let patterns = (0..count).flat_map(|i| series[i..=i + m].iter().copied()).collect();
    EmbeddingSet::from_extended_patterns(m, (0..count).collect(), patterns)
}

/// Classical sample entropy of a time series with delay 1.
///
/// Uses `N - m` templates for both pattern lengths, so on a directed path
/// graph it coincides exactly with [`sampen_graph`].
pub fn classical_sampen(series: &[f64], m: usize, r: f64) -> Result<EntropyResult> {
    classical_sampen_with(series, m, r, MatchKernel::Direct)
}

pub fn classical_sampen_with(series: &[f64], m: usize, r: f64, kernel: MatchKernel) -> Result<EntropyResult> {
    if let Some(node) = series.iter().position(|v| !v.is_finite()) {
        return Err(SampEnError::NonFiniteSignal { node });
    }
    let params = SampEnParams::for_series(m, r, series)?;
    let emb = delay_embedding(series, m)?;
    entropy_of_embedding(&emb, params, kernel, false)
}
