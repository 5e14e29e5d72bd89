//! Sweep drivers for the logistic-map and Erdős–Rényi experiments.
//!
//! Jobs run in parallel on the current rayon pool; output rows are ordered by
//! parameters, then variant, then seed, with one summary row closing every
//! group, regardless of scheduling.

use std::time::Instant;

use rayon::prelude::*;

use crate::embedding::GraphSignal;
use crate::entropy::{classical_sampen_with, sampen_graph_with, EntropyResult, SampEnOptions};
use crate::error::{Result, SampEnError};
use crate::graph::Graph;
use crate::io::{EntropyCell, Experiment, RowKind, SweepRecord};
use crate::synthetic::{
    derived_seed, er_digraph, logistic_series, open_unit_draw, path_graph, rng_for, uniform_signal, ERConfig,
    LogisticConfig, ER_SIGNAL_RANGE,
};

/// Mixed into realisation seeds to decorrelate node signals from graphs.
pub const SIGNAL_SEED_SALT: u64 = 0x9E37_79B9_7F4A_7C15;

pub const DEFAULT_ER_K: [f64; 9] = [3.0, 4.0, 5.0, 6.0, 7.0, 8.0, 9.0, 10.0, 12.0];

#[derive(Debug, Clone, PartialEq)]
pub struct LogisticSweepConfig {
    pub rho_min: f64,
    pub rho_max: f64,
    pub rho_step: f64,
    pub n_samples: usize,
    pub burn_in: usize,
    pub n_seeds: usize,
    pub base_seed: u64,
    pub m: usize,
    pub r: f64,
    pub record_timing: bool,
    pub options: SampEnOptions,
}

impl Default for LogisticSweepConfig {
    fn default() -> Self {
        LogisticSweepConfig {
            rho_min: 2.8,
            rho_max: 4.0,
            rho_step: 0.005,
            n_samples: crate::synthetic::DEFAULT_LOGISTIC_SAMPLES,
            burn_in: crate::synthetic::DEFAULT_BURN_IN,
            n_seeds: 20,
            base_seed: 0,
            m: 2,
            r: 0.2,
            record_timing: true,
            options: SampEnOptions::default(),
        }
    }
}

impl LogisticSweepConfig {
    /// Grid `rho_min, rho_min + step, ...` up to `rho_max` inclusive.
    pub fn rho_grid(&self) -> Result<Vec<f64>> {
        let ok_range = self.rho_min > 0.0 && self.rho_max <= 4.0 && self.rho_min <= self.rho_max;
        if !ok_range {
            return Err(SampEnError::InvalidParameter(format!(
                "rho range [{}, {}] must lie within (0, 4]",
                self.rho_min, self.rho_max
            )));
        }
        if self.rho_min == self.rho_max {
            return Ok(vec![self.rho_min]);
        }
        if self.rho_step.is_nan() || self.rho_step <= 0.0 {
            return Err(SampEnError::InvalidParameter("rho step must be positive".into()));
        }
        let steps = ((self.rho_max - self.rho_min) / self.rho_step + 1e-9).floor() as usize;
        Ok((0..=steps)
            .map(|k| (self.rho_min + k as f64 * self.rho_step).min(self.rho_max))
            .collect())
    }
}

pub const LOGISTIC_VARIANTS: [&str; 3] = ["classical", "directed_path", "undirected_path"];

/// Initial condition of seed index `s`, drawn from the open unit interval.
pub fn logistic_initial_condition(base_seed: u64, s: usize) -> f64 {
    open_unit_draw(&mut rng_for(derived_seed(base_seed, s as u64)))
}

/// Classical, directed-path and undirected-path entropies for one logistic
/// series, as raw records in [`LOGISTIC_VARIANTS`] order.
fn logistic_job(cfg: &LogisticSweepConfig, rho: f64, s: usize) -> Result<[SweepRecord; 3]> {
    let x0 = logistic_initial_condition(cfg.base_seed, s);
    let series = logistic_series(&LogisticConfig {
        rho,
        n_samples: cfg.n_samples,
        x0,
        burn_in: cfg.burn_in,
    })?;
    let seed = Some(derived_seed(cfg.base_seed, s as u64));
    let n = series.len();

    let timed = |f: &dyn Fn() -> Result<EntropyResult>| -> Result<(EntropyResult, Option<f64>)> {
        let start = Instant::now();
        let res = f()?;
        let ms = start.elapsed().as_secs_f64() * 1e3;
        Ok((res, cfg.record_timing.then_some(ms)))
    };

    let classical = timed(&|| classical_sampen_with(&series, cfg.m, cfg.r, cfg.options.kernel))?;
    let signal = GraphSignal::new(series.clone())?;
    let directed_graph = path_graph(n, true)?;
    let undirected_graph = path_graph(n, false)?;
    let directed = timed(&|| sampen_graph_with(&directed_graph, &signal, cfg.m, cfg.r, &cfg.options))?;
    let undirected = timed(&|| sampen_graph_with(&undirected_graph, &signal, cfg.m, cfg.r, &cfg.options))?;

    let rec = |variant: &str, (res, ms): &(EntropyResult, Option<f64>)| {
        SweepRecord::raw(Experiment::Logistic, variant, n, "rho", rho, seed, res, *ms)
    };
    Ok([
        rec(LOGISTIC_VARIANTS[0], &classical),
        rec(LOGISTIC_VARIANTS[1], &directed),
        rec(LOGISTIC_VARIANTS[2], &undirected),
    ])
}

/// Runs the logistic-map sweep.
pub fn run_logistic_sweep(cfg: &LogisticSweepConfig) -> Result<Vec<SweepRecord>> {
    if cfg.n_seeds == 0 {
        return Err(SampEnError::InvalidParameter("n_seeds must be at least 1".into()));
    }
    let grid = cfg.rho_grid()?;
    let jobs: Vec<(f64, usize)> = grid
        .iter()
        .flat_map(|&rho| (0..cfg.n_seeds).map(move |s| (rho, s)))
        .collect();
    let results: Vec<[SweepRecord; 3]> = jobs
        .par_iter()
        .map(|&(rho, s)| logistic_job(cfg, rho, s))
        .collect::<Result<_>>()?;

    let mut out = Vec::with_capacity(results.len() * 3 + grid.len() * 3);
    for per_rho in results.chunks(cfg.n_seeds) {
        for v in 0..LOGISTIC_VARIANTS.len() {
            let group: Vec<SweepRecord> = per_rho.iter().map(|recs| recs[v].clone()).collect();
            let summary = SweepRecord::summarize(&group).expect("non-empty group");
            out.extend(group);
            out.push(summary);
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq)]
pub struct ErSweepConfig {
    pub n_nodes: usize,
    pub k_values: Vec<f64>,
    pub m_values: Vec<usize>,
    pub r: f64,
    pub n_realisations: usize,
    pub base_seed: u64,
    pub record_timing: bool,
    pub options: SampEnOptions,
}

impl Default for ErSweepConfig {
    fn default() -> Self {
        ErSweepConfig {
            n_nodes: 2700,
            k_values: DEFAULT_ER_K.to_vec(),
            m_values: vec![1, 2, 3],
            r: 0.2,
            n_realisations: 20,
            base_seed: 0,
            record_timing: true,
            options: SampEnOptions::default(),
        }
    }
}

/// Graph and node signal of one ER realisation.
///
/// The graph of realisation `k` uses seed `base + k`, so it is shared by all
/// pattern lengths; the signal seed additionally mixes in
/// [`SIGNAL_SEED_SALT`].
pub fn er_realisation(n_nodes: usize, k: f64, base_seed: u64, realisation: usize) -> Result<(Graph, GraphSignal)> {
    let seed = derived_seed(base_seed, realisation as u64);
    let graph = er_digraph(&ERConfig::new(n_nodes, k, seed))?;
    let (lo, hi) = ER_SIGNAL_RANGE;
    let signal = uniform_signal(n_nodes, lo, hi, seed ^ SIGNAL_SEED_SALT)?;
    Ok((graph, signal))
}

/// Raw records for every pattern length on one `(K, realisation)` graph.
fn er_job(cfg: &ErSweepConfig, k: f64, realisation: usize) -> Result<Vec<SweepRecord>> {
    let (graph, signal) = er_realisation(cfg.n_nodes, k, cfg.base_seed, realisation)?;
    let seed = Some(derived_seed(cfg.base_seed, realisation as u64));
    cfg.m_values
        .iter()
        .map(|&m| {
            let start = Instant::now();
            let outcome = sampen_graph_with(&graph, &signal, m, cfg.r, &cfg.options);
            let ms = cfg.record_timing.then(|| start.elapsed().as_secs_f64() * 1e3);
            match outcome {
                Ok(res) => Ok(SweepRecord::raw(
                    Experiment::Er,
                    "graph",
                    cfg.n_nodes,
                    "K",
                    k,
                    seed,
                    &res,
                    ms,
                )),
                Err(e) if e.is_insufficient_patterns() => Ok(SweepRecord {
                    row_kind: RowKind::Raw,
                    experiment: Experiment::Er,
                    variant: "graph".into(),
                    n: cfg.n_nodes,
                    m,
                    r: cfg.r,
                    param_name: "K".into(),
                    param_value: k,
                    seed,
                    entropy: EntropyCell::InsufficientPatterns,
                    entropy_std: None,
                    n_defined: None,
                    b_total: 0.0,
                    a_total: 0.0,
                    n_valid: None,
                    runtime_ms: ms,
                }),
                Err(e) => Err(e),
            }
        })
        .collect()
}

/// Runs the Erdős–Rényi sweep over every `(K, m, realisation)`.
pub fn run_er_sweep(cfg: &ErSweepConfig) -> Result<Vec<SweepRecord>> {
    if cfg.n_realisations == 0 {
        return Err(SampEnError::InvalidParameter(
            "n_realisations must be at least 1".into(),
        ));
    }
    if let Some(&k) = cfg.k_values.iter().find(|&&k| !(k >= 0.0 && k < cfg.n_nodes as f64)) {
        return Err(SampEnError::InvalidParameter(format!(
            "K = {k} must lie in [0, {})",
            cfg.n_nodes
        )));
    }
    if cfg.m_values.contains(&0) {
        return Err(SampEnError::InvalidParameter("m values must be at least 1".into()));
    }
    let jobs: Vec<(f64, usize)> = cfg
        .k_values
        .iter()
        .flat_map(|&k| (0..cfg.n_realisations).map(move |s| (k, s)))
        .collect();
    // indexed [K][realisation][m]
    let per_graph: Vec<Vec<SweepRecord>> = jobs
        .par_iter()
        .map(|&(k, s)| er_job(cfg, k, s))
        .collect::<Result<_>>()?;

    let mut out = Vec::new();
    for per_k in per_graph.chunks(cfg.n_realisations) {
        for mi in 0..cfg.m_values.len() {
            let group: Vec<SweepRecord> = per_k.iter().map(|recs| recs[mi].clone()).collect();
            let summary = SweepRecord::summarize(&group).expect("non-empty group");
            out.extend(group);
            out.push(summary);
        }
    }
    Ok(out)
}
