//! Seeded generators for experiment inputs.
//!
//! All randomness comes from ChaCha8 seeded through `seed_from_u64`, which is
//! portable across platforms. Realisation `k` of a sweep uses seed
//! `base_seed + k` (wrapping).

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::embedding::GraphSignal;
use crate::error::{Result, SampEnError};
use crate::graph::Graph;

pub const DEFAULT_BURN_IN: usize = 1000;
pub const DEFAULT_LOGISTIC_SAMPLES: usize = 2000;

/// Signal range used for Erdős–Rényi node values.
pub const ER_SIGNAL_RANGE: (f64, f64) = (0.01, 0.10);

pub fn rng_for(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Seed of realisation `index` derived from `base`.
pub fn derived_seed(base: u64, index: u64) -> u64 {
    base.wrapping_add(index)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogisticConfig {
    pub rho: f64,
    pub n_samples: usize,
    pub x0: f64,
    pub burn_in: usize,
}

impl LogisticConfig {
    pub fn new(rho: f64, x0: f64) -> Self {
        LogisticConfig {
            rho,
            n_samples: DEFAULT_LOGISTIC_SAMPLES,
            x0,
            burn_in: DEFAULT_BURN_IN,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.rho > 0.0 && self.rho <= 4.0) {
            return Err(SampEnError::InvalidParameter(format!(
                "rho = {} is outside (0, 4]",
                self.rho
            )));
        }
        if !(self.x0 > 0.0 && self.x0 < 1.0) {
            return Err(SampEnError::InvalidParameter(format!(
                "x0 = {} is outside (0, 1)",
                self.x0
            )));
        }
        if self.n_samples == 0 {
            return Err(SampEnError::InvalidParameter("n_samples must be positive".into()));
        }
        Ok(())
    }
}

/// Iterates `x <- rho * x * (1 - x)` from `x0`.
///
/// The first iterate after `x0` is sample 1; the first `burn_in` samples are
/// dropped and the next `n_samples` returned.
pub fn logistic_series(config: &LogisticConfig) -> Result<Vec<f64>> {
    config.validate()?;
    let rho = config.rho;
    let mut x = config.x0;
    let mut step = move || {
        x = rho * x * (1.0 - x);
        x
    };
    for _ in 0..config.burn_in {
        step();
    }
    Ok((0..config.n_samples).map(|_| step()).collect())
}

/// Uniform draw from the open interval (0, 1), rejecting 0.
pub fn open_unit_draw<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    loop {
        let x: f64 = rng.gen();
        if x > 0.0 {
            return x;
        }
    }
}

/// Path `0 - 1 - ... - (n-1)`, oriented `i -> i+1` when directed.
pub fn path_graph(n: usize, directed: bool) -> Result<Graph> {
    if n < 2 {
        return Err(SampEnError::InvalidParameter(format!(
            "path needs at least 2 nodes, got {n}"
        )));
    }
    Graph::from_unweighted_edges(n, directed, (0..n - 1).map(|i| (i, i + 1)))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ERConfig {
    pub n_nodes: usize,
    pub target_out_degree: f64,
    pub seed: u64,
}

impl ERConfig {
    pub fn new(n_nodes: usize, target_out_degree: f64, seed: u64) -> Self {
        ERConfig {
            n_nodes,
            target_out_degree,
            seed,
        }
    }

    /// Edge probability `K / (N - 1)`.
    pub fn p(&self) -> f64 {
        if self.n_nodes < 2 {
            return 0.0;
        }
        self.target_out_degree / (self.n_nodes - 1) as f64
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_nodes == 0 {
            return Err(SampEnError::InvalidParameter("n_nodes must be positive".into()));
        }
        let p = self.p();
        if !(self.target_out_degree >= 0.0 && (0.0..=1.0).contains(&p)) {
            return Err(SampEnError::InvalidParameter(format!(
                "K = {} gives p = {p} outside [0, 1] for N = {}",
                self.target_out_degree, self.n_nodes
            )));
        }
        Ok(())
    }
}

/// Directed Erdős–Rényi graph without self loops.
///
/// Ordered pairs are visited row-major (`i` outer, `j` inner) and each gets an
/// edge when a uniform draw falls below `p`.
pub fn er_digraph(config: &ERConfig) -> Result<Graph> {
    config.validate()?;
    let n = config.n_nodes;
    let p = config.p();
    let mut rng = rng_for(config.seed);
    let mut edges = Vec::new();
    for i in 0..n {
        for j in 0..n {
            if i != j && rng.gen::<f64>() < p {
                edges.push((i, j));
            }
        }
    }
    Graph::from_unweighted_edges(n, true, edges)
}

/// `n` independent uniform draws in `[lo, hi]`.
pub fn uniform_signal(n: usize, lo: f64, hi: f64, seed: u64) -> Result<GraphSignal> {
    if !(lo.is_finite() && hi.is_finite() && lo < hi) {
        return Err(SampEnError::InvalidParameter(format!("need lo < hi, got [{lo}, {hi}]")));
    }
    let mut rng = rng_for(seed);
    GraphSignal::new((0..n).map(|_| rng.gen_range(lo..=hi)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rho_four_from_half_collapses() {
        let cfg = LogisticConfig {
            rho: 4.0,
            n_samples: 5,
            x0: 0.5,
            burn_in: 0,
        };
        assert_eq!(logistic_series(&cfg).unwrap(), vec![1.0, 0.0, 0.0, 0.0, 0.0]);
    }

    #[test]
    fn rho_two_converges_to_half() {
        for x0 in [0.01, 0.3, 0.77, 0.99] {
            let s = logistic_series(&LogisticConfig::new(2.0, x0)).unwrap();
            assert!(s.iter().all(|v| (v - 0.5).abs() < 1e-12));
        }
    }

    #[test]
    fn logistic_rejects_bad_config() {
        assert!(logistic_series(&LogisticConfig::new(4.5, 0.5)).is_err());
        assert!(logistic_series(&LogisticConfig::new(3.0, 0.0)).is_err());
        assert!(logistic_series(&LogisticConfig::new(3.0, 1.0)).is_err());
    }

    #[test]
    fn path_graphs() {
        let d = path_graph(3, true).unwrap();
        assert_eq!(
            d.adjacency().to_dense(),
            vec![vec![0.0, 1.0, 0.0], vec![0.0, 0.0, 1.0], vec![0.0; 3]]
        );
        let u = path_graph(3, false).unwrap();
        assert_eq!(
            u.adjacency().to_dense(),
            vec![vec![0.0, 1.0, 0.0], vec![1.0, 0.0, 1.0], vec![0.0, 1.0, 0.0]]
        );
        assert!(path_graph(1, true).is_err());
    }

    #[test]
    fn er_extremes() {
        let empty = er_digraph(&ERConfig::new(20, 0.0, 1)).unwrap();
        assert_eq!(empty.n_edges(), 0);
        let full = er_digraph(&ERConfig::new(20, 19.0, 1)).unwrap();
        assert_eq!(full.n_edges(), 20 * 19);
        assert!((0..20).all(|i| full.out_edges(i).count() == 19 && full.out_edges(i).all(|(j, _)| j != i)));
        assert!(er_digraph(&ERConfig::new(20, 25.0, 1)).is_err());
    }

    #[test]
    fn generators_are_deterministic() {
        assert_eq!(
            er_digraph(&ERConfig::new(50, 4.0, 9)).unwrap(),
            er_digraph(&ERConfig::new(50, 4.0, 9)).unwrap()
        );
        assert_eq!(
            uniform_signal(100, 0.01, 0.1, 3).unwrap(),
            uniform_signal(100, 0.01, 0.1, 3).unwrap()
        );
        assert_ne!(
            uniform_signal(100, 0.01, 0.1, 3).unwrap(),
            uniform_signal(100, 0.01, 0.1, 4).unwrap()
        );
    }

    #[test]
    fn uniform_signal_in_range() {
        let s = uniform_signal(10_000, 0.01, 0.10, 11).unwrap();
        assert!(s.values().iter().all(|v| (0.01..=0.10).contains(v)));
        assert!(uniform_signal(3, 1.0, 1.0, 0).is_err());
    }
}
