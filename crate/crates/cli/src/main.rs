use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use graph_sampen::experiments::{run_er_sweep, run_logistic_sweep, ErSweepConfig, LogisticSweepConfig};
use graph_sampen::graph::DEFAULT_DENSE_THRESHOLD;
use graph_sampen::io::{read_edge_list, read_signal, write_sweep_csv, EntropyCell, Experiment, RowKind, SweepRecord};
use graph_sampen::{sampen_graph_with, EntropyValue, HopOptions, MatchKernel, SampEnError, SampEnOptions};

const EXIT_INPUT: u8 = 1;
const EXIT_UNDEFINED: u8 = 2;
const EXIT_INTERNAL: u8 = 3;

#[derive(Parser, Debug)]
#[command(name = "graph-sampen", version, about = "Sample entropy for graph signals")]
struct Cli {
    /// Worker threads (0 = all cores).
    #[arg(long, global = true, default_value_t = 0)]
    threads: usize,

    /// Fill fraction above which adjacency powers are stored densely.
    #[arg(long, global = true, default_value_t = DEFAULT_DENSE_THRESHOLD)]
    dense_threshold: f64,

    /// Pairwise matching kernel; both give identical counts.
    #[arg(long, global = true, value_enum, default_value_t = Kernel::Direct)]
    kernel: Kernel,

    #[command(subcommand)]
    command: Command,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum Kernel {
    Direct,
    Sorted,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Entropy of one graph signal read from files.
    Compute {
        /// Edge list ("nodes <N> directed|undirected" then "src dst [weight]").
        #[arg(long)]
        graph: PathBuf,
        /// One value per line, line k for node k.
        #[arg(long)]
        signal: PathBuf,
        #[arg(short, long, default_value_t = 2)]
        m: usize,
        #[arg(short, long, default_value_t = 0.2)]
        r: f64,
        /// Also write the result as a one-row CSV.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Classical, directed-path and undirected-path entropy of logistic-map series.
    LogisticSweep {
        #[arg(long, default_value_t = 2.8)]
        rho_min: f64,
        #[arg(long, default_value_t = 4.0)]
        rho_max: f64,
        #[arg(long, default_value_t = 0.005)]
        rho_step: f64,
        #[arg(long, default_value_t = 2000)]
        n_samples: usize,
        #[arg(long, default_value_t = 1000)]
        burn_in: usize,
        #[arg(long, default_value_t = 20)]
        n_seeds: usize,
        #[arg(short, long, default_value_t = 2)]
        m: usize,
        #[arg(short, long, default_value_t = 0.2)]
        r: f64,
        #[command(flatten)]
        common: SweepArgs,
    },
    /// Entropy of uniform signals on directed Erdős–Rényi graphs.
    ErSweep {
        #[arg(long, default_value_t = 2700)]
        n_nodes: usize,
        /// Target mean out-degrees K (edge probability K / (N - 1)).
        #[arg(long = "k-list", value_delimiter = ',', default_value = "3,4,5,6,7,8,9,10,12")]
        k_list: Vec<f64>,
        #[arg(long = "m-list", value_delimiter = ',', default_value = "1,2,3")]
        m_list: Vec<usize>,
        #[arg(short, long, default_value_t = 0.2)]
        r: f64,
        #[arg(long, default_value_t = 20)]
        n_realisations: usize,
        #[command(flatten)]
        common: SweepArgs,
    },
}

#[derive(Args, Debug)]
struct SweepArgs {
    /// Base seed; realisation k uses seed + k.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output CSV path.
    #[arg(long = "out", alias = "out-csv")]
    out: PathBuf,
    /// Leave runtime_ms empty so repeated runs produce identical files.
    #[arg(long)]
    omit_timing: bool,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(EXIT_INPUT)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    let pool = match rayon::ThreadPoolBuilder::new().num_threads(cli.threads).build() {
        Ok(pool) => pool,
        Err(e) => {
            eprintln!("error: cannot start thread pool: {e}");
            return ExitCode::from(EXIT_INTERNAL);
        }
    };
    match pool.install(|| run(&cli)) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code_for(&e))
        }
    }
}

fn exit_code_for(e: &SampEnError) -> u8 {
    use SampEnError::*;
    match e {
        NoValidPatterns { .. } | InsufficientPatterns { .. } => EXIT_UNDEFINED,
        InvalidGraph(_)
        | InvalidParameter(_)
        | SignalLength { .. }
        | NonFiniteSignal { .. }
        | NonFinitePower { .. }
        | SeriesTooShort { .. }
        | Parse { .. }
        | Format { .. }
        | Io { .. } => EXIT_INPUT,
        ZeroHopDegree { .. } | LengthMismatch { .. } | Csv(_) => EXIT_INTERNAL,
    }
}

fn options(cli: &Cli) -> SampEnOptions {
    SampEnOptions {
        hop: HopOptions {
            dense_threshold: cli.dense_threshold,
        },
        kernel: match cli.kernel {
            Kernel::Direct => MatchKernel::Direct,
            Kernel::Sorted => MatchKernel::SortedWindow,
        },
        per_node: false,
    }
}

fn run(cli: &Cli) -> Result<ExitCode, SampEnError> {
    let options = options(cli);
    match &cli.command {
        Command::Compute {
            graph,
            signal,
            m,
            r,
            out,
        } => {
            let g = read_edge_list(graph)?;
            let x = read_signal(signal, g.n_nodes())?;
            let start = Instant::now();
            let res = sampen_graph_with(&g, &x, *m, *r, &options)?;
            let ms = start.elapsed().as_secs_f64() * 1e3;

            println!("entropy: {}", EntropyCell::from(res.value).render());
            println!("b_total: {}", res.counts.b_total);
            println!("a_total: {}", res.counts.a_total);
            println!("n_valid: {}", res.counts.n_valid);
            println!("epsilon: {}", res.params.epsilon());
            println!("runtime_ms: {ms:.3}");
            if let Some(path) = out {
                let rec = SweepRecord::raw(Experiment::Custom, "graph", g.n_nodes(), "", 0.0, None, &res, Some(ms));
                write_sweep_csv(&[rec], path)?;
            }
            Ok(match res.value {
                EntropyValue::Defined(_) => ExitCode::SUCCESS,
                EntropyValue::Undefined(_) => ExitCode::from(EXIT_UNDEFINED),
            })
        }
        Command::LogisticSweep {
            rho_min,
            rho_max,
            rho_step,
            n_samples,
            burn_in,
            n_seeds,
            m,
            r,
            common,
        } => {
            let cfg = LogisticSweepConfig {
                rho_min: *rho_min,
                rho_max: *rho_max,
                rho_step: *rho_step,
                n_samples: *n_samples,
                burn_in: *burn_in,
                n_seeds: *n_seeds,
                base_seed: common.seed,
                m: *m,
                r: *r,
                record_timing: !common.omit_timing,
                options,
            };
            let rows = run_logistic_sweep(&cfg)?;
            write_sweep_csv(&rows, &common.out)?;
            report(&rows, "rho");
            Ok(ExitCode::SUCCESS)
        }
        Command::ErSweep {
            n_nodes,
            k_list,
            m_list,
            r,
            n_realisations,
            common,
        } => {
            let cfg = ErSweepConfig {
                n_nodes: *n_nodes,
                k_values: k_list.clone(),
                m_values: m_list.clone(),
                r: *r,
                n_realisations: *n_realisations,
                base_seed: common.seed,
                record_timing: !common.omit_timing,
                options,
            };
            let rows = run_er_sweep(&cfg)?;
            write_sweep_csv(&rows, &common.out)?;
            report(&rows, "K");
            Ok(ExitCode::SUCCESS)
        }
    }
}

/// One stderr line per summary row.
fn report(rows: &[SweepRecord], param: &str) {
    for s in rows.iter().filter(|r| r.row_kind == RowKind::Summary) {
        let std = s.entropy_std.map_or(String::new(), |v| format!(" ± {v:.4}"));
        let time = s
            .runtime_ms
            .map_or(String::new(), |t| format!(", mean runtime {t:.1} ms"));
        eprintln!(
            "{:<16} {param}={:<6} m={} entropy {}{std} ({} defined){time}",
            s.variant,
            s.param_value,
            s.m,
            s.entropy.render(),
            s.n_defined.unwrap_or(0),
        );
    }
}
