//! Plain-text graph and signal files, and CSV output of sweep results.
//!
//! Edge list:
//!
//! ```text
//! # comments start with '#'
//! nodes 4 undirected
//! 0 1
//! 1 2 0.5
//! ```
//!
//! Node ids are 0-based; the weight defaults to 1. Undirected inputs list each
//! edge once and are symmetrised. A repeated edge is an error, never a summed
//! weight.
//!
//! Signal: one value per line, line `k` holding node `k`'s value.

use std::collections::HashSet;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use crate::embedding::GraphSignal;
use crate::entropy::{EntropyResult, EntropyValue, UndefinedReason};
use crate::error::{Result, SampEnError};
use crate::graph::Graph;

fn read_text(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|source| SampEnError::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn parse_error(path: &Path, line: usize, message: impl Into<String>) -> SampEnError {
    SampEnError::Parse {
        path: path.to_path_buf(),
        line,
        message: message.into(),
    }
}

pub fn read_edge_list(path: impl AsRef<Path>) -> Result<Graph> {
    let path = path.as_ref();
    parse_edge_list(&read_text(path)?, path)
}

/// Parses edge-list text; `path` is only used in error messages.
pub fn parse_edge_list(text: &str, path: &Path) -> Result<Graph> {
    let mut header: Option<(usize, bool)> = None;
    let mut edges = Vec::new();
    let mut seen = HashSet::new();

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        let Some((n, directed)) = header else {
            header = Some(
                parse_header(&fields)
                    .ok_or_else(|| parse_error(path, line_no, "expected 'nodes <N> directed|undirected'"))?,
            );
            continue;
        };
        if !(2..=3).contains(&fields.len()) {
            return Err(parse_error(path, line_no, "expected 'src dst [weight]'"));
        }
        let node = |s: &str| -> Result<usize> {
            let id: usize = s
                .parse()
                .map_err(|_| parse_error(path, line_no, format!("invalid node id '{s}'")))?;
            if id >= n {
                return Err(parse_error(path, line_no, "node id out of range"));
            }
            Ok(id)
        };
        let (u, v) = (node(fields[0])?, node(fields[1])?);
        let w = match fields.get(2) {
            Some(s) => s
                .parse::<f64>()
                .map_err(|_| parse_error(path, line_no, format!("invalid weight '{s}'")))?,
            None => 1.0,
        };
        if !(w.is_finite() && w > 0.0) {
            return Err(parse_error(path, line_no, "weight must be positive and finite"));
        }
        let key = if directed { (u, v) } else { (u.min(v), u.max(v)) };
        if !seen.insert(key) {
            return Err(parse_error(path, line_no, format!("duplicate edge ({u}, {v})")));
        }
        edges.push((u, v, w));
    }

    let (n, directed) = header.ok_or_else(|| SampEnError::Format {
        path: path.to_path_buf(),
        message: "missing 'nodes <N> directed|undirected' directive".into(),
    })?;
    Graph::from_edges(n, directed, edges)
}

fn parse_header(fields: &[&str]) -> Option<(usize, bool)> {
    match fields {
        ["nodes", n, kind] => {
            let n: usize = n.parse().ok().filter(|&n| n > 0)?;
            let directed = match *kind {
                "directed" => true,
                "undirected" => false,
                _ => return None,
            };
            Some((n, directed))
        }
        _ => None,
    }
}

/// Writes a graph in the edge-list format; unit weights are omitted.
pub fn write_edge_list(graph: &Graph, path: impl AsRef<Path>) -> Result<()> {
    let kind = if graph.is_directed() { "directed" } else { "undirected" };
    let mut out = format!("nodes {} {kind}\n", graph.n_nodes());
    for (u, v, w) in graph.edge_list() {
        if w == 1.0 {
            out.push_str(&format!("{u} {v}\n"));
        } else {
            out.push_str(&format!("{u} {v} {w}\n"));
        }
    }
    write_text(path.as_ref(), &out)
}

pub fn read_signal(path: impl AsRef<Path>, n_nodes: usize) -> Result<GraphSignal> {
    let path = path.as_ref();
    parse_signal(&read_text(path)?, n_nodes, path)
}

pub fn parse_signal(text: &str, n_nodes: usize, path: &Path) -> Result<GraphSignal> {
    let lines: Vec<&str> = text.lines().collect();
    let used = lines.iter().rposition(|l| !l.trim().is_empty()).map_or(0, |k| k + 1);
    let mut values = Vec::with_capacity(used);
    for (idx, raw) in lines[..used].iter().enumerate() {
        let line = raw.trim();
        let v: f64 = line
            .parse()
            .map_err(|_| parse_error(path, idx + 1, format!("cannot parse '{line}' as a number")))?;
        if !v.is_finite() {
            return Err(parse_error(path, idx + 1, "value is not finite"));
        }
        values.push(v);
    }
    if values.len() != n_nodes {
        return Err(SampEnError::Format {
            path: path.to_path_buf(),
            message: format!("expected {n_nodes} values, found {}", values.len()),
        });
    }
    GraphSignal::new(values)
}

pub fn write_signal(signal: &GraphSignal, path: impl AsRef<Path>) -> Result<()> {
    let mut out = String::new();
    for v in signal.values() {
        out.push_str(&format!("{v}\n"));
    }
    write_text(path.as_ref(), &out)
}

fn write_text(path: &Path, text: &str) -> Result<()> {
    let io = |source| SampEnError::Io {
        path: path.to_path_buf(),
        source,
    };
    let mut f = fs::File::create(path).map_err(io)?;
    f.write_all(text.as_bytes()).map_err(io)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Experiment {
    Logistic,
    Er,
    Custom,
}

impl Experiment {
    pub fn as_str(self) -> &'static str {
        match self {
            Experiment::Logistic => "logistic",
            Experiment::Er => "er",
            Experiment::Custom => "custom",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RowKind {
    Raw,
    Summary,
}

impl RowKind {
    pub fn as_str(self) -> &'static str {
        match self {
            RowKind::Raw => "raw",
            RowKind::Summary => "summary",
        }
    }
}

/// Entropy column content.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum EntropyCell {
    Value(f64),
    Undefined(UndefinedReason),
    /// Too few valid nodes to form a pair of patterns.
    InsufficientPatterns,
    /// Summary over runs none of which had a defined entropy.
    NoDefinedRuns,
}

impl From<EntropyValue> for EntropyCell {
    fn from(v: EntropyValue) -> Self {
        match v {
            EntropyValue::Defined(x) => EntropyCell::Value(x),
            EntropyValue::Undefined(reason) => EntropyCell::Undefined(reason),
        }
    }
}

impl EntropyCell {
    pub fn render(&self) -> String {
        match self {
            EntropyCell::Value(v) => format_significant(*v, 12),
            EntropyCell::Undefined(reason) => format!("undefined:{}", reason.tag()),
            EntropyCell::InsufficientPatterns => "undefined:insufficient_patterns".into(),
            EntropyCell::NoDefinedRuns => "undefined:no_defined_runs".into(),
        }
    }
}

/// One line of a sweep CSV: a single computation (`Raw`) or an aggregate over
/// seeds/realisations (`Summary`).
#[derive(Debug, Clone, PartialEq)]
pub struct SweepRecord {
    pub row_kind: RowKind,
    pub experiment: Experiment,
    /// Which estimator/graph produced the row, e.g. `directed_path`.
    pub variant: String,
    pub n: usize,
    pub m: usize,
    pub r: f64,
    pub param_name: String,
    pub param_value: f64,
    pub seed: Option<u64>,
    pub entropy: EntropyCell,
    pub entropy_std: Option<f64>,
    pub n_defined: Option<usize>,
    pub b_total: f64,
    pub a_total: f64,
    pub n_valid: Option<usize>,
    pub runtime_ms: Option<f64>,
}

impl SweepRecord {
    /// A raw row from one entropy result.
    #[allow(clippy::too_many_arguments)]
    pub fn raw(
        experiment: Experiment,
        variant: &str,
        n: usize,
        param_name: &str,
        param_value: f64,
        seed: Option<u64>,
        result: &EntropyResult,
        runtime_ms: Option<f64>,
    ) -> Self {
        SweepRecord {
            row_kind: RowKind::Raw,
            experiment,
            variant: variant.to_string(),
            n,
            m: result.params.m(),
            r: result.params.r(),
            param_name: param_name.to_string(),
            param_value,
            seed,
            entropy: result.value.into(),
            entropy_std: None,
            n_defined: None,
            b_total: result.counts.b_total,
            a_total: result.counts.a_total,
            n_valid: Some(result.counts.n_valid),
            runtime_ms,
        }
    }

    /// Aggregates raw rows sharing experiment, variant and parameters.
    ///
    /// The entropy is the mean over runs with a defined value, and
    /// `entropy_std` their sample standard deviation (0 for a single run).
    /// Counts and runtimes are averaged over all runs.
    pub fn summarize(rows: &[SweepRecord]) -> Option<SweepRecord> {
        let first = rows.first()?;
        let defined: Vec<f64> = rows
            .iter()
            .filter_map(|r| match r.entropy {
                EntropyCell::Value(v) => Some(v),
                _ => None,
            })
            .collect();
        let (entropy, entropy_std) = match mean_and_sample_sd(&defined) {
            Some((mean, sd)) => (EntropyCell::Value(mean), Some(sd)),
            None => (EntropyCell::NoDefinedRuns, None),
        };
        let mean_of = |f: &dyn Fn(&SweepRecord) -> f64| rows.iter().map(f).sum::<f64>() / rows.len() as f64;
        let runtime_ms = rows
            .iter()
            .map(|r| r.runtime_ms)
            .collect::<Option<Vec<f64>>>()
            .map(|t| t.iter().sum::<f64>() / t.len() as f64);
        Some(SweepRecord {
            row_kind: RowKind::Summary,
            seed: None,
            entropy,
            entropy_std,
            n_defined: Some(defined.len()),
            b_total: mean_of(&|r| r.b_total),
            a_total: mean_of(&|r| r.a_total),
            n_valid: None,
            runtime_ms,
            ..first.clone()
        })
    }
}

/// Mean and `n - 1` normalised standard deviation; `None` when empty.
pub fn mean_and_sample_sd(values: &[f64]) -> Option<(f64, f64)> {
    if values.is_empty() {
        return None;
    }
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    if values.len() == 1 {
        return Some((mean, 0.0));
    }
    let ss: f64 = values.iter().map(|v| (v - mean) * (v - mean)).sum();
    Some((mean, (ss / (n - 1.0)).sqrt()))
}

pub const CSV_COLUMNS: [&str; 16] = [
    "experiment",
    "N",
    "m",
    "r",
    "param_name",
    "param_value",
    "seed",
    "entropy",
    "b_total",
    "a_total",
    "n_valid",
    "runtime_ms",
    "row_kind",
    "variant",
    "entropy_std",
    "n_defined",
];

fn record_fields(rec: &SweepRecord) -> [String; 16] {
    let opt = |v: Option<String>| v.unwrap_or_default();
    [
        rec.experiment.as_str().to_string(),
        rec.n.to_string(),
        rec.m.to_string(),
        rec.r.to_string(),
        rec.param_name.clone(),
        rec.param_value.to_string(),
        opt(rec.seed.map(|s| s.to_string())),
        rec.entropy.render(),
        format_significant(rec.b_total, 12),
        format_significant(rec.a_total, 12),
        opt(rec.n_valid.map(|n| n.to_string())),
        opt(rec.runtime_ms.map(|t| format!("{t:.3}"))),
        rec.row_kind.as_str().to_string(),
        rec.variant.clone(),
        opt(rec.entropy_std.map(|s| format_significant(s, 12))),
        opt(rec.n_defined.map(|n| n.to_string())),
    ]
}

/// Writes records as CSV to any writer, header first.
pub fn write_sweep<W: std::io::Write>(records: &[SweepRecord], writer: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    w.write_record(CSV_COLUMNS)?;
    for rec in records {
        w.write_record(record_fields(rec))?;
    }
    w.flush().map_err(|e| SampEnError::Csv(e.into()))?;
    Ok(())
}

pub fn write_sweep_csv(records: &[SweepRecord], path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    if records.is_empty() {
        return Err(SampEnError::InvalidParameter("no records to write".into()));
    }
    let file = fs::File::create(path).map_err(|source| SampEnError::Io {
        path: PathBuf::from(path),
        source,
    })?;
    write_sweep(records, std::io::BufWriter::new(file))
}

/// Fixed-point rendering with `digits` significant digits.
pub fn format_significant(value: f64, digits: usize) -> String {
    if value == 0.0 || !value.is_finite() {
        return if value == 0.0 { "0".into() } else { value.to_string() };
    }
    // exponent after rounding to the requested precision
    let sci = format!("{:.*e}", digits - 1, value);
    let exp: i32 = sci[sci.find('e').expect("exponent") + 1..]
        .parse()
        .expect("integer exponent");
    let decimals = (digits as i32 - 1 - exp).max(0) as usize;
    format!("{value:.decimals$}")
}
