//! Benchmark harness: a seeded, duplicate-free scramble corpus solved once
//! per configured heuristic, reported as average solution length, wall
//! time and closed-node count.

mod corpus;
mod dataset;

use std::fmt::{self, Write as _};
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::sync::Arc;
use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::heuristic::{
    BoltzmannPolicy, DistanceEvaluator, DistanceTable, EvalError, MlpError, MlpModel, MlpPolicy,
    NoisyDistance, PolicyEvaluator, TableDistance, TableError, UniformPolicy, DEFAULT_TABLE_DEPTH,
    DEFAULT_TEMPERATURE,
};
use crate::solver::{astar_solve, Heuristic, SearchLimits, SolveError};
use crate::wcd::{WcdError, WcdParams};

pub use corpus::{gen_samples, Sample};
pub use dataset::{
    export_dataset, optimal_actions, policy_accuracy, read_dataset, top1_accuracy, DatasetRecord,
    DATASET_HEADER,
};

/// `mu` used when a heuristic spec leaves it out.
pub const DEFAULT_MU: f64 = 0.5;

#[derive(Debug, Error)]
pub enum BenchError {
    #[error("config: {0}")]
    Config(String),
    #[error("could only find {found} distinct states of the {requested} requested")]
    CorpusExhausted { requested: usize, found: usize },
    #[error("distance table: {0}")]
    Table(#[from] TableError),
    #[error("policy model: {0}")]
    Model(#[from] MlpError),
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error("dataset: {0}")]
    Dataset(String),
    #[error("i/o: {0}")]
    Io(#[from] std::io::Error),
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

/// Where action probabilities come from.
#[derive(Clone, Debug, Default, PartialEq)]
pub enum PolicySpec {
    #[default]
    Uniform,
    /// Softmax over negated neighbor distances of the heuristic's own `f_d`.
    Boltzmann {
        temperature: f64,
    },
    Mlp {
        path: PathBuf,
    },
}

impl FromStr for PolicySpec {
    type Err = BenchError;

    /// `uniform`, `boltzmann`, `boltzmann:T` or `mlp:PATH`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.split_once(':') {
            None if s == "uniform" => Ok(PolicySpec::Uniform),
            None if s == "boltzmann" => Ok(PolicySpec::Boltzmann {
                temperature: DEFAULT_TEMPERATURE,
            }),
            Some(("boltzmann", t)) => {
                let temperature: f64 = t
                    .parse()
                    .map_err(|_| BenchError::Config(format!("bad temperature {t:?}")))?;
                if temperature.is_nan() || temperature <= 0.0 {
                    return Err(BenchError::Config(format!(
                        "temperature must be > 0, got {t}"
                    )));
                }
                Ok(PolicySpec::Boltzmann { temperature })
            }
            Some(("mlp", path)) if !path.is_empty() => Ok(PolicySpec::Mlp { path: path.into() }),
            _ => Err(BenchError::Config(format!(
                "unknown policy {s:?} (expected uniform, boltzmann[:T] or mlp:PATH)"
            ))),
        }
    }
}

impl fmt::Display for PolicySpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PolicySpec::Uniform => f.write_str("uniform"),
            PolicySpec::Boltzmann { temperature } => write!(f, "boltzmann:{temperature}"),
            PolicySpec::Mlp { path } => write!(f, "mlp:{}", path.display()),
        }
    }
}

impl TryFrom<String> for PolicySpec {
    type Error = BenchError;
    fn try_from(s: String) -> Result<Self, Self::Error> {
        s.parse()
    }
}

impl From<PolicySpec> for String {
    fn from(p: PolicySpec) -> String {
        p.to_string()
    }
}

impl Serialize for PolicySpec {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for PolicySpec {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

fn default_mu() -> f64 {
    DEFAULT_MU
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum HeuristicKind {
    /// Exact table distance, no convolution.
    Exact,
    /// `k`-layer WCD over the exact table.
    #[serde(alias = "deep-k")]
    Wcd {
        k: usize,
        #[serde(default = "default_mu")]
        mu: f64,
        #[serde(default)]
        policy: PolicySpec,
    },
    /// `k`-layer WCD over the exact table plus seeded Gaussian noise.
    Noisy {
        sigma: f64,
        #[serde(default)]
        noise_seed: u64,
        #[serde(default)]
        k: usize,
        #[serde(default = "default_mu")]
        mu: f64,
        #[serde(default)]
        policy: PolicySpec,
    },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HeuristicSpec {
    #[serde(flatten)]
    pub kind: HeuristicKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
}

impl HeuristicSpec {
    pub fn exact() -> Self {
        Self {
            kind: HeuristicKind::Exact,
            label: None,
        }
    }

    pub fn wcd(k: usize, mu: f64, policy: PolicySpec) -> Self {
        Self {
            kind: HeuristicKind::Wcd { k, mu, policy },
            label: None,
        }
    }

    pub fn noisy(sigma: f64, noise_seed: u64, k: usize, mu: f64, policy: PolicySpec) -> Self {
        Self {
            kind: HeuristicKind::Noisy {
                sigma,
                noise_seed,
                k,
                mu,
                policy,
            },
            label: None,
        }
    }

    pub fn label(&self) -> String {
        if let Some(l) = &self.label {
            return l.clone();
        }
        match &self.kind {
            HeuristicKind::Exact => "exact".into(),
            HeuristicKind::Wcd { k, mu, policy } => format!("wcd-k{k}-mu{mu}-{policy}"),
            HeuristicKind::Noisy {
                sigma,
                k,
                mu,
                policy,
                ..
            } => {
                format!("noisy-s{sigma}-k{k}-mu{mu}-{policy}")
            }
        }
    }

    fn validate(&self) -> Result<(), BenchError> {
        let (mu, sigma) = match &self.kind {
            HeuristicKind::Exact => return Ok(()),
            HeuristicKind::Wcd { mu, .. } => (*mu, 0.0),
            HeuristicKind::Noisy { mu, sigma, .. } => (*mu, *sigma),
        };
        WcdParams::new(mu, 0).map_err(|e| BenchError::Config(format!("{}: {e}", self.label())))?;
        if !(sigma >= 0.0 && sigma.is_finite()) {
            return Err(BenchError::Config(format!(
                "{}: sigma must be >= 0",
                self.label()
            )));
        }
        Ok(())
    }

    /// Instantiates the evaluators over `table`.
    pub fn build(&self, table: &Arc<DistanceTable>) -> Result<Heuristic, BenchError> {
        self.validate()?;
        let exact: Arc<dyn DistanceEvaluator> = Arc::new(TableDistance::new(table.clone()));
        let (f_d, k, mu, policy) = match &self.kind {
            HeuristicKind::Exact => (exact, 0, DEFAULT_MU, &PolicySpec::Uniform),
            HeuristicKind::Wcd { k, mu, policy } => (exact, *k, *mu, policy),
            HeuristicKind::Noisy {
                sigma,
                noise_seed,
                k,
                mu,
                policy,
            } => {
                let noisy: Arc<dyn DistanceEvaluator> =
                    Arc::new(NoisyDistance::new(exact, *sigma, *noise_seed)?);
                (noisy, *k, *mu, policy)
            }
        };
        let f_p = build_policy(policy, &f_d)?;
        let params = WcdParams::new(mu, k).map_err(|e| BenchError::Config(e.to_string()))?;
        Ok(Heuristic::new(params, f_d, f_p).with_label(self.label()))
    }
}

pub fn build_policy(
    spec: &PolicySpec,
    f_d: &Arc<dyn DistanceEvaluator>,
) -> Result<Arc<dyn PolicyEvaluator>, BenchError> {
    Ok(match spec {
        PolicySpec::Uniform => Arc::new(UniformPolicy),
        PolicySpec::Boltzmann { temperature } => {
            Arc::new(BoltzmannPolicy::new(f_d.clone(), *temperature)?)
        }
        PolicySpec::Mlp { path } => Arc::new(MlpPolicy::new(MlpModel::load_path(path)?)?),
    })
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TableSource {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub depth: Option<u8>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub path: Option<PathBuf>,
}

impl TableSource {
    pub fn load(&self) -> Result<DistanceTable, BenchError> {
        match (&self.path, self.depth) {
            (Some(_), Some(_)) => Err(BenchError::Config(
                "table: give depth or path, not both".into(),
            )),
            (Some(p), None) => Ok(DistanceTable::load(p)?),
            (None, d) => Ok(DistanceTable::build(d.unwrap_or(DEFAULT_TABLE_DEPTH))?),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LimitsConfig {
    pub max_closed_nodes: usize,
    pub max_time_s: f64,
}

impl Default for LimitsConfig {
    fn default() -> Self {
        let d = SearchLimits::default();
        Self {
            max_closed_nodes: d.max_closed_nodes,
            max_time_s: d.max_time.as_secs_f64(),
        }
    }
}

impl LimitsConfig {
    pub fn to_limits(&self) -> Result<SearchLimits, BenchError> {
        if !(self.max_time_s > 0.0 && self.max_time_s.is_finite()) {
            return Err(BenchError::Config(
                "limits.max_time_s must be positive".into(),
            ));
        }
        SearchLimits::new(
            self.max_closed_nodes,
            Duration::from_secs_f64(self.max_time_s),
        )
        .map_err(|e| BenchError::Config(e.to_string()))
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub csv: Option<PathBuf>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub json: Option<PathBuf>,
}

/// A benchmark run, usually read from a JSON file.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BenchConfig {
    pub samples: usize,
    pub min_depth: usize,
    pub max_depth: usize,
    pub seed: u64,
    #[serde(default)]
    pub table: TableSource,
    pub heuristics: Vec<HeuristicSpec>,
    #[serde(default)]
    pub limits: LimitsConfig,
    /// Solve samples concurrently.
    #[serde(default)]
    pub parallel: bool,
    #[serde(default)]
    pub output: OutputConfig,
}

impl BenchConfig {
    pub fn from_json_str(s: &str) -> Result<Self, BenchError> {
        let cfg: Self = serde_json::from_str(s).map_err(|e| BenchError::Config(e.to_string()))?;
        Ok(cfg)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self, BenchError> {
        let text = std::fs::read_to_string(path.as_ref())
            .map_err(|e| BenchError::Config(format!("{}: {e}", path.as_ref().display())))?;
        Self::from_json_str(&text)
    }

    pub fn validate(&self) -> Result<(), BenchError> {
        if self.samples == 0 {
            return Err(BenchError::Config("samples must be positive".into()));
        }
        if self.min_depth > self.max_depth {
            return Err(BenchError::Config(format!(
                "min_depth {} exceeds max_depth {}",
                self.min_depth, self.max_depth
            )));
        }
        if self.heuristics.is_empty() {
            return Err(BenchError::Config(
                "at least one heuristic is required".into(),
            ));
        }
        let mut labels: Vec<String> = self.heuristics.iter().map(HeuristicSpec::label).collect();
        labels.sort();
        if labels.windows(2).any(|w| w[0] == w[1]) {
            return Err(BenchError::Config("heuristic labels must be unique".into()));
        }
        for h in &self.heuristics {
            h.validate()?;
        }
        self.limits.to_limits()?;
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Ok,
    LimitExceeded,
    Error,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Ok => "ok",
            Status::LimitExceeded => "limit_exceeded",
            Status::Error => "error",
        })
    }
}

/// Result of one heuristic on one sample.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Outcome {
    pub status: Status,
    pub length: Option<usize>,
    pub solution: Option<String>,
    pub time_s: f64,
    pub searched_nodes: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub message: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SampleRecord {
    pub index: usize,
    pub seed: u64,
    pub depth: usize,
    pub scramble: String,
    pub key: String,
    /// Exact distance when the start lies inside the table.
    pub true_distance: Option<u8>,
    /// One per heuristic, in config order.
    pub outcomes: Vec<Outcome>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HeuristicRow {
    pub heuristic: String,
    pub solved: usize,
    pub failed: usize,
    /// Means over solved samples only; `None` when nothing was solved.
    pub avg_length: Option<f64>,
    pub avg_time_s: Option<f64>,
    pub avg_searched_nodes: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BenchReport {
    pub heuristics: Vec<String>,
    pub rows: Vec<HeuristicRow>,
    pub samples: Vec<SampleRecord>,
}

impl BenchReport {
    fn from_samples(heuristics: Vec<String>, samples: Vec<SampleRecord>) -> Self {
        let rows = summarize(&heuristics, &samples);
        Self {
            heuristics,
            rows,
            samples,
        }
    }

    /// Rows recomputed from the per-sample records.
    pub fn recompute_rows(&self) -> Vec<HeuristicRow> {
        summarize(&self.heuristics, &self.samples)
    }

    pub fn row(&self, label: &str) -> Option<&HeuristicRow> {
        self.rows.iter().find(|r| r.heuristic == label)
    }

    /// Mean exact distance over samples inside the table.
    pub fn mean_true_distance(&self) -> Option<f64> {
        let d: Vec<f64> = self
            .samples
            .iter()
            .filter_map(|s| s.true_distance.map(f64::from))
            .collect();
        (!d.is_empty()).then(|| d.iter().sum::<f64>() / d.len() as f64)
    }

    /// CSV columns: heuristic, sample_index, depth, length, time_s,
    /// searched_nodes, status.
    pub fn write_csv<W: std::io::Write>(&self, w: W) -> Result<(), BenchError> {
        let mut out = csv::Writer::from_writer(w);
        out.write_record([
            "heuristic",
            "sample_index",
            "depth",
            "length",
            "time_s",
            "searched_nodes",
            "status",
        ])?;
        for s in &self.samples {
            for (label, o) in self.heuristics.iter().zip(&s.outcomes) {
                out.write_record([
                    label.clone(),
                    s.index.to_string(),
                    s.depth.to_string(),
                    o.length.map(|l| l.to_string()).unwrap_or_default(),
                    format!("{:.6}", o.time_s),
                    o.searched_nodes.to_string(),
                    o.status.to_string(),
                ])?;
            }
        }
        out.flush()?;
        Ok(())
    }

    pub fn write_json<W: std::io::Write>(&self, w: W) -> Result<(), BenchError> {
        serde_json::to_writer_pretty(w, self)?;
        Ok(())
    }

    pub fn write_outputs(&self, output: &OutputConfig) -> Result<(), BenchError> {
        if let Some(p) = &output.csv {
            self.write_csv(std::io::BufWriter::new(std::fs::File::create(p)?))?;
        }
        if let Some(p) = &output.json {
            self.write_json(std::io::BufWriter::new(std::fs::File::create(p)?))?;
        }
        Ok(())
    }

    /// Human-readable summary table.
    pub fn format_table(&self) -> String {
        let width = self
            .rows
            .iter()
            .map(|r| r.heuristic.len())
            .max()
            .unwrap_or(9)
            .max(9);
        let mut s = String::new();
        let _ = writeln!(
            s,
            "{:<width$}  {:>6}  {:>6}  {:>10}  {:>10}  {:>14}",
            "heuristic", "solved", "failed", "avg_length", "avg_time_s", "avg_nodes"
        );
        let fmt =
            |v: Option<f64>, p: usize| v.map(|x| format!("{x:.p$}")).unwrap_or_else(|| "-".into());
        for r in &self.rows {
            let _ = writeln!(
                s,
                "{:<width$}  {:>6}  {:>6}  {:>10}  {:>10}  {:>14}",
                r.heuristic,
                r.solved,
                r.failed,
                fmt(r.avg_length, 3),
                fmt(r.avg_time_s, 4),
                fmt(r.avg_searched_nodes, 3)
            );
        }
        if let Some(d) = self.mean_true_distance() {
            let _ = writeln!(s, "mean exact distance of corpus: {d:.3}");
        }
        s
    }
}

fn summarize(heuristics: &[String], samples: &[SampleRecord]) -> Vec<HeuristicRow> {
    heuristics
        .iter()
        .enumerate()
        .map(|(i, label)| {
            let ok: Vec<&Outcome> = samples
                .iter()
                .map(|s| &s.outcomes[i])
                .filter(|o| o.status == Status::Ok)
                .collect();
            let n = ok.len();
            let mean = |f: &dyn Fn(&Outcome) -> f64| {
                (n > 0).then(|| ok.iter().map(|o| f(o)).sum::<f64>() / n as f64)
            };
            HeuristicRow {
                heuristic: label.clone(),
                solved: n,
                failed: samples.len() - n,
                avg_length: mean(&|o| o.length.expect("solved") as f64),
                avg_time_s: mean(&|o| o.time_s),
                avg_searched_nodes: mean(&|o| o.searched_nodes as f64),
            }
        })
        .collect()
}

fn solve_one(sample: &Sample, h: &Heuristic, limits: SearchLimits) -> Outcome {
    let t0 = Instant::now();
    let result = astar_solve(&sample.state, h, limits);
    let time_s = t0.elapsed().as_secs_f64();
    match result {
        Ok(sol) => {
            debug_assert!(sol.moves.apply_to(&sample.state).is_solved());
            Outcome {
                status: Status::Ok,
                length: Some(sol.length()),
                solution: Some(sol.moves.to_string()),
                time_s,
                searched_nodes: sol.searched_nodes,
                message: None,
            }
        }
        Err(SolveError::LimitExceeded { closed, .. }) => Outcome {
            status: Status::LimitExceeded,
            length: None,
            solution: None,
            time_s,
            searched_nodes: closed,
            message: Some(result.unwrap_err().to_string()),
        },
        Err(e) => Outcome {
            status: Status::Error,
            length: None,
            solution: None,
            time_s,
            searched_nodes: 0,
            message: Some(e.to_string()),
        },
    }
}

/// Runs every heuristic on the same corpus.
pub fn run_bench(cfg: &BenchConfig) -> Result<BenchReport, BenchError> {
    cfg.validate()?;
    let table = Arc::new(cfg.table.load()?);
    run_bench_with_table(cfg, table)
}

/// [`run_bench`] with an already built table (ignores `cfg.table`).
pub fn run_bench_with_table(
    cfg: &BenchConfig,
    table: Arc<DistanceTable>,
) -> Result<BenchReport, BenchError> {
    cfg.validate()?;
    let limits = cfg.limits.to_limits()?;
    let heuristics: Vec<Heuristic> = cfg
        .heuristics
        .iter()
        .map(|h| h.build(&table))
        .collect::<Result<_, _>>()?;
    let corpus = gen_samples(cfg.samples, cfg.min_depth, cfg.max_depth, cfg.seed)?;

    let mut per_heuristic: Vec<Vec<Outcome>> = Vec::with_capacity(heuristics.len());
    for h in &heuristics {
        let outcomes: Vec<Outcome> = if cfg.parallel {
            corpus.par_iter().map(|s| solve_one(s, h, limits)).collect()
        } else {
            corpus.iter().map(|s| solve_one(s, h, limits)).collect()
        };
        per_heuristic.push(outcomes);
    }

    let samples = corpus
        .iter()
        .map(|s| {
            let summary = corpus::SampleSummary::from(s);
            SampleRecord {
                index: summary.index,
                seed: summary.seed,
                depth: summary.depth,
                scramble: summary.scramble,
                key: summary.key,
                true_distance: table.exact_distance(&s.state).ok(),
                outcomes: per_heuristic.iter().map(|o| o[s.index].clone()).collect(),
            }
        })
        .collect();
    Ok(BenchReport::from_samples(
        heuristics.iter().map(|h| h.label().to_string()).collect(),
        samples,
    ))
}

impl From<WcdError> for BenchError {
    fn from(e: WcdError) -> Self {
        BenchError::Config(e.to_string())
    }
}
