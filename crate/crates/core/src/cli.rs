//! Command-line front end: argument parsing, the resolved run configuration
//! embedded in every artifact, and dispatch to the library.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use crate::error::{Result, SumsetError};
use crate::graph::{
    build_extension_graphs_with, verify_graph, BuildStrategy, ExtensionGraph, VerificationReport,
};
use crate::harness::generate::GeneratorSpec;
use crate::harness::oracle::{brute_force_oracle_with_limit, DEFAULT_ORACLE_THRESHOLD};
use crate::harness::ratio::{ratio_check, RatioVerdict};
use crate::harness::structural::{structural_checks, StructuralReport};
use crate::output::{decimal, ratio_csv_string, Artifact};
use crate::search::{
    exhaustive_search, stochastic_search, ExhaustiveParams, SearchReport, StochasticParams,
    DEFAULT_PATIENCE, DEFAULT_SEARCH_BUDGET,
};
use crate::set::{binomial, IntegerSet};
use crate::sumset::{
    enumerate_representations_with_limit, ksum_count, ksum_multiplicity, ksum_set,
    RepresentationList, SumMultiplicityTable, DEFAULT_CAP, DEFAULT_ENUMERATION_THRESHOLD,
};

pub const EXIT_OK: u8 = 0;
pub const EXIT_INVALID_INPUT: u8 = 2;
pub const EXIT_BUDGET_EXCEEDED: u8 = 3;
pub const EXIT_INTERNAL_VIOLATION: u8 = 4;

const DEFAULT_STOCHASTIC_BUDGET: u64 = 10_000;

#[derive(Debug, Parser)]
#[command(
    name = "sumsets",
    version,
    about = "Restricted sumsets, extension graphs and ratio-bound checks"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Commands,
}

#[derive(Debug, Subcommand)]
pub enum Commands {
    /// Sizes, sums and multiplicity tables of k∧A.
    Compute(ComputeArgs),
    /// Build extension graphs and check the counting chain for a range of k.
    Verify(VerifyArgs),
    /// Exhaustive or hill-climbing search for extremal sets and counterexamples.
    Search(SearchArgs),
    /// Summarize prior outputs (or fresh sets) as per-k ratio versus bound.
    Report(ReportArgs),
}

#[derive(Debug, Args)]
#[group(multiple = false)]
pub struct SourceArgs {
    /// Comma-separated integers, e.g. 1,2,3,4,5
    #[arg(long, allow_hyphen_values = true)]
    pub set: Option<String>,
    /// Generator: gp:n=5,r=2,a0=1 | ap:n=5,d=1,a0=1 | random:n=6,lo=-50,hi=50[,seed=7]
    #[arg(long = "gen")]
    pub generator: Option<String>,
    /// One set per line, comma-separated; `#` starts a comment.
    #[arg(long)]
    pub file: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct CommonArgs {
    #[arg(long, value_enum, default_value_t = OutputFormat::Json)]
    pub format: OutputFormat,
    /// Seed for every stochastic component.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Omit wall-clock timing so identical runs produce identical bytes.
    #[arg(long)]
    pub no_timing: bool,
    /// Write the artifact here instead of stdout.
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ComputeArgs {
    #[command(flatten)]
    pub source: SourceArgs,
    /// Sum order or inclusive range `a..b` (default: 0..n).
    #[arg(long)]
    pub k: Option<String>,
    /// Multiplicity saturation bound.
    #[arg(long, default_value_t = DEFAULT_CAP)]
    pub cap: u32,
    /// Report sizes only, without sums and tables.
    #[arg(long)]
    pub sizes_only: bool,
    /// Also list every representation (bounded by --enum-threshold).
    #[arg(long)]
    pub representations: bool,
    #[arg(long, default_value_t = DEFAULT_ENUMERATION_THRESHOLD as u64)]
    pub enum_threshold: u64,
    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub source: SourceArgs,
    /// Sum order or inclusive range `a..b` (default: 1..n-1).
    #[arg(long)]
    pub k: Option<String>,
    #[arg(long, value_enum, default_value_t = StrategyArg::Exclusion)]
    pub strategy: StrategyArg,
    /// Embed the full extension graphs in the output.
    #[arg(long)]
    pub include_graph: bool,
    #[arg(long, default_value_t = DEFAULT_ENUMERATION_THRESHOLD as u64)]
    pub enum_threshold: u64,
    /// Cross-check sizes with the brute-force oracle while C(n,k) stays below this.
    #[arg(long, default_value_t = DEFAULT_ORACLE_THRESHOLD as u64)]
    pub oracle_threshold: u64,
    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(Debug, Args)]
#[command(group(clap::ArgGroup::new("mode").required(true).args(["exhaustive", "stochastic"])))]
pub struct SearchArgs {
    /// Every n-subset of {1..universe}.
    #[arg(long)]
    pub exhaustive: bool,
    /// Seeded hill climbing with restarts.
    #[arg(long)]
    pub stochastic: bool,
    #[arg(long)]
    pub universe: Option<u64>,
    #[arg(long)]
    pub n: usize,
    /// Sum order or inclusive range `a..b`.
    #[arg(long)]
    pub k: String,
    /// Value range `lo..hi` for stochastic search.
    #[arg(long, allow_hyphen_values = true)]
    pub range: Option<String>,
    /// Exhaustive: maximum sets; stochastic: ratio evaluations.
    #[arg(long)]
    pub budget: Option<u64>,
    #[arg(long, default_value_t = DEFAULT_PATIENCE)]
    pub patience: u64,
    /// Only evaluate sets with minimum 1 and coprime gaps.
    #[arg(long)]
    pub canonical: bool,
    /// Keep every evaluated instance in the report (implied by --format csv).
    #[arg(long)]
    pub all_instances: bool,
    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(Debug, Args)]
pub struct ReportArgs {
    /// JSON artifacts produced by compute, verify or search.
    #[arg(long = "input", num_args = 1..)]
    pub inputs: Vec<PathBuf>,
    #[command(flatten)]
    pub source: SourceArgs,
    /// Sum order or range for fresh sets (default: 1..n-1).
    #[arg(long)]
    pub k: Option<String>,
    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Json,
    Csv,
    Text,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum StrategyArg {
    Exclusion,
    Representations,
}

impl From<StrategyArg> for BuildStrategy {
    fn from(s: StrategyArg) -> Self {
        match s {
            StrategyArg::Exclusion => BuildStrategy::Exclusion,
            StrategyArg::Representations => BuildStrategy::Representations,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CommandKind {
    Compute,
    Verify,
    Search,
    Report,
}

/// Inclusive range of sum orders.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct KRange {
    pub start: usize,
    pub end: usize,
}

impl KRange {
    pub fn iter(&self) -> impl Iterator<Item = usize> {
        self.start..=self.end
    }
}

impl FromStr for KRange {
    type Err = SumsetError;

    /// `3`, `1..4` or `1..=4`; both ends inclusive.
    fn from_str(s: &str) -> Result<Self> {
        let num = |x: &str| {
            x.trim()
                .parse::<usize>()
                .map_err(|e| SumsetError::parse(s, format!("k: {e}")))
        };
        let (start, end) = match s.split_once("..") {
            Some((a, b)) => (num(a)?, num(b.trim_start_matches('='))?),
            None => {
                let k = num(s)?;
                (k, k)
            }
        };
        if start > end {
            return Err(SumsetError::parse(s, "empty k range"));
        }
        Ok(KRange { start, end })
    }
}

/// Where the sets came from, with the resolved sets for replay.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum SetSource {
    Inline {
        set: IntegerSet,
    },
    Generator {
        spec: GeneratorSpec,
        set: IntegerSet,
    },
    File {
        path: PathBuf,
        sets: Vec<IntegerSet>,
    },
}

impl SetSource {
    pub fn sets(&self) -> Vec<IntegerSet> {
        match self {
            SetSource::Inline { set } | SetSource::Generator { set, .. } => vec![set.clone()],
            SetSource::File { sets, .. } => sets.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Thresholds {
    pub enumeration: u64,
    pub oracle: u64,
    pub search_budget: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "lowercase")]
pub enum SearchConfig {
    Exhaustive {
        universe: u64,
        n: usize,
        canonical: bool,
    },
    Stochastic {
        n: usize,
        lo: i64,
        hi: i64,
        patience: u64,
    },
}

/// The fully resolved configuration of one run; embedded in its output.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunConfig {
    pub command: CommandKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub source: Option<SetSource>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k_range: Option<KRange>,
    pub format: OutputFormat,
    pub seed: u64,
    pub thresholds: Thresholds,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cap: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub strategy: Option<BuildStrategy>,
    #[serde(default)]
    pub include_graph: bool,
    #[serde(default)]
    pub sizes_only: bool,
    #[serde(default)]
    pub representations: bool,
    #[serde(default)]
    pub record_instances: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub search: Option<SearchConfig>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub inputs: Vec<PathBuf>,
    pub timing: bool,
}

/// Result of a dispatched command: exit status, the artifact text, and
/// notices for stderr.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: u8,
    pub output: String,
    pub notices: Vec<String>,
}

/// Maps a library error to the documented exit status.
pub fn exit_code_for(err: &SumsetError) -> u8 {
    if err.is_budget() {
        EXIT_BUDGET_EXCEEDED
    } else {
        EXIT_INVALID_INPUT
    }
}

/// Parses a set file: one set per line, `#` comments, blank lines ignored.
pub fn parse_set_file(text: &str) -> Result<Vec<IntegerSet>> {
    text.lines()
        .map(|line| line.split('#').next().unwrap_or("").trim())
        .filter(|line| !line.is_empty())
        .map(IntegerSet::from_str)
        .collect()
}

fn read_file(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| SumsetError::Io {
        path: path.display().to_string(),
        reason: e.to_string(),
    })
}

fn resolve_source(args: &SourceArgs, seed: u64) -> Result<Option<SetSource>> {
    if let Some(s) = &args.set {
        return Ok(Some(SetSource::Inline { set: s.parse()? }));
    }
    if let Some(g) = &args.generator {
        let spec = g.parse::<GeneratorSpec>()?.with_default_seed(seed);
        let set = spec.generate()?;
        return Ok(Some(SetSource::Generator { spec, set }));
    }
    if let Some(path) = &args.file {
        let sets = parse_set_file(&read_file(path)?)?;
        if sets.is_empty() {
            return Err(SumsetError::parse(
                path.display().to_string(),
                "no sets in file",
            ));
        }
        return Ok(Some(SetSource::File {
            path: path.clone(),
            sets,
        }));
    }
    Ok(None)
}

fn require_source(source: Option<SetSource>) -> Result<SetSource> {
    source.ok_or_else(|| {
        SumsetError::InvalidParameters("one of --set, --gen or --file is required".into())
    })
}

fn parse_value_range(s: &str) -> Result<(i64, i64)> {
    let (a, b) = s
        .split_once("..")
        .ok_or_else(|| SumsetError::parse(s, "expected lo..hi"))?;
    let int = |x: &str| {
        x.trim()
            .trim_start_matches('=')
            .parse::<i64>()
            .map_err(|e| SumsetError::parse(s, e.to_string()))
    };
    Ok((int(a)?, int(b)?))
}

impl RunConfig {
    /// Resolves parsed arguments: reads files, runs generators, fills defaults.
    pub fn from_cli(cli: &Cli) -> Result<RunConfig> {
        match &cli.command {
            Commands::Compute(a) => Ok(RunConfig {
                command: CommandKind::Compute,
                source: Some(require_source(resolve_source(&a.source, a.common.seed)?)?),
                k_range: a.k.as_deref().map(str::parse).transpose()?,
                format: a.common.format,
                seed: a.common.seed,
                thresholds: Thresholds {
                    enumeration: a.enum_threshold,
                    oracle: DEFAULT_ORACLE_THRESHOLD as u64,
                    search_budget: DEFAULT_SEARCH_BUDGET as u64,
                },
                cap: Some(a.cap),
                strategy: None,
                include_graph: false,
                sizes_only: a.sizes_only,
                representations: a.representations,
                record_instances: false,
                search: None,
                inputs: Vec::new(),
                timing: !a.common.no_timing,
            }),
            Commands::Verify(a) => Ok(RunConfig {
                command: CommandKind::Verify,
                source: Some(require_source(resolve_source(&a.source, a.common.seed)?)?),
                k_range: a.k.as_deref().map(str::parse).transpose()?,
                format: a.common.format,
                seed: a.common.seed,
                thresholds: Thresholds {
                    enumeration: a.enum_threshold,
                    oracle: a.oracle_threshold,
                    search_budget: DEFAULT_SEARCH_BUDGET as u64,
                },
                cap: None,
                strategy: Some(a.strategy.into()),
                include_graph: a.include_graph,
                sizes_only: false,
                representations: false,
                record_instances: false,
                search: None,
                inputs: Vec::new(),
                timing: !a.common.no_timing,
            }),
            Commands::Search(a) => {
                let search = if a.exhaustive {
                    let universe = a.universe.ok_or_else(|| {
                        SumsetError::InvalidParameters("--exhaustive needs --universe".into())
                    })?;
                    SearchConfig::Exhaustive {
                        universe,
                        n: a.n,
                        canonical: a.canonical,
                    }
                } else {
                    let range = a.range.as_deref().ok_or_else(|| {
                        SumsetError::InvalidParameters("--stochastic needs --range lo..hi".into())
                    })?;
                    let (lo, hi) = parse_value_range(range)?;
                    SearchConfig::Stochastic {
                        n: a.n,
                        lo,
                        hi,
                        patience: a.patience,
                    }
                };
                let budget = a.budget.unwrap_or(if a.exhaustive {
                    DEFAULT_SEARCH_BUDGET as u64
                } else {
                    DEFAULT_STOCHASTIC_BUDGET
                });
                Ok(RunConfig {
                    command: CommandKind::Search,
                    source: None,
                    k_range: Some(a.k.parse()?),
                    format: a.common.format,
                    seed: a.common.seed,
                    thresholds: Thresholds {
                        enumeration: DEFAULT_ENUMERATION_THRESHOLD as u64,
                        oracle: DEFAULT_ORACLE_THRESHOLD as u64,
                        search_budget: budget,
                    },
                    cap: None,
                    strategy: None,
                    include_graph: false,
                    sizes_only: false,
                    representations: false,
                    record_instances: a.all_instances || a.common.format == OutputFormat::Csv,
                    search: Some(search),
                    inputs: Vec::new(),
                    timing: !a.common.no_timing,
                })
            }
            Commands::Report(a) => {
                let source = resolve_source(&a.source, a.common.seed)?;
                if source.is_none() && a.inputs.is_empty() {
                    return Err(SumsetError::InvalidParameters(
                        "report needs --input files or a set source".into(),
                    ));
                }
                Ok(RunConfig {
                    command: CommandKind::Report,
                    source,
                    k_range: a.k.as_deref().map(str::parse).transpose()?,
                    format: a.common.format,
                    seed: a.common.seed,
                    thresholds: Thresholds {
                        enumeration: DEFAULT_ENUMERATION_THRESHOLD as u64,
                        oracle: DEFAULT_ORACLE_THRESHOLD as u64,
                        search_budget: DEFAULT_SEARCH_BUDGET as u64,
                    },
                    cap: None,
                    strategy: None,
                    include_graph: false,
                    sizes_only: false,
                    representations: false,
                    record_instances: false,
                    search: None,
                    inputs: a.inputs.clone(),
                    timing: !a.common.no_timing,
                })
            }
        }
    }
}

/// Requested orders, or `default` (inclusive) when no range was given.
fn orders(range: Option<KRange>, default: (usize, usize)) -> Vec<usize> {
    match range {
        Some(r) => r.iter().collect(),
        None => (default.0..=default.1).collect(),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComputeEntry {
    pub set: IntegerSet,
    pub n: usize,
    pub k: usize,
    pub size: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sums: Option<Vec<i64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub multiplicity: Option<SumMultiplicityTable>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub representations: Option<RepresentationList>,
    /// Present for `1 ≤ k ≤ n−1`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ratio: Option<RatioVerdict>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerifyEntry {
    pub set: IntegerSet,
    pub structural: StructuralReport,
    /// Sizes of `k∧A`, `(k+1)∧A`, `S`, `T` agree with brute force for every
    /// checked k; absent when every order was over the oracle threshold.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub oracle_agrees: Option<bool>,
    pub reports: Vec<VerificationReport>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub graphs: Vec<ExtensionGraph>,
}

impl VerifyEntry {
    pub fn clean(&self) -> bool {
        self.structural.all_pass
            && self.oracle_agrees != Some(false)
            && self
                .reports
                .iter()
                .all(|r| r.chain_holds && r.theorem_consistent())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SummaryRow {
    #[serde(flatten)]
    pub verdict: RatioVerdict,
    /// `|(k+1)∧A| / |k∧A|`, six decimals.
    pub ratio: String,
    /// `(n−k)/(k+1)`, six decimals.
    pub bound: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Summary {
    pub rows: Vec<SummaryRow>,
    pub instances: usize,
    pub holding: usize,
    pub equalities: usize,
    pub counterexamples: usize,
}

pub fn summarize(mut verdicts: Vec<RatioVerdict>) -> Summary {
    verdicts.sort_by(|a, b| a.set.cmp(&b.set).then(a.k.cmp(&b.k)));
    verdicts.dedup_by(|a, b| a.set == b.set && a.k == b.k);
    let rows: Vec<SummaryRow> = verdicts
        .into_iter()
        .map(|v| SummaryRow {
            ratio: decimal(v.size_k1, v.size_k),
            bound: decimal((v.n - v.k) as u64, v.k as u64 + 1),
            verdict: v,
        })
        .collect();
    Summary {
        instances: rows.len(),
        holding: rows.iter().filter(|r| r.verdict.holds).count(),
        equalities: rows.iter().filter(|r| r.verdict.equality).count(),
        counterexamples: rows
            .iter()
            .filter(|r| r.verdict.is_counterexample())
            .count(),
        rows,
    }
}

/// Pulls every ratio verdict out of a previously written JSON artifact.
pub fn verdicts_from_artifact(text: &str) -> Result<Vec<RatioVerdict>> {
    let value: serde_json::Value =
        serde_json::from_str(text).map_err(|e| SumsetError::parse("artifact", e.to_string()))?;
    let command = value["config"]["command"].as_str().unwrap_or_default();
    let result = value["result"].clone();
    let decode =
        |what: &str, e: serde_json::Error| SumsetError::parse(what.to_string(), e.to_string());
    let mut out = Vec::new();
    match command {
        "compute" => {
            let entries: Vec<ComputeEntry> =
                serde_json::from_value(result).map_err(|e| decode("compute artifact", e))?;
            out.extend(entries.into_iter().filter_map(|e| e.ratio));
        }
        "verify" => {
            let entries: Vec<VerifyEntry> =
                serde_json::from_value(result).map_err(|e| decode("verify artifact", e))?;
            for entry in entries {
                for r in entry.reports {
                    if r.k >= 1 {
                        out.push(RatioVerdict::from_sizes(r.set, r.k, r.size_u, r.size_v)?);
                    }
                }
            }
        }
        "search" => {
            let reports: Vec<SearchReport> =
                serde_json::from_value(result).map_err(|e| decode("search artifact", e))?;
            for r in reports {
                out.extend(r.best);
                out.extend(r.counterexamples);
                out.extend(r.instances);
            }
        }
        "report" => {
            let summary: Summary =
                serde_json::from_value(result).map_err(|e| decode("report artifact", e))?;
            out.extend(summary.rows.into_iter().map(|r| r.verdict));
        }
        other => {
            return Err(SumsetError::parse(
                "artifact",
                format!("unknown command {other:?} in config"),
            ))
        }
    }
    Ok(out)
}

fn certificate_notice(v: &RatioVerdict) -> String {
    format!(
        "COUNTEREXAMPLE (n > 2k, bound violated): A={{{}}} k={} |k∧A|={} |(k+1)∧A|={} \
         (k+1)|(k+1)∧A|={} > (n-k)|k∧A|={}",
        v.set, v.k, v.size_k, v.size_k1, v.lhs_cross, v.rhs_cross
    )
}

/// Runs one resolved configuration. Library errors become the matching exit
/// status with the message in `notices`.
pub fn dispatch(config: &RunConfig) -> Outcome {
    match run(config) {
        Ok(outcome) => outcome,
        Err(e) => Outcome {
            code: exit_code_for(&e),
            output: String::new(),
            notices: vec![format!("error: {e}")],
        },
    }
}

fn run(config: &RunConfig) -> Result<Outcome> {
    let started = Instant::now();
    match config.command {
        CommandKind::Compute => run_compute(config, started),
        CommandKind::Verify => run_verify(config, started),
        CommandKind::Search => run_search(config, started),
        CommandKind::Report => run_report(config, started),
    }
}

fn wall(config: &RunConfig, started: Instant) -> Option<u64> {
    config.timing.then(|| started.elapsed().as_millis() as u64)
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("artifacts serialize");
    s.push('\n');
    s
}

fn source_sets(config: &RunConfig) -> Vec<IntegerSet> {
    config
        .source
        .as_ref()
        .map(SetSource::sets)
        .unwrap_or_default()
}

fn run_compute(config: &RunConfig, started: Instant) -> Result<Outcome> {
    let cap = config.cap.unwrap_or(DEFAULT_CAP);
    let mut entries = Vec::new();
    for set in source_sets(config) {
        let n = set.len();
        for k in orders(config.k_range, (0, n)) {
            set.check_order(k)?;
            let size = ksum_count(&set, k)?;
            let (sums, multiplicity) = if config.sizes_only {
                (None, None)
            } else {
                (
                    Some(ksum_set(&set, k)?),
                    Some(ksum_multiplicity(&set, k, cap, None)?),
                )
            };
            let representations = if config.representations {
                Some(enumerate_representations_with_limit(
                    &set,
                    k,
                    config.thresholds.enumeration as u128,
                )?)
            } else {
                None
            };
            let ratio = if k >= 1 && k < n {
                Some(RatioVerdict::from_sizes(
                    set.clone(),
                    k,
                    size,
                    ksum_count(&set, k + 1)?,
                )?)
            } else {
                None
            };
            entries.push(ComputeEntry {
                set: set.clone(),
                n,
                k,
                size,
                sums,
                multiplicity,
                representations,
                ratio,
            });
        }
    }
    let notices = entries
        .iter()
        .filter_map(|e| e.ratio.as_ref())
        .filter(|v| v.is_counterexample())
        .map(certificate_notice)
        .collect();
    let output = match config.format {
        OutputFormat::Json => to_json(&Artifact::new(config, &entries, wall(config, started))),
        OutputFormat::Csv => ratio_csv_string(entries.iter().filter_map(|e| e.ratio.as_ref()))?,
        OutputFormat::Text => {
            let mut s = String::new();
            for e in &entries {
                let _ = write!(s, "A={{{}}} k={} |k∧A|={}", e.set, e.k, e.size);
                if let Some(v) = &e.ratio {
                    let _ = write!(
                        s,
                        " |(k+1)∧A|={} ratio={} bound={} holds={}",
                        v.size_k1,
                        decimal(v.size_k1, v.size_k),
                        decimal((v.n - v.k) as u64, v.k as u64 + 1),
                        v.holds
                    );
                }
                s.push('\n');
            }
            s
        }
    };
    Ok(Outcome {
        code: EXIT_OK,
        output,
        notices,
    })
}

/// Verifies every requested order of one set.
pub fn verify_set(
    set: &IntegerSet,
    orders: &[usize],
    strategy: BuildStrategy,
    include_graph: bool,
    oracle_threshold: u128,
) -> Result<VerifyEntry> {
    let structural = structural_checks(set)?;
    let mut reports = Vec::new();
    let mut graphs = Vec::new();
    let mut oracle_agrees: Option<bool> = None;
    for &k in orders {
        let g = build_extension_graphs_with(set, k, strategy)?;
        let report = verify_graph(set, &g);
        if let Some(agree) = oracle_matches(set, &report, oracle_threshold)? {
            oracle_agrees = Some(oracle_agrees.unwrap_or(true) && agree);
        }
        reports.push(report);
        if include_graph {
            graphs.push(g);
        }
    }
    Ok(VerifyEntry {
        set: set.clone(),
        structural,
        oracle_agrees,
        reports,
        graphs,
    })
}

fn oracle_matches(
    set: &IntegerSet,
    r: &VerificationReport,
    threshold: u128,
) -> Result<Option<bool>> {
    let n = set.len();
    if binomial(n, r.k) > threshold || binomial(n, r.k + 1) > threshold {
        return Ok(None);
    }
    let lower = brute_force_oracle_with_limit(set, r.k, threshold)?;
    let upper = brute_force_oracle_with_limit(set, r.k + 1, threshold)?;
    let repeated = |m: &BTreeMap<i64, u64>| m.values().filter(|&&c| c >= 2).count() as u64;
    Ok(Some(
        lower.sums.len() as u64 == r.size_u
            && upper.sums.len() as u64 == r.size_v
            && repeated(&lower.multiplicities) == r.size_s
            && repeated(&upper.multiplicities) == r.size_t,
    ))
}

fn run_verify(config: &RunConfig, started: Instant) -> Result<Outcome> {
    let strategy = config.strategy.unwrap_or_default();
    let mut entries = Vec::new();
    for set in source_sets(config) {
        let n = set.len();
        let ks = orders(config.k_range, (1, n.saturating_sub(1)));
        if let Some(&bad) = ks.iter().find(|&&k| k >= n) {
            return Err(SumsetError::KOutOfRange { k: bad, max: n - 1 });
        }
        if strategy == BuildStrategy::Representations {
            for &k in &ks {
                let required = binomial(n, k + 1).max(binomial(n, k));
                if required > config.thresholds.enumeration as u128 {
                    return Err(SumsetError::ThresholdExceeded {
                        what: "representation enumeration",
                        required,
                        threshold: config.thresholds.enumeration as u128,
                    });
                }
            }
        }
        entries.push(verify_set(
            &set,
            &ks,
            strategy,
            config.include_graph,
            config.thresholds.oracle as u128,
        )?);
    }

    let mut notices = Vec::new();
    for e in &entries {
        for r in &e.reports {
            if !r.chain_holds {
                notices.push(format!(
                    "INTERNAL: counting chain failed for A={{{}}} k={}",
                    r.set, r.k
                ));
            }
            if !r.theorem_consistent() {
                notices.push(format!(
                    "INTERNAL: ratio bound failed under its hypothesis for A={{{}}} k={}",
                    r.set, r.k
                ));
            }
            if !r.conclusion.holds && r.hypothesis_flags.question {
                let v = RatioVerdict::from_sizes(r.set.clone(), r.k, r.size_u, r.size_v)?;
                notices.push(certificate_notice(&v));
            }
        }
        if !e.structural.all_pass {
            notices.push(format!(
                "INTERNAL: structural check failed for A={{{}}}",
                e.set
            ));
        }
        if e.oracle_agrees == Some(false) {
            notices.push(format!("INTERNAL: oracle disagreement for A={{{}}}", e.set));
        }
    }
    let code = if entries.iter().all(VerifyEntry::clean) {
        EXIT_OK
    } else {
        EXIT_INTERNAL_VIOLATION
    };

    let output = match config.format {
        OutputFormat::Json => to_json(&Artifact::new(config, &entries, wall(config, started))),
        OutputFormat::Csv => {
            let verdicts = entries
                .iter()
                .flat_map(|e| &e.reports)
                .map(|r| RatioVerdict::from_sizes(r.set.clone(), r.k, r.size_u, r.size_v))
                .collect::<Result<Vec<_>>>()?;
            ratio_csv_string(&verdicts)?
        }
        OutputFormat::Text => {
            let mut s = String::new();
            for e in &entries {
                let _ = writeln!(
                    s,
                    "A={{{}}} structural={} oracle={}",
                    e.set,
                    if e.structural.all_pass {
                        "pass"
                    } else {
                        "FAIL"
                    },
                    match e.oracle_agrees {
                        Some(true) => "agree",
                        Some(false) => "DISAGREE",
                        None => "skipped",
                    }
                );
                for r in &e.reports {
                    let failed: Vec<String> = r
                        .checks
                        .iter()
                        .filter(|c| !c.holds)
                        .map(|c| format!("{:?}", c.name))
                        .collect();
                    let _ = writeln!(
                        s,
                        "  k={} e(G)={} e(H)={} |U|={} |V|={} |S|={} |T|={} chain={} conclusion={} (hyp_theorem={}, hyp_question={}){}",
                        r.k,
                        r.e_g,
                        r.e_h,
                        r.size_u,
                        r.size_v,
                        r.size_s,
                        r.size_t,
                        if r.chain_holds { "pass" } else { "FAIL" },
                        if r.conclusion.holds {
                            if r.conclusion.lhs == r.conclusion.rhs { "equality" } else { "holds" }
                        } else {
                            "fails"
                        },
                        r.hypothesis_flags.theorem,
                        r.hypothesis_flags.question,
                        if failed.is_empty() { String::new() } else { format!(" failed={failed:?}") }
                    );
                }
            }
            s
        }
    };
    Ok(Outcome {
        code,
        output,
        notices,
    })
}

fn run_search(config: &RunConfig, started: Instant) -> Result<Outcome> {
    let search = config
        .search
        .as_ref()
        .ok_or_else(|| SumsetError::InvalidParameters("missing search configuration".into()))?;
    let ks = config
        .k_range
        .ok_or_else(|| SumsetError::InvalidParameters("search needs --k".into()))?;
    let mut reports = Vec::new();
    for k in ks.iter() {
        let mut report = match *search {
            SearchConfig::Exhaustive {
                universe,
                n,
                canonical,
            } => exhaustive_search(&ExhaustiveParams {
                universe,
                n,
                k,
                budget: config.thresholds.search_budget as u128,
                canonical,
                record_instances: config.record_instances,
            })?,
            SearchConfig::Stochastic {
                n,
                lo,
                hi,
                patience,
            } => stochastic_search(&StochasticParams {
                n,
                k,
                lo,
                hi,
                seed: config.seed,
                budget: config.thresholds.search_budget,
                patience,
                record_instances: config.record_instances,
            })?,
        };
        if !config.timing {
            report = report.without_timing();
        }
        reports.push(report);
    }

    let mut notices = Vec::new();
    let mut code = EXIT_OK;
    for r in &reports {
        if !r.certificates_verify()? {
            code = EXIT_INTERNAL_VIOLATION;
            notices.push("INTERNAL: a search certificate failed to re-verify".into());
        }
        notices.extend(r.counterexamples.iter().map(certificate_notice));
    }

    let output = match config.format {
        OutputFormat::Json => to_json(&Artifact::new(config, &reports, wall(config, started))),
        OutputFormat::Csv => ratio_csv_string(reports.iter().flat_map(|r| &r.instances))?,
        OutputFormat::Text => {
            let mut s = String::new();
            for r in &reports {
                let _ = write!(s, "{:?} checked={}", r.space, r.instances_checked);
                if let Some(b) = &r.best {
                    let _ = write!(
                        s,
                        " best=A{{{}}} ratio={} bound={} equality={}",
                        b.set,
                        decimal(b.size_k1, b.size_k),
                        decimal((b.n - b.k) as u64, b.k as u64 + 1),
                        b.equality
                    );
                }
                let _ = writeln!(s, " counterexamples={}", r.counterexamples.len());
            }
            s
        }
    };
    Ok(Outcome {
        code,
        output,
        notices,
    })
}

fn run_report(config: &RunConfig, started: Instant) -> Result<Outcome> {
    let mut verdicts = Vec::new();
    for path in &config.inputs {
        verdicts.extend(verdicts_from_artifact(&read_file(path)?)?);
    }
    for set in source_sets(config) {
        let n = set.len();
        for k in orders(config.k_range, (1, n.saturating_sub(1))) {
            verdicts.push(ratio_check(&set, k)?);
        }
    }
    let summary = summarize(verdicts);
    let notices = summary
        .rows
        .iter()
        .filter(|r| r.verdict.is_counterexample())
        .map(|r| certificate_notice(&r.verdict))
        .collect();
    let output = match config.format {
        OutputFormat::Json => to_json(&Artifact::new(config, &summary, wall(config, started))),
        OutputFormat::Csv => ratio_csv_string(summary.rows.iter().map(|r| &r.verdict))?,
        OutputFormat::Text => {
            let mut s = String::new();
            let _ = writeln!(
                s,
                "{:<32} {:>3} {:>3} {:>10} {:>10} {:>10} {:>10} {:>6} {:>5}",
                "set", "n", "k", "|k∧A|", "|(k+1)∧A|", "ratio", "bound", "holds", "n>2k"
            );
            for r in &summary.rows {
                let v = &r.verdict;
                let _ = writeln!(
                    s,
                    "{:<32} {:>3} {:>3} {:>10} {:>10} {:>10} {:>10} {:>6} {:>5}",
                    v.set.to_string(),
                    v.n,
                    v.k,
                    v.size_k,
                    v.size_k1,
                    r.ratio,
                    r.bound,
                    if v.equality {
                        "eq"
                    } else if v.holds {
                        "yes"
                    } else {
                        "NO"
                    },
                    v.hyp_question
                );
            }
            let _ = writeln!(
                s,
                "instances={} holding={} equalities={} counterexamples={}",
                summary.instances, summary.holding, summary.equalities, summary.counterexamples
            );
            s
        }
    };
    Ok(Outcome {
        code: EXIT_OK,
        output,
        notices,
    })
}

/// Parses `args`, resolves and dispatches; the return value is the exit status.
pub fn main_with_args<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => {
                    EXIT_OK
                }
                _ => EXIT_INVALID_INPUT,
            };
            return Outcome {
                code,
                output: if code == EXIT_OK {
                    e.to_string()
                } else {
                    String::new()
                },
                notices: if code == EXIT_OK {
                    Vec::new()
                } else {
                    vec![e.to_string()]
                },
            };
        }
    };
    let config = match RunConfig::from_cli(&cli) {
        Ok(c) => c,
        Err(e) => {
            return Outcome {
                code: exit_code_for(&e),
                output: String::new(),
                notices: vec![format!("error: {e}")],
            }
        }
    };
    let output_path = match &cli.command {
        Commands::Compute(a) => a.common.output.clone(),
        Commands::Verify(a) => a.common.output.clone(),
        Commands::Search(a) => a.common.output.clone(),
        Commands::Report(a) => a.common.output.clone(),
    };
    let mut outcome = dispatch(&config);
    if let Some(path) = output_path {
        if let Err(e) = std::fs::write(&path, &outcome.output) {
            outcome
                .notices
                .push(format!("error: {}: {e}", path.display()));
            if outcome.code == EXIT_OK {
                outcome.code = EXIT_INVALID_INPUT;
            }
        }
        outcome.output.clear();
    }
    outcome
}
