//! Command-line front end: edge-list ingestion, the `reach`, `dist`,
//! `shortcut`, `hopset`, `decompose` and `bench` subcommands, and JSON/CSV
//! result emission.

use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};
use thiserror::Error;

use shortreach::generators::{random_digraph, WeightSpec};
use shortreach::graph::{GraphError, VertexSubset, WeightedDiGraph};
use shortreach::hopset::{
    cohen_hopset, cohen_shortcut, hop_diameter, measure_hopset, sampling_d_shortcut, tree_hopbound,
    HopsetError,
};
use shortreach::omega::QueryPlan;
use shortreach::oracles::bfs_reach;
use shortreach::pipeline::{approx_sxv_distances, direach, direach_via_tree, reach_with_shortcut, PipelineError};
use shortreach::semiring::BoolMatrix;
use shortreach::separator::{
    build_decomposition_tree, DecompositionTree, SeparatorError, SeparatorFinder, SeparatorStrategy,
    TreeConfig, TreeError, DEFAULT_LEAF_THRESHOLD,
};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("header declares {declared} edges but {found} were given")]
    InconsistentHeader { declared: usize, found: usize },
    #[error("invalid arguments: {0}")]
    Usage(String),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Pipeline(#[from] PipelineError),
    #[error(transparent)]
    Hopset(#[from] HopsetError),
    #[error(transparent)]
    Tree(#[from] TreeError),
    #[error(transparent)]
    Separator(#[from] SeparatorError),
    #[error("bench: reach rows disagree with BFS for n={n}")]
    BenchMismatch { n: usize },
    #[error("csv: {0}")]
    Csv(String),
}

impl CliError {
    /// 2 for bad input or arguments, 1 for failures while computing.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Io { .. }
            | CliError::Parse { .. }
            | CliError::InconsistentHeader { .. }
            | CliError::Usage(_)
            | CliError::Tree(TreeError::Json(_)) => 2,
            _ => 1,
        }
    }
}

fn parse_error(line: usize, message: impl Into<String>) -> CliError {
    CliError::Parse {
        line,
        message: message.into(),
    }
}

/// Parses `n m` followed by `m` lines `u v [w]`. Blank lines and text after
/// `#` are ignored; edges without a weight get weight 1.
pub fn parse_edge_list(text: &str, one_indexed: bool) -> Result<WeightedDiGraph, CliError> {
    let mut header: Option<(usize, usize)> = None;
    let mut edges = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let tokens: Vec<&str> = content.split_whitespace().collect();
        let Some((n, _)) = header else {
            if tokens.len() != 2 {
                return Err(parse_error(line, "header must be \"n m\""));
            }
            let n = tokens[0]
                .parse()
                .map_err(|_| parse_error(line, format!("bad vertex count {:?}", tokens[0])))?;
            let m = tokens[1]
                .parse()
                .map_err(|_| parse_error(line, format!("bad edge count {:?}", tokens[1])))?;
            header = Some((n, m));
            continue;
        };
        if !(2..=3).contains(&tokens.len()) {
            return Err(parse_error(line, "edge must be \"u v [w]\""));
        }
        let mut ends = [0usize; 2];
        for (slot, tok) in ends.iter_mut().zip(&tokens[..2]) {
            let raw: usize = tok
                .parse()
                .map_err(|_| parse_error(line, format!("bad vertex id {tok:?}")))?;
            let v = if one_indexed {
                raw.checked_sub(1)
                    .ok_or_else(|| parse_error(line, "vertex 0 in one-indexed input"))?
            } else {
                raw
            };
            if v >= n {
                return Err(parse_error(line, format!("vertex {raw} out of range for n={n}")));
            }
            *slot = v;
        }
        let w = match tokens.get(2) {
            Some(tok) => {
                let w: f64 = tok
                    .parse()
                    .map_err(|_| parse_error(line, format!("bad weight {tok:?}")))?;
                if !(w.is_finite() && w >= 0.0) {
                    return Err(parse_error(line, format!("weight {tok} must be finite and non-negative")));
                }
                w
            }
            None => 1.0,
        };
        edges.push((ends[0], ends[1], w));
    }
    let (n, m) = header.ok_or_else(|| parse_error(1, "missing header"))?;
    if edges.len() != m {
        return Err(CliError::InconsistentHeader {
            declared: m,
            found: edges.len(),
        });
    }
    Ok(WeightedDiGraph::from_edges(n, edges)?)
}

fn read_file(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

pub fn read_edge_list(path: &Path, one_indexed: bool) -> Result<WeightedDiGraph, CliError> {
    parse_edge_list(&read_file(path)?, one_indexed)
}

pub fn read_tree(path: &Path) -> Result<DecompositionTree, CliError> {
    Ok(DecompositionTree::from_json(&read_file(path)?)?)
}

#[derive(Debug, Clone, Parser)]
#[command(name = "shortreach", version, about = "Multi-source reachability and approximate distances")]
pub struct RunConfig {
    #[command(subcommand)]
    pub command: Command,
    /// Seed for source sampling, shortcut sampling and generated graphs.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Worker threads for the matrix kernels; 0 uses every core.
    #[arg(long, global = true, default_value_t = 1)]
    pub threads: usize,
    /// Write the result here instead of stdout.
    #[arg(long, short, global = true)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Subcommand)]
pub enum Command {
    /// S x V reachability.
    Reach(ReachArgs),
    /// (1 + eps)-approximate S x V distances.
    Dist(DistArgs),
    /// Build a shortcut set and measure the resulting hop diameter.
    Shortcut(ShortcutArgs),
    /// Build a hopset and measure its stretch and hopbound.
    Hopset(HopsetArgs),
    /// Build a separator decomposition tree and export it as JSON.
    Decompose(DecomposeArgs),
    /// Time the sampled-shortcut reach pipeline against BFS on random graphs.
    Bench(BenchArgs),
}

#[derive(Debug, Clone, Args)]
pub struct InputArgs {
    /// Edge list: "n m" then one "u v [w]" per line.
    pub input: PathBuf,
    /// Vertex ids in the input (and in --sources) start at 1.
    #[arg(long)]
    pub one_indexed: bool,
}

#[derive(Debug, Clone, Args)]
pub struct SourceArgs {
    /// Comma-separated source vertices.
    #[arg(long, value_delimiter = ',', conflicts_with = "random_sources")]
    pub sources: Vec<usize>,
    /// Draw this many distinct sources using --seed.
    #[arg(long)]
    pub random_sources: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum StrategyArg {
    Bfs,
    Exhaustive,
    Grid,
}

#[derive(Debug, Clone, Args)]
pub struct TreeArgs {
    /// Import a decomposition tree instead of building one.
    #[arg(long)]
    pub tree: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = StrategyArg::Bfs)]
    pub strategy: StrategyArg,
    /// Grid shape for --strategy grid, as ROWSxCOLS.
    #[arg(long)]
    pub grid: Option<String>,
    /// Largest part as a fraction of the separated set.
    #[arg(long, default_value_t = 2.0 / 3.0)]
    pub lambda: f64,
    #[arg(long, default_value_t = DEFAULT_LEAF_THRESHOLD)]
    pub leaf_threshold: usize,
    /// Rebalance every split to halves.
    #[arg(long)]
    pub rebalance: bool,
}

#[derive(Debug, Clone, Args)]
pub struct ReachArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[command(flatten)]
    pub sources: SourceArgs,
    /// Hop target D of the sampled shortcut; chosen from the plan if absent.
    #[arg(long)]
    pub hops: Option<usize>,
    /// Use the separator-tree shortcut built from this tree.
    #[arg(long)]
    pub tree: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct DistArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[command(flatten)]
    pub sources: SourceArgs,
    #[arg(long, default_value_t = 0.5)]
    pub epsilon: f64,
    #[command(flatten)]
    pub tree: TreeArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ShortcutMethod {
    Sampled,
    Tree,
}

#[derive(Debug, Clone, Args)]
pub struct ShortcutArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[arg(long, value_enum, default_value_t = ShortcutMethod::Sampled)]
    pub method: ShortcutMethod,
    /// Hop target D for --method sampled; defaults to the plan with |S| = 1.
    #[arg(long)]
    pub hops: Option<usize>,
    #[command(flatten)]
    pub tree: TreeArgs,
}

#[derive(Debug, Clone, Args)]
pub struct HopsetArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[arg(long, default_value_t = 0.5)]
    pub epsilon: f64,
    #[command(flatten)]
    pub tree: TreeArgs,
}

#[derive(Debug, Clone, Args)]
pub struct DecomposeArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[arg(long, value_enum, default_value_t = StrategyArg::Bfs)]
    pub strategy: StrategyArg,
    #[arg(long)]
    pub grid: Option<String>,
    #[arg(long, default_value_t = 2.0 / 3.0)]
    pub lambda: f64,
    #[arg(long, default_value_t = DEFAULT_LEAF_THRESHOLD)]
    pub leaf_threshold: usize,
    #[arg(long)]
    pub rebalance: bool,
}

#[derive(Debug, Clone, Args)]
pub struct BenchArgs {
    /// Vertex counts to generate.
    #[arg(long, value_delimiter = ',', default_values_t = vec![100, 200, 400])]
    pub sizes: Vec<usize>,
    /// Edge exponent: m = n^mu.
    #[arg(long, default_value_t = 1.5)]
    pub mu: f64,
    /// Sources per graph; defaults to ceil(sqrt(n)).
    #[arg(long)]
    pub source_count: Option<usize>,
    /// Graphs per size.
    #[arg(long, default_value_t = 1)]
    pub repeats: usize,
}

/// Text produced by a command; JSON for every command except `bench`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunOutput {
    pub text: String,
}

/// Runs the command on a pool of `cfg.threads` workers.
pub fn run_command(cfg: &RunConfig) -> Result<RunOutput, CliError> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.threads)
        .build()
        .map_err(|e| CliError::Usage(format!("thread pool: {e}")))?;
    pool.install(|| dispatch(cfg))
}

fn dispatch(cfg: &RunConfig) -> Result<RunOutput, CliError> {
    let text = match &cfg.command {
        Command::Reach(a) => json_text(reach(a, cfg.seed)?),
        Command::Dist(a) => json_text(dist(a, cfg.seed)?),
        Command::Shortcut(a) => json_text(shortcut(a, cfg.seed)?),
        Command::Hopset(a) => json_text(hopset(a, cfg.seed)?),
        Command::Decompose(a) => {
            let g = read_edge_list(&a.input.input, a.input.one_indexed)?;
            let spec = TreeSpec {
                strategy: a.strategy,
                grid: a.grid.as_deref(),
                lambda: a.lambda,
                leaf_threshold: a.leaf_threshold,
                rebalance: a.rebalance,
            };
            let mut text = spec.build(&g)?.to_json();
            text.push('\n');
            text
        }
        Command::Bench(a) => bench(a, cfg.seed)?,
    };
    Ok(RunOutput { text })
}

fn json_text(v: Value) -> String {
    let mut s = serde_json::to_string(&v).expect("json values serialize");
    s.push('\n');
    s
}

struct TreeSpec<'a> {
    strategy: StrategyArg,
    grid: Option<&'a str>,
    lambda: f64,
    leaf_threshold: usize,
    rebalance: bool,
}

impl TreeSpec<'_> {
    fn from_args(a: &TreeArgs) -> TreeSpec<'_> {
        TreeSpec {
            strategy: a.strategy,
            grid: a.grid.as_deref(),
            lambda: a.lambda,
            leaf_threshold: a.leaf_threshold,
            rebalance: a.rebalance,
        }
    }

    fn build(&self, g: &WeightedDiGraph) -> Result<DecompositionTree, CliError> {
        let strategy = match self.strategy {
            StrategyArg::Bfs => SeparatorStrategy::BfsHeuristic,
            StrategyArg::Exhaustive => SeparatorStrategy::Exhaustive,
            StrategyArg::Grid => {
                let shape = self
                    .grid
                    .ok_or_else(|| CliError::Usage("--strategy grid needs --grid ROWSxCOLS".into()))?;
                let (rows, cols) = parse_grid(shape)?;
                if rows * cols != g.n() {
                    return Err(CliError::Usage(format!("grid {rows}x{cols} does not cover n={}", g.n())));
                }
                SeparatorStrategy::Grid { rows, cols }
            }
        };
        let finder = SeparatorFinder::new(strategy, self.lambda)?;
        let config = TreeConfig {
            leaf_threshold: self.leaf_threshold,
            rebalance: self.rebalance,
            ..TreeConfig::default()
        };
        Ok(build_decomposition_tree(&g.skeleton(), &finder, &config)?)
    }
}

fn parse_grid(shape: &str) -> Result<(usize, usize), CliError> {
    let bad = || CliError::Usage(format!("grid shape {shape:?} is not ROWSxCOLS"));
    let (r, c) = shape.split_once(['x', 'X']).ok_or_else(bad)?;
    Ok((r.trim().parse().map_err(|_| bad())?, c.trim().parse().map_err(|_| bad())?))
}

/// Imported tree if given, otherwise one built from the arguments.
fn obtain_tree(g: &WeightedDiGraph, a: &TreeArgs) -> Result<(DecompositionTree, &'static str), CliError> {
    match &a.tree {
        Some(path) => {
            let t = read_tree(path)?;
            t.validate(&g.skeleton())?;
            Ok((t, "imported"))
        }
        None => Ok((TreeSpec::from_args(a).build(g)?, "built")),
    }
}

fn offset(input: &InputArgs) -> usize {
    usize::from(input.one_indexed)
}

fn resolve_sources(g: &WeightedDiGraph, input: &InputArgs, s: &SourceArgs, seed: u64) -> Result<VertexSubset, CliError> {
    let n = g.n();
    let picked: Vec<usize> = match s.random_sources {
        Some(k) => {
            if k == 0 || k > n {
                return Err(CliError::Usage(format!("--random-sources must be in 1..={n}, got {k}")));
            }
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rand::seq::index::sample(&mut rng, n, k).into_vec()
        }
        None => {
            if s.sources.is_empty() {
                return Err(CliError::Usage("give --sources or --random-sources".into()));
            }
            let off = offset(input);
            s.sources
                .iter()
                .map(|&v| {
                    v.checked_sub(off)
                        .filter(|&x| x < n)
                        .ok_or_else(|| CliError::Usage(format!("source {v} out of range for n={n}")))
                })
                .collect::<Result<_, _>>()?
        }
    };
    Ok(VertexSubset::new(picked, n)?)
}

fn plan_json(plan: &QueryPlan, d: usize) -> Value {
    json!({
        "sigma": plan.sigma,
        "mu": plan.mu,
        "delta": plan.delta,
        "D": d,
        "g": plan.g,
    })
}

fn rows_json(rows: &BoolMatrix) -> Value {
    (0..rows.rows())
        .map(|i| (0..rows.cols()).map(|j| u8::from(rows.get(i, j))).collect::<Vec<_>>())
        .collect::<Vec<_>>()
        .into()
}

fn shifted(s: &VertexSubset, off: usize) -> Vec<usize> {
    s.iter().map(|v| v + off).collect()
}

fn reach(a: &ReachArgs, seed: u64) -> Result<Value, CliError> {
    let g = read_edge_list(&a.input.input, a.input.one_indexed)?;
    let s = resolve_sources(&g, &a.input, &a.sources, seed)?;
    let plan = QueryPlan::for_graph(g.n(), g.m(), s.len());
    let (method, d, result, depth) = match &a.tree {
        Some(path) => {
            let t = read_tree(path)?;
            let r = direach_via_tree(&g, &s, &t)?;
            ("tree", tree_hopbound(&t), r, Some(t.depth()))
        }
        None => {
            let d = a.hops.unwrap_or_else(|| plan.hop_target(g.n()));
            ("sampled", d, direach(&g, &s, d, seed)?, None)
        }
    };
    Ok(json!({
        "schema": SCHEMA_VERSION,
        "command": "reach",
        "method": method,
        "n": g.n(),
        "m": g.m(),
        "seed": seed,
        "sources": shifted(&s, offset(&a.input)),
        "plan": plan_json(&plan, d),
        "tree_depth": depth,
        "shortcut_edges": result.shortcut_edges,
        "products": result.products,
        "rows": rows_json(&result.rows),
    }))
}

fn dist(a: &DistArgs, seed: u64) -> Result<Value, CliError> {
    if !(a.epsilon.is_finite() && a.epsilon > 0.0) {
        return Err(CliError::Usage(format!("--epsilon must be positive, got {}", a.epsilon)));
    }
    let g = read_edge_list(&a.input.input, a.input.one_indexed)?;
    let s = resolve_sources(&g, &a.input, &a.sources, seed)?;
    let (t, origin) = obtain_tree(&g, &a.tree)?;
    let plan = QueryPlan::for_graph(g.n(), g.m(), s.len());
    let est = approx_sxv_distances(&g, &s, a.epsilon, &t)?;
    let estimates: Vec<Vec<Option<f64>>> = est
        .estimates
        .iter()
        .map(|row| row.iter().map(|&x| x.is_finite().then_some(x)).collect())
        .collect();
    Ok(json!({
        "schema": SCHEMA_VERSION,
        "command": "dist",
        "n": g.n(),
        "m": g.m(),
        "seed": seed,
        "epsilon": a.epsilon,
        "sources": shifted(&s, offset(&a.input)),
        "plan": plan_json(&plan, est.hopbound),
        "tree": {"origin": origin, "depth": t.depth(), "nodes": t.nodes.len()},
        "hopset_edges": est.hopset_edges,
        "hopbound": est.hopbound,
        "product_xi": est.product_xi,
        "products": est.products,
        "estimates": estimates,
    }))
}

fn shortcut(a: &ShortcutArgs, seed: u64) -> Result<Value, CliError> {
    let g = read_edge_list(&a.input.input, a.input.one_indexed)?;
    let off = offset(&a.input);
    let plan = QueryPlan::for_graph(g.n(), g.m(), 1);
    let (h, target, depth) = match a.method {
        ShortcutMethod::Sampled => {
            let d = a.hops.unwrap_or_else(|| plan.hop_target(g.n()));
            if d == 0 {
                return Err(CliError::Usage("--hops must be at least 1".into()));
            }
            (sampling_d_shortcut(&g, d, seed)?, d, None)
        }
        ShortcutMethod::Tree => {
            let (t, _) = obtain_tree(&g, &a.tree)?;
            (cohen_shortcut(&g, &t)?, tree_hopbound(&t), Some(t.depth()))
        }
    };
    let measured = hop_diameter(&g, &h.edges);
    let edges: Vec<[usize; 2]> = h.edges.iter().map(|&(u, v)| [u + off, v + off]).collect();
    Ok(json!({
        "schema": SCHEMA_VERSION,
        "command": "shortcut",
        "method": match a.method { ShortcutMethod::Sampled => "sampled", ShortcutMethod::Tree => "tree" },
        "n": g.n(),
        "m": g.m(),
        "seed": seed,
        "plan": plan_json(&plan, target),
        "tree_depth": depth,
        "hop_target": target,
        "hop_diameter": measured,
        "certified": measured.is_some_and(|d| d <= target),
        "edge_count": edges.len(),
        "edges": edges,
    }))
}

fn hopset(a: &HopsetArgs, seed: u64) -> Result<Value, CliError> {
    if !(a.epsilon.is_finite() && a.epsilon >= 0.0) {
        return Err(CliError::Usage(format!("--epsilon must be non-negative, got {}", a.epsilon)));
    }
    let g = read_edge_list(&a.input.input, a.input.one_indexed)?;
    let off = offset(&a.input);
    let (t, origin) = obtain_tree(&g, &a.tree)?;
    let build = cohen_hopset(&g, &t, a.epsilon)?;
    let beta = tree_hopbound(&t);
    let report = measure_hopset(&g, &build.hopset, beta);
    let edges: Vec<Value> = build
        .hopset
        .edges
        .iter()
        .map(|&(u, v, w)| json!([u + off, v + off, w]))
        .collect();
    Ok(json!({
        "schema": SCHEMA_VERSION,
        "command": "hopset",
        "n": g.n(),
        "m": g.m(),
        "seed": seed,
        "epsilon": a.epsilon,
        "tree": {"origin": origin, "depth": t.depth(), "nodes": t.nodes.len()},
        "xi_node": build.xi_node,
        "hopbound": beta,
        "stats": {
            "pairs": report.pairs,
            "max_stretch": report.max_stretch,
            "undershoots": report.undershoots,
            "unreached": report.unreached,
            "measured_hopbound": report.measured_hopbound,
        },
        "edge_count": edges.len(),
        "edges": edges,
    }))
}

fn millis(start: Instant) -> f64 {
    start.elapsed().as_secs_f64() * 1e3
}

/// One row per generated graph; the sampled-shortcut rows are checked
/// against BFS before timings are reported.
fn bench(a: &BenchArgs, seed: u64) -> Result<String, CliError> {
    if !(0.0..=2.0).contains(&a.mu) {
        return Err(CliError::Usage(format!("--mu must be in [0, 2], got {}", a.mu)));
    }
    let mut out = csv::Writer::from_writer(Vec::new());
    let csv_err = |e: csv::Error| CliError::Csv(e.to_string());
    out.write_record(["n", "m", "|S|", "D", "build_ms", "query_ms", "oracle_ms"])
        .map_err(csv_err)?;
    let mut graph_seed = seed;
    for &n in &a.sizes {
        if n == 0 {
            return Err(CliError::Usage("--sizes must be positive".into()));
        }
        for _ in 0..a.repeats {
            let g = random_digraph(n, a.mu, WeightSpec::Unit, graph_seed);
            let k = a.source_count.unwrap_or((n as f64).sqrt().ceil() as usize).clamp(1, n);
            let mut rng = ChaCha8Rng::seed_from_u64(graph_seed);
            let s = VertexSubset::new(rand::seq::index::sample(&mut rng, n, k).into_vec(), n)?;
            let plan = QueryPlan::for_graph(n, g.m(), s.len());
            let d = plan.hop_target(n);

            let start = Instant::now();
            let h = sampling_d_shortcut(&g, d, graph_seed)?;
            let build_ms = millis(start);
            let start = Instant::now();
            let r = reach_with_shortcut(&g, &s, &h, d - 1)?;
            let query_ms = millis(start);
            let start = Instant::now();
            let oracle: Vec<VertexSubset> = s.iter().map(|v| bfs_reach(&g, v).expect("source in range")).collect();
            let oracle_ms = millis(start);

            let agree = oracle
                .iter()
                .enumerate()
                .all(|(i, want)| r.rows.row_ones(i).eq(want.iter()));
            if !agree {
                return Err(CliError::BenchMismatch { n });
            }
            out.write_record([
                n.to_string(),
                g.m().to_string(),
                s.len().to_string(),
                d.to_string(),
                format!("{build_ms:.3}"),
                format!("{query_ms:.3}"),
                format!("{oracle_ms:.3}"),
            ])
            .map_err(csv_err)?;
            graph_seed += 1;
        }
    }
    let bytes = out.into_inner().map_err(|e| CliError::Csv(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_documented_examples() {
        let g = parse_edge_list("3 2\n0 1\n1 2\n", false).unwrap();
        assert_eq!((g.n(), g.m()), (3, 2));
        assert!(g.has_edge(0, 1) && g.has_edge(1, 2));
        let g = parse_edge_list("2 1\n0 1 2.5\n", false).unwrap();
        assert_eq!(g.edge_weight(0, 1), Some(2.5));
        let err = parse_edge_list("2 1\n0 5\n", false).unwrap_err();
        assert!(matches!(err, CliError::Parse { line: 2, .. }), "{err}");
    }

    #[test]
    fn comments_blank_lines_and_one_indexing() {
        let text = "# a path\n\n3 2 # header\n1 2\n# middle\n2 3 4\n";
        let g = parse_edge_list(text, true).unwrap();
        assert_eq!(g.edge_weight(0, 1), Some(1.0));
        assert_eq!(g.edge_weight(1, 2), Some(4.0));
        assert!(matches!(parse_edge_list("2 1\n0 1\n", true), Err(CliError::Parse { line: 2, .. })));
    }

    #[test]
    fn rejects_bad_input() {
        assert!(matches!(
            parse_edge_list("3 3\n0 1\n1 2\n", false),
            Err(CliError::InconsistentHeader { declared: 3, found: 2 })
        ));
        assert!(matches!(parse_edge_list("3\n", false), Err(CliError::Parse { line: 1, .. })));
        assert!(matches!(parse_edge_list("2 1\n0 1 -1\n", false), Err(CliError::Parse { line: 2, .. })));
        assert!(matches!(parse_edge_list("2 1\n0 1 2 3\n", false), Err(CliError::Parse { line: 2, .. })));
        assert!(matches!(parse_edge_list("2 1\nx 1\n", false), Err(CliError::Parse { line: 2, .. })));
        assert!(matches!(parse_edge_list("", false), Err(CliError::Parse { .. })));
    }

    #[test]
    fn grid_shapes() {
        assert_eq!(parse_grid("3x4").unwrap(), (3, 4));
        assert_eq!(parse_grid("2X5").unwrap(), (2, 5));
        assert!(parse_grid("3by4").is_err());
    }
}
