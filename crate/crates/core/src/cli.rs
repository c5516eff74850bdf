//! Command-line front end.

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Duration;

use clap::{Args, Parser, Subcommand};
use thiserror::Error;

use crate::bench::{bench, check_cache_coverage, run_search, scale_sweep, Algorithm, BenchError, ProviderKind, RunConfig};
use crate::dataset::{generate_dataset, load_dataset, save_dataset, DatasetError, GenParams, MapRecord};
use crate::search::{HeuristicKind, SearchResult};
use crate::svg::render_svg;
use crate::waypoints::{LlmClient, PromptStyle, Provider, ProviderConfig, ProviderError, ResponseCache};

#[derive(Debug, Parser)]
#[command(name = "llm-astar", version, about = "Waypoint-guided A* benchmarks")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generate a random map dataset.
    Gen(GenArgs),
    /// Run one algorithm over a dataset against the A* baseline.
    Bench(BenchArgs),
    /// Growth of A* and LLM-A* resource use as maps are rescaled.
    Scale(ScaleArgs),
    /// Re-run a benchmark from cached model responses only.
    Replay(BenchArgs),
    /// Plot one search as SVG.
    Svg(SvgArgs),
}

#[derive(Debug, Args)]
pub struct GenArgs {
    #[arg(long, default_value_t = 100)]
    pub maps: usize,
    #[arg(long, default_value_t = 10)]
    pub pairs: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value = "dataset.json")]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct RunArgs {
    #[arg(long, default_value = "dataset.json")]
    pub dataset: PathBuf,
    /// astar | wastar | llm_astar | llm_only
    #[arg(long, default_value = "llm_astar")]
    pub algo: Algorithm,
    /// live | cache-only | oracle:N | none [default: oracle:3, or cache-only for replay]
    #[arg(long)]
    pub provider: Option<ProviderKind>,
    /// few_shot | cot | repe
    #[arg(long, default_value = "few_shot")]
    pub style: PromptStyle,
    /// euclidean | chebyshev
    #[arg(long, default_value = "euclidean")]
    pub heuristic: HeuristicKind,
    #[arg(long, default_value_t = 1)]
    pub scale: i64,
    #[arg(long, default_value_t = 2.0)]
    pub w0: f64,
    #[arg(long, default_value_t = 0.99)]
    pub decay: f64,
    /// Worker threads; defaults to every core.
    #[arg(long)]
    pub workers: Option<usize>,
    /// Response cache file (read and, for live runs, written back).
    #[arg(long)]
    pub cache: Option<PathBuf>,
    #[command(flatten)]
    pub model: ModelArgs,
}

#[derive(Debug, Args)]
pub struct ModelArgs {
    #[arg(long, default_value = "https://api.openai.com/v1")]
    pub base_url: String,
    #[arg(long, default_value = "gpt-3.5-turbo")]
    pub model: String,
    /// Environment variable holding the API key.
    #[arg(long, default_value = "OPENAI_API_KEY")]
    pub api_key_env: String,
    #[arg(long, default_value_t = 0.0)]
    pub temperature: f64,
    #[arg(long, default_value_t = 1024)]
    pub max_tokens: u32,
    #[arg(long, default_value_t = 3)]
    pub max_retries: u32,
    #[arg(long, default_value_t = 60.0)]
    pub timeout_secs: f64,
    #[arg(long, default_value_t = 500)]
    pub backoff_ms: u64,
    #[arg(long, default_value_t = 4)]
    pub max_in_flight: usize,
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    #[command(flatten)]
    pub run: RunArgs,
    /// Report JSON destination.
    #[arg(long)]
    pub out_json: Option<PathBuf>,
    /// Report table destination; the table is always printed.
    #[arg(long)]
    pub out_table: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ScaleArgs {
    #[command(flatten)]
    pub run: RunArgs,
    #[arg(long, value_delimiter = ',', default_value = "1,2,3,4,5,6,7,8,9,10")]
    pub scales: Vec<i64>,
    #[arg(long, default_value_t = 10)]
    pub queries: usize,
    /// Seed for choosing the queries.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub out_json: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SvgArgs {
    #[command(flatten)]
    pub run: RunArgs,
    #[arg(long, default_value_t = 0)]
    pub map: u32,
    #[arg(long, default_value_t = 0)]
    pub pair: usize,
    #[arg(long, default_value = "search.svg")]
    pub out: PathBuf,
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Config(String),
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error(transparent)]
    Provider(#[from] ProviderError),
    #[error(transparent)]
    Dataset(#[from] DatasetError),
    #[error(transparent)]
    Bench(BenchError),
}

impl From<BenchError> for CliError {
    fn from(e: BenchError) -> Self {
        match e {
            BenchError::Config(msg) => CliError::Config(msg),
            other => CliError::Bench(other),
        }
    }
}

impl CliError {
    /// Process exit code by failure category.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Config(_) => 2,
            CliError::Io { .. } | CliError::Dataset(DatasetError::Io { .. }) => 3,
            CliError::Provider(_) | CliError::Bench(BenchError::CacheMiss { .. }) => 4,
            CliError::Dataset(_) => 5,
            CliError::Bench(_) => 6,
        }
    }
}

fn write_file(path: &Path, text: &str) -> Result<(), CliError> {
    std::fs::write(path, text).map_err(|source| CliError::Io { path: path.to_path_buf(), source })
}

impl ModelArgs {
    fn config(&self) -> Result<ProviderConfig, CliError> {
        let timeout = Duration::try_from_secs_f64(self.timeout_secs)
            .ok()
            .filter(|d| !d.is_zero())
            .ok_or_else(|| CliError::Config(format!("timeout must be positive, got {}", self.timeout_secs)))?;
        Ok(ProviderConfig {
            base_url: self.base_url.clone(),
            model_name: self.model.clone(),
            api_key_env: self.api_key_env.clone(),
            temperature: self.temperature,
            max_tokens: self.max_tokens,
            max_retries: self.max_retries,
            timeout,
            initial_backoff: Duration::from_millis(self.backoff_ms),
            max_in_flight: self.max_in_flight,
        })
    }
}

/// Owns whatever a `Provider` borrows.
struct ProviderSetup {
    kind: ProviderKind,
    style: PromptStyle,
    client: Option<LlmClient>,
    cache: Option<ResponseCache>,
}

impl ProviderSetup {
    fn new(run: &RunArgs, kind: ProviderKind) -> Result<Self, CliError> {
        let (client, cache) = match kind {
            ProviderKind::Live => {
                let cache = match &run.cache {
                    Some(path) => open_cache(path)?,
                    None => ResponseCache::in_memory(),
                };
                (Some(LlmClient::new(run.model.config()?)?), Some(cache))
            }
            ProviderKind::CacheOnly => {
                let path = run.cache.as_ref().ok_or_else(|| CliError::Config("cache-only provider needs --cache".into()))?;
                let cache = open_cache(path)?;
                if cache.is_empty() {
                    return Err(CliError::Config(format!("cache {} is empty or missing", path.display())));
                }
                (Some(LlmClient::offline(run.model.config()?)), Some(cache))
            }
            ProviderKind::Oracle(_) | ProviderKind::None => (None, None),
        };
        Ok(Self { kind, style: run.style, client, cache })
    }

    fn provider(&self) -> Provider<'_> {
        match (self.kind, &self.client, &self.cache) {
            (ProviderKind::Oracle(n), _, _) => Provider::Oracle(n),
            (ProviderKind::None, _, _) => Provider::Empty,
            (_, Some(client), Some(cache)) => Provider::Llm { client, cache, style: self.style },
            _ => unreachable!("model providers always carry a client and cache"),
        }
    }

    /// Rejects a cache-only run whose cache does not cover every query.
    fn precheck(&self, maps: &[MapRecord], scale: i64, algo: Algorithm) -> Result<(), CliError> {
        let needs_model = matches!(algo, Algorithm::LlmAstar | Algorithm::LlmOnly);
        if let (ProviderKind::CacheOnly, true, Some(client), Some(cache)) = (self.kind, needs_model, &self.client, &self.cache) {
            check_cache_coverage(maps, scale, client, cache, self.style)?;
        }
        Ok(())
    }

    fn persist(&self) -> Result<(), CliError> {
        if let (ProviderKind::Live, Some(cache)) = (self.kind, &self.cache) {
            cache.save().map_err(|source| CliError::Io { path: cache.path().unwrap_or(Path::new("")).to_path_buf(), source })?;
        }
        Ok(())
    }
}

fn open_cache(path: &Path) -> Result<ResponseCache, CliError> {
    ResponseCache::open(path).map_err(|source| CliError::Io { path: path.to_path_buf(), source })
}

impl RunArgs {
    fn provider_or_oracle(&self) -> ProviderKind {
        self.provider.unwrap_or(ProviderKind::Oracle(3))
    }

    fn run_config(&self) -> RunConfig {
        RunConfig {
            algorithm: self.algo,
            heuristic: self.heuristic,
            scale: self.scale,
            w0: self.w0,
            decay: self.decay,
            workers: self.workers,
        }
    }
}

pub fn cmd_gen(args: &GenArgs) -> Result<Vec<MapRecord>, CliError> {
    let params = GenParams { n_pairs: args.pairs, seed: args.seed, ..Default::default() };
    let maps = generate_dataset(&params, args.maps)?;
    save_dataset(&args.out, &maps)?;
    let samples: usize = maps.iter().map(|m| m.start_goal.len()).sum();
    println!("wrote {} maps, {} samples to {}", maps.len(), samples, args.out.display());
    Ok(maps)
}

fn run_bench(args: &BenchArgs, kind: ProviderKind) -> Result<String, CliError> {
    let maps = load_dataset(&args.run.dataset)?;
    let setup = ProviderSetup::new(&args.run, kind)?;
    setup.precheck(&maps, args.run.scale, args.run.algo)?;
    let outcome = bench(&args.run.run_config(), &maps, &setup.provider());
    setup.persist()?;
    let report = outcome?.report;
    let json = report.to_json();
    let table = report.to_table();
    print!("{table}");
    if let Some(path) = &args.out_json {
        write_file(path, &json)?;
    }
    if let Some(path) = &args.out_table {
        write_file(path, &table)?;
    }
    if let Some(client) = &setup.client {
        log::info!("network calls: {}", client.network_calls());
    }
    Ok(json)
}

/// Returns the report JSON.
pub fn cmd_bench(args: &BenchArgs) -> Result<String, CliError> {
    run_bench(args, args.run.provider_or_oracle())
}

/// Like `cmd_bench`, but model responses come only from the cache. An oracle
/// or empty provider is honored as given.
pub fn cmd_replay(args: &BenchArgs) -> Result<String, CliError> {
    let kind = match args.run.provider {
        None | Some(ProviderKind::Live) => ProviderKind::CacheOnly,
        Some(other) => other,
    };
    run_bench(args, kind)
}

pub fn cmd_scale(args: &ScaleArgs) -> Result<String, CliError> {
    let maps = load_dataset(&args.run.dataset)?;
    let setup = ProviderSetup::new(&args.run, args.run.provider_or_oracle())?;
    let report = scale_sweep(&args.run.run_config(), &maps, &setup.provider(), &args.scales, args.queries, args.seed);
    setup.persist()?;
    let report = report?;
    print!("{}", report.to_table());
    let json = report.to_json();
    if let Some(path) = &args.out_json {
        write_file(path, &json)?;
    }
    Ok(json)
}

pub fn cmd_svg(args: &SvgArgs) -> Result<(), CliError> {
    let maps = load_dataset(&args.run.dataset)?;
    let map = maps
        .iter()
        .find(|m| m.id == args.map)
        .ok_or_else(|| CliError::Config(format!("no map with id {}", args.map)))?;
    let &(s, g) = map
        .start_goal
        .get(args.pair)
        .ok_or_else(|| CliError::Config(format!("map {} has no pair {}", args.map, args.pair)))?;
    let k = args.run.scale;
    if k < 1 {
        return Err(CliError::Config(format!("scale must be at least 1, got {k}")));
    }
    let env = map.environment.scaled(k);
    let (s0, sg) = (s.scaled(k), g.scaled(k));
    let setup = ProviderSetup::new(&args.run, args.run.provider_or_oracle())?;
    let outcome = run_search(&args.run.run_config(), &setup.provider(), &env, s0, sg);
    setup.persist()?;
    let svg = match outcome? {
        Some((result, targets)) => render_svg(&env, &result, s0, sg, targets.as_ref()),
        None => {
            // Model-only: draw the proposed path without a search.
            let (path, _) = setup.provider().full_path(&env, s0, sg);
            let result = SearchResult { path: (!path.is_empty()).then_some(path), ..SearchResult::empty() };
            render_svg(&env, &result, s0, sg, None)
        }
    };
    write_file(&args.out, &svg)?;
    println!("wrote {}", args.out.display());
    Ok(())
}

pub fn run(cli: &Cli) -> Result<(), CliError> {
    match &cli.command {
        Command::Gen(args) => cmd_gen(args).map(drop),
        Command::Bench(args) => cmd_bench(args).map(drop),
        Command::Scale(args) => cmd_scale(args).map(drop),
        Command::Replay(args) => cmd_replay(args).map(drop),
        Command::Svg(args) => cmd_svg(args),
    }
}

pub fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use clap::CommandFactory;

    #[test]
    fn cli_definition_is_consistent() {
        Cli::command().debug_assert();
    }

    #[test]
    fn parses_bench_flags() {
        let cli = Cli::try_parse_from([
            "llm-astar", "bench", "--algo", "wastar", "--provider", "oracle:5", "--w0", "3", "--decay", "0.9", "--scale", "2",
        ])
        .unwrap();
        let Command::Bench(args) = cli.command else { panic!("wrong subcommand") };
        assert_eq!(args.run.algo, Algorithm::Wastar);
        assert_eq!(args.run.provider, Some(ProviderKind::Oracle(5)));
        assert_eq!((args.run.w0, args.run.decay, args.run.scale), (3.0, 0.9, 2));
    }

    #[test]
    fn scales_list() {
        let cli = Cli::try_parse_from(["llm-astar", "scale", "--scales", "1,5,10"]).unwrap();
        let Command::Scale(args) = cli.command else { panic!("wrong subcommand") };
        assert_eq!(args.scales, vec![1, 5, 10]);
    }

    #[test]
    fn cold_cache_only_rejected() {
        let dir = tempfile::tempdir().unwrap();
        let data = dir.path().join("d.json");
        let gen = GenArgs { maps: 1, pairs: 2, seed: 1, out: data.clone() };
        cmd_gen(&gen).unwrap();
        let cli = Cli::try_parse_from([
            "llm-astar", "bench", "--provider", "cache-only",
            "--dataset", data.to_str().unwrap(),
            "--cache", dir.path().join("none.json").to_str().unwrap(),
        ])
        .unwrap();
        let err = run(&cli).unwrap_err();
        assert!(matches!(err, CliError::Config(_)), "{err}");
        assert_eq!(err.exit_code(), 2);
    }

    #[test]
    fn missing_dataset_is_an_io_error() {
        let cli = Cli::try_parse_from(["llm-astar", "bench", "--dataset", "/nonexistent/d.json"]).unwrap();
        assert_eq!(run(&cli).unwrap_err().exit_code(), 3);
    }
}
