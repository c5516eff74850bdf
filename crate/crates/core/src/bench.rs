//! Benchmark orchestration: runs an algorithm over a dataset against the A*
//! baseline, and the scalability sweep.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use thiserror::Error;

use crate::dataset::{samples, MapRecord, Sample, SampleId};
use crate::env::{path_length, Environment, Point};
use crate::guided::{llm_astar_search, sanitize_targets, TargetList};
use crate::metrics::{growth_factor, BenchReport, MetricsError, ReportRow, RunRecord, ScaleReport};
use crate::search::{astar, weighted_astar, HeuristicKind, SearchError, SearchResult};
use crate::waypoints::{query_key, LlmClient, PromptStyle, Provider, ProviderError, ResponseCache};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Algorithm {
    Astar,
    Wastar,
    LlmAstar,
    LlmOnly,
}

impl Algorithm {
    /// Row label in reports.
    pub fn label(self) -> &'static str {
        match self {
            Algorithm::Astar => "A*",
            Algorithm::Wastar => "Dynamic WA*",
            Algorithm::LlmAstar => "LLM-A*",
            Algorithm::LlmOnly => "LLM",
        }
    }
}

impl std::str::FromStr for Algorithm {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "astar" => Ok(Algorithm::Astar),
            "wastar" => Ok(Algorithm::Wastar),
            "llm_astar" => Ok(Algorithm::LlmAstar),
            "llm_only" => Ok(Algorithm::LlmOnly),
            other => Err(format!("unknown algorithm `{other}` (expected astar|wastar|llm_astar|llm_only)")),
        }
    }
}

/// Provider selector as given on the command line.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ProviderKind {
    Live,
    CacheOnly,
    Oracle(usize),
    /// No waypoints.
    None,
}

impl std::str::FromStr for ProviderKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "live" => Ok(ProviderKind::Live),
            "cache-only" => Ok(ProviderKind::CacheOnly),
            "none" => Ok(ProviderKind::None),
            _ => s
                .strip_prefix("oracle:")
                .and_then(|n| n.parse().ok())
                .map(ProviderKind::Oracle)
                .ok_or_else(|| format!("unknown provider `{s}` (expected live|cache-only|oracle:N|none)")),
        }
    }
}

#[derive(Clone, Debug)]
pub struct RunConfig {
    pub algorithm: Algorithm,
    pub heuristic: HeuristicKind,
    pub scale: i64,
    pub w0: f64,
    pub decay: f64,
    /// Worker threads for the per-sample fan-out; `None` uses every core.
    pub workers: Option<usize>,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self { algorithm: Algorithm::LlmAstar, heuristic: HeuristicKind::Euclidean, scale: 1, w0: 2.0, decay: 0.99, workers: None }
    }
}

#[derive(Debug, Error)]
pub enum BenchError {
    #[error("{sample}: {source}")]
    Search { sample: SampleId, source: SearchError },
    #[error("{sample}: baseline found no path")]
    Unsolvable { sample: SampleId },
    #[error("{sample}: no cached response (key {key})")]
    CacheMiss { sample: SampleId, key: String },
    #[error(transparent)]
    Metrics(#[from] MetricsError),
    #[error("invalid configuration: {0}")]
    Config(String),
}

#[derive(Clone, Debug)]
pub struct BenchOutcome {
    pub report: BenchReport,
    pub baseline: Vec<RunRecord>,
    pub runs: Vec<RunRecord>,
}

/// A sample with its environment scaled.
struct Query<'a> {
    id: SampleId,
    env: &'a Environment,
    start: Point,
    goal: Point,
}

fn scaled_envs(maps: &[MapRecord], k: i64) -> Vec<Environment> {
    maps.iter().map(|m| m.environment.scaled(k)).collect()
}

fn scaled_queries<'a>(maps: &[MapRecord], envs: &'a [Environment], k: i64) -> Vec<Query<'a>> {
    maps.iter()
        .zip(envs)
        .flat_map(|(m, env)| {
            m.start_goal.iter().enumerate().map(move |(i, &(s, g))| Query {
                id: SampleId { map: m.id, pair: i as u32 },
                env,
                start: s.scaled(k),
                goal: g.scaled(k),
            })
        })
        .collect()
}

fn with_workers<T: Send>(workers: Option<usize>, job: impl FnOnce() -> T + Send) -> Result<T, BenchError> {
    match workers {
        None => Ok(job()),
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n.max(1))
                .build()
                .map_err(|e| BenchError::Config(e.to_string()))?;
            Ok(pool.install(job))
        }
    }
}

fn check_config(cfg: &RunConfig) -> Result<(), BenchError> {
    if cfg.scale < 1 {
        return Err(BenchError::Config(format!("scale must be at least 1, got {}", cfg.scale)));
    }
    if !(cfg.w0 >= 1.0 && cfg.decay > 0.0 && cfg.decay <= 1.0) {
        return Err(BenchError::Config(format!("need w0 >= 1 and 0 < decay <= 1, got {} and {}", cfg.w0, cfg.decay)));
    }
    Ok(())
}

/// Fails with the first sample whose prompt is not cached, before any search runs.
pub fn check_cache_coverage(
    maps: &[MapRecord],
    scale: i64,
    client: &LlmClient,
    cache: &ResponseCache,
    style: PromptStyle,
) -> Result<(), BenchError> {
    let envs = scaled_envs(maps, scale);
    for q in scaled_queries(maps, &envs, scale) {
        let key = query_key(client.config(), style, q.env, q.start, q.goal);
        if !cache.contains(&key) {
            return Err(BenchError::CacheMiss { sample: q.id, key });
        }
    }
    Ok(())
}

/// Targets for a guided run; provider failures fall back to `[s0, sg]`.
pub fn guided_targets(provider: &Provider, env: &Environment, s0: Point, sg: Point) -> Result<TargetList, ProviderError> {
    let raw = match provider.waypoints(env, s0, sg) {
        Ok(raw) => raw,
        Err(e @ ProviderError::CacheMiss { .. }) => return Err(e),
        Err(e) => {
            log::warn!("waypoints unavailable for {s0} -> {sg}, searching unguided: {e}");
            Vec::new()
        }
    };
    Ok(sanitize_targets(env, &raw, s0, sg))
}

/// One search with the configured algorithm. `LlmOnly` has no search and yields `None`.
pub fn run_search(
    cfg: &RunConfig,
    provider: &Provider,
    env: &Environment,
    s0: Point,
    sg: Point,
) -> Result<Option<(SearchResult, Option<TargetList>)>, BenchError> {
    let sample = SampleId { map: 0, pair: 0 };
    let search_err = |source| BenchError::Search { sample, source };
    Ok(Some(match cfg.algorithm {
        Algorithm::Astar => (astar(env, s0, sg, cfg.heuristic).map_err(search_err)?, None),
        Algorithm::Wastar => {
            (weighted_astar(env, s0, sg, cfg.heuristic, cfg.w0, cfg.decay).map_err(search_err)?, None)
        }
        Algorithm::LlmAstar => {
            let targets = guided_targets(provider, env, s0, sg).map_err(|e| match e {
                ProviderError::CacheMiss { key } => BenchError::CacheMiss { sample, key },
                other => BenchError::Config(other.to_string()),
            })?;
            let result = llm_astar_search(env, s0, sg, &targets, cfg.heuristic).map_err(search_err)?;
            (result, Some(targets))
        }
        Algorithm::LlmOnly => return Ok(None),
    }))
}

fn search_record(sample: SampleId, label: &str, q: &Query, result: &SearchResult, optimal: f64) -> RunRecord {
    let (path_length, valid) = match &result.path {
        Some(path) => (Some(path_length(path)), q.env.path_valid(path, q.start, q.goal)),
        None => (None, false),
    };
    RunRecord { sample, algorithm: label.to_string(), stats: Some(result.stats), path_length, valid, optimal_length: optimal }
}

/// Runs `cfg.algorithm` on every sample (scaled by `cfg.scale`) alongside the
/// A* baseline. Records come back in dataset order.
pub fn bench(cfg: &RunConfig, maps: &[MapRecord], provider: &Provider) -> Result<BenchOutcome, BenchError> {
    check_config(cfg)?;
    let envs = scaled_envs(maps, cfg.scale);
    let queries = scaled_queries(maps, &envs, cfg.scale);

    let pairs: Vec<(RunRecord, RunRecord)> = with_workers(cfg.workers, || {
        queries
            .par_iter()
            .map(|q| {
                let base = astar(q.env, q.start, q.goal, cfg.heuristic)
                    .map_err(|source| BenchError::Search { sample: q.id, source })?;
                let optimal = base.cost.ok_or(BenchError::Unsolvable { sample: q.id })?;
                let base_rec = search_record(q.id, Algorithm::Astar.label(), q, &base, optimal);
                let label = cfg.algorithm.label();
                let run_rec = match cfg.algorithm {
                    Algorithm::Astar => base_rec.clone(),
                    Algorithm::LlmOnly => {
                        let (path, valid) = provider.full_path(q.env, q.start, q.goal);
                        RunRecord {
                            sample: q.id,
                            algorithm: label.to_string(),
                            stats: None,
                            path_length: valid.then(|| path_length(&path)),
                            valid,
                            optimal_length: optimal,
                        }
                    }
                    _ => {
                        let (result, _) = run_search(cfg, provider, q.env, q.start, q.goal)
                            .map_err(|e| relabel(e, q.id))?
                            .expect("search algorithms return a result");
                        search_record(q.id, label, q, &result, optimal)
                    }
                };
                Ok((base_rec, run_rec))
            })
            .collect::<Result<Vec<_>, BenchError>>()
    })??;
    let (baseline, runs): (Vec<RunRecord>, Vec<RunRecord>) = pairs.into_iter().unzip();

    let mut rows = vec![ReportRow::from_runs(Algorithm::Astar.label(), &baseline, &baseline)?];
    if cfg.algorithm != Algorithm::Astar {
        rows.push(ReportRow::from_runs(cfg.algorithm.label(), &runs, &baseline)?);
    }
    let report = BenchReport { samples: runs.len(), scale: cfg.scale, rows };
    Ok(BenchOutcome { report, baseline, runs })
}

fn relabel(e: BenchError, sample: SampleId) -> BenchError {
    match e {
        BenchError::Search { source, .. } => BenchError::Search { sample, source },
        BenchError::CacheMiss { key, .. } => BenchError::CacheMiss { sample, key },
        other => other,
    }
}

/// `n` distinct samples drawn with a seeded generator, in draw order.
pub fn pick_queries<'a>(all: &[Sample<'a>], n: usize, seed: u64) -> Vec<Sample<'a>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rand::seq::index::sample(&mut rng, all.len(), n.min(all.len()))
        .into_iter()
        .map(|i| all[i])
        .collect()
}

/// Mean expansions and peak storage of A* and LLM-A* on the same queries,
/// rescaled to each of `scales`, with growth relative to scale 1.
pub fn scale_sweep(
    cfg: &RunConfig,
    maps: &[MapRecord],
    provider: &Provider,
    scales: &[i64],
    queries: usize,
    seed: u64,
) -> Result<ScaleReport, BenchError> {
    if !scales.contains(&1) {
        return Err(BenchError::Config("scales must include 1".into()));
    }
    if scales.iter().any(|&k| k < 1) {
        return Err(BenchError::Config("scales must be positive".into()));
    }
    let all = samples(maps);
    let picked = pick_queries(&all, queries, seed);
    if picked.is_empty() {
        return Err(BenchError::Config("dataset has no samples".into()));
    }
    let mut sorted = scales.to_vec();
    sorted.sort_unstable();
    sorted.dedup();

    let guided_cfg = RunConfig { algorithm: Algorithm::LlmAstar, ..cfg.clone() };
    let mut astar_series = Vec::new();
    let mut guided_series = Vec::new();
    for &k in &sorted {
        let per_query: Vec<[f64; 4]> = with_workers(cfg.workers, || {
            picked
                .par_iter()
                .map(|s| {
                    let env = s.env.scaled(k);
                    let (s0, sg) = (s.start.scaled(k), s.goal.scaled(k));
                    let base = astar(&env, s0, sg, cfg.heuristic)
                        .map_err(|source| BenchError::Search { sample: s.id, source })?;
                    let (guided, _) = run_search(&guided_cfg, provider, &env, s0, sg)
                        .map_err(|e| relabel(e, s.id))?
                        .expect("guided search returns a result");
                    Ok([
                        base.stats.expansions as f64,
                        base.stats.peak_storage as f64,
                        guided.stats.expansions as f64,
                        guided.stats.peak_storage as f64,
                    ])
                })
                .collect::<Result<Vec<_>, BenchError>>()
        })??;
        let n = per_query.len() as f64;
        let mean = |c: usize| per_query.iter().map(|r| r[c]).sum::<f64>() / n;
        astar_series.push((k, mean(0), mean(1)));
        guided_series.push((k, mean(2), mean(3)));
    }
    Ok(ScaleReport {
        queries: picked.len(),
        series: vec![
            (Algorithm::Astar.label().to_string(), growth_factor(&astar_series)?),
            (Algorithm::LlmAstar.label().to_string(), growth_factor(&guided_series)?),
        ],
    })
}
