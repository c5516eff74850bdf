//! Waypoint providers: prompts, the model client and its cache, response
//! parsing, and the offline oracle.

pub mod cache;
pub mod client;
mod oracle;
pub mod parse;
pub mod prompt;

pub use cache::{cache_key, ResponseCache};
pub use client::{LlmClient, ProviderConfig};
pub use oracle::oracle_waypoints;
pub use parse::{parse_path, ParseError};
pub use prompt::{render_prompt, PromptStyle};

use thiserror::Error;

use crate::env::{Environment, Point};

#[derive(Debug, Error)]
pub enum ProviderError {
    #[error("no path: {0}")]
    NoPath(String),
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("transport error: {0}")]
    Transport(String),
    #[error("HTTP status {status}: {body}")]
    HttpStatus { status: u16, body: String },
    #[error("unexpected response body: {0}")]
    BadResponse(String),
    #[error("no cached response for key {key}")]
    CacheMiss { key: String },
    #[error("provider configuration: {0}")]
    Config(String),
}

/// Cached response for `prompt`, or a fresh one from the model (then cached).
pub fn fetch_response(client: &LlmClient, cache: &ResponseCache, prompt: &str) -> Result<String, ProviderError> {
    let cfg = client.config();
    let key = cache_key(prompt, &cfg.model_name, cfg.temperature);
    if let Some(hit) = cache.get(&key) {
        return Ok(hit);
    }
    if client.is_offline() {
        return Err(ProviderError::CacheMiss { key });
    }
    let text = client.complete(prompt)?;
    cache.insert(key, text.clone());
    Ok(text)
}

/// The cache key the query for `(style, env, s0, sg)` would use.
pub fn query_key(cfg: &ProviderConfig, style: PromptStyle, env: &Environment, s0: Point, sg: Point) -> String {
    cache_key(&render_prompt(style, env, s0, sg), &cfg.model_name, cfg.temperature)
}

/// Raw, unsanitized waypoints proposed by the model.
pub fn query_waypoints(
    client: &LlmClient,
    cache: &ResponseCache,
    style: PromptStyle,
    env: &Environment,
    s0: Point,
    sg: Point,
) -> Result<Vec<Point>, ProviderError> {
    let text = fetch_response(client, cache, &render_prompt(style, env, s0, sg))?;
    Ok(parse_path(&text)?)
}

/// The model's answer taken as a complete path, with its validity verdict.
/// Any provider failure yields an empty, invalid path.
pub fn llm_only_path(
    client: &LlmClient,
    cache: &ResponseCache,
    style: PromptStyle,
    env: &Environment,
    s0: Point,
    sg: Point,
) -> (Vec<Point>, bool) {
    match query_waypoints(client, cache, style, env, s0, sg) {
        Ok(path) => {
            let valid = env.path_valid(&path, s0, sg);
            (path, valid)
        }
        Err(e) => {
            log::warn!("model path unavailable for {s0} -> {sg}: {e}");
            (Vec::new(), false)
        }
    }
}

/// Where a run's waypoints come from.
#[derive(Clone, Copy, Debug)]
pub enum Provider<'a> {
    /// No guidance at all; search degrades to targets `[s0, sg]`.
    Empty,
    /// `n` samples from the optimal path.
    Oracle(usize),
    Llm { client: &'a LlmClient, cache: &'a ResponseCache, style: PromptStyle },
}

impl Provider<'_> {
    pub fn waypoints(&self, env: &Environment, s0: Point, sg: Point) -> Result<Vec<Point>, ProviderError> {
        match *self {
            Provider::Empty => Ok(Vec::new()),
            Provider::Oracle(n) => oracle_waypoints(env, s0, sg, n),
            Provider::Llm { client, cache, style } => query_waypoints(client, cache, style, env, s0, sg),
        }
    }

    /// Path proposed by the provider alone and whether it is collision-free.
    pub fn full_path(&self, env: &Environment, s0: Point, sg: Point) -> (Vec<Point>, bool) {
        match *self {
            Provider::Llm { client, cache, style } => llm_only_path(client, cache, style, env, s0, sg),
            _ => match self.waypoints(env, s0, sg) {
                Ok(path) => {
                    let valid = env.path_valid(&path, s0, sg);
                    (path, valid)
                }
                Err(_) => (Vec::new(), false),
            },
        }
    }
}
