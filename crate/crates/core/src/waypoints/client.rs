//! Blocking chat-completion client with retries and a cap on requests in flight.

use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::{Condvar, Mutex};
use std::time::Duration;

use serde::Deserialize;
use serde_json::json;

use super::ProviderError;

#[derive(Clone, Debug, PartialEq)]
pub struct ProviderConfig {
    /// Endpoint root; requests go to `{base_url}/chat/completions`.
    pub base_url: String,
    pub model_name: String,
    /// Name of the environment variable holding the bearer token. The token
    /// itself is read at request time and never stored.
    pub api_key_env: String,
    pub temperature: f64,
    pub max_tokens: u32,
    pub max_retries: u32,
    pub timeout: Duration,
    /// Delay before the first retry; doubles on each further retry.
    pub initial_backoff: Duration,
    pub max_in_flight: usize,
}

impl Default for ProviderConfig {
    fn default() -> Self {
        Self {
            base_url: "https://api.openai.com/v1".into(),
            model_name: "gpt-3.5-turbo".into(),
            api_key_env: "OPENAI_API_KEY".into(),
            temperature: 0.0,
            max_tokens: 1024,
            max_retries: 3,
            timeout: Duration::from_secs(60),
            initial_backoff: Duration::from_millis(500),
            max_in_flight: 4,
        }
    }
}

#[derive(Deserialize)]
struct ChatResponse {
    choices: Vec<Choice>,
}

#[derive(Deserialize)]
struct Choice {
    message: Message,
}

#[derive(Deserialize)]
struct Message {
    content: String,
}

// Counting semaphore; std has none.
#[derive(Debug)]
struct Slots {
    free: Mutex<usize>,
    cv: Condvar,
}

impl Slots {
    fn acquire(&self) -> SlotGuard<'_> {
        let mut free = self.free.lock().unwrap();
        while *free == 0 {
            free = self.cv.wait(free).unwrap();
        }
        *free -= 1;
        SlotGuard(self)
    }
}

struct SlotGuard<'a>(&'a Slots);

impl Drop for SlotGuard<'_> {
    fn drop(&mut self) {
        *self.0.free.lock().unwrap() += 1;
        self.0.cv.notify_one();
    }
}

#[derive(Debug)]
pub struct LlmClient {
    cfg: ProviderConfig,
    // None for a cache-only client.
    http: Option<reqwest::blocking::Client>,
    slots: Slots,
    calls: AtomicU64,
}

impl LlmClient {
    pub fn new(cfg: ProviderConfig) -> Result<Self, ProviderError> {
        if cfg.timeout.is_zero() {
            return Err(ProviderError::Config("timeout must be positive".into()));
        }
        let http = reqwest::blocking::Client::builder()
            .timeout(cfg.timeout)
            .build()
            .map_err(|e| ProviderError::Transport(e.to_string()))?;
        Ok(Self::build(cfg, Some(http)))
    }

    /// A client that never touches the network; every fetch is a cache miss.
    pub fn offline(cfg: ProviderConfig) -> Self {
        Self::build(cfg, None)
    }

    fn build(cfg: ProviderConfig, http: Option<reqwest::blocking::Client>) -> Self {
        let slots = Slots { free: Mutex::new(cfg.max_in_flight.max(1)), cv: Condvar::new() };
        Self { cfg, http, slots, calls: AtomicU64::new(0) }
    }

    pub fn config(&self) -> &ProviderConfig {
        &self.cfg
    }

    pub fn is_offline(&self) -> bool {
        self.http.is_none()
    }

    /// HTTP requests issued so far, retries included.
    pub fn network_calls(&self) -> u64 {
        self.calls.load(Ordering::Relaxed)
    }

    /// Sends one user message and returns the first choice's content.
    ///
    /// Transport failures, 429 and 5xx are retried up to `max_retries` times
    /// with exponential backoff; other non-success statuses fail at once.
    pub fn complete(&self, prompt: &str) -> Result<String, ProviderError> {
        let Some(http) = &self.http else {
            return Err(ProviderError::Config("client is offline".into()));
        };
        let url = format!("{}/chat/completions", self.cfg.base_url.trim_end_matches('/'));
        let body = json!({
            "model": self.cfg.model_name,
            "messages": [{"role": "user", "content": prompt}],
            "temperature": self.cfg.temperature,
            "max_tokens": self.cfg.max_tokens,
        });
        let key = std::env::var(&self.cfg.api_key_env).ok();

        let mut backoff = self.cfg.initial_backoff;
        let mut attempt = 0;
        loop {
            let outcome = {
                let _slot = self.slots.acquire();
                self.calls.fetch_add(1, Ordering::Relaxed);
                let mut req = http.post(&url).json(&body);
                if let Some(key) = &key {
                    req = req.bearer_auth(key);
                }
                req.send()
            };
            let err = match outcome {
                Ok(resp) if resp.status().is_success() => {
                    let parsed: ChatResponse =
                        resp.json().map_err(|e| ProviderError::BadResponse(e.to_string()))?;
                    return parsed
                        .choices
                        .into_iter()
                        .next()
                        .map(|c| c.message.content)
                        .ok_or_else(|| ProviderError::BadResponse("response has no choices".into()));
                }
                Ok(resp) => {
                    let status = resp.status();
                    let err = ProviderError::HttpStatus {
                        status: status.as_u16(),
                        body: resp.text().unwrap_or_default(),
                    };
                    if !(status.as_u16() == 429 || status.is_server_error()) {
                        return Err(err);
                    }
                    err
                }
                Err(e) => ProviderError::Transport(e.to_string()),
            };
            if attempt >= self.cfg.max_retries {
                return Err(err);
            }
            log::warn!("request failed ({err}); retrying in {backoff:?}");
            std::thread::sleep(backoff);
            backoff = backoff.saturating_mul(2);
            attempt += 1;
        }
    }
}
