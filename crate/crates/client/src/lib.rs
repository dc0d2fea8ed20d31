//! Generation client: sends assembled prompts plus the normalized drawing
//! image to any OpenAI-compatible chat-completions endpoint and collects
//! candidate generations. Every model dependency stays behind this wire
//! interface; a bundled deterministic mock endpoint makes the whole
//! pipeline testable offline.

pub mod embed;
pub mod mock;

use std::io::Write;
use std::path::PathBuf;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;
use std::time::{Duration, Instant};

use base64::Engine;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use patspec_core::corpus::{TrainingSample, Validate, ValidationError};

#[derive(Debug, Error)]
pub enum ClientError {
    #[error("endpoint {url} unreachable after {attempts} attempts: {last_error}")]
    EndpointUnreachable {
        url: String,
        attempts: u32,
        last_error: String,
    },
    #[error("endpoint returned a non-conforming body: {detail}")]
    BadResponse { detail: String },
    #[error("request to {url} timed out after {attempts} attempts")]
    Timeout { url: String, attempts: u32 },
    #[error("invalid request: {detail}")]
    InvalidRequest { detail: String },
    #[error("sample {id} failed validation: {source}")]
    InvalidSample {
        id: String,
        source: ValidationError,
    },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// Where and how to reach the inference endpoint.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EndpointConfig {
    /// Base URL up to and including the API root, e.g. `http://host:8000/v1`.
    pub base_url: String,
    pub model: String,
    /// Name of the environment variable holding the API key, if any.
    #[serde(default)]
    pub api_key_env: Option<String>,
    #[serde(default = "default_timeout_secs")]
    pub timeout_secs: u64,
    /// Total tries per request, transient failures only.
    #[serde(default = "default_max_attempts")]
    pub max_attempts: u32,
    /// First backoff delay; doubles per retry.
    #[serde(default = "default_backoff_ms")]
    pub backoff_ms: u64,
    /// Append-only request/response audit log (JSONL), if set.
    #[serde(default)]
    pub audit_path: Option<PathBuf>,
}

fn default_timeout_secs() -> u64 {
    30
}
fn default_max_attempts() -> u32 {
    3
}
fn default_backoff_ms() -> u64 {
    50
}

impl EndpointConfig {
    pub fn new(base_url: &str, model: &str) -> Self {
        Self {
            base_url: base_url.trim_end_matches('/').to_string(),
            model: model.to_string(),
            api_key_env: None,
            timeout_secs: default_timeout_secs(),
            max_attempts: default_max_attempts(),
            backoff_ms: default_backoff_ms(),
            audit_path: None,
        }
    }
}

/// Decoding parameters passed through opaquely.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct GenParams {
    pub n_candidates: u32,
    #[serde(default)]
    pub max_tokens: Option<u32>,
    #[serde(default)]
    pub temperature: Option<f64>,
}

/// One generation request: the assembled prompt, the optional image, and
/// decoding parameters. `n_candidates` is at least 1.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GenerationRequest {
    pub sample_id: String,
    pub prompt: String,
    #[serde(default)]
    pub image_path: Option<String>,
    pub n_candidates: u32,
    #[serde(default)]
    pub max_tokens: Option<u32>,
    #[serde(default)]
    pub temperature: Option<f64>,
}

impl GenerationRequest {
    pub fn new(sample_id: &str, prompt: &str, n_candidates: u32) -> Result<Self, ClientError> {
        if n_candidates < 1 {
            return Err(ClientError::InvalidRequest {
                detail: "n_candidates must be >= 1".into(),
            });
        }
        Ok(Self {
            sample_id: sample_id.to_string(),
            prompt: prompt.to_string(),
            image_path: None,
            n_candidates,
            max_tokens: None,
            temperature: None,
        })
    }
}

/// Candidates for one sample, plus latency and the endpoint identity.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GenerationResult {
    pub sample_id: String,
    pub candidates: Vec<String>,
    pub latency_ms: u64,
    pub endpoint_id: String,
}

/// Wire record for gens.jsonl: a result or an error, one line per sample,
/// in input order. Latency stays out of the wire record (it lives in the
/// in-memory result and the audit log) so identical runs produce
/// byte-identical files.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GenRecord {
    pub sample_id: String,
    pub candidates: Vec<String>,
    pub endpoint_id: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

impl GenRecord {
    pub fn from_outcome(sample_id: &str, outcome: &Result<GenerationResult, ClientError>) -> Self {
        match outcome {
            Ok(r) => Self {
                sample_id: r.sample_id.clone(),
                candidates: r.candidates.clone(),
                endpoint_id: r.endpoint_id.clone(),
                error: None,
            },
            Err(e) => Self {
                sample_id: sample_id.to_string(),
                candidates: Vec::new(),
                endpoint_id: String::new(),
                error: Some(e.to_string()),
            },
        }
    }
}

#[derive(Serialize)]
struct AuditEntry<'a> {
    unix_ms: u128,
    sample_id: &'a str,
    attempt: u32,
    url: &'a str,
    prompt_chars: usize,
    outcome: &'a str,
}

#[derive(Deserialize)]
struct ChatResponse {
    choices: Vec<ChatChoice>,
}

#[derive(Deserialize)]
struct ChatChoice {
    message: ChatMessage,
}

#[derive(Deserialize)]
struct ChatMessage {
    content: String,
}

/// Blocking client over the OpenAI-compatible chat-completions wire
/// format, with bounded-concurrency batching.
pub struct GenClient {
    http: reqwest::blocking::Client,
    config: EndpointConfig,
    audit: Option<Mutex<std::fs::File>>,
}

impl GenClient {
    pub fn new(config: EndpointConfig) -> Result<Self, ClientError> {
        let http = reqwest::blocking::Client::builder()
            .timeout(Duration::from_secs(config.timeout_secs))
            .build()
            .map_err(|e| ClientError::InvalidRequest { detail: e.to_string() })?;
        let audit = match &config.audit_path {
            Some(path) => {
                if let Some(parent) = path.parent() {
                    std::fs::create_dir_all(parent)?;
                }
                Some(Mutex::new(
                    std::fs::OpenOptions::new().create(true).append(true).open(path)?,
                ))
            }
            None => None,
        };
        Ok(Self { http, config, audit })
    }

    pub fn endpoint_id(&self) -> String {
        format!("{}#{}", self.config.base_url, self.config.model)
    }

    fn audit(&self, entry: &AuditEntry<'_>) {
        if let Some(file) = &self.audit {
            if let Ok(mut f) = file.lock() {
                if let Ok(line) = serde_json::to_string(entry) {
                    let _ = writeln!(f, "{line}");
                }
            }
        }
    }

    fn build_body(&self, req: &GenerationRequest) -> Result<serde_json::Value, ClientError> {
        let mut content = vec![serde_json::json!({"type": "text", "text": req.prompt})];
        if let Some(path) = &req.image_path {
            if !path.is_empty() {
                let bytes = std::fs::read(path)?;
                let mime = match path.rsplit('.').next().unwrap_or("").to_lowercase().as_str() {
                    "jpg" | "jpeg" => "image/jpeg",
                    "tif" | "tiff" => "image/tiff",
                    _ => "image/png",
                };
                let encoded = base64::engine::general_purpose::STANDARD.encode(bytes);
                content.push(serde_json::json!({
                    "type": "image_url",
                    "image_url": {"url": format!("data:{mime};base64,{encoded}")}
                }));
            }
        }
        let mut body = serde_json::json!({
            "model": self.config.model,
            "messages": [{"role": "user", "content": content}],
            "n": req.n_candidates,
        });
        if let Some(mt) = req.max_tokens {
            body["max_tokens"] = serde_json::json!(mt);
        }
        if let Some(t) = req.temperature {
            body["temperature"] = serde_json::json!(t);
        }
        Ok(body)
    }

    /// One generation round trip with retries (exponential backoff) on
    /// transient failures: connection errors, timeouts, 408/429/5xx.
    /// Non-transient HTTP errors surface immediately as `BadResponse`.
    pub fn generate(&self, req: &GenerationRequest) -> Result<GenerationResult, ClientError> {
        if req.n_candidates < 1 {
            return Err(ClientError::InvalidRequest {
                detail: "n_candidates must be >= 1".into(),
            });
        }
        let url = format!("{}/chat/completions", self.config.base_url);
        let body = self.build_body(req)?;
        let api_key = self
            .config
            .api_key_env
            .as_ref()
            .and_then(|var| std::env::var(var).ok());
        let start = Instant::now();
        let mut last_error = String::new();
        let mut timed_out = false;
        for attempt in 1..=self.config.max_attempts {
            let mut http_req = self.http.post(&url).json(&body);
            if let Some(key) = &api_key {
                http_req = http_req.bearer_auth(key);
            }
            let outcome = http_req.send();
            match outcome {
                Ok(resp) => {
                    let status = resp.status();
                    if status.is_success() {
                        let parsed: ChatResponse = resp.json().map_err(|e| {
                            ClientError::BadResponse { detail: e.to_string() }
                        })?;
                        let candidates: Vec<String> =
                            parsed.choices.into_iter().map(|c| c.message.content).collect();
                        if candidates.len() != req.n_candidates as usize {
                            return Err(ClientError::BadResponse {
                                detail: format!(
                                    "asked for {} candidates, got {}",
                                    req.n_candidates,
                                    candidates.len()
                                ),
                            });
                        }
                        self.audit(&AuditEntry {
                            unix_ms: unix_ms(),
                            sample_id: &req.sample_id,
                            attempt,
                            url: &url,
                            prompt_chars: req.prompt.len(),
                            outcome: "ok",
                        });
                        return Ok(GenerationResult {
                            sample_id: req.sample_id.clone(),
                            candidates,
                            latency_ms: start.elapsed().as_millis() as u64,
                            endpoint_id: self.endpoint_id(),
                        });
                    }
                    let transient = status.as_u16() == 408
                        || status.as_u16() == 429
                        || status.is_server_error();
                    last_error = format!("http status {status}");
                    self.audit(&AuditEntry {
                        unix_ms: unix_ms(),
                        sample_id: &req.sample_id,
                        attempt,
                        url: &url,
                        prompt_chars: req.prompt.len(),
                        outcome: &last_error,
                    });
                    if !transient {
                        return Err(ClientError::BadResponse {
                            detail: format!("{status} from {url}"),
                        });
                    }
                }
                Err(e) => {
                    timed_out = e.is_timeout();
                    last_error = e.to_string();
                    self.audit(&AuditEntry {
                        unix_ms: unix_ms(),
                        sample_id: &req.sample_id,
                        attempt,
                        url: &url,
                        prompt_chars: req.prompt.len(),
                        outcome: "transport error",
                    });
                }
            }
            if attempt < self.config.max_attempts {
                std::thread::sleep(Duration::from_millis(
                    self.config.backoff_ms << (attempt - 1),
                ));
            }
        }
        if timed_out {
            Err(ClientError::Timeout {
                url,
                attempts: self.config.max_attempts,
            })
        } else {
            Err(ClientError::EndpointUnreachable {
                url,
                attempts: self.config.max_attempts,
                last_error,
            })
        }
    }

    /// Runs requests with at most `concurrency` in flight; output order
    /// matches input order regardless of completion order, with per-item
    /// errors kept at their positions.
    pub fn generate_batch(
        &self,
        requests: &[GenerationRequest],
        concurrency: usize,
    ) -> Vec<Result<GenerationResult, ClientError>> {
        let concurrency = concurrency.max(1).min(requests.len().max(1));
        let next = AtomicUsize::new(0);
        let results: Vec<Mutex<Option<Result<GenerationResult, ClientError>>>> =
            requests.iter().map(|_| Mutex::new(None)).collect();
        std::thread::scope(|scope| {
            for _ in 0..concurrency {
                scope.spawn(|| loop {
                    let i = next.fetch_add(1, Ordering::SeqCst);
                    if i >= requests.len() {
                        break;
                    }
                    let outcome = self.generate(&requests[i]);
                    *results[i].lock().expect("result slot") = Some(outcome);
                });
            }
        });
        results
            .into_iter()
            .map(|slot| slot.into_inner().expect("poisoned slot").expect("filled slot"))
            .collect()
    }

    /// Builds and runs requests for validated samples. Samples failing
    /// validation produce an error record at their position and no request
    /// is issued for them.
    pub fn generate_for_samples(
        &self,
        samples: &[TrainingSample],
        instruction: &str,
        params: &GenParams,
        concurrency: usize,
    ) -> Vec<(String, Result<GenerationResult, ClientError>)> {
        let mut slots: Vec<(String, Option<Result<GenerationResult, ClientError>>)> = Vec::new();
        let mut requests = Vec::new();
        let mut request_slots = Vec::new();
        for (i, sample) in samples.iter().enumerate() {
            match sample.validate() {
                Ok(()) => {
                    let prompt = patspec_core::enrich::assemble_input(sample, instruction);
                    let mut req = GenerationRequest {
                        sample_id: sample.sample_id.clone(),
                        prompt,
                        image_path: (!sample.image_path.is_empty())
                            .then(|| sample.image_path.clone()),
                        n_candidates: params.n_candidates.max(1),
                        max_tokens: params.max_tokens,
                        temperature: params.temperature,
                    };
                    if params.n_candidates < 1 {
                        req.n_candidates = 1;
                    }
                    slots.push((sample.sample_id.clone(), None));
                    request_slots.push(i);
                    requests.push(req);
                }
                Err(e) => {
                    slots.push((
                        sample.sample_id.clone(),
                        Some(Err(ClientError::InvalidSample {
                            id: sample.sample_id.clone(),
                            source: e,
                        })),
                    ));
                }
            }
        }
        let outcomes = self.generate_batch(&requests, concurrency);
        for (slot_idx, outcome) in request_slots.into_iter().zip(outcomes) {
            slots[slot_idx].1 = Some(outcome);
        }
        slots
            .into_iter()
            .map(|(id, outcome)| (id, outcome.expect("every slot filled")))
            .collect()
    }
}

fn unix_ms() -> u128 {
    std::time::SystemTime::now()
        .duration_since(std::time::UNIX_EPOCH)
        .map(|d| d.as_millis())
        .unwrap_or(0)
}
