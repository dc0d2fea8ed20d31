//! Embedding provider backed by an OpenAI-compatible `/embeddings`
//! endpoint, with a per-token cache. This is the pluggable encoder behind
//! BERTScore when a real model is available.

use std::collections::HashMap;
use std::sync::Mutex;
use std::time::Duration;

use patspec_core::metrics::{EmbeddingProvider, MetricsError};
use serde::Deserialize;

use crate::EndpointConfig;

pub struct EndpointEmbedding {
    http: reqwest::blocking::Client,
    config: EndpointConfig,
    cache: Mutex<HashMap<String, Vec<f64>>>,
}

#[derive(Deserialize)]
struct EmbeddingResponse {
    data: Vec<EmbeddingDatum>,
}

#[derive(Deserialize)]
struct EmbeddingDatum {
    embedding: Vec<f64>,
}

impl EndpointEmbedding {
    pub fn new(config: EndpointConfig) -> Result<Self, MetricsError> {
        let http = reqwest::blocking::Client::builder()
            .timeout(Duration::from_secs(config.timeout_secs))
            .build()
            .map_err(|e| MetricsError::Provider(e.to_string()))?;
        Ok(Self {
            http,
            config,
            cache: Mutex::new(HashMap::new()),
        })
    }

    fn fetch(&self, tokens: &[String]) -> Result<Vec<Vec<f64>>, MetricsError> {
        let url = format!("{}/embeddings", self.config.base_url);
        let mut request = self.http.post(&url).json(&serde_json::json!({
            "model": self.config.model,
            "input": tokens,
        }));
        if let Some(var) = &self.config.api_key_env {
            if let Ok(key) = std::env::var(var) {
                request = request.bearer_auth(key);
            }
        }
        let response = request
            .send()
            .map_err(|e| MetricsError::Provider(e.to_string()))?;
        if !response.status().is_success() {
            return Err(MetricsError::Provider(format!(
                "embedding endpoint returned {}",
                response.status()
            )));
        }
        let parsed: EmbeddingResponse = response
            .json()
            .map_err(|e| MetricsError::Provider(e.to_string()))?;
        if parsed.data.len() != tokens.len() {
            return Err(MetricsError::Provider(format!(
                "asked for {} embeddings, got {}",
                tokens.len(),
                parsed.data.len()
            )));
        }
        Ok(parsed.data.into_iter().map(|d| d.embedding).collect())
    }
}

impl EmbeddingProvider for EndpointEmbedding {
    fn embed_tokens(&self, tokens: &[String]) -> Result<Vec<Vec<f64>>, MetricsError> {
        let mut missing: Vec<String> = Vec::new();
        {
            let cache = self.cache.lock().expect("embedding cache");
            for t in tokens {
                if !cache.contains_key(t) && !missing.contains(t) {
                    missing.push(t.clone());
                }
            }
        }
        if !missing.is_empty() {
            let fetched = self.fetch(&missing)?;
            let mut cache = self.cache.lock().expect("embedding cache");
            for (token, vector) in missing.into_iter().zip(fetched) {
                cache.insert(token, vector);
            }
        }
        let cache = self.cache.lock().expect("embedding cache");
        Ok(tokens
            .iter()
            .map(|t| cache.get(t).cloned().expect("token just cached"))
            .collect())
    }

    fn identity(&self) -> String {
        format!("endpoint:{}", self.config.model)
    }
}
