//! Greedy-matching BERTScore over pluggable token embeddings. The neural
//! encoder itself is out of scope; anything that maps tokens to vectors of
//! a uniform dimension can serve as the provider. Raw cosine F1 is
//! reported, no baseline rescaling; per-token similarities are clamped to
//! [0, 1] and bitwise-equal vectors score exactly 1.

use std::collections::HashMap;

use crate::text::word_tokens;

use super::MetricsError;

/// Supplies one vector per token, uniform dimension across a call.
pub trait EmbeddingProvider {
    fn embed_tokens(&self, tokens: &[String]) -> Result<Vec<Vec<f64>>, MetricsError>;
    /// Recorded in report headers so scores stay attributable.
    fn identity(&self) -> String;
}

/// Fixed token-to-vector table; unknown tokens get the zero vector. Useful
/// for tests and tiny deterministic setups.
#[derive(Debug, Clone, Default)]
pub struct TableEmbedding {
    pub table: HashMap<String, Vec<f64>>,
    pub dim: usize,
}

impl TableEmbedding {
    pub fn new(entries: &[(&str, &[f64])]) -> Self {
        let dim = entries.first().map(|(_, v)| v.len()).unwrap_or(0);
        Self {
            table: entries
                .iter()
                .map(|(k, v)| (k.to_string(), v.to_vec()))
                .collect(),
            dim,
        }
    }
}

impl EmbeddingProvider for TableEmbedding {
    fn embed_tokens(&self, tokens: &[String]) -> Result<Vec<Vec<f64>>, MetricsError> {
        Ok(tokens
            .iter()
            .map(|t| self.table.get(t).cloned().unwrap_or_else(|| vec![0.0; self.dim]))
            .collect())
    }

    fn identity(&self) -> String {
        format!("table-{}d", self.dim)
    }
}

/// Deterministic hash-based embeddings: every distinct token maps to a
/// pseudo-random unit-scale vector derived from its bytes. No semantics,
/// but fully offline and reproducible, which makes the metric exercisable
/// end to end without a neural encoder.
#[derive(Debug, Clone, Copy)]
pub struct HashEmbedding {
    pub dim: usize,
}

impl Default for HashEmbedding {
    fn default() -> Self {
        Self { dim: 64 }
    }
}

impl EmbeddingProvider for HashEmbedding {
    fn embed_tokens(&self, tokens: &[String]) -> Result<Vec<Vec<f64>>, MetricsError> {
        Ok(tokens
            .iter()
            .map(|t| {
                let mut state = fnv1a(t.as_bytes());
                (0..self.dim)
                    .map(|_| {
                        state = splitmix64(state);
                        // map to [-1, 1)
                        (state >> 11) as f64 / (1u64 << 52) as f64 - 1.0
                    })
                    .collect()
            })
            .collect())
    }

    fn identity(&self) -> String {
        format!("hash-{}d", self.dim)
    }
}

fn fnv1a(bytes: &[u8]) -> u64 {
    let mut hash = 0xcbf2_9ce4_8422_2325u64;
    for b in bytes {
        hash ^= *b as u64;
        hash = hash.wrapping_mul(0x0000_0100_0000_01b3);
    }
    hash
}

fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9e37_79b9_7f4a_7c15);
    let mut z = x;
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

fn cos_clamped(a: &[f64], b: &[f64]) -> f64 {
    if a == b {
        return 1.0;
    }
    let dot: f64 = a.iter().zip(b).map(|(x, y)| x * y).sum();
    let na: f64 = a.iter().map(|x| x * x).sum::<f64>().sqrt();
    let nb: f64 = b.iter().map(|x| x * x).sum::<f64>().sqrt();
    if na == 0.0 || nb == 0.0 {
        return 0.0;
    }
    (dot / (na * nb)).clamp(0.0, 1.0)
}

/// Greedy cosine token matching: precision averages each hypothesis
/// token's best match in the reference, recall the reverse; returns
/// (precision, recall, F1).
pub fn bertscore(
    hyp: &str,
    reference: &str,
    provider: &dyn EmbeddingProvider,
) -> Result<(f64, f64, f64), MetricsError> {
    let h_tokens = word_tokens(hyp);
    let r_tokens = word_tokens(reference);
    if h_tokens.is_empty() || r_tokens.is_empty() {
        return Ok((0.0, 0.0, 0.0));
    }
    let h_vecs = provider.embed_tokens(&h_tokens)?;
    let r_vecs = provider.embed_tokens(&r_tokens)?;
    let dims: std::collections::HashSet<usize> =
        h_vecs.iter().chain(r_vecs.iter()).map(Vec::len).collect();
    if dims.len() > 1 {
        return Err(MetricsError::Provider(format!(
            "provider returned mixed dimensions: {dims:?}"
        )));
    }
    let mut precision = 0.0f64;
    for hv in &h_vecs {
        precision += r_vecs.iter().map(|rv| cos_clamped(hv, rv)).fold(0.0, f64::max);
    }
    precision /= h_vecs.len() as f64;
    let mut recall = 0.0f64;
    for rv in &r_vecs {
        recall += h_vecs.iter().map(|hv| cos_clamped(rv, hv)).fold(0.0, f64::max);
    }
    recall /= r_vecs.len() as f64;
    let f1 = if precision + recall == 0.0 {
        0.0
    } else {
        2.0 * precision * recall / (precision + recall)
    };
    Ok((precision, recall, f1))
}
