//! NIST: information-weighted n-gram precision (max_n = 5) with the NIST
//! brevity factor. Information weights are computed from the reference
//! corpus of the evaluation run itself: info(g) = log2(count(prefix) /
//! count(g)), with unigrams weighted against the total reference word
//! count. Matched contributions are summed in sorted n-gram order so the
//! score is reproducible bit-for-bit.

use std::collections::HashMap;

use crate::text::word_tokens;

pub const NIST_MAX_N: usize = 5;

/// Reference-corpus n-gram statistics backing the information weights.
#[derive(Debug, Clone)]
pub struct NistWeights {
    counts: Vec<HashMap<String, usize>>,
    total_words: usize,
    max_n: usize,
}

fn gram_key(tokens: &[String]) -> String {
    tokens.join(" ")
}

impl NistWeights {
    /// Counts n-grams for n = 1..=max_n over all reference texts.
    pub fn from_references<S: AsRef<str>>(refs: &[S], max_n: usize) -> Self {
        let mut counts: Vec<HashMap<String, usize>> = vec![HashMap::new(); max_n];
        let mut total_words = 0usize;
        for r in refs {
            let tokens = word_tokens(r.as_ref());
            total_words += tokens.len();
            for (n, bucket) in counts.iter_mut().enumerate() {
                let n = n + 1;
                if tokens.len() >= n {
                    for w in tokens.windows(n) {
                        *bucket.entry(gram_key(w)).or_insert(0) += 1;
                    }
                }
            }
        }
        Self { counts, total_words, max_n }
    }

    /// log2(count(prefix)/count(gram)) for orders >= 2, log2(total/count)
    /// for unigrams; 0 for n-grams absent from the reference corpus.
    pub fn info(&self, gram_tokens: &[String]) -> f64 {
        let n = gram_tokens.len();
        if n == 0 || n > self.max_n {
            return 0.0;
        }
        let full = self.counts[n - 1].get(&gram_key(gram_tokens)).copied().unwrap_or(0);
        if full == 0 {
            return 0.0;
        }
        if n == 1 {
            (self.total_words as f64 / full as f64).log2()
        } else {
            let prefix = self.counts[n - 2]
                .get(&gram_key(&gram_tokens[..n - 1]))
                .copied()
                .unwrap_or(0);
            (prefix as f64 / full as f64).log2()
        }
    }
}

fn brevity(hyp_len: usize, ref_len: usize) -> f64 {
    if hyp_len == 0 || ref_len == 0 {
        return 0.0;
    }
    let beta = 0.5f64.ln() / (1.5f64.ln() * 1.5f64.ln());
    let ratio = (hyp_len as f64 / ref_len as f64).min(1.0);
    (beta * ratio.ln() * ratio.ln()).exp()
}

/// Per-order contributions for one (hypothesis, reference) segment:
/// (sorted matched-info pairs, hypothesis n-gram count).
fn segment_order(
    hyp: &[String],
    reference: &[String],
    n: usize,
    weights: &NistWeights,
) -> (Vec<(String, f64)>, usize) {
    let mut hyp_counts: HashMap<&[String], usize> = HashMap::new();
    let mut order: Vec<&[String]> = Vec::new();
    if hyp.len() >= n {
        for w in hyp.windows(n) {
            let e = hyp_counts.entry(w).or_insert(0);
            if *e == 0 {
                order.push(w);
            }
            *e += 1;
        }
    }
    let mut ref_counts: HashMap<&[String], usize> = HashMap::new();
    if reference.len() >= n {
        for w in reference.windows(n) {
            *ref_counts.entry(w).or_insert(0) += 1;
        }
    }
    let total: usize = hyp_counts.values().sum();
    let mut contributions = Vec::new();
    for gram in order {
        let hc = hyp_counts[gram];
        let rc = ref_counts.get(gram).copied().unwrap_or(0);
        let matched = hc.min(rc);
        if matched > 0 {
            contributions.push((gram_key(gram), matched as f64 * weights.info(gram)));
        }
    }
    (contributions, total)
}

/// Corpus NIST over aligned (hypothesis, reference) pairs, weights from the
/// references themselves.
pub fn corpus_nist<S: AsRef<str>>(hyps: &[S], refs: &[S], max_n: usize) -> f64 {
    let weights = NistWeights::from_references(refs, max_n);
    let hyp_tokens: Vec<Vec<String>> = hyps.iter().map(|h| word_tokens(h.as_ref())).collect();
    let ref_tokens: Vec<Vec<String>> = refs.iter().map(|r| word_tokens(r.as_ref())).collect();
    let mut sum = 0.0f64;
    for n in 1..=max_n {
        let mut contributions: Vec<(String, f64)> = Vec::new();
        let mut denominator = 0usize;
        for (h, r) in hyp_tokens.iter().zip(&ref_tokens) {
            let (mut c, d) = segment_order(h, r, n, &weights);
            contributions.append(&mut c);
            denominator += d;
        }
        contributions.sort_by(|a, b| a.0.cmp(&b.0));
        let numerator: f64 = contributions.iter().map(|(_, v)| v).sum();
        if denominator > 0 {
            sum += numerator / denominator as f64;
        }
    }
    let hyp_len: usize = hyp_tokens.iter().map(Vec::len).sum();
    let ref_len: usize = ref_tokens.iter().map(Vec::len).sum();
    sum * brevity(hyp_len, ref_len)
}

/// NIST for a single pair using pre-built corpus weights (the per-sample
/// variant reported by corpus evaluation).
pub fn pair_nist(hyp: &str, reference: &str, weights: &NistWeights) -> f64 {
    let h = word_tokens(hyp);
    let r = word_tokens(reference);
    let mut sum = 0.0f64;
    for n in 1..=weights.max_n {
        let (mut contributions, denominator) = segment_order(&h, &r, n, weights);
        contributions.sort_by(|a, b| a.0.cmp(&b.0));
        let numerator: f64 = contributions.iter().map(|(_, v)| v).sum();
        if denominator > 0 {
            sum += numerator / denominator as f64;
        }
    }
    sum * brevity(h.len(), r.len())
}
