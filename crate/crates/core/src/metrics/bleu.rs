//! BLEU-4: an unsmoothed corpus variant with brevity penalty and a
//! sentence variant with add-one smoothing on orders 2..=4 (unigram
//! precision stays unsmoothed so zero-overlap pairs score zero).

use std::collections::HashMap;

use crate::text::word_tokens;

use super::MetricsError;

const MAX_N: usize = 4;

fn ngram_counts(tokens: &[String], n: usize) -> HashMap<&[String], usize> {
    let mut counts = HashMap::new();
    if tokens.len() >= n && n > 0 {
        for w in tokens.windows(n) {
            *counts.entry(w).or_insert(0) += 1;
        }
    }
    counts
}

fn clipped(hyp: &HashMap<&[String], usize>, reference: &HashMap<&[String], usize>) -> usize {
    hyp.iter()
        .map(|(gram, count)| (*count).min(reference.get(gram).copied().unwrap_or(0)))
        .sum()
}

/// Sentence BLEU-4 with add-one smoothing, hypothesis first.
pub fn sentence_bleu(hyp: &str, reference: &str) -> f64 {
    let h = word_tokens(hyp);
    let r = word_tokens(reference);
    if h.is_empty() {
        return 0.0;
    }
    let h1 = ngram_counts(&h, 1);
    let r1 = ngram_counts(&r, 1);
    let m1 = clipped(&h1, &r1);
    if m1 == 0 {
        return 0.0;
    }
    let c1: usize = h1.values().sum();
    let mut log_sum = (m1 as f64 / c1 as f64).ln();
    for n in 2..=MAX_N {
        let hn = ngram_counts(&h, n);
        let rn = ngram_counts(&r, n);
        let m = clipped(&hn, &rn);
        let c: usize = hn.values().sum();
        log_sum += ((m as f64 + 1.0) / (c as f64 + 1.0)).ln();
    }
    let bp = if h.len() >= r.len() {
        1.0
    } else {
        (1.0 - r.len() as f64 / h.len() as f64).exp()
    };
    bp * (0.25 * log_sum).exp()
}

/// Corpus BLEU-4: clipped matches and candidate counts accumulate over all
/// pairs per order; any zero order precision zeroes the score. The brevity
/// penalty uses corpus token totals.
pub fn corpus_bleu(hyps: &[String], refs: &[String]) -> Result<f64, MetricsError> {
    if hyps.len() != refs.len() {
        return Err(MetricsError::LengthMismatch {
            hyps: hyps.len(),
            refs: refs.len(),
        });
    }
    let hyp_tokens: Vec<Vec<String>> = hyps.iter().map(|h| word_tokens(h)).collect();
    let ref_tokens: Vec<Vec<String>> = refs.iter().map(|r| word_tokens(r)).collect();
    let mut log_sum = 0.0f64;
    for n in 1..=MAX_N {
        let mut matches = 0usize;
        let mut total = 0usize;
        for (h, r) in hyp_tokens.iter().zip(&ref_tokens) {
            let hn = ngram_counts(h, n);
            let rn = ngram_counts(r, n);
            matches += clipped(&hn, &rn);
            total += hn.values().sum::<usize>();
        }
        if total == 0 || matches == 0 {
            return Ok(0.0);
        }
        log_sum += (matches as f64 / total as f64).ln();
    }
    let hyp_len: usize = hyp_tokens.iter().map(Vec::len).sum();
    let ref_len: usize = ref_tokens.iter().map(Vec::len).sum();
    if hyp_len == 0 {
        return Ok(0.0);
    }
    let bp = if hyp_len >= ref_len {
        1.0
    } else {
        (1.0 - ref_len as f64 / hyp_len as f64).exp()
    };
    Ok(bp * (0.25 * log_sum).exp())
}
