//! ROUGE-N (clipped n-gram overlap), ROUGE-L (sequence LCS), and
//! ROUGE-Lsum (sentence-split union LCS with hypothesis-count clipping).

use std::collections::HashMap;

use crate::text::{split_sentences, word_tokens};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RougeScore {
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
}

impl RougeScore {
    fn from_counts(hits: f64, hyp_total: f64, ref_total: f64) -> Self {
        if hyp_total == 0.0 || ref_total == 0.0 {
            return Self { precision: 0.0, recall: 0.0, f1: 0.0 };
        }
        let precision = hits / hyp_total;
        let recall = hits / ref_total;
        let f1 = if precision + recall == 0.0 {
            0.0
        } else {
            2.0 * precision * recall / (precision + recall)
        };
        Self { precision, recall, f1 }
    }
}

/// ROUGE-N via clipped n-gram overlap.
pub fn rouge_n(hyp: &str, reference: &str, n: usize) -> RougeScore {
    let h = word_tokens(hyp);
    let r = word_tokens(reference);
    if h.len() < n || r.len() < n || n == 0 {
        return RougeScore::from_counts(0.0, 0.0, 0.0);
    }
    let mut ref_counts: HashMap<&[String], usize> = HashMap::new();
    for w in r.windows(n) {
        *ref_counts.entry(w).or_insert(0) += 1;
    }
    let mut hyp_counts: HashMap<&[String], usize> = HashMap::new();
    for w in h.windows(n) {
        *hyp_counts.entry(w).or_insert(0) += 1;
    }
    let hits: usize = hyp_counts
        .iter()
        .map(|(gram, c)| (*c).min(ref_counts.get(gram).copied().unwrap_or(0)))
        .sum();
    RougeScore::from_counts(
        hits as f64,
        (h.len() - n + 1) as f64,
        (r.len() - n + 1) as f64,
    )
}

fn lcs_table(a: &[String], b: &[String]) -> Vec<Vec<usize>> {
    let mut dp = vec![vec![0usize; b.len() + 1]; a.len() + 1];
    for i in 1..=a.len() {
        for j in 1..=b.len() {
            dp[i][j] = if a[i - 1] == b[j - 1] {
                dp[i - 1][j - 1] + 1
            } else {
                dp[i - 1][j].max(dp[i][j - 1])
            };
        }
    }
    dp
}

/// ROUGE-L: LCS over the whole token sequences.
pub fn rouge_l(hyp: &str, reference: &str) -> RougeScore {
    let h = word_tokens(hyp);
    let r = word_tokens(reference);
    if h.is_empty() || r.is_empty() {
        return RougeScore::from_counts(0.0, 0.0, 0.0);
    }
    let lcs = lcs_table(&r, &h)[r.len()][h.len()];
    RougeScore::from_counts(lcs as f64, h.len() as f64, r.len() as f64)
}

/// Matched reference positions, backtracking from the end; ties drop the
/// reference token.
fn lcs_ref_positions(reference: &[String], hyp: &[String]) -> Vec<usize> {
    let dp = lcs_table(reference, hyp);
    let mut positions = Vec::new();
    let (mut i, mut j) = (reference.len(), hyp.len());
    while i > 0 && j > 0 {
        if reference[i - 1] == hyp[j - 1] {
            positions.push(i - 1);
            i -= 1;
            j -= 1;
        } else if dp[i][j - 1] > dp[i - 1][j] {
            j -= 1;
        } else {
            i -= 1;
        }
    }
    positions.reverse();
    positions
}

/// ROUGE-Lsum: both sides split into sentences; each reference sentence
/// takes the union of its LCS matches against every hypothesis sentence,
/// and the matched token counts are clipped against the hypothesis token
/// multiset before computing precision and recall.
pub fn rouge_lsum(hyp: &str, reference: &str) -> RougeScore {
    let h_tokens = word_tokens(hyp);
    let r_tokens = word_tokens(reference);
    if h_tokens.is_empty() || r_tokens.is_empty() {
        return RougeScore::from_counts(0.0, 0.0, 0.0);
    }
    let h_sents: Vec<Vec<String>> = split_sentences(hyp)
        .iter()
        .map(|s| word_tokens(s))
        .collect();
    let mut matched: HashMap<&String, usize> = HashMap::new();
    let r_sents: Vec<Vec<String>> = split_sentences(reference)
        .iter()
        .map(|s| word_tokens(s))
        .collect();
    for r_sent in &r_sents {
        let mut union = vec![false; r_sent.len()];
        for h_sent in &h_sents {
            for pos in lcs_ref_positions(r_sent, h_sent) {
                union[pos] = true;
            }
        }
        for (pos, hit) in union.iter().enumerate() {
            if *hit {
                *matched.entry(&r_sent[pos]).or_insert(0) += 1;
            }
        }
    }
    let mut hyp_counts: HashMap<&String, usize> = HashMap::new();
    for t in &h_tokens {
        *hyp_counts.entry(t).or_insert(0) += 1;
    }
    let hits: usize = matched
        .iter()
        .map(|(surface, m)| (*m).min(hyp_counts.get(*surface).copied().unwrap_or(0)))
        .sum();
    RougeScore::from_counts(hits as f64, h_tokens.len() as f64, r_tokens.len() as f64)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hand_counted_unigram_example() {
        // hyp "the cat", ref "the cat sat": P = 1, R = 2/3, F1 = 0.8
        let s = rouge_n("the cat", "the cat sat", 1);
        assert_eq!(s.precision, 1.0);
        assert!((s.recall - 2.0 / 3.0).abs() < 1e-15);
        assert!((s.f1 - 0.8).abs() < 1e-15);
    }

    #[test]
    fn identity_scores_one_everywhere() {
        let text = "the quick brown fox jumps over the lazy dog.";
        assert_eq!(rouge_n(text, text, 1).f1, 1.0);
        assert_eq!(rouge_n(text, text, 2).f1, 1.0);
        assert_eq!(rouge_l(text, text).f1, 1.0);
        assert_eq!(rouge_lsum(text, text).f1, 1.0);
    }

    #[test]
    fn disjoint_texts_score_zero() {
        assert_eq!(rouge_n("alpha beta", "gamma delta", 1).f1, 0.0);
        assert_eq!(rouge_l("alpha beta", "gamma delta").f1, 0.0);
        assert_eq!(rouge_lsum("alpha beta", "gamma delta").f1, 0.0);
    }

    #[test]
    fn lsum_clips_against_hypothesis_counts() {
        // a single hypothesis "a" cannot be credited for both ref sentences
        let s = rouge_lsum("a", "a. a.");
        assert!(s.precision <= 1.0);
        let (p, r, f) = (s.precision, s.recall, s.f1);
        let (op, or, of) = patspec_testkit::rouge_lsum_oracle("a", "a. a.");
        assert!((p - op).abs() < 1e-12 && (r - or).abs() < 1e-12 && (f - of).abs() < 1e-12);
    }

    #[test]
    fn lsum_agrees_with_oracle_on_multisentence_pairs() {
        let hyp = "FIG. 1 shows a pump. The pump drives a gear.";
        let reference = "FIG. 1 shows a pump 10. A gear meshes. The pump spins.";
        let s = rouge_lsum(hyp, reference);
        let (op, or, of) = patspec_testkit::rouge_lsum_oracle(hyp, reference);
        assert!((s.precision - op).abs() < 1e-12);
        assert!((s.recall - or).abs() < 1e-12);
        assert!((s.f1 - of).abs() < 1e-12);
    }
}
