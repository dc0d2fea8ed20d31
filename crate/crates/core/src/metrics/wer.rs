//! Word-error rate: token-level Levenshtein distance divided by the
//! reference length. May exceed 1 for long hypotheses.

use super::MetricsError;
use crate::text::word_tokens;

/// WER over the shared tokenizer. Two empty texts score 0; an empty
/// reference against a non-empty hypothesis is an error.
pub fn wer(hyp: &str, reference: &str) -> Result<f64, MetricsError> {
    let h = word_tokens(hyp);
    let r = word_tokens(reference);
    if r.is_empty() {
        return if h.is_empty() {
            Ok(0.0)
        } else {
            Err(MetricsError::EmptyReference {
                sample_id: String::new(),
            })
        };
    }
    Ok(levenshtein(&r, &h) as f64 / r.len() as f64)
}

// two-row DP over the shorter dimension
fn levenshtein(a: &[String], b: &[String]) -> usize {
    if a.is_empty() {
        return b.len();
    }
    if b.is_empty() {
        return a.len();
    }
    let (short, long) = if a.len() <= b.len() { (a, b) } else { (b, a) };
    let mut prev: Vec<usize> = (0..=short.len()).collect();
    let mut cur = vec![0usize; short.len() + 1];
    for i in 1..=long.len() {
        cur[0] = i;
        for j in 1..=short.len() {
            let cost = usize::from(long[i - 1] != short[j - 1]);
            cur[j] = (prev[j] + 1).min(cur[j - 1] + 1).min(prev[j - 1] + cost);
        }
        std::mem::swap(&mut prev, &mut cur);
    }
    prev[short.len()]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_is_zero() {
        assert_eq!(wer("a b c", "a b c").unwrap(), 0.0);
    }

    #[test]
    fn substitution_plus_deletion() {
        // ref "a b c d", hyp "a x c": substitute b, delete d -> 2/4
        assert_eq!(wer("a x c", "a b c d").unwrap(), 0.5);
    }

    #[test]
    fn empty_reference_is_an_error() {
        assert!(wer("something", "").is_err());
        assert_eq!(wer("", "").unwrap(), 0.0);
    }

    #[test]
    fn can_exceed_one() {
        assert!(wer("a b c d e f", "x").unwrap() > 1.0);
    }

    #[test]
    fn agrees_with_dp_oracle() {
        for (h, r) in [
            ("the cat sat", "the cat sat on the mat"),
            ("fully different words here", "the cat"),
            ("a b a b", "b a b a"),
        ] {
            let ours = wer(h, r).unwrap();
            let oracle = patspec_testkit::wer_oracle(h, r).unwrap();
            assert!((ours - oracle).abs() < 1e-15);
        }
    }
}
