//! Term-frequency cosine similarity used for paragraph-claim matching.

use std::collections::BTreeMap;

use crate::text::content_tokens;

/// Cosine of term-frequency vectors over lower-cased alphanumeric word
/// tokens with English stopwords removed. Returns 0 when either vector is
/// empty. Symmetric in its arguments.
pub fn text_cosine(a: &str, b: &str) -> f64 {
    let ta = content_tokens(a);
    let tb = content_tokens(b);
    if ta.is_empty() || tb.is_empty() {
        return 0.0;
    }
    let mut counts: BTreeMap<String, (f64, f64)> = BTreeMap::new();
    for t in ta {
        counts.entry(t).or_default().0 += 1.0;
    }
    for t in tb {
        counts.entry(t).or_default().1 += 1.0;
    }
    let mut dot = 0.0f64;
    let mut norm_a = 0.0f64;
    let mut norm_b = 0.0f64;
    for (ca, cb) in counts.values() {
        dot += ca * cb;
        norm_a += ca * ca;
        norm_b += cb * cb;
    }
    // sqrt of the product is exact for identical integer-count vectors, so
    // identical texts score exactly 1.0; the cap guards rounding above 1
    (dot / (norm_a * norm_b).sqrt()).min(1.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identical_content_is_one() {
        assert_eq!(text_cosine("a processor drives the display", "a processor drives the display"), 1.0);
    }

    #[test]
    fn disjoint_vocabulary_is_zero() {
        assert_eq!(text_cosine("processor memory", "valve piston"), 0.0);
    }

    #[test]
    fn stopword_only_strings_are_zero() {
        assert_eq!(text_cosine("the the the", "the"), 0.0);
    }

    #[test]
    fn stopword_differences_do_not_matter() {
        // frozen from the brute-force TF-vector oracle: both sides reduce to
        // the same {processor, coupled, memory} bag, so the cosine is 1.0
        let v = text_cosine(
            "a processor coupled to memory",
            "the processor is coupled to the memory",
        );
        assert_eq!(v, 1.0);
    }
}
