//! Shared tokenization and sentence-splitting helpers.
//!
//! All word-level metrics use [`word_tokens`] so cross-metric comparisons
//! share one vocabulary; the alignment cosine uses [`content_tokens`]
//! (alphanumeric only, stopwords removed) per its own contract.

use std::collections::HashSet;
use std::sync::LazyLock;

/// Lower-cases and splits into tokens: alphanumeric runs become tokens and
/// every other non-whitespace character becomes a single-character token.
pub fn word_tokens(text: &str) -> Vec<String> {
    let mut out = Vec::new();
    let mut cur = String::new();
    for ch in text.chars() {
        if ch.is_alphanumeric() {
            cur.extend(ch.to_lowercase());
        } else {
            if !cur.is_empty() {
                out.push(std::mem::take(&mut cur));
            }
            if !ch.is_whitespace() {
                out.push(ch.to_string());
            }
        }
    }
    if !cur.is_empty() {
        out.push(cur);
    }
    out
}

/// Lower-cased alphanumeric runs only; punctuation is dropped entirely.
pub fn alnum_tokens(text: &str) -> Vec<String> {
    let mut out = Vec::new();
    let mut cur = String::new();
    for ch in text.chars() {
        if ch.is_alphanumeric() {
            cur.extend(ch.to_lowercase());
        } else if !cur.is_empty() {
            out.push(std::mem::take(&mut cur));
        }
    }
    if !cur.is_empty() {
        out.push(cur);
    }
    out
}

/// English stopwords removed before building term-frequency vectors.
pub const STOPWORDS: &[&str] = &[
    "a", "an", "the", "and", "or", "but", "if", "then", "else", "when",
    "while", "of", "at", "by", "for", "with", "about", "between", "into",
    "through", "during", "before", "after", "above", "below", "to", "from",
    "up", "down", "in", "out", "on", "off", "over", "under", "again", "once",
    "here", "there", "all", "any", "both", "each", "few", "more", "most",
    "other", "some", "such", "no", "nor", "not", "only", "own", "same", "so",
    "than", "too", "very", "can", "will", "just", "is", "are", "was", "were",
    "be", "been", "being", "have", "has", "had", "having", "do", "does",
    "did", "doing", "it", "its", "this", "that", "these", "those", "as",
];

static STOPWORD_SET: LazyLock<HashSet<&'static str>> =
    LazyLock::new(|| STOPWORDS.iter().copied().collect());

/// [`alnum_tokens`] with stopwords removed.
pub fn content_tokens(text: &str) -> Vec<String> {
    let mut tokens = alnum_tokens(text);
    tokens.retain(|t| !STOPWORD_SET.contains(t.as_str()));
    tokens
}

/// Splits text into sentences at '.', '!' or '?' followed by whitespace or
/// end of input. The figure tokens FIG./FIGS./Fig./Figs. are protected so
/// their trailing period never ends a sentence. Each returned sentence is
/// trimmed and keeps its terminator.
pub fn split_sentences(text: &str) -> Vec<String> {
    let chars: Vec<char> = text.chars().collect();
    let mut sentences = Vec::new();
    let mut start = 0usize;
    for i in 0..chars.len() {
        let c = chars[i];
        if c != '.' && c != '!' && c != '?' {
            continue;
        }
        let at_boundary = i + 1 >= chars.len() || chars[i + 1].is_whitespace();
        if !at_boundary || (c == '.' && is_figure_abbreviation(&chars, i)) {
            continue;
        }
        let sentence: String = chars[start..=i].iter().collect();
        let sentence = sentence.trim();
        if !sentence.is_empty() {
            sentences.push(sentence.to_string());
        }
        start = i + 1;
    }
    if start < chars.len() {
        let tail: String = chars[start..].iter().collect();
        let tail = tail.trim();
        if !tail.is_empty() {
            sentences.push(tail.to_string());
        }
    }
    sentences
}

fn is_figure_abbreviation(chars: &[char], dot: usize) -> bool {
    for token in ["FIGS", "FIG", "Figs", "Fig"] {
        let len = token.len();
        if dot < len {
            continue;
        }
        let candidate: String = chars[dot - len..dot].iter().collect();
        if candidate != token {
            continue;
        }
        if dot == len || !chars[dot - len - 1].is_alphanumeric() {
            return true;
        }
    }
    false
}

/// Collapses every whitespace run to a single space and trims the ends.
/// Texts are compared "up to whitespace normalization" through this.
pub fn normalize_ws(text: &str) -> String {
    text.split_whitespace().collect::<Vec<_>>().join(" ")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn word_tokens_separate_punctuation() {
        assert_eq!(
            word_tokens("The cat, sat."),
            vec!["the", "cat", ",", "sat", "."]
        );
    }

    #[test]
    fn content_tokens_drop_stopwords() {
        assert_eq!(
            content_tokens("the processor is coupled to the memory"),
            vec!["processor", "coupled", "memory"]
        );
    }

    #[test]
    fn sentences_protect_fig_tokens() {
        let s = split_sentences("FIG. 1 shows X. FIG. 2 shows Y.");
        assert_eq!(s, vec!["FIG. 1 shows X.", "FIG. 2 shows Y."]);
    }

    #[test]
    fn sentences_split_on_question_marks() {
        let s = split_sentences("Is it on? It is.");
        assert_eq!(s, vec!["Is it on?", "It is."]);
    }

    #[test]
    fn normalize_collapses_runs() {
        assert_eq!(normalize_ws("  a \t b\n c  "), "a b c");
    }
}
