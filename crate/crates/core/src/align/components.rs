//! Component-pair extraction: finds ⟨name-phrase⟩⟨number⟩ patterns such as
//! "network interface card 112" in running text. This stands in for the
//! extraction of component labels from drawing sheets, which is simulated
//! from the specification text.

use std::collections::HashSet;
use std::sync::LazyLock;

use crate::corpus::ComponentPair;

/// Tokens that never belong to a component name phrase; hitting one ends
/// the backward scan.
static FUNCTION_WORDS: LazyLock<HashSet<&'static str>> = LazyLock::new(|| {
    [
        "of", "in", "on", "at", "to", "by", "as", "for", "with", "from",
        "and", "or", "but", "is", "are", "was", "were", "be", "been",
        "being", "has", "have", "had", "it", "its", "this", "that", "these",
        "those", "which", "wherein", "thereby", "therein", "thereof", "via",
        "per", "such", "may", "can", "shall", "will", "would", "into",
        "onto", "within", "between", "through", "inside", "outside", "upon",
        "near", "toward", "towards", "along", "across", "behind", "beneath",
        "around", "among", "includes", "include", "including", "comprises",
        "comprise", "comprising", "having", "using", "providing",
        "receiving", "transmitting", "extending", "engaging", "forming",
        "containing", "defining", "connecting", "coupling", "shown",
        "shows", "show", "see", "refer", "refers", "referring", "described",
        "describes", "illustrated", "illustrates", "depicts", "depicted",
        "also", "further", "than", "then", "where", "while", "during",
        "when", "each", "any", "some", "not", "no",
    ]
    .into_iter()
    .collect()
});

const ARTICLES: &[&str] = &["a", "an", "the", "said"];

struct Word<'a> {
    text: &'a str,
    start: usize,
}

fn words(text: &str) -> Vec<Word<'_>> {
    let mut out = Vec::new();
    let mut start: Option<usize> = None;
    for (i, ch) in text.char_indices() {
        let is_word = ch.is_alphanumeric() || ch == '-';
        match (is_word, start) {
            (true, None) => start = Some(i),
            (false, Some(s)) => {
                out.push(Word { text: &text[s..i], start: s });
                start = None;
            }
            _ => {}
        }
    }
    if let Some(s) = start {
        out.push(Word { text: &text[s..], start: s });
    }
    out
}

fn is_candidate_number(token: &str) -> Option<String> {
    let bytes = token.as_bytes();
    if bytes.is_empty() || !bytes[0].is_ascii_digit() {
        return None;
    }
    let digits = bytes.iter().take_while(|b| b.is_ascii_digit()).count();
    match bytes.len() - digits {
        0 => Some(token.to_string()),
        1 if bytes[digits].is_ascii_alphabetic() => Some(token.to_lowercase()),
        _ => None,
    }
}

fn is_name_token(token: &str) -> bool {
    !token.is_empty()
        && token
            .chars()
            .all(|c| c.is_ascii_lowercase() || c == '-')
        && !token.starts_with('-')
        && !token.ends_with('-')
        && !ARTICLES.contains(&token)
        && !FUNCTION_WORDS.contains(token)
}

fn is_year_like(number: &str) -> bool {
    number.len() == 4
        && number.chars().all(|c| c.is_ascii_digit())
        && (1900..=2099).contains(&number.parse::<u32>().unwrap_or(0))
}

/// Scans `text` for component pairs: each number token `[0-9]+[a-z]?` is
/// bound to the longest run of up to four preceding lower-case name tokens.
/// Articles (a/an/the/said) and function words terminate the scan, so
/// leading articles never reach the name. Duplicates collapse to first
/// appearance; a number rebound to a different name keeps its first binding
/// and yields a warning. Four-digit numbers in 1900-2099 only count when
/// the same number was already bound earlier in the text (year guard).
pub fn extract_component_pairs_with_warnings(text: &str) -> (Vec<ComponentPair>, Vec<String>) {
    let words = words(text);
    let mut pairs: Vec<ComponentPair> = Vec::new();
    let mut warnings = Vec::new();
    for (i, word) in words.iter().enumerate() {
        let Some(number) = is_candidate_number(word.text) else {
            continue;
        };
        if is_year_like(&number) && !pairs.iter().any(|p| p.number == number) {
            continue;
        }
        // collect up to 4 preceding name tokens, nearest first
        let mut run: Vec<&str> = Vec::new();
        for j in (0..i).rev().take(4) {
            // the run must be textually contiguous with the number: stop at
            // intervening punctuation other than spaces
            let gap = &text[words[j].start + words[j].text.len()..nearest_start(&words, j, word.start)];
            if gap.chars().any(|c| !c.is_whitespace()) {
                break;
            }
            if !is_name_token(words[j].text) {
                break;
            }
            run.push(words[j].text);
        }
        run.reverse();
        if run.is_empty() {
            continue;
        }
        let name = run.join(" ");
        let Ok(pair) = ComponentPair::new(&name, &number) else {
            continue;
        };
        if pairs.contains(&pair) {
            continue;
        }
        if let Some(existing) = pairs.iter().find(|p| p.number == pair.number) {
            warnings.push(format!(
                "number {} already bound to {:?}, ignoring rebinding to {:?}",
                pair.number, existing.name, pair.name
            ));
            continue;
        }
        pairs.push(pair);
    }
    (pairs, warnings)
}

fn nearest_start(words: &[Word<'_>], j: usize, number_start: usize) -> usize {
    words.get(j + 1).map(|w| w.start).unwrap_or(number_start)
}

/// [`extract_component_pairs_with_warnings`], logging the warnings.
pub fn extract_component_pairs(text: &str) -> Vec<ComponentPair> {
    let (pairs, warnings) = extract_component_pairs_with_warnings(text);
    for w in warnings {
        log::warn!("{w}");
    }
    pairs
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pairs(text: &str) -> Vec<(String, String)> {
        extract_component_pairs(text)
            .into_iter()
            .map(|p| (p.name, p.number))
            .collect()
    }

    #[test]
    fn multiword_name_with_article_trimmed() {
        assert_eq!(
            pairs("the network interface card 112 connects"),
            vec![("network interface card".into(), "112".into())]
        );
    }

    #[test]
    fn years_are_guarded() {
        assert_eq!(pairs("in 2023 the market grew"), vec![]);
        // a prior binding lifts the guard for the same number
        assert_eq!(
            pairs("a gear 1990 meshes; the gear 1990 turns"),
            Vec::<(String, String)>::new()
        );
    }

    #[test]
    fn empty_text_yields_nothing() {
        assert_eq!(pairs(""), vec![]);
    }

    #[test]
    fn duplicates_collapse() {
        assert_eq!(
            pairs("a processor 102 and the processor 102"),
            vec![("processor".into(), "102".into())]
        );
    }

    #[test]
    fn rebinding_keeps_first_and_warns() {
        let (pairs, warnings) =
            extract_component_pairs_with_warnings("a processor 102; a memory 102");
        assert_eq!(pairs.len(), 1);
        assert_eq!(pairs[0].name, "processor");
        assert_eq!(warnings.len(), 1);
    }

    #[test]
    fn suffixed_numbers_are_kept() {
        assert_eq!(
            pairs("a first valve 104a opens"),
            vec![("first valve".into(), "104a".into())]
        );
    }

    #[test]
    fn function_words_break_the_run() {
        // "in" cannot start a name, so the bare number is skipped
        assert_eq!(pairs("as shown in 102"), vec![]);
        // the run stops at "of": only "sensors" binds
        assert_eq!(
            pairs("one of the plurality of sensors 21"),
            vec![("sensors".into(), "21".into())]
        );
    }

    #[test]
    fn figure_labels_are_not_components() {
        assert_eq!(pairs("as depicted in FIG. 2A, flow continues"), vec![]);
    }

    #[test]
    fn punctuation_breaks_contiguity() {
        assert_eq!(pairs("processor, 102"), vec![]);
    }
}
