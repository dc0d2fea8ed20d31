//! Figure-reference extraction: recognizes the tokens FIG., FIGS., Fig.,
//! Figs., Figure, and Figures followed by number lists such as "2", "2A",
//! "2 and 3", "1, 2 and 4", or ranges like "1-3" and "2A-2C".

use std::collections::BTreeSet;
use std::ops::Range;
use std::sync::LazyLock;

use regex::Regex;

use crate::corpus::FigureNumber;

/// One figure mention in running text: the byte span of the token plus its
/// number list, and the figures it names in order of appearance.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FigureMention {
    pub span: Range<usize>,
    pub refs: Vec<FigureNumber>,
}

static FIG_TOKEN_RE: LazyLock<Regex> =
    LazyLock::new(|| Regex::new(r"FIGS\.|FIG\.|Figs\.|Fig\.|Figures|Figure").unwrap());

/// All figure mentions in `text`, left to right, with unparsable tails
/// ignored. Mentions that name no figure are dropped.
pub fn figure_mentions(text: &str) -> Vec<FigureMention> {
    let mut mentions = Vec::new();
    let mut cursor = 0usize;
    while let Some(m) = FIG_TOKEN_RE.find_at(text, cursor) {
        cursor = m.end();
        let preceded_ok = text[..m.start()]
            .chars()
            .next_back()
            .is_none_or(|c| !c.is_alphanumeric());
        if !preceded_ok {
            continue;
        }
        let (refs, end) = parse_number_list(text, m.end());
        if !refs.is_empty() {
            mentions.push(FigureMention {
                span: m.start()..end,
                refs,
            });
            cursor = end;
        }
    }
    mentions
}

/// The canonical set of figures referenced anywhere in `text`.
pub fn extract_figure_refs(text: &str) -> BTreeSet<FigureNumber> {
    figure_mentions(text)
        .into_iter()
        .flat_map(|m| m.refs)
        .collect()
}

/// The first figure referenced in `text` by order of appearance, if any.
pub fn first_figure_ref(text: &str) -> Option<FigureNumber> {
    figure_mentions(text)
        .into_iter()
        .next()
        .and_then(|m| m.refs.into_iter().next())
}

/// Parses "2", "2A, 3 and 4B", "1-3", "2A-2C" starting at `from`, returning
/// the figures named and the byte offset just past the last number consumed.
fn parse_number_list(text: &str, from: usize) -> (Vec<FigureNumber>, usize) {
    let bytes = text.as_bytes();
    let mut refs: Vec<FigureNumber> = Vec::new();
    let mut pos = skip_ws(bytes, from);
    let mut end = from;
    while let Some((fig, after)) = parse_item(text, pos) {
        pos = skip_ws(bytes, after);
        end = after;
        // range: "1-3" or "2A-2C"
        if pos < bytes.len() && (bytes[pos] == b'-' || text[pos..].starts_with('\u{2013}')) {
            let dash_len = if bytes[pos] == b'-' { 1 } else { '\u{2013}'.len_utf8() };
            let after_dash = skip_ws(bytes, pos + dash_len);
            if let Some((hi, hi_end)) = parse_item(text, after_dash) {
                push_range(&mut refs, fig, hi);
                pos = skip_ws(bytes, hi_end);
                end = hi_end;
            } else {
                push_unique(&mut refs, fig);
            }
        } else {
            push_unique(&mut refs, fig);
        }
        // separator: "," / "and" / ", and" / "or"
        let mut next = pos;
        if next < bytes.len() && bytes[next] == b',' {
            next = skip_ws(bytes, next + 1);
        }
        for word in ["and", "or"] {
            if text[next..].starts_with(word) {
                let after_word = next + word.len();
                if bytes.get(after_word).is_some_and(|c| c.is_ascii_whitespace()) {
                    next = skip_ws(bytes, after_word);
                    break;
                }
            }
        }
        if next == pos && (pos >= bytes.len() || !bytes[pos].is_ascii_digit()) {
            break;
        }
        // only advance past the separator if a number actually follows
        if parse_item(text, next).is_some() {
            pos = next;
        } else {
            break;
        }
    }
    (refs, end)
}

fn skip_ws(bytes: &[u8], mut pos: usize) -> usize {
    while pos < bytes.len() && bytes[pos].is_ascii_whitespace() {
        pos += 1;
    }
    pos
}

/// A single figure item: digits plus an optional single letter suffix, with
/// a non-alphanumeric boundary after it.
fn parse_item(text: &str, pos: usize) -> Option<(FigureNumber, usize)> {
    let bytes = text.as_bytes();
    let mut end = pos;
    while end < bytes.len() && bytes[end].is_ascii_digit() {
        end += 1;
    }
    if end == pos {
        return None;
    }
    let major: u32 = text[pos..end].parse().ok()?;
    if major == 0 {
        return None;
    }
    let mut suffix = None;
    if end < bytes.len() && bytes[end].is_ascii_alphabetic() {
        let boundary_ok = end + 1 >= bytes.len() || !bytes[end + 1].is_ascii_alphanumeric();
        if boundary_ok {
            suffix = Some((bytes[end] as char).to_ascii_uppercase());
            end += 1;
        } else {
            return None;
        }
    } else if end < bytes.len() && bytes[end].is_ascii_alphanumeric() {
        return None;
    }
    Some((FigureNumber { major, suffix }, end))
}

fn push_unique(refs: &mut Vec<FigureNumber>, fig: FigureNumber) {
    if !refs.contains(&fig) {
        refs.push(fig);
    }
}

/// Expands "lo-hi". Plain-plain ranges expand numerically (endpoints
/// included); same-major suffixed ranges expand alphabetically; anything
/// else contributes its endpoints only. Oversized ranges fall back to
/// endpoints as well.
fn push_range(refs: &mut Vec<FigureNumber>, lo: FigureNumber, hi: FigureNumber) {
    match (lo.suffix, hi.suffix) {
        (None, None) if lo.major <= hi.major && hi.major - lo.major <= 100 => {
            for major in lo.major..=hi.major {
                push_unique(refs, FigureNumber::plain(major));
            }
        }
        (Some(a), Some(b)) if lo.major == hi.major && a <= b => {
            for s in a..=b {
                push_unique(
                    refs,
                    FigureNumber {
                        major: lo.major,
                        suffix: Some(s),
                    },
                );
            }
        }
        _ => {
            push_unique(refs, lo);
            push_unique(refs, hi);
        }
    }
}
