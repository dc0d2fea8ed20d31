//! Enriched representations: claim-feature context blocks, special tags
//! around figure numbers and component names/numbers, and paragraph-number
//! context. Tags are short atomic strings (`<cn>`, `<cd>`, `<fig>`, ...)
//! registered downstream via the token manifest; stripping all tags always
//! recovers the untagged text up to whitespace normalization.

use std::ops::Range;
use std::sync::LazyLock;

use regex::Regex;
use thiserror::Error;

use crate::corpus::{ClaimFeature, ClaimKind, ComponentPair, FigureNumber, PatentDocument, TrainingSample};
use crate::ingest::figure_mentions;

#[derive(Debug, Error, PartialEq)]
pub enum EnrichError {
    #[error("claim {claim} not present in document {doc_id}")]
    UnknownClaim { doc_id: String, claim: u32 },
    #[error("dependent claim {claim} has no parent claim {parent} in document {doc_id}")]
    MissingParent { doc_id: String, claim: u32, parent: u32 },
    #[error("unbalanced tag {tag} at byte {position}")]
    UnbalancedTags { tag: String, position: usize },
}

/// Tag kinds in manifest order: claim feature, context, parent claim,
/// figure number, component name, component number, previous/current
/// paragraph number, description block, component list.
pub const TAG_KINDS: &[&str] = &[
    "cf", "ctx", "parent", "fig", "cn", "cd", "prev_p", "cur_p", "desc", "comps",
];

pub fn open_tag(kind: &str) -> String {
    format!("<{kind}>")
}

pub fn close_tag(kind: &str) -> String {
    format!("</{kind}>")
}

/// The exact, duplicate-free list of special tag strings in fixed order,
/// for registration as atomic tokens by a downstream fine-tuning stack.
pub fn special_token_inventory() -> Vec<String> {
    TAG_KINDS
        .iter()
        .flat_map(|k| [open_tag(k), close_tag(k)])
        .collect()
}

/// Writes the token inventory, one token per line.
pub fn write_tokens_manifest(path: &std::path::Path) -> std::io::Result<()> {
    let mut body = special_token_inventory().join("\n");
    body.push('\n');
    std::fs::write(path, body)
}

pub fn read_tokens_manifest(path: &std::path::Path) -> std::io::Result<Vec<String>> {
    Ok(std::fs::read_to_string(path)?
        .lines()
        .filter(|l| !l.is_empty())
        .map(|l| l.to_string())
        .collect())
}

static TAG_RE: LazyLock<Regex> = LazyLock::new(|| {
    Regex::new(r"</?(cf|ctx|parent|fig|cn|cd|prev_p|cur_p|desc|comps)>").unwrap()
});

/// Removes all grammar tags, collapsing doubled spaces left behind.
/// Requires balanced, properly nested tags.
pub fn strip_tags(text: &str) -> Result<String, EnrichError> {
    let mut stack: Vec<(&str, usize)> = Vec::new();
    for m in TAG_RE.find_iter(text) {
        let tag = m.as_str();
        if let Some(kind) = tag.strip_prefix("</") {
            let kind = &kind[..kind.len() - 1];
            match stack.pop() {
                Some((open_kind, _)) if open_kind == kind => {}
                _ => {
                    return Err(EnrichError::UnbalancedTags {
                        tag: tag.to_string(),
                        position: m.start(),
                    })
                }
            }
        } else {
            let kind = &tag[1..tag.len() - 1];
            if stack.iter().any(|(k, _)| *k == kind) {
                return Err(EnrichError::UnbalancedTags {
                    tag: tag.to_string(),
                    position: m.start(),
                });
            }
            stack.push((match_kind(kind), m.start()));
        }
    }
    if let Some((kind, position)) = stack.pop() {
        return Err(EnrichError::UnbalancedTags {
            tag: open_tag(kind),
            position,
        });
    }
    Ok(collapse_spaces(&TAG_RE.replace_all(text, "")))
}

/// Tag removal as a total function: no balance requirement. Used where
/// model output cannot be trusted to be well-formed.
pub fn strip_tags_lenient(text: &str) -> String {
    collapse_spaces(&TAG_RE.replace_all(text, ""))
}

fn match_kind(kind: &str) -> &'static str {
    TAG_KINDS
        .iter()
        .find(|k| **k == kind)
        .expect("kind comes from the tag regex")
}

fn collapse_spaces(text: &str) -> String {
    static DOUBLE_SPACE: LazyLock<Regex> = LazyLock::new(|| Regex::new(r"  +").unwrap());
    DOUBLE_SPACE.replace_all(text, " ").into_owned()
}

/// A component-pair occurrence: the byte spans of the name and the number.
struct PairSpan {
    name: Range<usize>,
    number: Range<usize>,
}

/// Finds occurrences of `name <ws> number` (ASCII case-insensitive, word
/// bounded, single spaces between name words) left to right.
fn find_pair_spans(text: &str, pair: &ComponentPair) -> Vec<PairSpan> {
    let mut spans = Vec::new();
    let bytes = text.as_bytes();
    let name = pair.name.as_bytes();
    if name.is_empty() {
        return spans;
    }
    let mut i = 0usize;
    while i + name.len() <= bytes.len() {
        if !window_matches(&bytes[i..i + name.len()], name) {
            i += 1;
            continue;
        }
        let start_ok = i == 0 || !is_word_byte(bytes[i - 1]);
        let name_end = i + name.len();
        let end_ok = name_end >= bytes.len() || !is_word_byte(bytes[name_end]);
        if !(start_ok && end_ok) {
            i += 1;
            continue;
        }
        // require whitespace then the number token
        let mut j = name_end;
        while j < bytes.len() && bytes[j].is_ascii_whitespace() {
            j += 1;
        }
        let number = pair.number.as_bytes();
        if j > name_end
            && j + number.len() <= bytes.len()
            && window_matches(&bytes[j..j + number.len()], number)
        {
            let num_end = j + number.len();
            let num_ok = num_end >= bytes.len() || !is_word_byte(bytes[num_end]);
            if num_ok {
                spans.push(PairSpan {
                    name: i..name_end,
                    number: j..num_end,
                });
                i = num_end;
                continue;
            }
        }
        i += 1;
    }
    spans
}

fn window_matches(window: &[u8], needle: &[u8]) -> bool {
    window.len() == needle.len()
        && window
            .iter()
            .zip(needle)
            .all(|(a, b)| a.eq_ignore_ascii_case(b))
}

fn is_word_byte(b: u8) -> bool {
    b.is_ascii_alphanumeric()
}

/// True when the pair occurs (name immediately followed by its number) in
/// `text`.
pub fn pair_occurs_in(text: &str, pair: &ComponentPair) -> bool {
    !find_pair_spans(text, pair).is_empty()
}

/// True when the pair appears in tagged form in enriched text.
pub fn pair_is_tagged_in(enriched: &str, pair: &ComponentPair) -> bool {
    let hay = enriched.to_ascii_lowercase();
    hay.contains(&format!("<cn>{}</cn>", pair.name))
        && hay.contains(&format!("<cd>{}</cd>", pair.number))
}

enum TagOp {
    Figure(Range<usize>),
    Pair(PairSpan),
}

impl TagOp {
    fn start(&self) -> usize {
        match self {
            TagOp::Figure(r) => r.start,
            TagOp::Pair(p) => p.name.start,
        }
    }
    fn end(&self) -> usize {
        match self {
            TagOp::Figure(r) => r.end,
            TagOp::Pair(p) => p.number.end,
        }
    }
}

/// Wraps figure mentions in `<fig>` and known component name/number
/// occurrences in `<cn>`/`<cd>`. Longest names match first so overlapping
/// pairs resolve to the longer name; spans are applied left to right and
/// never overlap. No character outside the inserted tags is altered.
pub fn tag_text(
    text: &str,
    pairs: &[ComponentPair],
    figures: &std::collections::BTreeSet<FigureNumber>,
) -> String {
    let mut ops: Vec<TagOp> = Vec::new();
    for mention in figure_mentions(text) {
        if mention.refs.iter().any(|f| figures.contains(f)) {
            ops.push(TagOp::Figure(mention.span));
        }
    }
    let mut sorted_pairs: Vec<&ComponentPair> = pairs.iter().collect();
    sorted_pairs.sort_by(|a, b| b.name.len().cmp(&a.name.len()).then(a.name.cmp(&b.name)));
    for pair in sorted_pairs {
        for span in find_pair_spans(text, pair) {
            let overlaps = ops
                .iter()
                .any(|op| span.name.start < op.end() && op.start() < span.number.end);
            if !overlaps {
                ops.push(TagOp::Pair(span));
            }
        }
    }
    ops.sort_by_key(|op| op.start());

    let mut out = String::with_capacity(text.len() + ops.len() * 12);
    let mut cursor = 0usize;
    for op in ops {
        out.push_str(&text[cursor..op.start()]);
        match &op {
            TagOp::Figure(r) => {
                out.push_str("<fig>");
                out.push_str(&text[r.clone()]);
                out.push_str("</fig>");
            }
            TagOp::Pair(p) => {
                out.push_str("<cn>");
                out.push_str(&text[p.name.clone()]);
                out.push_str("</cn>");
                out.push_str(&text[p.name.end..p.number.start]);
                out.push_str("<cd>");
                out.push_str(&text[p.number.clone()]);
                out.push_str("</cd>");
            }
        }
        cursor = op.end();
    }
    out.push_str(&text[cursor..]);
    out
}

/// Builds the `<ctx>` block for a claim feature: all sibling features in
/// order excluding the target, plus a `<parent>` block with the full parent
/// claim text when the feature comes from a dependent claim.
pub fn build_claim_context(
    feature: &ClaimFeature,
    doc: &PatentDocument,
) -> Result<String, EnrichError> {
    let claim = doc
        .claim(feature.claim_number)
        .ok_or_else(|| EnrichError::UnknownClaim {
            doc_id: doc.doc_id.clone(),
            claim: feature.claim_number,
        })?;
    let siblings: Vec<&str> = claim
        .features
        .iter()
        .filter(|f| f.index != feature.index)
        .map(|f| f.text.as_str())
        .collect();
    let mut out = format!("<ctx>{}</ctx>", siblings.join(" "));
    if claim.kind == ClaimKind::Dependent {
        let parent_number = claim.parent_number.expect("dependent claims carry a parent");
        let parent = doc.claim(parent_number).ok_or(EnrichError::MissingParent {
            doc_id: doc.doc_id.clone(),
            claim: claim.number,
            parent: parent_number,
        })?;
        out.push_str("<parent>");
        out.push_str(&parent.text);
        out.push_str("</parent>");
    }
    Ok(out)
}

/// Assembles the model input for a sample, in fixed order: instruction
/// line, paragraph-number block, target claim feature, context, brief
/// description, tagged component list. Byte-identical for identical inputs.
pub fn assemble_input(sample: &TrainingSample, instruction: &str) -> String {
    let comps = sample
        .component_pairs
        .iter()
        .map(|p| format!("<cn>{}</cn> <cd>{}</cd>", p.name, p.number))
        .collect::<Vec<_>>()
        .join(", ");
    format!(
        "{instruction}\n<prev_p>{}</prev_p><cur_p>{}</cur_p>\n<cf>{}</cf>\n{}\n<desc>{}</desc>\n<comps>{}</comps>",
        sample.prev_paragraph_ordinal,
        sample.cur_paragraph_ordinal,
        sample.claim_feature.text,
        sample.claim_context,
        sample.brief_description,
        comps,
    )
}
