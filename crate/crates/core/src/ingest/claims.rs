//! Claim-feature segmentation. Feature 0 is the preamble (text up to and
//! including the first "comprising:"/"including:"/"consisting of:" marker
//! when present); the remainder splits on top-level semicolons, with "and"
//! staying attached to the following feature. Segmentation is lossless: the
//! features joined with their recorded gaps reproduce the claim text
//! byte-for-byte.

use std::sync::LazyLock;

use regex::Regex;

use crate::corpus::{ClaimFeature, ClaimKind};

/// A lossless segmentation: `gaps.len() == features.len() + 1` and
/// `gaps[0] + features[0] + gaps[1] + ... + gaps[n]` equals the input.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SegmentedClaim {
    pub features: Vec<String>,
    pub gaps: Vec<String>,
}

impl SegmentedClaim {
    pub fn reassemble(&self) -> String {
        let mut out = String::new();
        for (i, gap) in self.gaps.iter().enumerate() {
            out.push_str(gap);
            if let Some(f) = self.features.get(i) {
                out.push_str(f);
            }
        }
        out
    }
}

static PREAMBLE_RE: LazyLock<Regex> =
    LazyLock::new(|| Regex::new(r"(?i)(comprising:|including:|consisting of:)").unwrap());

/// Segments a claim into feature strings plus the delimiter gaps between
/// them. A claim with no delimiters yields one feature.
pub fn segment_claim(text: &str) -> SegmentedClaim {
    // raw spans: (start, end) of each candidate segment before trimming
    let mut raw: Vec<(usize, usize)> = Vec::new();
    let body_start = match PREAMBLE_RE.find(text) {
        Some(m) => {
            raw.push((0, m.end()));
            m.end()
        }
        None => 0,
    };
    let mut seg_start = body_start;
    for (i, b) in text.bytes().enumerate().skip(body_start) {
        if b == b';' {
            raw.push((seg_start, i));
            seg_start = i + 1;
        }
    }
    raw.push((seg_start, text.len()));

    let mut features = Vec::new();
    let mut gaps = Vec::new();
    let mut cursor = 0usize;
    for (start, end) in raw {
        let segment = &text[start..end];
        let trimmed = segment.trim();
        if trimmed.is_empty() {
            continue;
        }
        let lead = segment.len() - segment.trim_start().len();
        let feat_start = start + lead;
        gaps.push(text[cursor..feat_start].to_string());
        features.push(trimmed.to_string());
        cursor = feat_start + trimmed.len();
    }
    gaps.push(text[cursor..].to_string());
    if features.is_empty() {
        // whitespace-only claim text: fall back to a single verbatim feature
        features.push(text.to_string());
        gaps = vec![String::new(), String::new()];
    }
    SegmentedClaim { features, gaps }
}

/// Segments `text` and wraps the pieces as [`ClaimFeature`]s of `claim_number`.
pub fn segment_claim_features(claim_number: u32, text: &str) -> Vec<ClaimFeature> {
    segment_claim(text)
        .features
        .into_iter()
        .enumerate()
        .map(|(i, t)| ClaimFeature {
            claim_number,
            index: i as u32,
            text: t,
        })
        .collect()
}

static DEPENDENT_RE: LazyLock<Regex> =
    LazyLock::new(|| Regex::new(r"\b[Cc]laim\s+(\d+)").unwrap());

/// A claim is dependent iff its first sentence references "claim <k>";
/// returns the kind and the parent number when dependent.
pub fn detect_kind(text: &str) -> (ClaimKind, Option<u32>) {
    let sentences = crate::text::split_sentences(text);
    let first = sentences.first().map(String::as_str).unwrap_or(text);
    match DEPENDENT_RE
        .captures(first)
        .and_then(|c| c[1].parse::<u32>().ok())
    {
        Some(parent) => (ClaimKind::Dependent, Some(parent)),
        None => (ClaimKind::Independent, None),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn comprising_claim_yields_preamble_and_clauses() {
        let feats = segment_claim_features(1, "A system comprising: a processor; and a memory.");
        let texts: Vec<&str> = feats.iter().map(|f| f.text.as_str()).collect();
        assert_eq!(texts, vec!["A system comprising:", "a processor", "and a memory."]);
    }

    #[test]
    fn undelimited_claim_is_one_feature() {
        let feats = segment_claim_features(1, "A widget.");
        assert_eq!(feats.len(), 1);
        assert_eq!(feats[0].text, "A widget.");
    }

    #[test]
    fn dependent_wherein_claim_is_one_feature() {
        let text = "The system of claim 1, wherein the processor is multicore.";
        let feats = segment_claim_features(2, text);
        assert_eq!(feats.len(), 1);
        assert_eq!(feats[0].text, text);
    }

    #[test]
    fn segmentation_is_lossless() {
        for text in [
            "A system comprising: a processor; and a memory.",
            "A widget.",
            "  leading space; two ;  and three.",
            "A method including: step one;; step two.",
        ] {
            let seg = segment_claim(text);
            assert_eq!(seg.reassemble(), text, "lossless join failed for {text:?}");
            assert_eq!(seg.gaps.len(), seg.features.len() + 1);
        }
    }

    #[test]
    fn kind_detection_uses_first_sentence() {
        assert_eq!(
            detect_kind("The system of claim 3, wherein it spins."),
            (ClaimKind::Dependent, Some(3))
        );
        assert_eq!(detect_kind("A system comprising: a gear."), (ClaimKind::Independent, None));
        // a later sentence referencing a claim does not make it dependent
        assert_eq!(
            detect_kind("A base. It relates to claim 1."),
            (ClaimKind::Independent, None)
        );
    }
}
