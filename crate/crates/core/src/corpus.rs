//! Domain vocabulary shared by all pipeline stages: patent documents,
//! claims and their features, specification paragraphs, drawings, component
//! pairs, training samples, and match scores. Constructors validate every
//! invariant and reject violations with an error naming the invariant; all
//! types are immutable after construction and safe to share across workers.
//!
//! The canonical on-disk record form for every type is one JSON object per
//! line (JSONL) with snake_case field names.

use std::collections::BTreeSet;
use std::fmt;
use std::sync::LazyLock;

use regex::Regex;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// A failed constructor precondition. `invariant` names the violated rule.
#[derive(Debug, Clone, Error, PartialEq, Eq)]
#[error("invariant `{invariant}` violated: {detail}")]
pub struct ValidationError {
    pub invariant: &'static str,
    pub detail: String,
}

impl ValidationError {
    pub fn new(invariant: &'static str, detail: impl Into<String>) -> Self {
        Self {
            invariant,
            detail: detail.into(),
        }
    }
}

/// Re-checks constructor invariants on values that bypassed construction,
/// e.g. after JSONL deserialization.
pub trait Validate {
    fn validate(&self) -> Result<(), ValidationError>;
}

fn ensure(cond: bool, invariant: &'static str, detail: impl Into<String>) -> Result<(), ValidationError> {
    if cond {
        Ok(())
    } else {
        Err(ValidationError::new(invariant, detail))
    }
}

// ---------------------------------------------------------------------------
// FigureNumber
// ---------------------------------------------------------------------------

/// A drawing figure number such as `3` or `2A`: a positive major number and
/// an optional single-letter suffix, canonically upper-cased.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct FigureNumber {
    pub major: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub suffix: Option<char>,
}

impl FigureNumber {
    pub fn new(major: u32, suffix: Option<char>) -> Result<Self, ValidationError> {
        let fig = Self {
            major,
            suffix: suffix.map(|c| c.to_ascii_uppercase()),
        };
        fig.validate()?;
        Ok(fig)
    }

    pub fn plain(major: u32) -> Self {
        Self { major, suffix: None }
    }

    /// Canonical string form: the major number followed by the upper-cased
    /// suffix, e.g. "2A".
    pub fn canonical(&self) -> String {
        match self.suffix {
            Some(s) => format!("{}{}", self.major, s),
            None => self.major.to_string(),
        }
    }

    /// True when this figure is named in `text`, either verbatim (suffix
    /// case-insensitive) or as a member of a numeric or suffixed range such
    /// as "1-3" or "2A-2C".
    pub fn appears_in(&self, text: &str) -> bool {
        static TOKEN_RE: LazyLock<Regex> = LazyLock::new(|| {
            Regex::new(r"(\d+)([A-Za-z])?(?:\s*[-\u{2013}]\s*(\d+)([A-Za-z])?)?").unwrap()
        });
        for cap in TOKEN_RE.captures_iter(text) {
            let whole = cap.get(0).unwrap();
            // reject tokens embedded in a longer alphanumeric run
            let before_ok = text[..whole.start()]
                .chars()
                .next_back()
                .is_none_or(|c| !c.is_alphanumeric());
            let after_ok = text[whole.end()..]
                .chars()
                .next()
                .is_none_or(|c| !c.is_alphanumeric());
            if !before_ok || !after_ok {
                continue;
            }
            let major_a: u32 = match cap[1].parse() {
                Ok(v) => v,
                Err(_) => continue,
            };
            let suffix_a = cap.get(2).map(|m| m.as_str().chars().next().unwrap().to_ascii_uppercase());
            match (cap.get(3), cap.get(4)) {
                (None, _) if major_a == self.major && suffix_a == self.suffix => {
                    return true;
                }
                (None, _) => {}
                (Some(m2), suf2) => {
                    let major_b: u32 = match m2.as_str().parse() {
                        Ok(v) => v,
                        Err(_) => continue,
                    };
                    let suffix_b =
                        suf2.map(|m| m.as_str().chars().next().unwrap().to_ascii_uppercase());
                    // endpoints always count
                    if (major_a == self.major && suffix_a == self.suffix)
                        || (major_b == self.major && suffix_b == self.suffix)
                    {
                        return true;
                    }
                    match (suffix_a, suffix_b) {
                        (None, None) => {
                            if self.suffix.is_none()
                                && major_a <= self.major
                                && self.major <= major_b
                            {
                                return true;
                            }
                        }
                        (Some(sa), Some(sb))
                            if major_a == major_b && self.major == major_a =>
                        {
                            if let Some(s) = self.suffix {
                                if sa <= s && s <= sb {
                                    return true;
                                }
                            }
                        }
                        _ => {}
                    }
                }
            }
        }
        false
    }
}

impl fmt::Display for FigureNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.canonical())
    }
}

impl Validate for FigureNumber {
    fn validate(&self) -> Result<(), ValidationError> {
        ensure(self.major >= 1, "figure_major_positive", format!("major {}", self.major))?;
        if let Some(s) = self.suffix {
            ensure(
                s.is_ascii_uppercase(),
                "figure_suffix_upper_letter",
                format!("suffix {s:?}"),
            )?;
        }
        Ok(())
    }
}

// ---------------------------------------------------------------------------
// ComponentPair
// ---------------------------------------------------------------------------

static COMPONENT_NUMBER_RE: LazyLock<Regex> =
    LazyLock::new(|| Regex::new(r"^[0-9]+[a-z]?$").unwrap());

/// A (component name, component number) pair appearing in a drawing or
/// paragraph, e.g. ("network interface card", "112") or ("valve", "104a").
/// Numbers stay strings to preserve suffixed labels.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct ComponentPair {
    pub name: String,
    pub number: String,
}

impl ComponentPair {
    /// Builds a pair, lower-casing and space-normalizing the name and
    /// lower-casing any letter suffix on the number.
    pub fn new(name: &str, number: &str) -> Result<Self, ValidationError> {
        let pair = Self {
            name: crate::text::normalize_ws(&name.to_lowercase()),
            number: number.to_lowercase(),
        };
        pair.validate()?;
        Ok(pair)
    }
}

impl Validate for ComponentPair {
    fn validate(&self) -> Result<(), ValidationError> {
        ensure(
            COMPONENT_NUMBER_RE.is_match(&self.number),
            "component_number_pattern",
            format!("number {:?} does not match [0-9]+[a-z]?", self.number),
        )?;
        ensure(
            !self.name.is_empty(),
            "component_name_nonempty",
            "empty component name",
        )?;
        ensure(
            !self.name.chars().any(|c| c.is_ascii_digit()),
            "component_name_no_digits",
            format!("name {:?} contains digits", self.name),
        )?;
        Ok(())
    }
}

// ---------------------------------------------------------------------------
// Claims
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ClaimKind {
    Independent,
    Dependent,
}

/// One clause/limitation of a claim, identified by its claim number and
/// 0-based position within the claim.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClaimFeature {
    pub claim_number: u32,
    pub index: u32,
    pub text: String,
}

impl ClaimFeature {
    pub fn new(claim_number: u32, index: u32, text: &str) -> Result<Self, ValidationError> {
        let feature = Self {
            claim_number,
            index,
            text: text.to_string(),
        };
        feature.validate()?;
        Ok(feature)
    }
}

impl Validate for ClaimFeature {
    fn validate(&self) -> Result<(), ValidationError> {
        ensure(
            !self.text.trim().is_empty(),
            "feature_text_nonempty",
            format!("claim {} feature {}", self.claim_number, self.index),
        )
    }
}

/// A numbered claim with its segmented features. Features must reconstruct
/// the claim text exactly: walked in order, they partition the text with
/// nothing but delimiter characters (no alphanumerics) in the gaps.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Claim {
    pub number: u32,
    pub kind: ClaimKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub parent_number: Option<u32>,
    pub text: String,
    pub features: Vec<ClaimFeature>,
}

impl Claim {
    pub fn new(
        number: u32,
        kind: ClaimKind,
        parent_number: Option<u32>,
        text: &str,
        features: Vec<ClaimFeature>,
    ) -> Result<Self, ValidationError> {
        let claim = Self {
            number,
            kind,
            parent_number,
            text: text.to_string(),
            features,
        };
        claim.validate()?;
        Ok(claim)
    }
}

fn features_cover_text(text: &str, features: &[ClaimFeature]) -> bool {
    let mut pos = 0usize;
    for f in features {
        match text[pos..].find(&f.text) {
            Some(offset) => {
                if text[pos..pos + offset].chars().any(|c| c.is_alphanumeric()) {
                    return false;
                }
                pos += offset + f.text.len();
            }
            None => return false,
        }
    }
    text[pos..].chars().all(|c| !c.is_alphanumeric())
}

impl Validate for Claim {
    fn validate(&self) -> Result<(), ValidationError> {
        ensure(self.number >= 1, "claim_number_positive", format!("claim {}", self.number))?;
        match (self.kind, self.parent_number) {
            (ClaimKind::Dependent, Some(parent)) => ensure(
                parent < self.number,
                "dependent_parent_precedes",
                format!("claim {} depends on claim {}", self.number, parent),
            )?,
            (ClaimKind::Dependent, None) => {
                return Err(ValidationError::new(
                    "dependent_parent_present",
                    format!("dependent claim {} has no parent", self.number),
                ))
            }
            (ClaimKind::Independent, Some(parent)) => {
                return Err(ValidationError::new(
                    "independent_no_parent",
                    format!("independent claim {} names parent {}", self.number, parent),
                ))
            }
            (ClaimKind::Independent, None) => {}
        }
        ensure(
            !self.features.is_empty(),
            "claim_has_features",
            format!("claim {} has no features", self.number),
        )?;
        for (i, f) in self.features.iter().enumerate() {
            f.validate()?;
            ensure(
                f.claim_number == self.number,
                "feature_claim_number_matches",
                format!("feature {} carries claim number {}", i, f.claim_number),
            )?;
            ensure(
                f.index == i as u32,
                "feature_indices_contiguous",
                format!("feature at position {} has index {}", i, f.index),
            )?;
        }
        ensure(
            features_cover_text(&self.text, &self.features),
            "features_reconstruct_text",
            format!("claim {} features do not reconstruct its text", self.number),
        )?;
        Ok(())
    }
}

// ---------------------------------------------------------------------------
// Paragraphs, descriptions, drawings
// ---------------------------------------------------------------------------

/// A numbered specification paragraph together with the figure references
/// and component pairs extracted from its text.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpecParagraph {
    pub ordinal: u32,
    pub text: String,
    pub figure_refs: BTreeSet<FigureNumber>,
    pub component_pairs: Vec<ComponentPair>,
}

impl SpecParagraph {
    pub fn new(
        ordinal: u32,
        text: &str,
        figure_refs: BTreeSet<FigureNumber>,
        component_pairs: Vec<ComponentPair>,
    ) -> Result<Self, ValidationError> {
        let para = Self {
            ordinal,
            text: text.to_string(),
            figure_refs,
            component_pairs,
        };
        para.validate()?;
        Ok(para)
    }
}

impl Validate for SpecParagraph {
    fn validate(&self) -> Result<(), ValidationError> {
        ensure(
            self.ordinal >= 1,
            "paragraph_ordinal_positive",
            format!("ordinal {}", self.ordinal),
        )?;
        for fig in &self.figure_refs {
            fig.validate()?;
            ensure(
                fig.appears_in(&self.text),
                "figure_ref_in_text",
                format!("figure {} not named in paragraph {}", fig, self.ordinal),
            )?;
        }
        for pair in &self.component_pairs {
            pair.validate()?;
        }
        Ok(())
    }
}

/// One entry of the brief-description-of-the-drawings section; names at
/// least one figure.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BriefDescription {
    pub drawing_index: usize,
    pub text: String,
    pub figure_refs: BTreeSet<FigureNumber>,
}

impl BriefDescription {
    pub fn new(
        drawing_index: usize,
        text: &str,
        figure_refs: BTreeSet<FigureNumber>,
    ) -> Result<Self, ValidationError> {
        let desc = Self {
            drawing_index,
            text: text.to_string(),
            figure_refs,
        };
        desc.validate()?;
        Ok(desc)
    }
}

impl Validate for BriefDescription {
    fn validate(&self) -> Result<(), ValidationError> {
        ensure(
            !self.figure_refs.is_empty(),
            "brief_description_names_figure",
            format!("description for drawing {} names no figure", self.drawing_index),
        )?;
        for fig in &self.figure_refs {
            fig.validate()?;
        }
        Ok(())
    }
}

/// A drawing sheet: the figure numbers it depicts, the path of its raster
/// image (possibly empty when the file is missing and the ingest config
/// downgrades that to a warning), and the component pairs attributed to it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DrawingRef {
    pub drawing_index: usize,
    pub image_path: String,
    pub figure_refs: BTreeSet<FigureNumber>,
    pub component_pairs: Vec<ComponentPair>,
}

impl Validate for DrawingRef {
    fn validate(&self) -> Result<(), ValidationError> {
        for fig in &self.figure_refs {
            fig.validate()?;
        }
        for pair in &self.component_pairs {
            pair.validate()?;
        }
        Ok(())
    }
}

// ---------------------------------------------------------------------------
// PatentDocument
// ---------------------------------------------------------------------------

/// One patent: claims, specification paragraphs, drawings and their brief
/// descriptions (always paired 1:1), plus classification codes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PatentDocument {
    pub doc_id: String,
    pub claims: Vec<Claim>,
    pub paragraphs: Vec<SpecParagraph>,
    pub drawings: Vec<DrawingRef>,
    pub brief_descriptions: Vec<BriefDescription>,
    pub cpc_codes: Vec<String>,
}

impl PatentDocument {
    pub fn new(
        doc_id: &str,
        claims: Vec<Claim>,
        paragraphs: Vec<SpecParagraph>,
        drawings: Vec<DrawingRef>,
        brief_descriptions: Vec<BriefDescription>,
        cpc_codes: Vec<String>,
    ) -> Result<Self, ValidationError> {
        let doc = Self {
            doc_id: doc_id.to_string(),
            claims,
            paragraphs,
            drawings,
            brief_descriptions,
            cpc_codes,
        };
        doc.validate()?;
        Ok(doc)
    }

    pub fn claim(&self, number: u32) -> Option<&Claim> {
        self.claims.iter().find(|c| c.number == number)
    }

    pub fn paragraph(&self, ordinal: u32) -> Option<&SpecParagraph> {
        self.paragraphs.iter().find(|p| p.ordinal == ordinal)
    }

    /// All claim features of the document, claims in order.
    pub fn all_features(&self) -> Vec<&ClaimFeature> {
        self.claims.iter().flat_map(|c| c.features.iter()).collect()
    }
}

impl Validate for PatentDocument {
    fn validate(&self) -> Result<(), ValidationError> {
        ensure(!self.doc_id.is_empty(), "doc_id_nonempty", "empty doc_id")?;
        ensure(
            self.drawings.len() == self.brief_descriptions.len(),
            "drawings_descriptions_paired",
            format!(
                "{} drawings vs {} brief descriptions",
                self.drawings.len(),
                self.brief_descriptions.len()
            ),
        )?;
        for (i, claim) in self.claims.iter().enumerate() {
            claim.validate()?;
            ensure(
                claim.number == (i + 1) as u32,
                "claims_contiguous_from_one",
                format!("claim at position {} is numbered {}", i, claim.number),
            )?;
            if let Some(parent) = claim.parent_number {
                ensure(
                    self.claim(parent).is_some(),
                    "dependent_parent_exists",
                    format!("claim {} depends on missing claim {}", claim.number, parent),
                )?;
            }
        }
        let mut last_ordinal = 0u32;
        for para in &self.paragraphs {
            para.validate()?;
            ensure(
                para.ordinal > last_ordinal,
                "paragraph_ordinals_increasing",
                format!("ordinal {} follows {}", para.ordinal, last_ordinal),
            )?;
            last_ordinal = para.ordinal;
        }
        for (i, desc) in self.brief_descriptions.iter().enumerate() {
            desc.validate()?;
            ensure(
                desc.drawing_index == i,
                "brief_description_index_consistent",
                format!("description at position {} points at drawing {}", i, desc.drawing_index),
            )?;
        }
        for (i, drawing) in self.drawings.iter().enumerate() {
            drawing.validate()?;
            ensure(
                drawing.drawing_index == i,
                "drawing_index_consistent",
                format!("drawing at position {} carries index {}", i, drawing.drawing_index),
            )?;
        }
        Ok(())
    }
}

// ---------------------------------------------------------------------------
// MatchScore
// ---------------------------------------------------------------------------

/// The averaged cosine/BLEU similarity used for paragraph-claim assignment.
/// `combined` is always exactly (cosine + bleu) / 2.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MatchScore {
    pub cosine: f64,
    pub bleu: f64,
    pub combined: f64,
}

impl MatchScore {
    pub fn new(cosine: f64, bleu: f64) -> Result<Self, ValidationError> {
        let score = Self {
            cosine,
            bleu,
            combined: (cosine + bleu) / 2.0,
        };
        score.validate()?;
        Ok(score)
    }
}

impl Validate for MatchScore {
    fn validate(&self) -> Result<(), ValidationError> {
        for (label, v) in [("cosine", self.cosine), ("bleu", self.bleu), ("combined", self.combined)] {
            ensure(
                (0.0..=1.0).contains(&v) && v.is_finite(),
                "score_in_unit_interval",
                format!("{label} = {v}"),
            )?;
        }
        ensure(
            self.combined == (self.cosine + self.bleu) / 2.0,
            "combined_is_mean",
            format!(
                "combined {} != ({} + {}) / 2",
                self.combined, self.cosine, self.bleu
            ),
        )?;
        Ok(())
    }
}

// ---------------------------------------------------------------------------
// TrainingSample
// ---------------------------------------------------------------------------

/// The quadruplet-plus-target sample: claim feature with enriched context,
/// brief description, drawing image, component pairs, paragraph-number
/// context, and the target paragraph in raw and tagged form.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrainingSample {
    pub sample_id: String,
    pub claim_feature: ClaimFeature,
    pub claim_context: String,
    pub brief_description: String,
    pub image_path: String,
    pub component_pairs: Vec<ComponentPair>,
    pub prev_paragraph_ordinal: u32,
    pub cur_paragraph_ordinal: u32,
    pub target_text: String,
    pub target_enriched: String,
    pub figure_ref: FigureNumber,
}

impl TrainingSample {
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        sample_id: &str,
        claim_feature: ClaimFeature,
        claim_context: &str,
        brief_description: &str,
        image_path: &str,
        component_pairs: Vec<ComponentPair>,
        prev_paragraph_ordinal: u32,
        cur_paragraph_ordinal: u32,
        target_text: &str,
        target_enriched: &str,
        figure_ref: FigureNumber,
    ) -> Result<Self, ValidationError> {
        let sample = Self {
            sample_id: sample_id.to_string(),
            claim_feature,
            claim_context: claim_context.to_string(),
            brief_description: brief_description.to_string(),
            image_path: image_path.to_string(),
            component_pairs,
            prev_paragraph_ordinal,
            cur_paragraph_ordinal,
            target_text: target_text.to_string(),
            target_enriched: target_enriched.to_string(),
            figure_ref,
        };
        sample.validate()?;
        Ok(sample)
    }
}

impl Validate for TrainingSample {
    fn validate(&self) -> Result<(), ValidationError> {
        ensure(!self.sample_id.is_empty(), "sample_id_nonempty", "empty sample_id")?;
        self.claim_feature.validate()?;
        self.figure_ref.validate()?;
        for pair in &self.component_pairs {
            pair.validate()?;
        }
        ensure(
            self.prev_paragraph_ordinal < self.cur_paragraph_ordinal,
            "paragraph_context_ordered",
            format!(
                "prev {} not before cur {}",
                self.prev_paragraph_ordinal, self.cur_paragraph_ordinal
            ),
        )?;
        let stripped = crate::enrich::strip_tags(&self.target_enriched).map_err(|e| {
            ValidationError::new("target_enriched_strippable", e.to_string())
        })?;
        ensure(
            crate::text::normalize_ws(&stripped) == crate::text::normalize_ws(&self.target_text),
            "enriched_strips_to_target",
            format!("sample {}", self.sample_id),
        )?;
        for pair in &self.component_pairs {
            if crate::enrich::pair_occurs_in(&self.target_text, pair) {
                ensure(
                    crate::enrich::pair_is_tagged_in(&self.target_enriched, pair),
                    "present_pairs_tagged",
                    format!(
                        "pair ({}, {}) untagged in sample {}",
                        pair.name, pair.number, self.sample_id
                    ),
                )?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn feature(claim: u32, index: u32, text: &str) -> ClaimFeature {
        ClaimFeature::new(claim, index, text).unwrap()
    }

    #[test]
    fn figure_number_canonical_upper_cases_suffix() {
        let fig = FigureNumber::new(2, Some('a')).unwrap();
        assert_eq!(fig.canonical(), "2A");
        assert!(FigureNumber::new(0, None).is_err());
    }

    #[test]
    fn figure_appears_in_ranges() {
        let two = FigureNumber::plain(2);
        assert!(two.appears_in("as shown in FIGS. 1-3"));
        assert!(!two.appears_in("as shown in FIG. 4"));
        let two_b = FigureNumber::new(2, Some('B')).unwrap();
        assert!(two_b.appears_in("FIGS. 2A-2C illustrate"));
        assert!(!two_b.appears_in("FIGS. 3A-3C illustrate"));
        // token embedded in a longer number does not count
        assert!(!two.appears_in("item 12 rotates"));
    }

    #[test]
    fn component_pair_rules() {
        let pair = ComponentPair::new("Network  Interface Card", "112").unwrap();
        assert_eq!(pair.name, "network interface card");
        assert!(ComponentPair::new("processor", "12x3").is_err());
        assert!(ComponentPair::new("processor2", "12").is_err());
        let suffixed = ComponentPair::new("valve", "104A").unwrap();
        assert_eq!(suffixed.number, "104a");
    }

    #[test]
    fn claim_reconstruction_accepts_true_segmentation() {
        let text = "A system comprising: a processor; and a memory.";
        let claim = Claim::new(
            1,
            ClaimKind::Independent,
            None,
            text,
            vec![
                feature(1, 0, "A system comprising:"),
                feature(1, 1, "a processor"),
                feature(1, 2, "and a memory."),
            ],
        );
        assert!(claim.is_ok());
    }

    #[test]
    fn claim_reconstruction_rejects_bad_features() {
        let text = "A system comprising: a processor; and a memory.";
        // wrong order
        let claim = Claim::new(
            1,
            ClaimKind::Independent,
            None,
            text,
            vec![
                feature(1, 0, "a processor"),
                feature(1, 1, "A system comprising:"),
                feature(1, 2, "and a memory."),
            ],
        );
        assert_eq!(claim.unwrap_err().invariant, "features_reconstruct_text");
        // dropped words leave an alphanumeric gap
        let claim = Claim::new(
            1,
            ClaimKind::Independent,
            None,
            text,
            vec![feature(1, 0, "A system comprising:"), feature(1, 1, "and a memory.")],
        );
        assert_eq!(claim.unwrap_err().invariant, "features_reconstruct_text");
    }

    #[test]
    fn dependent_claims_need_earlier_parents() {
        let err = Claim::new(
            2,
            ClaimKind::Dependent,
            Some(5),
            "The system of claim 5.",
            vec![feature(2, 0, "The system of claim 5.")],
        )
        .unwrap_err();
        assert_eq!(err.invariant, "dependent_parent_precedes");
        let err = Claim::new(
            2,
            ClaimKind::Dependent,
            None,
            "The system of claim 1.",
            vec![feature(2, 0, "The system of claim 1.")],
        )
        .unwrap_err();
        assert_eq!(err.invariant, "dependent_parent_present");
    }

    #[test]
    fn match_score_combined_is_exact_mean() {
        let s = MatchScore::new(0.3, 0.7).unwrap();
        assert_eq!(s.combined, 0.5);
        assert!(MatchScore::new(1.2, 0.0).is_err());
    }

    #[test]
    fn document_pairing_invariant() {
        let err = PatentDocument::new(
            "US1",
            vec![],
            vec![],
            vec![DrawingRef {
                drawing_index: 0,
                image_path: String::new(),
                figure_refs: BTreeSet::new(),
                component_pairs: vec![],
            }],
            vec![],
            vec![],
        )
        .unwrap_err();
        assert_eq!(err.invariant, "drawings_descriptions_paired");
    }

    #[test]
    fn document_claim_numbering_must_be_contiguous() {
        let claim = Claim::new(
            2,
            ClaimKind::Independent,
            None,
            "A widget.",
            vec![feature(2, 0, "A widget.")],
        )
        .unwrap();
        let err =
            PatentDocument::new("US1", vec![claim], vec![], vec![], vec![], vec![]).unwrap_err();
        assert_eq!(err.invariant, "claims_contiguous_from_one");
    }

    #[test]
    fn paragraph_ordinals_must_increase() {
        let p1 = SpecParagraph::new(3, "text one", BTreeSet::new(), vec![]).unwrap();
        let p2 = SpecParagraph::new(3, "text two", BTreeSet::new(), vec![]).unwrap();
        let err = PatentDocument::new("US1", vec![], vec![p1, p2], vec![], vec![], vec![])
            .unwrap_err();
        assert_eq!(err.invariant, "paragraph_ordinals_increasing");
    }

    #[test]
    fn paragraph_figure_refs_must_be_named() {
        let mut refs = BTreeSet::new();
        refs.insert(FigureNumber::plain(7));
        let err = SpecParagraph::new(1, "no figure here", refs, vec![]).unwrap_err();
        assert_eq!(err.invariant, "figure_ref_in_text");
    }

    #[test]
    fn serde_round_trip_preserves_documents() {
        let text = "A system comprising: a processor; and a memory.";
        let claim = Claim::new(
            1,
            ClaimKind::Independent,
            None,
            text,
            vec![
                feature(1, 0, "A system comprising:"),
                feature(1, 1, "a processor"),
                feature(1, 2, "and a memory."),
            ],
        )
        .unwrap();
        let mut refs = BTreeSet::new();
        refs.insert(FigureNumber::plain(1));
        let para = SpecParagraph::new(
            1,
            "FIG. 1 shows a processor 102.",
            refs.clone(),
            vec![ComponentPair::new("processor", "102").unwrap()],
        )
        .unwrap();
        let doc = PatentDocument::new(
            "US1",
            vec![claim],
            vec![para],
            vec![DrawingRef {
                drawing_index: 0,
                image_path: "US1-fig1.png".into(),
                figure_refs: refs.clone(),
                component_pairs: vec![],
            }],
            vec![BriefDescription::new(0, "FIG. 1 is a diagram.", refs).unwrap()],
            vec!["G06F 3/00".into()],
        )
        .unwrap();
        let json = serde_json::to_string(&doc).unwrap();
        let back: PatentDocument = serde_json::from_str(&json).unwrap();
        assert_eq!(doc, back);
        back.validate().unwrap();
    }
}
