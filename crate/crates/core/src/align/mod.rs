//! Paragraph filtering, description/paragraph matching by figure number,
//! foreign-figure sentence stripping, paragraph/claim matching by averaged
//! cosine/BLEU similarity, and aligned-tuple construction.

mod components;
mod similarity;

pub use components::{extract_component_pairs, extract_component_pairs_with_warnings};
pub use similarity::text_cosine;

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::corpus::{
    ClaimFeature, FigureNumber, MatchScore, PatentDocument, SpecParagraph, Validate,
    ValidationError,
};
use crate::ingest::{extract_figure_refs, first_figure_ref};
use crate::metrics::sentence_bleu;

#[derive(Debug, Error, PartialEq)]
pub enum AlignError {
    #[error("paragraph {ordinal}: every sentence refers to another figure")]
    EmptyResult { ordinal: u32 },
    #[error("figure {primary} is not referenced by paragraph {ordinal}")]
    PrimaryMismatch { primary: String, ordinal: u32 },
}

/// One (claim feature, paragraph, drawing) alignment with its match score.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AlignedTuple {
    pub doc_id: String,
    pub claim_feature: ClaimFeature,
    pub paragraph_ordinal: u32,
    pub drawing_index: usize,
    pub score: MatchScore,
}

impl Validate for AlignedTuple {
    fn validate(&self) -> Result<(), ValidationError> {
        if self.doc_id.is_empty() {
            return Err(ValidationError::new("doc_id_nonempty", "empty doc_id"));
        }
        self.claim_feature.validate()?;
        self.score.validate()
    }
}

/// Keeps paragraphs that describe at least one figure: either they name a
/// figure outright, or they share a component pair with another kept
/// paragraph or a brief description. The component rule runs to a fixed
/// point; output preserves document order.
pub fn filter_figure_paragraphs(doc: &PatentDocument) -> Vec<SpecParagraph> {
    let n = doc.paragraphs.len();
    let mut kept: Vec<bool> = doc
        .paragraphs
        .iter()
        .map(|p| !p.figure_refs.is_empty())
        .collect();
    let brief_has_pair = |pair: &crate::corpus::ComponentPair| {
        doc.brief_descriptions
            .iter()
            .any(|b| crate::enrich::pair_occurs_in(&b.text, pair))
    };
    loop {
        let mut changed = false;
        for i in 0..n {
            if kept[i] || doc.paragraphs[i].component_pairs.is_empty() {
                continue;
            }
            let shares = doc.paragraphs[i].component_pairs.iter().any(|pair| {
                brief_has_pair(pair)
                    || (0..n).any(|j| {
                        j != i && kept[j] && doc.paragraphs[j].component_pairs.contains(pair)
                    })
            });
            if shares {
                kept[i] = true;
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
    doc.paragraphs
        .iter()
        .zip(&kept)
        .filter(|(_, k)| **k)
        .map(|(p, _)| p.clone())
        .collect()
}

/// Removes every sentence that refers to a figure other than `primary`; a
/// sentence survives only when its figure references are a subset of
/// {primary}. Errors when nothing survives.
pub fn strip_foreign_figure_sentences(
    paragraph: &SpecParagraph,
    primary: FigureNumber,
) -> Result<String, AlignError> {
    if !paragraph.figure_refs.is_empty() && !paragraph.figure_refs.contains(&primary) {
        return Err(AlignError::PrimaryMismatch {
            primary: primary.canonical(),
            ordinal: paragraph.ordinal,
        });
    }
    let kept: Vec<String> = crate::text::split_sentences(&paragraph.text)
        .into_iter()
        .filter(|s| {
            extract_figure_refs(s)
                .iter()
                .all(|f| *f == primary)
        })
        .collect();
    if kept.is_empty() {
        return Err(AlignError::EmptyResult {
            ordinal: paragraph.ordinal,
        });
    }
    Ok(kept.join(" "))
}

/// Assigns each kept paragraph to a drawing by its primary figure — the
/// first figure mentioned in its text. When several drawings share that
/// figure number the lowest drawing index wins; paragraphs whose primary
/// figure matches no brief description are omitted.
pub fn match_description_to_paragraph(doc: &PatentDocument) -> BTreeMap<u32, usize> {
    let mut map = BTreeMap::new();
    for para in filter_figure_paragraphs(doc) {
        let Some(primary) = first_figure_ref(&para.text) else {
            continue;
        };
        let assigned = doc
            .brief_descriptions
            .iter()
            .position(|b| b.figure_refs.contains(&primary));
        if let Some(idx) = assigned {
            map.insert(para.ordinal, idx);
        }
    }
    map
}

/// Scores `paragraph_text` against every feature as the exact mean of
/// cosine and sentence-BLEU (paragraph as hypothesis, feature as reference)
/// and returns the argmax; ties go to the lowest (claim_number, index).
/// None when `features` is empty.
pub fn match_paragraph_to_claim<'a>(
    paragraph_text: &str,
    features: &'a [ClaimFeature],
) -> Option<(&'a ClaimFeature, MatchScore)> {
    let mut best: Option<(&ClaimFeature, MatchScore)> = None;
    for feature in features {
        let cosine = text_cosine(paragraph_text, &feature.text);
        let bleu = sentence_bleu(paragraph_text, &feature.text);
        let score = MatchScore::new(cosine, bleu).expect("similarity scores in unit interval");
        let wins = match &best {
            None => true,
            Some((bf, bs)) => {
                score.combined > bs.combined
                    || (score.combined == bs.combined
                        && (feature.claim_number, feature.index) < (bf.claim_number, bf.index))
            }
        };
        if wins {
            best = Some((feature, score));
        }
    }
    best
}

/// Composes the full alignment for one document: filter, description
/// matching, foreign-sentence stripping, claim matching. One tuple per
/// surviving paragraph, ordered by paragraph ordinal; paragraphs whose
/// every sentence refers elsewhere are skipped.
pub fn build_aligned_tuples(doc: &PatentDocument) -> Vec<AlignedTuple> {
    let features: Vec<ClaimFeature> = doc
        .claims
        .iter()
        .flat_map(|c| c.features.iter().cloned())
        .collect();
    if features.is_empty() {
        return Vec::new();
    }
    let assignment = match_description_to_paragraph(doc);
    let mut tuples = Vec::new();
    for para in filter_figure_paragraphs(doc) {
        let Some(&drawing_index) = assignment.get(&para.ordinal) else {
            continue;
        };
        let primary = first_figure_ref(&para.text).expect("assigned paragraphs name a figure");
        let Ok(stripped) = strip_foreign_figure_sentences(&para, primary) else {
            continue;
        };
        let Some((feature, score)) = match_paragraph_to_claim(&stripped, &features) else {
            continue;
        };
        tuples.push(AlignedTuple {
            doc_id: doc.doc_id.clone(),
            claim_feature: feature.clone(),
            paragraph_ordinal: para.ordinal,
            drawing_index,
            score,
        });
    }
    tuples
}

#[cfg(test)]
mod tests;
