//! Candidate ranking: scores generated paragraphs by alignment with the
//! input claim feature, component names, component numbers, and the correct
//! figure number, then selects the top candidate.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::align::text_cosine;
use crate::corpus::TrainingSample;
use crate::enrich::strip_tags_lenient;
use crate::ingest::extract_figure_refs;
use crate::metrics::sentence_bleu;

#[derive(Debug, Error, PartialEq)]
pub enum RankError {
    #[error("no candidates to rank")]
    EmptyCandidates,
}

/// Weights for the four alignment signals; they default to 0.25 each and
/// the total stays in [0, 1] whenever they sum to 1.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RankWeights {
    pub claim: f64,
    pub names: f64,
    pub numbers: f64,
    pub figure: f64,
}

impl Default for RankWeights {
    fn default() -> Self {
        Self {
            claim: 0.25,
            names: 0.25,
            numbers: 0.25,
            figure: 0.25,
        }
    }
}

impl RankWeights {
    /// Parses "c,n,d,f" as used by the CLI `--weights` flag.
    pub fn parse(spec: &str) -> Result<Self, String> {
        let parts: Vec<f64> = spec
            .split(',')
            .map(|p| p.trim().parse::<f64>().map_err(|e| e.to_string()))
            .collect::<Result<_, _>>()?;
        if parts.len() != 4 {
            return Err(format!("expected 4 comma-separated weights, got {}", parts.len()));
        }
        if parts.iter().any(|w| *w < 0.0 || !w.is_finite()) {
            return Err("weights must be non-negative and finite".into());
        }
        Ok(Self {
            claim: parts[0],
            names: parts[1],
            numbers: parts[2],
            figure: parts[3],
        })
    }
}

/// The four signals plus their weighted total.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RankScore {
    pub claim_align: f64,
    pub name_cov: f64,
    pub num_cov: f64,
    pub fig_ok: f64,
    pub total: f64,
}

/// A candidate with its original position and score, after sorting.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RankedCandidate {
    pub index: usize,
    pub text: String,
    pub score: RankScore,
}

fn contains_word(haystack_lower: &str, needle_lower: &str) -> bool {
    let hay = haystack_lower.as_bytes();
    let mut from = 0usize;
    while let Some(pos) = haystack_lower[from..].find(needle_lower) {
        let start = from + pos;
        let end = start + needle_lower.len();
        let before_ok = start == 0 || !hay[start - 1].is_ascii_alphanumeric();
        let after_ok = end >= hay.len() || !hay[end].is_ascii_alphanumeric();
        if before_ok && after_ok {
            return true;
        }
        from = start + 1;
    }
    false
}

/// Scores candidates against their sample. Claim alignment is the averaged
/// cosine/BLEU match between the tag-stripped candidate and the claim
/// feature plus its (stripped) context; name/number coverage is the
/// fraction of the sample's component pairs found in the candidate
/// (vacuously 1 when the sample has none); the figure signal requires the
/// candidate to name the sample's figure and no other. Descending by total,
/// ties by input index.
pub fn rank_candidates(
    candidates: &[String],
    sample: &TrainingSample,
    weights: &RankWeights,
) -> Result<Vec<RankedCandidate>, RankError> {
    if candidates.is_empty() {
        return Err(RankError::EmptyCandidates);
    }
    let claim_text = format!(
        "{} {}",
        sample.claim_feature.text,
        strip_tags_lenient(&sample.claim_context)
    );
    let mut ranked: Vec<RankedCandidate> = candidates
        .iter()
        .enumerate()
        .map(|(index, candidate)| {
            let plain = strip_tags_lenient(candidate);
            let plain_lower = plain.to_lowercase();
            let claim_align =
                (text_cosine(&plain, &claim_text) + sentence_bleu(&plain, &claim_text)) / 2.0;
            let (name_cov, num_cov) = if sample.component_pairs.is_empty() {
                (1.0, 1.0)
            } else {
                let names = sample
                    .component_pairs
                    .iter()
                    .filter(|p| contains_word(&plain_lower, &p.name))
                    .count();
                let numbers = sample
                    .component_pairs
                    .iter()
                    .filter(|p| contains_word(&plain_lower, &p.number))
                    .count();
                let total = sample.component_pairs.len() as f64;
                (names as f64 / total, numbers as f64 / total)
            };
            let refs = extract_figure_refs(&plain);
            let fig_ok = if !refs.is_empty() && refs.iter().all(|f| *f == sample.figure_ref) {
                1.0
            } else {
                0.0
            };
            let total = weights.claim * claim_align
                + weights.names * name_cov
                + weights.numbers * num_cov
                + weights.figure * fig_ok;
            RankedCandidate {
                index,
                text: candidate.clone(),
                score: RankScore {
                    claim_align,
                    name_cov,
                    num_cov,
                    fig_ok,
                    total,
                },
            }
        })
        .collect();
    ranked.sort_by(|a, b| {
        b.score
            .total
            .partial_cmp(&a.score.total)
            .unwrap_or(std::cmp::Ordering::Equal)
            .then(a.index.cmp(&b.index))
    });
    Ok(ranked)
}

/// The top-ranked candidate text.
pub fn select_top(ranked: &[RankedCandidate]) -> Result<&str, RankError> {
    ranked
        .first()
        .map(|c| c.text.as_str())
        .ok_or(RankError::EmptyCandidates)
}

#[cfg(test)]
mod tests {
    use std::collections::BTreeSet;

    use super::*;
    use crate::corpus::{ClaimFeature, ComponentPair, FigureNumber};
    use crate::enrich::tag_text;

    fn sample() -> TrainingSample {
        let pairs = vec![
            ComponentPair::new("processor", "102").unwrap(),
            ComponentPair::new("memory", "104").unwrap(),
        ];
        let target = "FIG. 1 shows a processor 102 coupled to a memory 104.";
        let figs: BTreeSet<_> = [FigureNumber::plain(1)].into();
        let enriched = tag_text(target, &pairs, &figs);
        TrainingSample::new(
            "US1#3#1.1",
            ClaimFeature::new(1, 1, "a processor coupled to a memory").unwrap(),
            "<ctx>A system comprising:</ctx>",
            "FIG. 1 is a block diagram.",
            "",
            pairs,
            0,
            3,
            target,
            &enriched,
            FigureNumber::plain(1),
        )
        .unwrap()
    }

    #[test]
    fn target_outranks_single_defect_distractors() {
        let s = sample();
        let candidates = vec![
            // wrong figure
            "FIG. 2 shows a processor 102 coupled to a memory 104.".to_string(),
            // the true target
            s.target_text.clone(),
            // missing component names
            "FIG. 1 shows a unit 102 coupled to a block 104.".to_string(),
            // missing numbers
            "FIG. 1 shows a processor coupled to a memory.".to_string(),
            // unrelated claim text
            "FIG. 1 shows a turbine 102 spinning a flywheel 104.".to_string(),
        ];
        let ranked = rank_candidates(&candidates, &s, &RankWeights::default()).unwrap();
        assert_eq!(ranked[0].index, 1);
        assert_eq!(select_top(&ranked).unwrap(), s.target_text);
    }

    #[test]
    fn zero_signal_candidate_scores_only_claim_component() {
        let s = sample();
        let candidates = vec!["totally unrelated prose with no figure".to_string()];
        let ranked = rank_candidates(&candidates, &s, &RankWeights::default()).unwrap();
        let score = ranked[0].score;
        assert_eq!(score.name_cov, 0.0);
        assert_eq!(score.num_cov, 0.0);
        assert_eq!(score.fig_ok, 0.0);
        assert!(score.total <= 0.25);
    }

    #[test]
    fn identical_candidates_tie_break_by_index() {
        let s = sample();
        let text = s.target_text.clone();
        let ranked =
            rank_candidates(&[text.clone(), text], &s, &RankWeights::default()).unwrap();
        assert_eq!(ranked[0].index, 0);
        assert_eq!(ranked[1].index, 1);
    }

    #[test]
    fn totals_stay_in_unit_interval() {
        let s = sample();
        let candidates: Vec<String> = vec![
            s.target_text.clone(),
            "FIG. 1".into(),
            "processor 102 memory 104".into(),
            "nothing".into(),
        ];
        for c in rank_candidates(&candidates, &s, &RankWeights::default()).unwrap() {
            assert!((0.0..=1.0).contains(&c.score.total), "{:?}", c.score);
        }
    }

    #[test]
    fn adding_missing_name_never_decreases_name_cov() {
        let s = sample();
        let base = "FIG. 1 shows a unit 102.".to_string();
        let better = "FIG. 1 shows a unit 102 near the memory.".to_string();
        let ranked = rank_candidates(&[base, better], &s, &RankWeights::default()).unwrap();
        let by_index: Vec<&RankedCandidate> = {
            let mut v: Vec<&RankedCandidate> = ranked.iter().collect();
            v.sort_by_key(|c| c.index);
            v
        };
        assert!(by_index[1].score.name_cov >= by_index[0].score.name_cov);
    }

    #[test]
    fn empty_candidate_list_is_an_error() {
        let s = sample();
        assert_eq!(
            rank_candidates(&[], &s, &RankWeights::default()).unwrap_err(),
            RankError::EmptyCandidates
        );
        assert_eq!(select_top(&[]).unwrap_err(), RankError::EmptyCandidates);
    }

    #[test]
    fn tagged_candidates_are_stripped_before_scoring() {
        let s = sample();
        let ranked = rank_candidates(
            std::slice::from_ref(&s.target_enriched),
            &s,
            &RankWeights::default(),
        )
        .unwrap();
        assert_eq!(ranked[0].score.fig_ok, 1.0);
        assert_eq!(ranked[0].score.name_cov, 1.0);
        assert_eq!(ranked[0].score.num_cov, 1.0);
    }

    #[test]
    fn weights_parse_and_reject_bad_input() {
        let w = RankWeights::parse("0.4, 0.3, 0.2, 0.1").unwrap();
        assert_eq!(w.claim, 0.4);
        assert!(RankWeights::parse("1,2,3").is_err());
        assert!(RankWeights::parse("a,b,c,d").is_err());
        assert!(RankWeights::parse("-1,0,0,0").is_err());
    }
}
