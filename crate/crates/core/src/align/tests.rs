use std::collections::BTreeSet;

use super::*;
use crate::corpus::{BriefDescription, Claim, ClaimKind, ComponentPair, DrawingRef};
use crate::ingest::segment_claim_features;

fn para(ordinal: u32, text: &str) -> SpecParagraph {
    SpecParagraph::new(
        ordinal,
        text,
        extract_figure_refs(text),
        extract_component_pairs(text),
    )
    .unwrap()
}

fn fixture_doc() -> PatentDocument {
    let claim_text = "A system comprising: a processor configured to execute instructions; and a memory coupled to the processor.";
    let claim = Claim::new(
        1,
        ClaimKind::Independent,
        None,
        claim_text,
        segment_claim_features(1, claim_text),
    )
    .unwrap();
    let paragraphs = vec![
        para(1, "FIG. 1 shows a network 100 connecting a processor 102."),
        para(2, "FIG. 2 shows a memory 104 coupled to the processor 102."),
        para(3, "This invention relates generally to databases."),
        para(4, "The processor 102 executes stored instructions rapidly."),
    ];
    let fig1: BTreeSet<_> = [FigureNumber::plain(1)].into();
    let fig2: BTreeSet<_> = [FigureNumber::plain(2)].into();
    PatentDocument::new(
        "US1",
        vec![claim],
        paragraphs,
        vec![
            DrawingRef {
                drawing_index: 0,
                image_path: "US1-fig1.png".into(),
                figure_refs: fig1.clone(),
                component_pairs: vec![],
            },
            DrawingRef {
                drawing_index: 1,
                image_path: "US1-fig2.png".into(),
                figure_refs: fig2.clone(),
                component_pairs: vec![],
            },
        ],
        vec![
            BriefDescription::new(0, "FIG. 1 is a block diagram of a network.", fig1).unwrap(),
            BriefDescription::new(1, "FIG. 2 is a block diagram of a memory.", fig2).unwrap(),
        ],
        vec![],
    )
    .unwrap()
}

#[test]
fn filter_keeps_figure_paragraphs_and_drops_preamble() {
    let doc = fixture_doc();
    let kept = filter_figure_paragraphs(&doc);
    let ordinals: Vec<u32> = kept.iter().map(|p| p.ordinal).collect();
    // paragraph 3 has no figure and no shared component; paragraph 4 shares
    // (processor, 102) with kept paragraph 1
    assert_eq!(ordinals, vec![1, 2, 4]);
}

#[test]
fn filter_component_rule_reaches_fixed_point() {
    // p2 shares with p3, p3 shares with p1 (kept): both join transitively
    let paragraphs = vec![
        para(1, "FIG. 1 shows a pump 10."),
        para(2, "The impeller 12 spins inside the housing 14."),
        para(3, "A housing 14 protects the pump 10."),
    ];
    let fig1: BTreeSet<_> = [FigureNumber::plain(1)].into();
    let doc = PatentDocument::new(
        "US2",
        vec![],
        paragraphs,
        vec![DrawingRef {
            drawing_index: 0,
            image_path: String::new(),
            figure_refs: fig1.clone(),
            component_pairs: vec![],
        }],
        vec![BriefDescription::new(0, "FIG. 1 is a pump.", fig1).unwrap()],
        vec![],
    )
    .unwrap();
    let kept = filter_figure_paragraphs(&doc);
    assert_eq!(kept.len(), 3);
}

#[test]
fn strip_identity_for_single_figure_paragraph() {
    let p = para(1, "FIG. 1 shows a network 100.");
    let out = strip_foreign_figure_sentences(&p, FigureNumber::plain(1)).unwrap();
    assert_eq!(out, "FIG. 1 shows a network 100.");
}

#[test]
fn strip_removes_foreign_sentences() {
    let p = para(1, "FIG. 1 shows X. FIG. 2 shows Y.");
    let out = strip_foreign_figure_sentences(&p, FigureNumber::plain(1)).unwrap();
    assert_eq!(out, "FIG. 1 shows X.");
}

#[test]
fn strip_errors_when_nothing_survives() {
    let p = para(1, "FIG. 2 shows Y.");
    let err = strip_foreign_figure_sentences(&p, FigureNumber::plain(1)).unwrap_err();
    assert_eq!(err, AlignError::PrimaryMismatch { primary: "1".into(), ordinal: 1 });
    // primary present but every sentence also names another figure
    let p = para(2, "FIGS. 1 and 2 interact throughout.");
    let err = strip_foreign_figure_sentences(&p, FigureNumber::plain(1)).unwrap_err();
    assert_eq!(err, AlignError::EmptyResult { ordinal: 2 });
}

#[test]
fn strip_output_never_names_foreign_figures() {
    let p = para(
        1,
        "FIG. 1 shows X. FIGS. 1 and 3 cooperate. FIG. 2 shows Y. More on FIG. 1 here.",
    );
    let out = strip_foreign_figure_sentences(&p, FigureNumber::plain(1)).unwrap();
    let refs = extract_figure_refs(&out);
    assert!(refs.iter().all(|f| *f == FigureNumber::plain(1)));
    assert_eq!(out, "FIG. 1 shows X. More on FIG. 1 here.");
}

#[test]
fn description_matching_by_common_figure() {
    let doc = fixture_doc();
    let map = match_description_to_paragraph(&doc);
    assert_eq!(map.get(&1), Some(&0));
    assert_eq!(map.get(&2), Some(&1));
    // paragraph 4 names no figure, paragraph 3 was filtered out
    assert_eq!(map.get(&3), None);
    assert_eq!(map.get(&4), None);
}

#[test]
fn multi_figure_paragraph_uses_first_mention() {
    let mut doc = fixture_doc();
    doc.paragraphs[0] =
        para(1, "While FIG. 2 differs, FIG. 1 is described here in detail.");
    let map = match_description_to_paragraph(&doc);
    // first mention is FIG. 2, so the paragraph is assigned drawing 1
    assert_eq!(map.get(&1), Some(&1));
}

#[test]
fn unmatched_figure_is_omitted() {
    let doc = fixture_doc();
    let p = para(7, "FIG. 7 shows an alternative.");
    let mut doc2 = doc.clone();
    doc2.paragraphs.push(p);
    let map = match_description_to_paragraph(&doc2);
    assert_eq!(map.get(&7), None);
}

#[test]
fn identical_paragraph_scores_one() {
    let features = segment_claim_features(1, "A system comprising: a processor; and a memory.");
    let (best, score) = match_paragraph_to_claim("a processor", &features).unwrap();
    assert_eq!(best.index, 1);
    assert_eq!(score.combined, 1.0);
    assert_eq!(score.cosine, 1.0);
    assert_eq!(score.bleu, 1.0);
}

#[test]
fn all_zero_scores_fall_back_to_first_feature() {
    let features = segment_claim_features(1, "A gearbox comprising: a shaft; and a flywheel.");
    let (best, score) = match_paragraph_to_claim("unrelated words entirely", &features).unwrap();
    assert_eq!((best.claim_number, best.index), (1, 0));
    assert_eq!(score.combined, 0.0);
}

#[test]
fn empty_feature_list_yields_none() {
    assert!(match_paragraph_to_claim("anything", &[]).is_none());
}

#[test]
fn three_feature_fixture_agrees_with_exhaustive_oracle() {
    let features = segment_claim_features(
        1,
        "A system comprising: a network interface card; a processor coupled to memory; and a display panel.",
    );
    let paragraph = "FIG. 1 shows the processor 102 coupled to the memory 104.";
    let (best, score) = match_paragraph_to_claim(paragraph, &features).unwrap();
    let oracle_features: Vec<(u32, u32, String)> = features
        .iter()
        .map(|f| (f.claim_number, f.index, f.text.clone()))
        .collect();
    let (opos, ocos, obleu, ocomb) =
        patspec_testkit::argmax_match_oracle(paragraph, &oracle_features);
    assert_eq!(best.index as usize, features[opos].index as usize);
    assert_eq!(score.cosine, ocos);
    assert_eq!(score.bleu, obleu);
    assert_eq!(score.combined, ocomb);
    assert_eq!(best.index, 2, "lexical overlap should pick the processor/memory feature");
}

#[test]
fn aligned_tuples_for_fixture() {
    let doc = fixture_doc();
    let tuples = build_aligned_tuples(&doc);
    let ordinals: Vec<u32> = tuples.iter().map(|t| t.paragraph_ordinal).collect();
    assert_eq!(ordinals, vec![1, 2]);
    assert_eq!(tuples[0].drawing_index, 0);
    assert_eq!(tuples[1].drawing_index, 1);
    // paragraph 2 talks about the memory feature
    assert_eq!(tuples[1].claim_feature.index, 2);
    for t in &tuples {
        assert_eq!(t.score.combined, (t.score.cosine + t.score.bleu) / 2.0);
        t.validate().unwrap();
    }
}

#[test]
fn document_without_figures_yields_no_tuples() {
    let claim_text = "A widget.";
    let claim = Claim::new(
        1,
        ClaimKind::Independent,
        None,
        claim_text,
        segment_claim_features(1, claim_text),
    )
    .unwrap();
    let doc = PatentDocument::new(
        "US3",
        vec![claim],
        vec![para(1, "Nothing figurative here.")],
        vec![],
        vec![],
        vec![],
    )
    .unwrap();
    assert!(build_aligned_tuples(&doc).is_empty());
}

#[test]
fn build_is_deterministic_and_idempotent() {
    let doc = fixture_doc();
    let a = build_aligned_tuples(&doc);
    let b = build_aligned_tuples(&doc);
    assert_eq!(a, b);
}

#[test]
fn two_figure_paragraph_strips_to_primary_only() {
    let mut doc = fixture_doc();
    doc.paragraphs[0] = para(1, "FIG. 1 shows a core 20. FIG. 2 adds a shell 22.");
    let tuples = build_aligned_tuples(&doc);
    let first = tuples.iter().find(|t| t.paragraph_ordinal == 1).unwrap();
    assert_eq!(first.drawing_index, 0);
}

#[test]
fn component_pair_with_consistent_binding() {
    let pair = ComponentPair::new("processor", "102").unwrap();
    let doc = fixture_doc();
    assert!(doc.paragraphs[0].component_pairs.contains(&pair));
}
