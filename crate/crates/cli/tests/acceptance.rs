//! Acceptance suite: one test per criterion, each printing a PASS line with
//! the measured evidence. Criteria cover metric-oracle equivalence, identity
//! values, alignment argmax equivalence, the combined-score law, enrichment
//! round-trips, foreign-figure stripping, image normalization, the split
//! contract, ranking sanity, and end-to-end pipeline determinism.

use std::collections::BTreeSet;
use std::path::{Path, PathBuf};
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use patspec_core::align::{
    build_aligned_tuples, extract_component_pairs, match_paragraph_to_claim,
    strip_foreign_figure_sentences, text_cosine,
};
use patspec_core::corpus::{
    ClaimFeature, ComponentPair, FigureNumber, PatentDocument, TrainingSample,
};
use patspec_core::dataset::split;
use patspec_core::enrich::{strip_tags, tag_text};
use patspec_core::imageprep::{batch_normalize, compute_target_dims};
use patspec_core::ingest::{
    extract_figure_refs, first_figure_ref, ingest_dir, IngestConfig, RawFormat,
};
use patspec_core::metrics::{
    bertscore, chrf, corpus_bleu, corpus_nist, meteor, pair_nist, rouge_l, rouge_lsum, rouge_n,
    sentence_bleu, wer, EmbeddingProvider, HashEmbedding, NistWeights,
};
use patspec_core::rank::{rank_candidates, select_top, RankWeights};
use patspec_core::text::{normalize_ws, word_tokens};

const TOLERANCE: f64 = 1e-9;

fn mini_corpus_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("assets/mini_corpus")
}

fn mini_corpus() -> Vec<PatentDocument> {
    ingest_dir(
        &mini_corpus_dir(),
        RawFormat::PlainSections,
        &IngestConfig::default(),
    )
    .expect("bundled mini corpus parses")
}

fn assert_close(label: &str, ours: f64, oracle: f64, worst: &mut f64) {
    let delta = (ours - oracle).abs();
    if delta > *worst {
        *worst = delta;
    }
    assert!(
        delta <= TOLERANCE,
        "{label}: {ours} vs oracle {oracle} (delta {delta:e})"
    );
}

#[test]
fn criterion_01_metric_oracle_equivalence() {
    let start = Instant::now();
    let pairs = patspec_testkit::synthetic_pair_corpus(20260810, 50);
    let mut worst = 0.0f64;
    let references: Vec<String> = pairs.iter().map(|(_, r)| r.clone()).collect();
    let hypotheses: Vec<String> = pairs.iter().map(|(h, _)| h.clone()).collect();
    let weights = NistWeights::from_references(&references, 5);
    let provider = HashEmbedding { dim: 32 };

    for (hyp, reference) in &pairs {
        assert_close(
            "sentence bleu",
            sentence_bleu(hyp, reference),
            patspec_testkit::sentence_bleu_oracle(hyp, reference),
            &mut worst,
        );
        for n in [1usize, 2] {
            let ours = rouge_n(hyp, reference, n);
            let (p, r, f) = patspec_testkit::rouge_n_oracle(hyp, reference, n);
            assert_close(&format!("rouge{n} precision"), ours.precision, p, &mut worst);
            assert_close(&format!("rouge{n} recall"), ours.recall, r, &mut worst);
            assert_close(&format!("rouge{n} f1"), ours.f1, f, &mut worst);
        }
        let ours = rouge_l(hyp, reference);
        let (p, r, f) = patspec_testkit::rouge_l_oracle(hyp, reference);
        assert_close("rougeL precision", ours.precision, p, &mut worst);
        assert_close("rougeL recall", ours.recall, r, &mut worst);
        assert_close("rougeL f1", ours.f1, f, &mut worst);
        let ours = rouge_lsum(hyp, reference);
        let (p, r, f) = patspec_testkit::rouge_lsum_oracle(hyp, reference);
        assert_close("rougeLsum precision", ours.precision, p, &mut worst);
        assert_close("rougeLsum recall", ours.recall, r, &mut worst);
        assert_close("rougeLsum f1", ours.f1, f, &mut worst);
        assert_close(
            "chrf",
            chrf(hyp, reference),
            patspec_testkit::chrf_oracle(hyp, reference, 6, 0, 2.0),
            &mut worst,
        );
        assert_close(
            "meteor",
            meteor(hyp, reference),
            patspec_testkit::meteor_oracle(hyp, reference),
            &mut worst,
        );
        assert_close(
            "wer",
            wer(hyp, reference).unwrap(),
            patspec_testkit::wer_oracle(hyp, reference).unwrap(),
            &mut worst,
        );
        assert_close(
            "nist per pair",
            pair_nist(hyp, reference, &weights),
            patspec_testkit::nist_pair_oracle(hyp, reference, &references, 5),
            &mut worst,
        );
        let h_embeds = provider.embed_tokens(&word_tokens(hyp)).unwrap();
        let r_embeds = provider.embed_tokens(&word_tokens(reference)).unwrap();
        let (_, _, ours_f1) = bertscore(hyp, reference, &provider).unwrap();
        let (_, _, oracle_f1) = patspec_testkit::bertscore_oracle(&h_embeds, &r_embeds);
        assert_close("bertscore f1", ours_f1, oracle_f1, &mut worst);
    }
    assert_close(
        "corpus bleu",
        corpus_bleu(&hypotheses, &references).unwrap(),
        patspec_testkit::corpus_bleu_oracle(&pairs),
        &mut worst,
    );
    assert_close(
        "corpus nist",
        corpus_nist(&hypotheses, &references, 5),
        patspec_testkit::nist_oracle(&pairs, 5),
        &mut worst,
    );
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 5.0, "took {elapsed:?}, budget 5 s");
    println!(
        "PASS criterion 1: metric-oracle equivalence on 50 pairs, max |delta| = {worst:.3e}, {} ms",
        elapsed.as_millis()
    );
}

#[test]
fn criterion_02_identity_suite() {
    let docs = mini_corpus();
    let paragraphs: Vec<String> = docs
        .iter()
        .flat_map(|d| d.paragraphs.iter().map(|p| p.text.clone()))
        .take(20)
        .collect();
    assert!(paragraphs.len() >= 20, "mini corpus has 20+ paragraphs");
    let provider = HashEmbedding::default();
    for text in &paragraphs {
        assert_eq!(sentence_bleu(text, text), 1.0, "bleu identity on {text:?}");
        assert_eq!(rouge_n(text, text, 1).f1, 1.0);
        assert_eq!(rouge_n(text, text, 2).f1, 1.0);
        assert_eq!(rouge_l(text, text).f1, 1.0);
        assert_eq!(rouge_lsum(text, text).f1, 1.0);
        assert_eq!(chrf(text, text), 1.0);
        assert_eq!(meteor(text, text), 1.0, "meteor identity on {text:?}");
        assert_eq!(bertscore(text, text, &provider).unwrap().2, 1.0);
        assert_eq!(wer(text, text).unwrap(), 0.0);
    }
    println!(
        "PASS criterion 2: identity suite exact on {} corpus paragraphs",
        paragraphs.len()
    );
}

#[test]
fn criterion_03_alignment_oracle_equivalence() {
    let mut agreements = 0usize;
    for i in 0..100u64 {
        let fixture = patspec_testkit::random_alignment_fixture(7000 + i, 50);
        let features: Vec<ClaimFeature> = fixture
            .features
            .iter()
            .map(|(claim, index, text)| ClaimFeature {
                claim_number: *claim,
                index: *index,
                text: text.clone(),
            })
            .collect();
        let (best, score) =
            match_paragraph_to_claim(&fixture.paragraph, &features).expect("non-empty features");
        let (opos, ocos, obleu, ocomb) =
            patspec_testkit::argmax_match_oracle(&fixture.paragraph, &fixture.features);
        let (oclaim, oindex, _) = &fixture.features[opos];
        assert_eq!(
            (best.claim_number, best.index),
            (*oclaim, *oindex),
            "fixture {i}: winner disagrees (ours {}.{} vs oracle {}.{})",
            best.claim_number,
            best.index,
            oclaim,
            oindex
        );
        assert_eq!(score.cosine, ocos, "fixture {i}: cosine differs");
        assert_eq!(score.bleu, obleu, "fixture {i}: bleu differs");
        assert_eq!(score.combined, ocomb, "fixture {i}: combined differs");
        agreements += 1;
    }
    println!("PASS criterion 3: alignment argmax equals exhaustive oracle on {agreements}/100 fixtures");
}

#[test]
fn criterion_04_combined_score_law() {
    let docs = mini_corpus();
    let mut checked = 0usize;
    for doc in &docs {
        for tuple in build_aligned_tuples(doc) {
            assert_eq!(
                tuple.score.combined,
                (tuple.score.cosine + tuple.score.bleu) / 2.0,
                "tuple {}#{} violates the mean law",
                tuple.doc_id,
                tuple.paragraph_ordinal
            );
            checked += 1;
        }
    }
    assert!(checked >= 10, "expected a non-trivial tuple count, got {checked}");
    println!("PASS criterion 4: combined == (cosine + bleu)/2 exactly on {checked} emitted tuples");
}

#[test]
fn criterion_05_enrichment_round_trip() {
    let docs = mini_corpus();
    let mut checked = 0usize;
    for doc in &docs {
        for para in &doc.paragraphs {
            let pairs = extract_component_pairs(&para.text);
            let figures = extract_figure_refs(&para.text);
            let tagged = tag_text(&para.text, &pairs, &figures);
            let stripped = strip_tags(&tagged).expect("tagged text is balanced");
            assert_eq!(
                normalize_ws(&stripped),
                normalize_ws(&para.text),
                "round trip failed for {}#{}",
                doc.doc_id,
                para.ordinal
            );
            checked += 1;
        }
    }
    println!("PASS criterion 5: strip(tag(p)) == p for {checked}/{checked} mini-corpus paragraphs");
}

#[test]
fn criterion_06_foreign_figure_stripping() {
    let docs = mini_corpus();
    let mut checked = 0usize;
    for doc in &docs {
        for para in &doc.paragraphs {
            let Some(primary) = first_figure_ref(&para.text) else {
                continue;
            };
            let Ok(stripped) = strip_foreign_figure_sentences(para, primary) else {
                continue;
            };
            let leftover = extract_figure_refs(&stripped);
            assert!(
                leftover.iter().all(|f| *f == primary),
                "{}#{}: foreign figures {:?} survive (primary {})",
                doc.doc_id,
                para.ordinal,
                leftover,
                primary
            );
            checked += 1;
        }
    }
    // constructed multi-figure fixtures
    let constructed = [
        ("FIG. 1 shows X. FIG. 2 shows Y. FIG. 1 continues.", 1u32),
        ("FIG. 3 opens. FIGS. 4 and 5 interfere. FIG. 3 closes.", 3),
        ("FIG. 2 alone.", 2),
    ];
    for (text, major) in constructed {
        let para = patspec_core::corpus::SpecParagraph::new(
            1,
            text,
            extract_figure_refs(text),
            vec![],
        )
        .unwrap();
        let primary = FigureNumber::plain(major);
        let stripped = strip_foreign_figure_sentences(&para, primary).unwrap();
        let leftover = extract_figure_refs(&stripped);
        assert!(leftover.iter().all(|f| *f == primary), "{text:?} kept foreign figures");
        checked += 1;
    }
    println!("PASS criterion 6: zero foreign figure references after stripping on {checked} fixtures");
}

#[test]
fn criterion_07_image_normalization() {
    let src = tempfile::tempdir().unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    let mut inputs = Vec::new();
    for i in 0..10 {
        // two fixed large inputs keep genuine downscales in the mix; the
        // rest stay small so the 4096 upscales fit a debug-build budget
        let (w, h) = match i {
            0 => (1400u32, 900u32),
            1 => (500, 1600),
            _ => (rng.gen_range(40..600u32), rng.gen_range(40..600u32)),
        };
        let img = image::GrayImage::from_fn(w, h, |x, y| image::Luma([((x ^ y) % 255) as u8]));
        let path = src.path().join(format!("img{i:02}.png"));
        img.save(&path).unwrap();
        inputs.push((path, w, h));
    }
    for target in [256u32, 512, 1024, 2048, 4096] {
        let out = tempfile::tempdir().unwrap();
        let report = batch_normalize(src.path(), out.path(), target, None).unwrap();
        assert_eq!(report.failed, 0);
        assert_eq!(report.outcomes.len(), 10);
        for (path, w_in, h_in) in &inputs {
            let out_path = out.path().join(path.file_name().unwrap());
            let (w, h) = image::image_dimensions(&out_path).unwrap();
            assert_eq!(w.max(h), target, "max dim must equal target {target}");
            let expected = compute_target_dims(*w_in, *h_in, target);
            assert_eq!((w, h), expected);
            // within one pixel of exact proportional scaling
            let scale = target as f64 / (*w_in.max(h_in) as f64);
            assert!((w as f64 - *w_in as f64 * scale).abs() <= 1.0);
            assert!((h as f64 - *h_in as f64 * scale).abs() <= 1.0);
        }
        // rerun on the normalized output is a no-op
        let rerun = batch_normalize(out.path(), out.path(), target, None).unwrap();
        assert_eq!(rerun.already_normalized, 10, "target {target}: rerun must no-op");
        assert_eq!(rerun.ok, 0);
        assert_eq!(rerun.failed, 0);
    }
    println!("PASS criterion 7: max(H,W) exact and aspect within 1 px for all 5 targets x 10 images; reruns are no-ops");
}

#[test]
fn criterion_08_split_contract() {
    let items: Vec<u32> = (0..230_000).collect();
    let (train, test) = split(items.clone(), 1000, 2026).unwrap();
    assert_eq!(train.len(), 229_000);
    assert_eq!(test.len(), 1000);
    let mut merged: Vec<u32> = train.iter().chain(test.iter()).copied().collect();
    merged.sort_unstable();
    assert_eq!(merged, items, "partition must be disjoint and exhaustive");
    let (_, test_again) = split(items.clone(), 1000, 2026).unwrap();
    assert_eq!(test, test_again, "same seed must reproduce the same test set");
    let (_, test_other) = split(items, 1000, 2027).unwrap();
    assert_ne!(test, test_other, "different seeds should differ");
    println!("PASS criterion 8: 230,000 -> 229,000/1,000 deterministic disjoint exhaustive split");
}

fn ranking_fixture(seed: u64) -> (TrainingSample, Vec<String>, usize) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let nouns = [
        "rotor", "stator", "coupler", "manifold", "piston", "bracket", "conduit", "sleeve",
        "flange", "spindle",
    ];
    let verbs = ["drives", "supports", "guides", "engages", "surrounds", "retains"];
    let n_pairs = rng.gen_range(2..=4usize);
    let mut pairs = Vec::new();
    let mut used = BTreeSet::new();
    while pairs.len() < n_pairs {
        let noun = nouns[rng.gen_range(0..nouns.len())];
        if !used.insert(noun) {
            continue;
        }
        let number = format!("{}", rng.gen_range(10..90) * 2);
        if pairs.iter().any(|p: &ComponentPair| p.number == number) {
            continue;
        }
        pairs.push(ComponentPair::new(noun, &number).unwrap());
    }
    let figure = FigureNumber::plain(rng.gen_range(1..8));
    let feature_text = format!(
        "a {} that {} the {}",
        pairs[0].name,
        verbs[rng.gen_range(0..verbs.len())],
        pairs[1].name
    );
    let comp_clauses: Vec<String> = pairs
        .iter()
        .map(|p| format!("a {} {}", p.name, p.number))
        .collect();
    let target = format!(
        "FIG. {} shows {} wherein {}.",
        figure.canonical(),
        comp_clauses.join(" and "),
        feature_text
    );
    let figset: BTreeSet<_> = [figure].into();
    let enriched = tag_text(&target, &pairs, &figset);
    let sample = TrainingSample::new(
        &format!("fix#{seed}"),
        ClaimFeature::new(1, 0, &feature_text).unwrap(),
        "<ctx></ctx>",
        "a sectional view of the assembly",
        "",
        pairs.clone(),
        0,
        1,
        &target,
        &enriched,
        figure,
    )
    .unwrap();

    // distractors, each violating exactly one alignment dimension
    let k = rng.gen_range(1..=10usize);
    let mut candidates = Vec::new();
    for d in 0..k {
        let kind = d % 4;
        let candidate = match kind {
            // wrong figure number
            0 => {
                let wrong = FigureNumber::plain(figure.major + 1 + (d as u32 % 3));
                target.replace(
                    &format!("FIG. {}", figure.canonical()),
                    &format!("FIG. {}", wrong.canonical()),
                )
            }
            // component names replaced with unrelated words
            1 => {
                let mut t = target.clone();
                for p in &pairs {
                    t = t.replace(&p.name, "widget");
                }
                t
            }
            // component numbers dropped
            2 => {
                let mut t = target.clone();
                for p in &pairs {
                    t = t.replace(&format!(" {}", p.number), "");
                }
                t
            }
            // claim text replaced by unrelated words
            _ => {
                let filler = format!(
                    "FIG. {} shows {} wherein nothing relevant happens here",
                    figure.canonical(),
                    comp_clauses.join(" and ")
                );
                filler
            }
        };
        candidates.push(candidate);
    }
    let target_pos = rng.gen_range(0..=candidates.len());
    candidates.insert(target_pos, target);
    (sample, candidates, target_pos)
}

#[test]
fn criterion_09_ranking_sanity() {
    let mut wins = 0usize;
    for seed in 0..200u64 {
        let (sample, candidates, target_pos) = ranking_fixture(31000 + seed);
        let ranked = rank_candidates(&candidates, &sample, &RankWeights::default()).unwrap();
        let top = select_top(&ranked).unwrap();
        assert_eq!(
            ranked[0].index, target_pos,
            "fixture {seed}: target at {target_pos} lost to {} ({:?} vs {:?})",
            ranked[0].index, ranked[0].score, ranked.iter().find(|c| c.index == target_pos).map(|c| c.score)
        );
        assert_eq!(top, candidates[target_pos]);
        wins += 1;
    }
    println!("PASS criterion 9: injected target ranked first in {wins}/200 single-defect fixtures");
}

#[test]
fn criterion_10_end_to_end_determinism() {
    let start = Instant::now();
    let corpus = mini_corpus_dir();
    let work = tempfile::tempdir().unwrap();
    let config_path = work.path().join("pipeline.toml");
    let config = format!(
        r#"
[pipeline]
seed = 42
jobs = 4

[ingest]
format = "plain"
input_dir = "{}"

[imageprep]
max_dim = 512

[dataset]
test_size = 5
require_image = true

[generate]
mode = "mock"
n_candidates = 3
concurrency = 2
"#,
        corpus.display()
    );
    std::fs::write(&config_path, config).unwrap();
    let bin = env!("CARGO_BIN_EXE_patspec");
    let run = |out_dir: &Path| {
        let status = std::process::Command::new(bin)
            .args([
                "pipeline",
                "--config",
                config_path.to_str().unwrap(),
                "--out-dir",
                out_dir.to_str().unwrap(),
            ])
            .status()
            .expect("pipeline binary runs");
        assert!(status.success(), "pipeline exited with {status:?}");
    };
    let out1 = work.path().join("run1");
    let out2 = work.path().join("run2");
    run(&out1);
    run(&out2);
    assert!(out1.join("report.json").is_file(), "report.json produced");
    for file in ["samples.jsonl", "selected.jsonl", "report.json"] {
        let a = std::fs::read(out1.join(file)).unwrap();
        let b = std::fs::read(out2.join(file)).unwrap();
        assert_eq!(a, b, "{file} differs between identical runs");
        assert!(!a.is_empty(), "{file} must not be empty");
    }
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 60.0, "took {elapsed:?}, budget 60 s");
    println!(
        "PASS criterion 10: two pipeline runs byte-identical on samples/selected/report in {} ms",
        elapsed.as_millis()
    );
}

#[test]
fn pipeline_errors_cleanly_on_missing_corpus() {
    let work = tempfile::tempdir().unwrap();
    let config_path = work.path().join("pipeline.toml");
    std::fs::write(
        &config_path,
        "[ingest]\ninput_dir = \"/nonexistent/corpus\"\n",
    )
    .unwrap();
    let status = std::process::Command::new(env!("CARGO_BIN_EXE_patspec"))
        .args([
            "pipeline",
            "--config",
            config_path.to_str().unwrap(),
            "--out-dir",
            work.path().join("out").to_str().unwrap(),
        ])
        .status()
        .expect("binary runs");
    assert_eq!(status.code(), Some(2), "stage-1 data error exits 2");
}

#[test]
fn cosine_similarity_matches_oracle_on_synthetic_pairs() {
    // supporting check for criterion 3: the similarity primitive agrees
    // with the brute-force TF-vector oracle bit for bit
    let pairs = patspec_testkit::synthetic_pair_corpus(555, 50);
    for (a, b) in &pairs {
        assert_eq!(text_cosine(a, b), patspec_testkit::cosine_oracle(a, b));
    }
}
