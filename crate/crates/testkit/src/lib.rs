//! Brute-force reference scorers ("oracles") and synthetic fixture generators.
//!
//! Everything in this crate is deliberately naive: linear scans over token
//! vectors, full DP matrices, no hashing shortcuts. The optimized scorers in
//! the main crates are checked against these functions, so the two sides must
//! never share code. This crate is a dev-dependency only and ships nothing.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub mod oracles;

pub use oracles::*;

/// Word pool used by the synthetic corpora. Fixed so every generated corpus
/// is reproducible from its seed alone.
pub const WORD_POOL: &[&str] = &[
    "processor", "memory", "network", "interface", "card", "signal", "module",
    "controller", "data", "bus", "cache", "register", "display", "sensor",
    "housing", "circuit", "antenna", "battery", "coupled", "connected",
    "configured", "receives", "transmits", "stores", "first", "second",
    "plurality", "system", "device", "apparatus", "method", "unit", "layer",
    "substrate", "panel", "frame", "valve", "pump", "gear", "shaft",
];

const PUNCT_POOL: &[&str] = &[".", ",", ";", ":"];

/// Generates `n` (hypothesis, reference) sentence pairs with a controlled mix
/// of identical, overlapping, and disjoint vocabulary.
pub fn synthetic_pair_corpus(seed: u64, n: usize) -> Vec<(String, String)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut pairs = Vec::with_capacity(n);
    for i in 0..n {
        let ref_len = rng.gen_range(3..25);
        let reference = random_sentence(&mut rng, ref_len);
        let hyp = match i % 5 {
            // identical
            0 => reference.clone(),
            // perturbed copy: drop/substitute a few words
            1 | 2 => perturb(&mut rng, &reference),
            // unrelated sentence from the same pool
            3 => {
                let len = rng.gen_range(3..25);
                random_sentence(&mut rng, len)
            }
            // short, highly repetitive hypothesis
            _ => {
                let w = WORD_POOL[rng.gen_range(0..WORD_POOL.len())];
                let k = rng.gen_range(1..6);
                vec![w; k].join(" ")
            }
        };
        pairs.push((hyp, reference));
    }
    pairs
}

fn random_sentence(rng: &mut ChaCha8Rng, words: usize) -> String {
    let mut out = Vec::with_capacity(words + 2);
    for j in 0..words {
        out.push(WORD_POOL[rng.gen_range(0..WORD_POOL.len())].to_string());
        if j + 1 < words && rng.gen_bool(0.1) {
            out.push(PUNCT_POOL[rng.gen_range(0..PUNCT_POOL.len())].to_string());
        }
    }
    let mut s = out.join(" ");
    s.push('.');
    s
}

fn perturb(rng: &mut ChaCha8Rng, text: &str) -> String {
    let mut words: Vec<String> = text.split_whitespace().map(|w| w.to_string()).collect();
    let edits = rng.gen_range(1..=3.min(words.len()));
    for _ in 0..edits {
        if words.is_empty() {
            break;
        }
        let pos = rng.gen_range(0..words.len());
        if rng.gen_bool(0.5) {
            words[pos] = WORD_POOL[rng.gen_range(0..WORD_POOL.len())].to_string();
        } else {
            words.remove(pos);
        }
    }
    if words.is_empty() {
        words.push(WORD_POOL[rng.gen_range(0..WORD_POOL.len())].to_string());
    }
    words.join(" ")
}

/// One randomized paragraph-to-claim-feature fixture: a paragraph plus up to
/// `max_features` candidate features identified by (claim_number, index).
/// Duplicate feature texts are injected on purpose so that exact score ties
/// occur and tie-breaking is exercised.
pub struct AlignmentFixture {
    pub paragraph: String,
    pub features: Vec<(u32, u32, String)>,
}

pub fn random_alignment_fixture(seed: u64, max_features: usize) -> AlignmentFixture {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let para_len = rng.gen_range(5..30);
    let paragraph = random_sentence(&mut rng, para_len);
    let n_claims = rng.gen_range(1..5u32);
    let mut features = Vec::new();
    let mut claim = 1u32;
    while features.len() < rng.gen_range(1..=max_features) && claim <= n_claims {
        let per_claim = rng.gen_range(1..6u32);
        for idx in 0..per_claim {
            if features.len() >= max_features {
                break;
            }
            let text = if rng.gen_bool(0.15) && !features.is_empty() {
                // duplicate an earlier feature verbatim to force a tie
                let picked: &(u32, u32, String) = features.choose(&mut rng).unwrap();
                picked.2.clone()
            } else if rng.gen_bool(0.3) {
                // overlap with the paragraph: copy a window of its words
                let words: Vec<&str> = paragraph.split_whitespace().collect();
                let start = rng.gen_range(0..words.len());
                let end = (start + rng.gen_range(1..6)).min(words.len());
                words[start..end].join(" ")
            } else {
                let len = rng.gen_range(2..12);
                random_sentence(&mut rng, len)
            };
            features.push((claim, idx, text));
        }
        claim += 1;
    }
    AlignmentFixture { paragraph, features }
}
