//! Sample emission and the seeded train/test split, plus JSONL
//! serialization with per-line schema validation.

use std::collections::{BTreeSet, HashMap};
use std::io::{BufRead, BufReader, Write};
use std::path::Path;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::align::{strip_foreign_figure_sentences, AlignError, AlignedTuple};
use crate::corpus::{PatentDocument, TrainingSample, Validate, ValidationError};
use crate::enrich::EnrichError;
use crate::ingest::first_figure_ref;

#[derive(Debug, Error)]
pub enum DatasetError {
    #[error("{have} samples cannot produce a test set of {need}")]
    TooFewSamples { have: usize, need: usize },
    #[error("duplicate sample id {id}")]
    DuplicateSample { id: String },
    #[error("line {line}: {message}")]
    Schema { line: usize, message: String },
    #[error("tuple references unknown document {doc_id}")]
    UnknownDocument { doc_id: String },
    #[error("invalid tuple: {detail}")]
    InvalidTuple { detail: String },
    #[error(transparent)]
    Validation(#[from] ValidationError),
    #[error(transparent)]
    Align(#[from] AlignError),
    #[error(transparent)]
    Enrich(#[from] EnrichError),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

#[derive(Debug, Clone, Default)]
pub struct EmitOptions {
    /// Skip tuples whose drawing image is missing instead of emitting them
    /// with an empty path.
    pub require_image: bool,
}

#[derive(Debug)]
pub struct EmitReport {
    pub samples: Vec<TrainingSample>,
    pub skipped_missing_image: usize,
}

/// Emits one enriched [`TrainingSample`] per aligned tuple, in input order.
/// Sample ids follow `doc_id#paragraph#claim.feature`; the previous
/// paragraph ordinal is the previously emitted paragraph of the same
/// document, 0 for the first. Component bindings are kept consistent per
/// document: the first (number -> name) binding wins, later conflicts are
/// dropped with a warning.
pub fn emit_samples(
    aligned: &[AlignedTuple],
    docs: &[PatentDocument],
    options: &EmitOptions,
) -> Result<EmitReport, DatasetError> {
    let by_id: HashMap<&str, &PatentDocument> =
        docs.iter().map(|d| (d.doc_id.as_str(), d)).collect();
    let mut samples = Vec::with_capacity(aligned.len());
    let mut seen_ids: BTreeSet<String> = BTreeSet::new();
    let mut prev_ordinal: HashMap<&str, u32> = HashMap::new();
    let mut bindings: HashMap<String, HashMap<String, String>> = HashMap::new();
    let mut skipped = 0usize;

    for tuple in aligned {
        let doc = by_id
            .get(tuple.doc_id.as_str())
            .ok_or_else(|| DatasetError::UnknownDocument {
                doc_id: tuple.doc_id.clone(),
            })?;
        let para = doc
            .paragraph(tuple.paragraph_ordinal)
            .ok_or_else(|| DatasetError::InvalidTuple {
                detail: format!(
                    "paragraph {} missing from {}",
                    tuple.paragraph_ordinal, tuple.doc_id
                ),
            })?;
        let drawing =
            doc.drawings
                .get(tuple.drawing_index)
                .ok_or_else(|| DatasetError::InvalidTuple {
                    detail: format!(
                        "drawing {} missing from {}",
                        tuple.drawing_index, tuple.doc_id
                    ),
                })?;
        let brief = &doc.brief_descriptions[tuple.drawing_index];
        let primary = first_figure_ref(&para.text).ok_or_else(|| DatasetError::InvalidTuple {
            detail: format!(
                "paragraph {} of {} names no figure",
                para.ordinal, tuple.doc_id
            ),
        })?;

        if options.require_image
            && (drawing.image_path.is_empty() || !Path::new(&drawing.image_path).is_file())
        {
            log::warn!(
                "skipping {}#{}: drawing image {:?} missing",
                tuple.doc_id,
                para.ordinal,
                drawing.image_path
            );
            skipped += 1;
            continue;
        }

        let stripped = strip_foreign_figure_sentences(para, primary)?;
        let doc_bindings = bindings.entry(doc.doc_id.clone()).or_default();
        let mut pairs = Vec::new();
        for pair in crate::align::extract_component_pairs(&stripped) {
            match doc_bindings.get(&pair.number) {
                Some(name) if *name != pair.name => {
                    log::warn!(
                        "{}: number {} already bound to {:?}, dropping ({:?}, {})",
                        doc.doc_id,
                        pair.number,
                        name,
                        pair.name,
                        pair.number
                    );
                }
                Some(_) => pairs.push(pair),
                None => {
                    doc_bindings.insert(pair.number.clone(), pair.name.clone());
                    pairs.push(pair);
                }
            }
        }

        let context = crate::enrich::build_claim_context(&tuple.claim_feature, doc)?;
        let figure_set: BTreeSet<_> = [primary].into();
        let enriched = crate::enrich::tag_text(&stripped, &pairs, &figure_set);

        let sample_id = format!(
            "{}#{}#{}.{}",
            tuple.doc_id, para.ordinal, tuple.claim_feature.claim_number, tuple.claim_feature.index
        );
        if !seen_ids.insert(sample_id.clone()) {
            return Err(DatasetError::DuplicateSample { id: sample_id });
        }
        let prev = prev_ordinal.get(doc.doc_id.as_str()).copied().unwrap_or(0);
        let sample = TrainingSample::new(
            &sample_id,
            tuple.claim_feature.clone(),
            &context,
            &brief.text,
            &drawing.image_path,
            pairs,
            prev,
            para.ordinal,
            &stripped,
            &enriched,
            primary,
        )?;
        prev_ordinal.insert(doc.doc_id.as_str(), para.ordinal);
        samples.push(sample);
    }
    Ok(EmitReport {
        samples,
        skipped_missing_image: skipped,
    })
}

/// Uniform sample without replacement via a seeded generator: the test set
/// keeps input order, the remainder becomes the training set. The split is
/// disjoint, exhaustive, and identical for identical seeds.
pub fn split<T>(
    items: Vec<T>,
    test_size: usize,
    seed: u64,
) -> Result<(Vec<T>, Vec<T>), DatasetError> {
    if items.len() <= test_size {
        return Err(DatasetError::TooFewSamples {
            have: items.len(),
            need: test_size,
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let picks = rand::seq::index::sample(&mut rng, items.len(), test_size);
    let pick_set: BTreeSet<usize> = picks.into_iter().collect();
    let mut train = Vec::with_capacity(items.len() - test_size);
    let mut test = Vec::with_capacity(test_size);
    for (i, item) in items.into_iter().enumerate() {
        if pick_set.contains(&i) {
            test.push(item);
        } else {
            train.push(item);
        }
    }
    Ok((train, test))
}

/// Reproducibility record for a split run.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SplitManifest {
    pub seed: u64,
    pub test_size: usize,
    pub total: usize,
    pub train_count: usize,
    pub test_count: usize,
    pub test_ids: Vec<String>,
}

/// Writes one JSON object per line, UTF-8, no BOM.
pub fn write_jsonl<T: Serialize>(path: &Path, items: &[T]) -> Result<(), DatasetError> {
    let mut out = std::io::BufWriter::new(std::fs::File::create(path)?);
    for item in items {
        serde_json::to_writer(&mut out, item).map_err(|e| DatasetError::Schema {
            line: 0,
            message: e.to_string(),
        })?;
        out.write_all(b"\n")?;
    }
    out.flush()?;
    Ok(())
}

/// Reads JSONL without invariant validation (for record types that carry
/// none). Schema violations name the line.
pub fn read_jsonl_raw<T: DeserializeOwned>(path: &Path) -> Result<Vec<T>, DatasetError> {
    let reader = BufReader::new(std::fs::File::open(path)?);
    let mut items = Vec::new();
    for (i, line) in reader.lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let item: T = serde_json::from_str(&line).map_err(|e| DatasetError::Schema {
            line: i + 1,
            message: e.to_string(),
        })?;
        items.push(item);
    }
    Ok(items)
}

/// Reads JSONL and re-checks every constructor invariant per line.
pub fn read_jsonl<T: DeserializeOwned + Validate>(path: &Path) -> Result<Vec<T>, DatasetError> {
    let reader = BufReader::new(std::fs::File::open(path)?);
    let mut items = Vec::new();
    for (i, line) in reader.lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let item: T = serde_json::from_str(&line).map_err(|e| DatasetError::Schema {
            line: i + 1,
            message: e.to_string(),
        })?;
        item.validate().map_err(|e| DatasetError::Schema {
            line: i + 1,
            message: e.to_string(),
        })?;
        items.push(item);
    }
    Ok(items)
}
