//! Turns raw patent documents (claims, specification paragraphs, drawing
//! descriptions, drawing images) into enriched multimodal training and
//! evaluation samples, ranks candidate generations, and scores them with a
//! full NLG metric suite.
//!
//! The pipeline stages, in order:
//!
//! - [`ingest`] — parse raw patent files into [`corpus::PatentDocument`]
//!   values and segment claims into features.
//! - [`align`] — match specification paragraphs to drawings by figure
//!   number and to claim features by averaged cosine/BLEU similarity.
//! - [`enrich`] — insert structured tags around figure numbers, component
//!   names/numbers, and paragraph-number context.
//! - [`imageprep`] — orientation-correct and rescale drawing images.
//! - [`dataset`] — emit training samples and perform the seeded
//!   train/test split.
//! - [`rank`] — score candidate generations against their sample and pick
//!   the best one.
//! - [`metrics`] — BLEU, ROUGE-1/2/L/Lsum, chrF, METEOR, NIST, WER, and
//!   provider-based BERTScore, with corpus-level reporting.

pub mod align;
pub mod corpus;
pub mod dataset;
pub mod enrich;
pub mod imageprep;
pub mod ingest;
pub mod metrics;
pub mod rank;
pub mod text;
