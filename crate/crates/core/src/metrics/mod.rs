//! The evaluation suite: BLEU, ROUGE-1/2/L/Lsum, chrF, a METEOR variant,
//! NIST, WER, and provider-based BERTScore, plus corpus-level reporting.
//!
//! All word-level metrics share one tokenizer ([`crate::text::word_tokens`]:
//! lower-case, punctuation-separating) so cross-metric comparisons share a
//! vocabulary. Every scorer is a pure function; corpus evaluation reduces in
//! stable order so reports are byte-deterministic.

mod bertscore;
mod bleu;
mod chrf;
mod meteor;
mod nist;
mod report;
mod rouge;
mod wer;

pub use bertscore::{bertscore, EmbeddingProvider, HashEmbedding, TableEmbedding};
pub use bleu::{corpus_bleu, sentence_bleu};
pub use chrf::{chrf, chrf_with};
pub use meteor::{light_stem, meteor};
pub use nist::{corpus_nist, pair_nist, NistWeights};
pub use report::{evaluate_corpus, EvalPair, MetricCounts, MetricReport, ReportHeader, SampleMetrics};
pub use rouge::{rouge_l, rouge_lsum, rouge_n, RougeScore};
pub use wer::wer;

use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum MetricsError {
    #[error("empty reference for sample {sample_id:?}")]
    EmptyReference { sample_id: String },
    #[error("corpus is empty")]
    EmptyCorpus,
    #[error("{hyps} hypotheses vs {refs} references")]
    LengthMismatch { hyps: usize, refs: usize },
    #[error("embedding provider error: {0}")]
    Provider(String),
}
