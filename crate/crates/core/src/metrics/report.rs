//! Corpus-level evaluation: per-sample values for the full metric suite
//! plus arithmetic-mean aggregates, serialized as JSON and a plain-text
//! table. Reduction order is fixed (sample id order) so reports are
//! byte-deterministic.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::{
    bertscore, chrf, meteor, nist::NistWeights, pair_nist, rouge_l, rouge_lsum, rouge_n,
    sentence_bleu, wer, EmbeddingProvider, MetricsError,
};

/// One evaluation pair, already joined by sample id.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EvalPair {
    pub sample_id: String,
    pub hypothesis: String,
    pub reference: String,
}

/// Per-sample metric values. ROUGE entries are F1.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SampleMetrics {
    pub bleu: f64,
    pub rouge1: f64,
    pub rouge2: f64,
    #[serde(rename = "rougeL")]
    pub rouge_l: f64,
    #[serde(rename = "rougeLsum")]
    pub rouge_lsum: f64,
    pub chrf: f64,
    pub meteor: f64,
    pub nist: f64,
    pub wer: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bertscore: Option<f64>,
}

/// Scoring parameters recorded alongside the numbers so runs stay
/// comparable.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReportHeader {
    pub tokenizer: String,
    pub bleu: String,
    pub chrf: String,
    pub meteor: String,
    pub nist: String,
    pub bertscore_provider: Option<String>,
    pub preprocessing: String,
}

impl Default for ReportHeader {
    fn default() -> Self {
        Self {
            tokenizer: "lower-case, punctuation-separating, shared across word-level metrics".into(),
            bleu: "sentence BLEU-4, add-one smoothing on orders 2-4".into(),
            chrf: "chrF char_n=6 word_n=0 beta=2, whitespace stripped, case-sensitive".into(),
            meteor: "meteor-exact+stem (suffix strip: ing/ed/ly/es/s), alpha=0.9, \
                     penalty 0.5*(ch/m)^3 when ch>1"
                .into(),
            nist: "NIST max_n=5, information weights from this run's reference corpus".into(),
            bertscore_provider: None,
            preprocessing: "grammar tags stripped from both sides before scoring".into(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct MetricCounts {
    pub samples: usize,
    pub bertscore_samples: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricReport {
    pub header: ReportHeader,
    pub per_sample: BTreeMap<String, SampleMetrics>,
    pub aggregate: SampleMetrics,
    pub counts: MetricCounts,
}

/// Scores every pair with the full suite. Hypotheses and references are
/// tag-stripped (leniently) before scoring; NIST weights come from this
/// run's references. BERTScore is computed only when a provider is given.
pub fn evaluate_corpus(
    pairs: &[EvalPair],
    provider: Option<&dyn EmbeddingProvider>,
) -> Result<MetricReport, MetricsError> {
    if pairs.is_empty() {
        return Err(MetricsError::EmptyCorpus);
    }
    let mut ordered: Vec<&EvalPair> = pairs.iter().collect();
    ordered.sort_by(|a, b| a.sample_id.cmp(&b.sample_id));

    let cleaned: Vec<(String, String, String)> = ordered
        .iter()
        .map(|p| {
            (
                p.sample_id.clone(),
                crate::enrich::strip_tags_lenient(&p.hypothesis),
                crate::enrich::strip_tags_lenient(&p.reference),
            )
        })
        .collect();
    let references: Vec<&str> = cleaned.iter().map(|(_, _, r)| r.as_str()).collect();
    let weights = NistWeights::from_references(&references, super::nist::NIST_MAX_N);

    let mut per_sample = BTreeMap::new();
    for (sample_id, hyp, reference) in &cleaned {
        let wer_value = wer(hyp, reference).map_err(|_| MetricsError::EmptyReference {
            sample_id: sample_id.clone(),
        })?;
        let bert = match provider {
            Some(p) => Some(bertscore(hyp, reference, p)?.2),
            None => None,
        };
        let metrics = SampleMetrics {
            bleu: sentence_bleu(hyp, reference),
            rouge1: rouge_n(hyp, reference, 1).f1,
            rouge2: rouge_n(hyp, reference, 2).f1,
            rouge_l: rouge_l(hyp, reference).f1,
            rouge_lsum: rouge_lsum(hyp, reference).f1,
            chrf: chrf(hyp, reference),
            meteor: meteor(hyp, reference),
            nist: pair_nist(hyp, reference, &weights),
            wer: wer_value,
            bertscore: bert,
        };
        per_sample.insert(sample_id.clone(), metrics);
    }

    let n = per_sample.len() as f64;
    let mut sum = SampleMetrics {
        bleu: 0.0,
        rouge1: 0.0,
        rouge2: 0.0,
        rouge_l: 0.0,
        rouge_lsum: 0.0,
        chrf: 0.0,
        meteor: 0.0,
        nist: 0.0,
        wer: 0.0,
        bertscore: None,
    };
    let mut bert_sum = 0.0f64;
    let mut bert_count = 0usize;
    for m in per_sample.values() {
        sum.bleu += m.bleu;
        sum.rouge1 += m.rouge1;
        sum.rouge2 += m.rouge2;
        sum.rouge_l += m.rouge_l;
        sum.rouge_lsum += m.rouge_lsum;
        sum.chrf += m.chrf;
        sum.meteor += m.meteor;
        sum.nist += m.nist;
        sum.wer += m.wer;
        if let Some(b) = m.bertscore {
            bert_sum += b;
            bert_count += 1;
        }
    }
    let aggregate = SampleMetrics {
        bleu: sum.bleu / n,
        rouge1: sum.rouge1 / n,
        rouge2: sum.rouge2 / n,
        rouge_l: sum.rouge_l / n,
        rouge_lsum: sum.rouge_lsum / n,
        chrf: sum.chrf / n,
        meteor: sum.meteor / n,
        nist: sum.nist / n,
        wer: sum.wer / n,
        bertscore: (bert_count > 0).then(|| bert_sum / bert_count as f64),
    };
    let header = ReportHeader {
        bertscore_provider: provider.map(|p| p.identity()),
        ..ReportHeader::default()
    };
    Ok(MetricReport {
        header,
        counts: MetricCounts {
            samples: per_sample.len(),
            bertscore_samples: bert_count,
        },
        per_sample,
        aggregate,
    })
}

impl MetricReport {
    /// Fixed-width plain-text table: one row per sample plus the mean row.
    pub fn to_table(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!(
            "{:<40} {:>8} {:>8} {:>8} {:>8} {:>8} {:>8} {:>8} {:>8} {:>8} {:>9}\n",
            "sample_id", "bleu", "rouge1", "rouge2", "rougeL", "rougeLsum", "chrf", "meteor",
            "nist", "wer", "bertscore"
        ));
        let row = |id: &str, m: &SampleMetrics| {
            format!(
                "{:<40} {:>8.4} {:>8.4} {:>8.4} {:>8.4} {:>8.4} {:>8.4} {:>8.4} {:>8.4} {:>8.4} {:>9}\n",
                id,
                m.bleu,
                m.rouge1,
                m.rouge2,
                m.rouge_l,
                m.rouge_lsum,
                m.chrf,
                m.meteor,
                m.nist,
                m.wer,
                m.bertscore
                    .map(|b| format!("{b:.4}"))
                    .unwrap_or_else(|| "-".into()),
            )
        };
        for (id, m) in &self.per_sample {
            out.push_str(&row(id, m));
        }
        out.push_str(&row("MEAN", &self.aggregate));
        out
    }
}
