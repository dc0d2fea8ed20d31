//! One handler per subcommand. Each reads/writes the JSONL artifacts named
//! in its arguments; the `pipeline` module composes the same handlers.

use std::collections::HashMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use patspec_client::{EndpointConfig, GenClient, GenParams, GenRecord};
use patspec_core::align::{build_aligned_tuples, AlignedTuple};
use patspec_core::corpus::{PatentDocument, TrainingSample};
use patspec_core::dataset::{
    emit_samples, read_jsonl, read_jsonl_raw, write_jsonl, EmitOptions, SplitManifest,
};
use patspec_core::imageprep::{batch_normalize, BatchReport, STANDARD_TARGETS};
use patspec_core::ingest::{ingest_dir, IngestConfig, MissingDrawing, RawFormat};
use patspec_core::metrics::{evaluate_corpus, EmbeddingProvider, EvalPair, HashEmbedding};
use patspec_core::rank::{rank_candidates, select_top, RankScore, RankWeights};

use crate::{
    AlignArgs, CliError, EnrichArgs, EvaluateArgs, GenerateArgs, ImageprepArgs, IngestArgs,
    RankArgs, SplitArgs, TokensArgs,
};

/// One line of selected.jsonl: the chosen candidate for a sample.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SelectedRecord {
    pub sample_id: String,
    pub text: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub score: Option<RankScore>,
}

/// Dataset manifest: the instruction and pass-through trainer metadata
/// recorded next to the emitted samples.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DatasetManifest {
    pub instruction: String,
    pub require_image: bool,
    pub lora_rank: Option<u32>,
    pub epochs: Option<u32>,
    pub samples: usize,
    pub skipped_missing_image: usize,
}

pub fn parse_format(format: &str) -> Result<RawFormat, CliError> {
    match format {
        "plain" | "plain-sections" => Ok(RawFormat::PlainSections),
        "uspto-xml" | "xml" => Ok(RawFormat::UsptoXml),
        other => Err(CliError::usage(format!(
            "unknown format {other:?}; expected plain or uspto-xml"
        ))),
    }
}

pub fn ingest(args: IngestArgs) -> Result<(), CliError> {
    let format = parse_format(&args.format)?;
    let config = IngestConfig {
        missing_drawing: if args.allow_missing_images {
            MissingDrawing::Warn
        } else {
            MissingDrawing::Error
        },
    };
    let docs = ingest_dir(&args.input, format, &config)?;
    write_jsonl(&args.out, &docs)?;
    log::info!("ingested {} documents into {}", docs.len(), args.out.display());
    Ok(())
}

pub fn align_docs(docs: &[PatentDocument], min_score: f64) -> Vec<AlignedTuple> {
    docs.iter()
        .flat_map(build_aligned_tuples)
        .filter(|t| t.score.combined >= min_score)
        .collect()
}

pub fn align(args: AlignArgs) -> Result<(), CliError> {
    let docs: Vec<PatentDocument> = read_jsonl(&args.input)?;
    let tuples = align_docs(&docs, args.min_score);
    write_jsonl(&args.out, &tuples)?;
    log::info!("aligned {} tuples into {}", tuples.len(), args.out.display());
    Ok(())
}

pub fn emit(args: EnrichArgs) -> Result<(), CliError> {
    let tuples: Vec<AlignedTuple> = read_jsonl(&args.input)?;
    let docs: Vec<PatentDocument> = read_jsonl(&args.corpus)?;
    let instruction = match &args.instruction_file {
        Some(path) => std::fs::read_to_string(path)
            .map_err(|e| CliError::data(format!("instruction file {}: {e}", path.display())))?
            .trim_end()
            .to_string(),
        None => crate::config::EnrichSection::default().instruction,
    };
    let report = emit_samples(
        &tuples,
        &docs,
        &EmitOptions {
            require_image: args.require_image,
        },
    )?;
    write_jsonl(&args.out, &report.samples)?;
    if let Some(path) = &args.tokens_manifest {
        patspec_core::enrich::write_tokens_manifest(path)?;
    }
    if let Some(path) = &args.manifest {
        let manifest = DatasetManifest {
            instruction,
            require_image: args.require_image,
            lora_rank: args.lora_rank,
            epochs: args.epochs,
            samples: report.samples.len(),
            skipped_missing_image: report.skipped_missing_image,
        };
        std::fs::write(
            path,
            serde_json::to_string_pretty(&manifest)
                .map_err(|e| CliError::data(e.to_string()))?,
        )?;
    }
    log::info!(
        "emitted {} samples ({} skipped) into {}",
        report.samples.len(),
        report.skipped_missing_image,
        args.out.display()
    );
    Ok(())
}

pub fn imageprep(args: ImageprepArgs) -> Result<(), CliError> {
    if !args.any_dim && !STANDARD_TARGETS.contains(&args.max_dim) {
        return Err(CliError::usage(format!(
            "max-dim {} is outside {STANDARD_TARGETS:?}; pass --any-dim to override",
            args.max_dim
        )));
    }
    let report = batch_normalize(&args.input, &args.out, args.max_dim, args.force_rotate)?;
    write_imageprep_report(&report, args.report.as_deref())?;
    log::info!(
        "normalized {} images ({} already normalized, {} failed)",
        report.ok,
        report.already_normalized,
        report.failed
    );
    Ok(())
}

pub fn write_imageprep_report(
    report: &BatchReport,
    path: Option<&Path>,
) -> Result<(), CliError> {
    if let Some(path) = path {
        write_jsonl(path, &report.outcomes)?;
    }
    Ok(())
}

pub fn split_cmd_manifest(
    samples: &[TrainingSample],
    test: &[TrainingSample],
    test_size: usize,
    seed: u64,
) -> SplitManifest {
    SplitManifest {
        seed,
        test_size,
        total: samples.len(),
        train_count: samples.len() - test.len(),
        test_count: test.len(),
        test_ids: test.iter().map(|s| s.sample_id.clone()).collect(),
    }
}

pub fn split(args: SplitArgs) -> Result<(), CliError> {
    let samples: Vec<TrainingSample> = read_jsonl(&args.input)?;
    let total = samples.len();
    let (train, test) = patspec_core::dataset::split(samples, args.test_size, args.seed)?;
    write_jsonl(&args.train, &train)?;
    write_jsonl(&args.test, &test)?;
    if let Some(path) = &args.manifest {
        let manifest = SplitManifest {
            seed: args.seed,
            test_size: args.test_size,
            total,
            train_count: train.len(),
            test_count: test.len(),
            test_ids: test.iter().map(|s| s.sample_id.clone()).collect(),
        };
        std::fs::write(
            path,
            serde_json::to_string_pretty(&manifest)
                .map_err(|e| CliError::data(e.to_string()))?,
        )?;
    }
    log::info!("split {} samples into {} train / {} test", total, train.len(), test.len());
    Ok(())
}

pub fn generate(args: GenerateArgs) -> Result<(), CliError> {
    let samples: Vec<TrainingSample> = read_jsonl(&args.samples)?;
    let instruction = match &args.instruction_file {
        Some(path) => std::fs::read_to_string(path)
            .map_err(|e| CliError::data(format!("instruction file {}: {e}", path.display())))?
            .trim_end()
            .to_string(),
        None => crate::config::EnrichSection::default().instruction,
    };
    let _mock_server;
    let base_url = if args.mock {
        let server = patspec_client::mock::MockServer::start(Default::default())?;
        let url = server.base_url();
        _mock_server = server;
        url
    } else {
        args.endpoint_url.clone().ok_or_else(|| {
            CliError::usage("either --endpoint-url or --mock is required")
        })?
    };
    let mut config = EndpointConfig::new(&base_url, &args.model);
    config.api_key_env = args.api_key_env.clone();
    config.audit_path = args.audit.clone();
    let client = GenClient::new(config)?;
    let params = GenParams {
        n_candidates: args.n.max(1),
        max_tokens: args.max_tokens,
        temperature: args.temperature,
    };
    let outcomes = client.generate_for_samples(&samples, &instruction, &params, args.concurrency);
    let records: Vec<GenRecord> = outcomes
        .iter()
        .map(|(id, outcome)| GenRecord::from_outcome(id, outcome))
        .collect();
    write_jsonl(&args.out, &records)?;
    // a fully failed run is an endpoint error, partial failures are recorded
    let failures = records.iter().filter(|r| r.error.is_some()).count();
    if failures == records.len() && !records.is_empty() {
        if let Some((_, Err(e))) = outcomes.into_iter().find(|(_, o)| o.is_err()) {
            return Err(e.into());
        }
    }
    log::info!(
        "generated candidates for {} samples ({failures} failures) into {}",
        records.len(),
        args.out.display()
    );
    Ok(())
}

pub fn rank_records(
    records: &[GenRecord],
    samples: &[TrainingSample],
    weights: &RankWeights,
) -> Result<Vec<SelectedRecord>, CliError> {
    let by_id: HashMap<&str, &TrainingSample> =
        samples.iter().map(|s| (s.sample_id.as_str(), s)).collect();
    let mut selected = Vec::new();
    for record in records {
        if let Some(error) = &record.error {
            log::warn!("skipping {}: generation failed: {error}", record.sample_id);
            continue;
        }
        let sample = by_id.get(record.sample_id.as_str()).ok_or_else(|| {
            CliError::data(format!("no sample for generated id {}", record.sample_id))
        })?;
        let ranked = rank_candidates(&record.candidates, sample, weights)
            .map_err(|e| CliError::data(format!("{}: {e}", record.sample_id)))?;
        let top = select_top(&ranked).map_err(|e| CliError::data(e.to_string()))?;
        selected.push(SelectedRecord {
            sample_id: record.sample_id.clone(),
            text: top.to_string(),
            score: Some(ranked[0].score),
        });
    }
    Ok(selected)
}

pub fn rank(args: RankArgs) -> Result<(), CliError> {
    let records: Vec<GenRecord> = read_jsonl_raw(&args.gens)?;
    let samples: Vec<TrainingSample> = read_jsonl(&args.samples)?;
    let weights = match &args.weights {
        Some(spec) => RankWeights::parse(spec).map_err(CliError::usage)?,
        None => RankWeights::default(),
    };
    let selected = rank_records(&records, &samples, &weights)?;
    write_jsonl(&args.out, &selected)?;
    log::info!("selected {} outputs into {}", selected.len(), args.out.display());
    Ok(())
}

pub fn eval_pairs(
    selected: &[SelectedRecord],
    references: &[TrainingSample],
) -> Result<Vec<EvalPair>, CliError> {
    let by_id: HashMap<&str, &TrainingSample> =
        references.iter().map(|s| (s.sample_id.as_str(), s)).collect();
    selected
        .iter()
        .map(|s| {
            let reference = by_id.get(s.sample_id.as_str()).ok_or_else(|| {
                CliError::data(format!("no reference for sample {}", s.sample_id))
            })?;
            Ok(EvalPair {
                sample_id: s.sample_id.clone(),
                hypothesis: s.text.clone(),
                reference: reference.target_text.clone(),
            })
        })
        .collect()
}

const METRIC_KEYS: &[&str] = &[
    "bleu", "rouge1", "rouge2", "rougeL", "rougeLsum", "chrf", "meteor", "nist", "wer",
    "bertscore",
];

fn filter_report(
    report: &patspec_core::metrics::MetricReport,
    keep: &[String],
) -> Result<serde_json::Value, CliError> {
    let mut value = serde_json::to_value(report).map_err(|e| CliError::data(e.to_string()))?;
    let keep: Vec<&str> = keep.iter().map(String::as_str).collect();
    let prune = |obj: &mut serde_json::Value| {
        if let Some(map) = obj.as_object_mut() {
            map.retain(|k, _| keep.contains(&k.as_str()));
        }
    };
    if let Some(per_sample) = value["per_sample"].as_object_mut() {
        for (_, metrics) in per_sample.iter_mut() {
            prune(metrics);
        }
    }
    prune(&mut value["aggregate"]);
    Ok(value)
}

pub fn evaluate(args: EvaluateArgs) -> Result<(), CliError> {
    let selected: Vec<SelectedRecord> = read_jsonl_raw(&args.hyp)?;
    let references: Vec<TrainingSample> = read_jsonl(&args.reference)?;
    let pairs = eval_pairs(&selected, &references)?;
    let endpoint_provider = match &args.embedding_endpoint {
        Some(url) => {
            let mut config = EndpointConfig::new(url, &args.embedding_model);
            config.api_key_env = args.embedding_api_key_env.clone();
            Some(
                patspec_client::embed::EndpointEmbedding::new(config)
                    .map_err(|e| CliError::endpoint(e.to_string()))?,
            )
        }
        None => None,
    };
    let hash_provider = HashEmbedding::default();
    let provider: Option<&dyn EmbeddingProvider> = match (&endpoint_provider, args.hash_embeddings)
    {
        (Some(p), _) => Some(p),
        (None, true) => Some(&hash_provider),
        (None, false) => None,
    };
    let report = evaluate_corpus(&pairs, provider)?;
    let json = match &args.metrics {
        Some(list) => {
            let keep: Vec<String> = list.split(',').map(|m| m.trim().to_string()).collect();
            for m in &keep {
                if !METRIC_KEYS.contains(&m.as_str()) {
                    return Err(CliError::usage(format!(
                        "unknown metric {m:?}; known: {METRIC_KEYS:?}"
                    )));
                }
            }
            serde_json::to_string_pretty(&filter_report(&report, &keep)?)
                .map_err(|e| CliError::data(e.to_string()))?
        }
        None => {
            serde_json::to_string_pretty(&report).map_err(|e| CliError::data(e.to_string()))?
        }
    };
    std::fs::write(&args.out, json)?;
    if let Some(table_path) = &args.table {
        std::fs::write(table_path, report.to_table())?;
    }
    log::info!(
        "evaluated {} samples; aggregate bleu {:.4}, wer {:.4}",
        report.counts.samples,
        report.aggregate.bleu,
        report.aggregate.wer
    );
    Ok(())
}

pub fn tokens(args: TokensArgs) -> Result<(), CliError> {
    patspec_core::enrich::write_tokens_manifest(&args.out)?;
    log::info!("wrote token manifest to {}", args.out.display());
    Ok(())
}
