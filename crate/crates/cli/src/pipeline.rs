//! Full pipeline driver: ingest, align, enrich, imageprep, dataset,
//! generate, rank, evaluate — as selected by the config. The first failing
//! stage aborts with its error; outputs of completed stages stay on disk.
//! A run manifest records the seed, version, config hash, and per-stage
//! artifact digests, so identical configs and inputs yield identical
//! digests.

use std::path::{Path, PathBuf};

use patspec_client::{EndpointConfig, GenClient, GenParams, GenRecord};
use patspec_core::corpus::TrainingSample;
use patspec_core::dataset::{write_jsonl, EmitOptions};
use patspec_core::imageprep::STANDARD_TARGETS;
use patspec_core::ingest::{ingest_dir, IngestConfig, MissingDrawing};
use patspec_core::metrics::{EmbeddingProvider, HashEmbedding};
use patspec_core::rank::RankWeights;

use crate::commands::{
    align_docs, eval_pairs, parse_format, rank_records, split_cmd_manifest, DatasetManifest,
};
use crate::config::PipelineConfig;
use crate::manifest::RunManifest;
use crate::{CliError, PipelineArgs};

pub fn run(args: PipelineArgs) -> Result<(), CliError> {
    let (mut config, config_bytes) = PipelineConfig::load(&args.config)?;
    if let Some(out_dir) = args.out_dir {
        config.pipeline.out_dir = out_dir;
    }
    if let Some(seed) = args.seed {
        config.pipeline.seed = seed;
    }
    if let Some(test_size) = args.test_size {
        config.dataset.test_size = test_size;
    }
    if let Some(max_dim) = args.max_dim {
        config.imageprep.max_dim = max_dim;
    }
    if let Some(jobs) = args.jobs {
        config.pipeline.jobs = jobs;
    }
    if config.imageprep.enabled
        && !config.imageprep.any_dim
        && !STANDARD_TARGETS.contains(&config.imageprep.max_dim)
    {
        return Err(CliError::usage(format!(
            "imageprep.max_dim {} is outside {STANDARD_TARGETS:?}; set any_dim = true to override",
            config.imageprep.max_dim
        )));
    }

    let out = config.pipeline.out_dir.clone();
    std::fs::create_dir_all(&out)?;
    let seed = config.pipeline.seed;
    let mut manifest = RunManifest::new(seed, &config_bytes);
    let manifest_path = out.join("run_manifest.json");

    // ingest
    let corpus_path = out.join("corpus.jsonl");
    let ingest_config = IngestConfig {
        missing_drawing: if config.ingest.allow_missing_images {
            MissingDrawing::Warn
        } else {
            MissingDrawing::Error
        },
    };
    let format = parse_format(&config.ingest.format)?;
    let docs = ingest_dir(&config.ingest.input_dir, format, &ingest_config)?;
    if docs.is_empty() {
        return Err(CliError::data(format!(
            "no documents found in {}",
            config.ingest.input_dir.display()
        )));
    }
    write_jsonl(&corpus_path, &docs)?;
    manifest.record_stage("ingest", &[&config.ingest.input_dir], &[&corpus_path])?;
    manifest.write(&manifest_path)?;

    // align
    let aligned_path = out.join("aligned.jsonl");
    let tuples = align_docs(&docs, config.align.min_score);
    write_jsonl(&aligned_path, &tuples)?;
    manifest.record_stage("align", &[&corpus_path], &[&aligned_path])?;
    manifest.write(&manifest_path)?;

    // enrich: emit samples + the special-token manifest
    let samples_path = out.join("samples.jsonl");
    let tokens_path = out.join("tokens.txt");
    let dataset_manifest_path = out.join("dataset_manifest.json");
    let instruction = config.enrich.instruction_text()?;
    let emit_report = patspec_core::dataset::emit_samples(
        &tuples,
        &docs,
        &EmitOptions {
            require_image: config.dataset.require_image,
        },
    )?;
    write_jsonl(&samples_path, &emit_report.samples)?;
    patspec_core::enrich::write_tokens_manifest(&tokens_path)?;
    let dataset_manifest = DatasetManifest {
        instruction: instruction.clone(),
        require_image: config.dataset.require_image,
        lora_rank: config.dataset.lora_rank,
        epochs: config.dataset.epochs,
        samples: emit_report.samples.len(),
        skipped_missing_image: emit_report.skipped_missing_image,
    };
    std::fs::write(
        &dataset_manifest_path,
        serde_json::to_string_pretty(&dataset_manifest).map_err(|e| CliError::data(e.to_string()))?,
    )?;
    manifest.record_stage(
        "enrich",
        &[&aligned_path, &corpus_path],
        &[&samples_path, &tokens_path, &dataset_manifest_path],
    )?;
    manifest.write(&manifest_path)?;

    // imageprep
    let images_dir = out.join("images");
    let imageprep_report_path = out.join("imageprep_report.jsonl");
    if config.imageprep.enabled {
        let report = patspec_core::imageprep::batch_normalize(
            &config.ingest.input_dir,
            &images_dir,
            config.imageprep.max_dim,
            config.imageprep.force_rotate,
        )?;
        write_jsonl(&imageprep_report_path, &report.outcomes)?;
        manifest.record_stage(
            "imageprep",
            &[&config.ingest.input_dir],
            &[&images_dir, &imageprep_report_path],
        )?;
        manifest.write(&manifest_path)?;
    }

    // dataset: point samples at normalized images, then split
    let samples = if config.imageprep.enabled {
        remap_image_paths(emit_report.samples, &images_dir)
    } else {
        emit_report.samples
    };
    let train_path = out.join("train.jsonl");
    let test_path = out.join("test.jsonl");
    let split_manifest_path = out.join("split_manifest.json");
    let total = samples.len();
    let (train, test) =
        patspec_core::dataset::split(samples, config.dataset.test_size, seed)?;
    write_jsonl(&train_path, &train)?;
    write_jsonl(&test_path, &test)?;
    let split_manifest = {
        let mut all = train.clone();
        all.extend(test.iter().cloned());
        debug_assert_eq!(all.len(), total);
        split_cmd_manifest(&all, &test, config.dataset.test_size, seed)
    };
    std::fs::write(
        &split_manifest_path,
        serde_json::to_string_pretty(&split_manifest).map_err(|e| CliError::data(e.to_string()))?,
    )?;
    manifest.record_stage(
        "dataset",
        &[&samples_path],
        &[&train_path, &test_path, &split_manifest_path],
    )?;
    manifest.write(&manifest_path)?;

    if config.generate.mode == "skip" {
        log::info!("generate.mode = skip; pipeline ends after the split");
        return Ok(());
    }

    // generate
    let gens_path = out.join("gens.jsonl");
    let _mock_server;
    let base_url = match config.generate.mode.as_str() {
        "mock" => {
            let server = patspec_client::mock::MockServer::start(Default::default())?;
            let url = server.base_url();
            _mock_server = server;
            url
        }
        "http" => {
            if config.generate.base_url.is_empty() {
                return Err(CliError::usage(
                    "generate.mode = http requires generate.base_url",
                ));
            }
            config.generate.base_url.clone()
        }
        other => {
            return Err(CliError::usage(format!(
                "unknown generate.mode {other:?}; expected mock, http, or skip"
            )))
        }
    };
    let mut endpoint = EndpointConfig::new(&base_url, &config.generate.model);
    endpoint.api_key_env = config.generate.api_key_env.clone();
    endpoint.timeout_secs = config.generate.timeout_secs;
    endpoint.audit_path = Some(out.join("generate_audit.jsonl"));
    let client = GenClient::new(endpoint)?;
    let params = GenParams {
        n_candidates: config.generate.n_candidates.max(1),
        max_tokens: config.generate.max_tokens,
        temperature: config.generate.temperature,
    };
    let concurrency = config.generate.concurrency.clamp(1, config.pipeline.jobs.max(1));
    let outcomes = client.generate_for_samples(&test, &instruction, &params, concurrency);
    let records: Vec<GenRecord> = outcomes
        .iter()
        .map(|(id, outcome)| GenRecord::from_outcome(id, outcome))
        .collect();
    write_jsonl(&gens_path, &records)?;
    let failures = records.iter().filter(|r| r.error.is_some()).count();
    if failures == records.len() && !records.is_empty() {
        if let Some((_, Err(e))) = outcomes.into_iter().find(|(_, o)| o.is_err()) {
            return Err(e.into());
        }
    }
    manifest.record_stage("generate", &[&test_path], &[&gens_path])?;
    manifest.write(&manifest_path)?;

    // rank
    let selected_path = out.join("selected.jsonl");
    let weights = RankWeights::parse(&config.rank.weights).map_err(CliError::usage)?;
    let selected = rank_records(&records, &test, &weights)?;
    write_jsonl(&selected_path, &selected)?;
    manifest.record_stage("rank", &[&gens_path, &test_path], &[&selected_path])?;
    manifest.write(&manifest_path)?;

    // evaluate
    let report_path = out.join("report.json");
    let table_path = out.join("report.txt");
    let pairs = eval_pairs(&selected, &test)?;
    let hash_provider = HashEmbedding::default();
    let provider: Option<&dyn EmbeddingProvider> = match config.evaluate.bertscore.as_str() {
        "hash" => Some(&hash_provider),
        "none" => None,
        other => {
            return Err(CliError::usage(format!(
                "unknown evaluate.bertscore {other:?}; expected hash or none"
            )))
        }
    };
    let report = patspec_core::metrics::evaluate_corpus(&pairs, provider)?;
    std::fs::write(
        &report_path,
        serde_json::to_string_pretty(&report).map_err(|e| CliError::data(e.to_string()))?,
    )?;
    std::fs::write(&table_path, report.to_table())?;
    manifest.record_stage(
        "evaluate",
        &[&selected_path, &test_path],
        &[&report_path, &table_path],
    )?;
    manifest.write(&manifest_path)?;
    log::info!(
        "pipeline complete: {} samples, report at {}",
        report.counts.samples,
        report_path.display()
    );
    Ok(())
}

/// Points sample image paths at the normalized copies when they exist.
fn remap_image_paths(samples: Vec<TrainingSample>, images_dir: &Path) -> Vec<TrainingSample> {
    samples
        .into_iter()
        .map(|mut s| {
            if !s.image_path.is_empty() {
                if let Some(name) = PathBuf::from(&s.image_path).file_name() {
                    let candidate = images_dir.join(name);
                    if candidate.is_file() {
                        s.image_path = candidate.display().to_string();
                    }
                }
            }
            s
        })
        .collect()
}
