//! Command-line entry point wiring all pipeline stages.
//!
//! Exit codes: 0 success, 1 usage/config error, 2 data error, 3 endpoint
//! error.

mod commands;
mod config;
mod manifest;
mod pipeline;

use std::fmt;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Data(String),
    Endpoint(String),
}

impl CliError {
    pub fn usage(msg: impl Into<String>) -> Self {
        Self::Usage(msg.into())
    }
    pub fn data(msg: impl Into<String>) -> Self {
        Self::Data(msg.into())
    }
    pub fn endpoint(msg: impl Into<String>) -> Self {
        Self::Endpoint(msg.into())
    }
    pub fn exit_code(&self) -> i32 {
        match self {
            Self::Usage(_) => 1,
            Self::Data(_) => 2,
            Self::Endpoint(_) => 3,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Usage(m) | Self::Data(m) | Self::Endpoint(m) => write!(f, "{m}"),
        }
    }
}

impl From<patspec_core::dataset::DatasetError> for CliError {
    fn from(e: patspec_core::dataset::DatasetError) -> Self {
        Self::Data(e.to_string())
    }
}

impl From<patspec_core::ingest::IngestError> for CliError {
    fn from(e: patspec_core::ingest::IngestError) -> Self {
        Self::Data(e.to_string())
    }
}

impl From<patspec_core::imageprep::ImagePrepError> for CliError {
    fn from(e: patspec_core::imageprep::ImagePrepError) -> Self {
        Self::Data(e.to_string())
    }
}

impl From<patspec_core::metrics::MetricsError> for CliError {
    fn from(e: patspec_core::metrics::MetricsError) -> Self {
        Self::Data(e.to_string())
    }
}

impl From<patspec_client::ClientError> for CliError {
    fn from(e: patspec_client::ClientError) -> Self {
        match e {
            patspec_client::ClientError::EndpointUnreachable { .. }
            | patspec_client::ClientError::Timeout { .. }
            | patspec_client::ClientError::BadResponse { .. } => Self::Endpoint(e.to_string()),
            other => Self::Data(other.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        Self::Data(e.to_string())
    }
}

#[derive(Parser)]
#[command(
    name = "patspec",
    version,
    about = "Patent corpus pipeline: ingest, align, enrich, image prep, dataset emission, \
             generation, ranking, and evaluation"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Parse raw patent files into a corpus.jsonl
    Ingest(IngestArgs),
    /// Align paragraphs to drawings and claim features
    Align(AlignArgs),
    /// Emit enriched training samples from aligned tuples
    Enrich(EnrichArgs),
    /// Normalize drawing images (orientation + max-dimension rescale)
    Imageprep(ImageprepArgs),
    /// Dataset operations: emit samples, split train/test
    Dataset(DatasetArgs),
    /// Send samples to a generation endpoint and collect candidates
    Generate(GenerateArgs),
    /// Rank candidate generations and select the top one per sample
    Rank(RankArgs),
    /// Score selected outputs against references with the metric suite
    Evaluate(EvaluateArgs),
    /// Write the special-token inventory manifest
    Tokens(TokensArgs),
    /// Run the full pipeline from a TOML config
    Pipeline(PipelineArgs),
}

#[derive(Args)]
struct IngestArgs {
    /// Input format: plain | uspto-xml
    #[arg(long, default_value = "plain")]
    format: String,
    /// Directory of raw patent files
    #[arg(long = "in")]
    input: PathBuf,
    #[arg(long)]
    out: PathBuf,
    /// Downgrade missing drawing files to warnings
    #[arg(long)]
    allow_missing_images: bool,
}

#[derive(Args)]
struct AlignArgs {
    #[arg(long = "in")]
    input: PathBuf,
    #[arg(long)]
    out: PathBuf,
    /// Drop tuples whose combined score falls below this
    #[arg(long, default_value_t = 0.0)]
    min_score: f64,
}

#[derive(Args)]
struct EnrichArgs {
    /// aligned.jsonl from the align stage
    #[arg(long = "in")]
    input: PathBuf,
    /// corpus.jsonl the tuples refer to
    #[arg(long)]
    corpus: PathBuf,
    #[arg(long)]
    out: PathBuf,
    #[arg(long)]
    tokens_manifest: Option<PathBuf>,
    #[arg(long)]
    instruction_file: Option<PathBuf>,
    #[arg(long)]
    require_image: bool,
    /// Dataset manifest path (instruction + pass-through metadata)
    #[arg(long)]
    manifest: Option<PathBuf>,
    #[arg(long)]
    lora_rank: Option<u32>,
    #[arg(long)]
    epochs: Option<u32>,
}

#[derive(Args)]
struct ImageprepArgs {
    #[arg(long = "in")]
    input: PathBuf,
    #[arg(long)]
    out: PathBuf,
    #[arg(long, default_value_t = 4096)]
    max_dim: u32,
    /// Rotate all inputs by 0/90/180/270 degrees instead of the embedded flag
    #[arg(long)]
    force_rotate: Option<u16>,
    /// Where to write the per-file JSONL report
    #[arg(long)]
    report: Option<PathBuf>,
    /// Allow max-dim values outside {256, 512, 1024, 2048, 4096}
    #[arg(long)]
    any_dim: bool,
}

#[derive(Args)]
struct DatasetArgs {
    #[command(subcommand)]
    command: DatasetCommand,
}

#[derive(Subcommand)]
enum DatasetCommand {
    /// Emit enriched samples (same machinery as `enrich`)
    Emit(EnrichArgs),
    /// Seeded train/test split
    Split(SplitArgs),
}

#[derive(Args)]
struct SplitArgs {
    #[arg(long = "in")]
    input: PathBuf,
    #[arg(long)]
    train: PathBuf,
    #[arg(long)]
    test: PathBuf,
    #[arg(long, default_value_t = 1000)]
    test_size: usize,
    #[arg(long)]
    seed: u64,
    #[arg(long)]
    manifest: Option<PathBuf>,
}

#[derive(Args)]
struct GenerateArgs {
    #[arg(long)]
    samples: PathBuf,
    #[arg(long)]
    out: PathBuf,
    /// Candidates per sample
    #[arg(long, default_value_t = 1)]
    n: u32,
    /// Endpoint base URL (e.g. http://host:8000/v1); omit with --mock
    #[arg(long)]
    endpoint_url: Option<String>,
    #[arg(long, default_value = "mock-model")]
    model: String,
    /// Use the bundled deterministic mock endpoint
    #[arg(long)]
    mock: bool,
    #[arg(long, default_value_t = 2)]
    concurrency: usize,
    #[arg(long)]
    instruction_file: Option<PathBuf>,
    #[arg(long)]
    max_tokens: Option<u32>,
    #[arg(long)]
    temperature: Option<f64>,
    /// Environment variable holding the API key
    #[arg(long)]
    api_key_env: Option<String>,
    /// Append request/response audit records here
    #[arg(long)]
    audit: Option<PathBuf>,
}

#[derive(Args)]
struct RankArgs {
    #[arg(long)]
    gens: PathBuf,
    #[arg(long)]
    samples: PathBuf,
    #[arg(long)]
    out: PathBuf,
    /// Weights claim,names,numbers,figure (default 0.25 each)
    #[arg(long)]
    weights: Option<String>,
}

#[derive(Args)]
struct EvaluateArgs {
    /// selected.jsonl (sample_id + text)
    #[arg(long)]
    hyp: PathBuf,
    /// test.jsonl with reference samples
    #[arg(long = "ref")]
    reference: PathBuf,
    #[arg(long)]
    out: PathBuf,
    /// Plain-text table output
    #[arg(long)]
    table: Option<PathBuf>,
    /// Comma-separated subset of metrics to keep in the report
    #[arg(long)]
    metrics: Option<String>,
    /// Use the deterministic hash embedding provider for BERTScore
    #[arg(long)]
    hash_embeddings: bool,
    /// OpenAI-compatible embeddings endpoint for BERTScore
    #[arg(long)]
    embedding_endpoint: Option<String>,
    #[arg(long, default_value = "text-embedding")]
    embedding_model: String,
    #[arg(long)]
    embedding_api_key_env: Option<String>,
}

#[derive(Args)]
struct TokensArgs {
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct PipelineArgs {
    #[arg(long)]
    config: PathBuf,
    /// Override [pipeline].out_dir
    #[arg(long)]
    out_dir: Option<PathBuf>,
    /// Override [pipeline].seed
    #[arg(long)]
    seed: Option<u64>,
    /// Override [dataset].test_size
    #[arg(long)]
    test_size: Option<usize>,
    /// Override [imageprep].max_dim
    #[arg(long)]
    max_dim: Option<u32>,
    /// Override [pipeline].jobs
    #[arg(long)]
    jobs: Option<usize>,
}

fn main() {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("info"))
        .format_timestamp(None)
        .init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            std::process::exit(code);
        }
    };
    if let Err(e) = run(cli) {
        eprintln!("error: {e}");
        std::process::exit(e.exit_code());
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Ingest(args) => commands::ingest(args),
        Command::Align(args) => commands::align(args),
        Command::Enrich(args) => commands::emit(args),
        Command::Imageprep(args) => commands::imageprep(args),
        Command::Dataset(args) => match args.command {
            DatasetCommand::Emit(args) => commands::emit(args),
            DatasetCommand::Split(args) => commands::split(args),
        },
        Command::Generate(args) => commands::generate(args),
        Command::Rank(args) => commands::rank(args),
        Command::Evaluate(args) => commands::evaluate(args),
        Command::Tokens(args) => commands::tokens(args),
        Command::Pipeline(args) => pipeline::run(args),
    }
}
