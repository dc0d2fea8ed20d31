//! Pipeline configuration: a plain TOML file with per-stage sections.
//! Every value has a default; CLI flags override file values.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::CliError;

#[derive(Debug, Clone, Serialize, Deserialize, Default)]
#[serde(default)]
pub struct PipelineConfig {
    pub pipeline: PipelineSection,
    pub ingest: IngestSection,
    pub align: AlignSection,
    pub enrich: EnrichSection,
    pub imageprep: ImageprepSection,
    pub dataset: DatasetSection,
    pub generate: GenerateSection,
    pub rank: RankSection,
    pub evaluate: EvaluateSection,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default)]
pub struct PipelineSection {
    pub out_dir: PathBuf,
    pub seed: u64,
    pub jobs: usize,
}

impl Default for PipelineSection {
    fn default() -> Self {
        Self {
            out_dir: PathBuf::from("run"),
            seed: 42,
            jobs: 4,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default)]
pub struct IngestSection {
    /// "plain" or "uspto-xml"
    pub format: String,
    pub input_dir: PathBuf,
    pub allow_missing_images: bool,
}

impl Default for IngestSection {
    fn default() -> Self {
        Self {
            format: "plain".into(),
            input_dir: PathBuf::from("corpus"),
            allow_missing_images: false,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default)]
pub struct AlignSection {
    pub min_score: f64,
}

impl Default for AlignSection {
    fn default() -> Self {
        Self { min_score: 0.0 }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default)]
pub struct EnrichSection {
    /// Inline instruction text; `instruction_file` wins when both are set.
    pub instruction: String,
    pub instruction_file: Option<PathBuf>,
}

impl Default for EnrichSection {
    fn default() -> Self {
        Self {
            instruction: "Draft the next specification paragraph for the claim feature, using \
                          the drawing, its description, and the listed components."
                .into(),
            instruction_file: None,
        }
    }
}

impl EnrichSection {
    pub fn instruction_text(&self) -> Result<String, CliError> {
        match &self.instruction_file {
            Some(path) => std::fs::read_to_string(path)
                .map(|s| s.trim_end().to_string())
                .map_err(|e| CliError::data(format!("instruction file {}: {e}", path.display()))),
            None => Ok(self.instruction.clone()),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default)]
pub struct ImageprepSection {
    pub enabled: bool,
    pub max_dim: u32,
    pub force_rotate: Option<u16>,
    /// Allow a max_dim outside the standard ablation set.
    pub any_dim: bool,
}

impl Default for ImageprepSection {
    fn default() -> Self {
        Self {
            enabled: true,
            max_dim: 4096,
            force_rotate: None,
            any_dim: false,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default)]
pub struct DatasetSection {
    pub test_size: usize,
    pub require_image: bool,
    /// Pass-through metadata for downstream trainers.
    pub lora_rank: Option<u32>,
    pub epochs: Option<u32>,
}

impl Default for DatasetSection {
    fn default() -> Self {
        Self {
            test_size: 1000,
            require_image: false,
            lora_rank: None,
            epochs: None,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default)]
pub struct GenerateSection {
    /// "mock" (bundled offline endpoint), "http", or "skip".
    pub mode: String,
    pub base_url: String,
    pub model: String,
    pub api_key_env: Option<String>,
    pub n_candidates: u32,
    pub max_tokens: Option<u32>,
    pub temperature: Option<f64>,
    pub concurrency: usize,
    pub timeout_secs: u64,
}

impl Default for GenerateSection {
    fn default() -> Self {
        Self {
            mode: "mock".into(),
            base_url: String::new(),
            model: "mock-model".into(),
            api_key_env: None,
            n_candidates: 3,
            max_tokens: None,
            temperature: None,
            concurrency: 2,
            timeout_secs: 30,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default)]
pub struct RankSection {
    /// "claim,names,numbers,figure" weights.
    pub weights: String,
}

impl Default for RankSection {
    fn default() -> Self {
        Self {
            weights: "0.25,0.25,0.25,0.25".into(),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default)]
pub struct EvaluateSection {
    /// "hash" for the deterministic offline provider, "none" to skip
    /// BERTScore.
    pub bertscore: String,
}

impl Default for EvaluateSection {
    fn default() -> Self {
        Self { bertscore: "hash".into() }
    }
}

impl PipelineConfig {
    pub fn load(path: &Path) -> Result<(Self, Vec<u8>), CliError> {
        let bytes = std::fs::read(path)
            .map_err(|e| CliError::usage(format!("config {}: {e}", path.display())))?;
        let text = String::from_utf8_lossy(&bytes);
        let config: PipelineConfig = toml::from_str(&text)
            .map_err(|e| CliError::usage(format!("config {}: {e}", path.display())))?;
        Ok((config, bytes))
    }
}
