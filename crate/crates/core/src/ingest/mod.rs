//! Parses raw patent full-text documents into [`PatentDocument`] values.
//! Two input formats are supported: USPTO full-text XML and a plain
//! sectioned text format for fixtures. Drawings come from sidecar image
//! files named `<doc_id>-fig<number><suffix>.<ext>` next to the document.

mod claims;
mod figures;
mod plain;
mod xml;

pub use claims::{detect_kind, segment_claim, segment_claim_features, SegmentedClaim};
pub use figures::{extract_figure_refs, figure_mentions, first_figure_ref, FigureMention};

use std::collections::BTreeSet;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::corpus::{
    BriefDescription, Claim, DrawingRef, FigureNumber, PatentDocument, SpecParagraph,
    ValidationError,
};

#[derive(Debug, Error)]
pub enum IngestError {
    #[error("malformed document {path}: {reason}")]
    MalformedDocument { path: String, reason: String },
    #[error("document {doc_id}: no image file for figure {figure}")]
    MissingDrawingFile { doc_id: String, figure: String },
    #[error("document invalid: {0}")]
    Validation(#[from] ValidationError),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// Declared input format. Sniffing is available but always logged, never
/// silent.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RawFormat {
    UsptoXml,
    PlainSections,
}

/// A raw patent file with its declared format.
#[derive(Debug, Clone)]
pub struct RawPatentFile {
    pub path: PathBuf,
    pub format: RawFormat,
    pub bytes: Vec<u8>,
}

impl RawPatentFile {
    pub fn read(path: impl Into<PathBuf>, format: RawFormat) -> Result<Self, IngestError> {
        let path = path.into();
        let bytes = std::fs::read(&path)?;
        Ok(Self { path, format, bytes })
    }

    /// Guesses the format from the leading bytes and logs the decision.
    pub fn sniff_format(path: &Path, bytes: &[u8]) -> RawFormat {
        let head = String::from_utf8_lossy(&bytes[..bytes.len().min(256)]);
        let format = if head.trim_start().starts_with('<') {
            RawFormat::UsptoXml
        } else {
            RawFormat::PlainSections
        };
        log::info!("sniffed format {:?} for {}", format, path.display());
        format
    }
}

/// What to do when a referenced figure has no sidecar image file.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MissingDrawing {
    #[default]
    Error,
    Warn,
}

#[derive(Debug, Clone, Default)]
pub struct IngestConfig {
    pub missing_drawing: MissingDrawing,
}

/// Intermediate section layout shared by both format parsers.
#[derive(Debug, Default)]
pub(crate) struct ParsedSections {
    pub doc_id: String,
    pub cpc_codes: Vec<String>,
    /// Running text of the brief-description-of-the-drawings section.
    pub brief_text: String,
    /// Specification paragraphs: explicit ordinal (if the source numbers
    /// them) and text.
    pub paragraphs: Vec<(Option<u32>, String)>,
    /// Claims as (number, text).
    pub claims: Vec<(u32, String)>,
}

/// Parses a raw patent file into a validated [`PatentDocument`].
///
/// Brief descriptions come from the drawings section, one entry per figure
/// sentence; drawings are looked up as sidecar images next to the file.
/// Deterministic: identical bytes produce identical documents.
pub fn parse_document(
    raw: &RawPatentFile,
    config: &IngestConfig,
) -> Result<PatentDocument, IngestError> {
    let sections = match raw.format {
        RawFormat::PlainSections => plain::parse_sections(raw)?,
        RawFormat::UsptoXml => xml::parse_sections(raw)?,
    };
    let base_dir = raw.path.parent().unwrap_or(Path::new("."));
    build_document(sections, base_dir, config, &raw.path)
}

fn build_document(
    sections: ParsedSections,
    base_dir: &Path,
    config: &IngestConfig,
    path: &Path,
) -> Result<PatentDocument, IngestError> {
    if sections.claims.is_empty() {
        return Err(IngestError::MalformedDocument {
            path: path.display().to_string(),
            reason: "missing claims section".into(),
        });
    }
    let doc_id = if sections.doc_id.is_empty() {
        path.file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_default()
    } else {
        sections.doc_id
    };

    let mut claims = Vec::new();
    for (number, text) in &sections.claims {
        let (kind, parent) = detect_kind(text);
        let features = segment_claim_features(*number, text);
        claims.push(Claim::new(*number, kind, parent, text, features)?);
    }

    let mut paragraphs = Vec::new();
    let mut next_ordinal = 1u32;
    for (explicit, text) in &sections.paragraphs {
        let ordinal = explicit.unwrap_or(next_ordinal);
        next_ordinal = ordinal + 1;
        let figure_refs = extract_figure_refs(text);
        let component_pairs = crate::align::extract_component_pairs(text);
        paragraphs.push(SpecParagraph::new(ordinal, text, figure_refs, component_pairs)?);
    }

    let entries = brief_entries(&sections.brief_text);
    let mut brief_descriptions = Vec::new();
    let mut drawings = Vec::new();
    for (i, (text, refs)) in entries.into_iter().enumerate() {
        let lookup_fig = refs.iter().next().copied();
        let image_path = match lookup_fig {
            Some(fig) => match find_sidecar_image(base_dir, &doc_id, fig) {
                Some(p) => p.display().to_string(),
                None => match config.missing_drawing {
                    MissingDrawing::Error => {
                        return Err(IngestError::MissingDrawingFile {
                            doc_id,
                            figure: fig.canonical(),
                        })
                    }
                    MissingDrawing::Warn => {
                        log::warn!("{doc_id}: no image file for figure {fig}, leaving path empty");
                        String::new()
                    }
                },
            },
            None => String::new(),
        };
        brief_descriptions.push(BriefDescription::new(i, &text, refs.clone())?);
        drawings.push(DrawingRef {
            drawing_index: i,
            image_path,
            figure_refs: refs,
            component_pairs: Vec::new(),
        });
    }

    Ok(PatentDocument::new(
        &doc_id,
        claims,
        paragraphs,
        drawings,
        brief_descriptions,
        sections.cpc_codes,
    )?)
}

/// Splits the brief-description section into one entry per figure sentence.
/// Sentences without figure references continue the current entry; leading
/// prose before the first figure sentence is dropped.
fn brief_entries(brief_text: &str) -> Vec<(String, BTreeSet<FigureNumber>)> {
    let mut entries: Vec<(String, BTreeSet<FigureNumber>)> = Vec::new();
    for sentence in crate::text::split_sentences(brief_text) {
        let refs = extract_figure_refs(&sentence);
        if !refs.is_empty() {
            entries.push((sentence, refs));
        } else if let Some(last) = entries.last_mut() {
            last.0.push(' ');
            last.0.push_str(&sentence);
        }
    }
    entries
}

const IMAGE_EXTENSIONS: &[&str] = &["png", "jpg", "jpeg", "tif", "tiff"];

/// Looks for `<doc_id>-fig<canonical>.<ext>` next to the document; the
/// suffix letter is tried in lower case first, then upper.
fn find_sidecar_image(base_dir: &Path, doc_id: &str, fig: FigureNumber) -> Option<PathBuf> {
    let mut stems = vec![format!("{}-fig{}", doc_id, fig.canonical().to_lowercase())];
    if fig.suffix.is_some() {
        stems.push(format!("{}-fig{}", doc_id, fig.canonical()));
    }
    for stem in stems {
        for ext in IMAGE_EXTENSIONS {
            let candidate = base_dir.join(format!("{stem}.{ext}"));
            if candidate.is_file() {
                return Some(candidate);
            }
        }
    }
    None
}

/// Parses every file with a matching extension under `dir` (sorted by file
/// name) into documents. `.txt` files are plain-sections, `.xml` files are
/// USPTO XML; the declared `format` restricts which are accepted.
pub fn ingest_dir(
    dir: &Path,
    format: RawFormat,
    config: &IngestConfig,
) -> Result<Vec<PatentDocument>, IngestError> {
    let mut paths: Vec<PathBuf> = std::fs::read_dir(dir)?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| {
            let ext = p.extension().and_then(|e| e.to_str()).unwrap_or("");
            match format {
                RawFormat::PlainSections => ext == "txt",
                RawFormat::UsptoXml => ext == "xml",
            }
        })
        .collect();
    paths.sort();
    let mut docs = Vec::new();
    for path in paths {
        let raw = RawPatentFile::read(&path, format)?;
        docs.push(parse_document(&raw, config)?);
    }
    Ok(docs)
}
