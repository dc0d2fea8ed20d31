//! Drawing preprocessing: orientation correction (embedded orientation
//! flag, with a manual override) and aspect-preserving rescale so the
//! maximum of height and width equals the target exactly, both up- and
//! down-scaling. Area-averaging is used to shrink (line art keeps its
//! strokes best that way) and bilinear to enlarge; the filter choice is
//! recorded in the emitted metadata.

use std::path::{Path, PathBuf};

use image::imageops::FilterType;
use image::metadata::Orientation;
use image::{DynamicImage, ImageDecoder, ImageReader};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ImagePrepError {
    #[error("cannot decode {path}: {reason}")]
    UndecodableImage { path: String, reason: String },
    #[error("image {path} has a zero dimension")]
    ZeroDimension { path: String },
    #[error("target dimension must be positive")]
    ZeroTarget,
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// The resolutions exercised by the resolution ablation; other values
/// require an explicit override.
pub const STANDARD_TARGETS: &[u32] = &[256, 512, 1024, 2048, 4096];

/// Per-file normalization record.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ImageMeta {
    pub path_in: String,
    pub path_out: String,
    pub width: u32,
    pub height: u32,
    pub scale: f64,
    pub rotation: String,
    pub filter: String,
    pub already_normalized: bool,
}

/// Aspect-preserving dimensions with max(w, h) == target exactly.
pub fn compute_target_dims(width: u32, height: u32, target_max: u32) -> (u32, u32) {
    if width >= height {
        let h = ((height as f64 * target_max as f64 / width as f64).round() as u32).max(1);
        (target_max, h)
    } else {
        let w = ((width as f64 * target_max as f64 / height as f64).round() as u32).max(1);
        (w, target_max)
    }
}

fn orientation_label(orientation: Orientation) -> &'static str {
    match orientation {
        Orientation::NoTransforms => "none",
        Orientation::Rotate90 => "rotate90",
        Orientation::Rotate180 => "rotate180",
        Orientation::Rotate270 => "rotate270",
        Orientation::FlipHorizontal => "flip-horizontal",
        Orientation::FlipVertical => "flip-vertical",
        Orientation::Rotate90FlipH => "rotate90-flip",
        Orientation::Rotate270FlipH => "rotate270-flip",
    }
}

/// Rotates to the correct orientation (embedded flag, or the explicit
/// `force_rotate` degrees) and rescales so max(H, W) == `target_max`.
/// Returns the final geometry; inputs already in shape are copied through
/// untouched and flagged `already_normalized`.
pub fn normalize_image(
    path_in: &Path,
    path_out: &Path,
    target_max: u32,
    force_rotate: Option<u16>,
) -> Result<ImageMeta, ImagePrepError> {
    if target_max == 0 {
        return Err(ImagePrepError::ZeroTarget);
    }
    let undecodable = |reason: String| ImagePrepError::UndecodableImage {
        path: path_in.display().to_string(),
        reason,
    };
    let reader = ImageReader::open(path_in)?
        .with_guessed_format()
        .map_err(|e| undecodable(e.to_string()))?;
    let mut decoder = reader.into_decoder().map_err(|e| undecodable(e.to_string()))?;
    let embedded = decoder.orientation().unwrap_or(Orientation::NoTransforms);
    let mut img = DynamicImage::from_decoder(decoder).map_err(|e| undecodable(e.to_string()))?;

    let orientation = match force_rotate {
        Some(0) => Orientation::NoTransforms,
        Some(90) => Orientation::Rotate90,
        Some(180) => Orientation::Rotate180,
        Some(270) => Orientation::Rotate270,
        Some(other) => {
            log::warn!("unsupported rotation {other}, ignoring");
            embedded
        }
        None => embedded,
    };
    let rotated = orientation != Orientation::NoTransforms;
    img.apply_orientation(orientation);
    let label = if force_rotate.is_some() {
        format!("force:{}", orientation_label(orientation))
    } else {
        orientation_label(orientation).to_string()
    };

    let (w, h) = (img.width(), img.height());
    if w == 0 || h == 0 {
        return Err(ImagePrepError::ZeroDimension {
            path: path_in.display().to_string(),
        });
    }
    let (tw, th) = compute_target_dims(w, h, target_max);
    let scale = target_max as f64 / w.max(h) as f64;

    if (tw, th) == (w, h) && !rotated {
        if path_in != path_out {
            std::fs::copy(path_in, path_out)?;
        }
        return Ok(ImageMeta {
            path_in: path_in.display().to_string(),
            path_out: path_out.display().to_string(),
            width: w,
            height: h,
            scale: 1.0,
            rotation: label,
            filter: "none".into(),
            already_normalized: true,
        });
    }

    let (resized, filter) = if (tw, th) == (w, h) {
        (img, "none")
    } else if target_max < w.max(h) {
        (img.thumbnail_exact(tw, th), "box")
    } else {
        (img.resize_exact(tw, th, FilterType::Triangle), "bilinear")
    };
    if let Some(parent) = path_out.parent() {
        std::fs::create_dir_all(parent)?;
    }
    resized
        .save(path_out)
        .map_err(|e| undecodable(format!("encode failed: {e}")))?;
    Ok(ImageMeta {
        path_in: path_in.display().to_string(),
        path_out: path_out.display().to_string(),
        width: tw,
        height: th,
        scale,
        rotation: label,
        filter: filter.into(),
        already_normalized: false,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BatchStatus {
    Ok,
    AlreadyNormalized,
    Failed,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BatchOutcome {
    pub path: String,
    pub status: BatchStatus,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub meta: Option<ImageMeta>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BatchReport {
    pub outcomes: Vec<BatchOutcome>,
    pub ok: usize,
    pub already_normalized: usize,
    pub failed: usize,
}

const IMAGE_EXTENSIONS: &[&str] = &["png", "jpg", "jpeg", "tif", "tiff"];

/// Normalizes every image under `in_dir` into `out_dir` (same file names),
/// sorted by path. Failures stay per-file and never abort the batch.
pub fn batch_normalize(
    in_dir: &Path,
    out_dir: &Path,
    target_max: u32,
    force_rotate: Option<u16>,
) -> Result<BatchReport, ImagePrepError> {
    std::fs::create_dir_all(out_dir)?;
    let mut paths: Vec<PathBuf> = std::fs::read_dir(in_dir)?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| {
            p.extension()
                .and_then(|e| e.to_str())
                .is_some_and(|e| IMAGE_EXTENSIONS.contains(&e.to_lowercase().as_str()))
        })
        .collect();
    paths.sort();
    let mut outcomes = Vec::with_capacity(paths.len());
    let (mut ok, mut already, mut failed) = (0usize, 0usize, 0usize);
    for path in paths {
        let out_path = out_dir.join(path.file_name().expect("listed files have names"));
        match normalize_image(&path, &out_path, target_max, force_rotate) {
            Ok(meta) => {
                let status = if meta.already_normalized {
                    already += 1;
                    BatchStatus::AlreadyNormalized
                } else {
                    ok += 1;
                    BatchStatus::Ok
                };
                outcomes.push(BatchOutcome {
                    path: path.display().to_string(),
                    status,
                    error: None,
                    meta: Some(meta),
                });
            }
            Err(e) => {
                failed += 1;
                outcomes.push(BatchOutcome {
                    path: path.display().to_string(),
                    status: BatchStatus::Failed,
                    error: Some(e.to_string()),
                    meta: None,
                });
            }
        }
    }
    Ok(BatchReport {
        outcomes,
        ok,
        already_normalized: already,
        failed,
    })
}
