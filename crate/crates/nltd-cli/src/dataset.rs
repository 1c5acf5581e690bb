//! Dataset discovery and the ground-truth-by-averaging oracle.
//!
//! Two layouts are recognized:
//!   * per-scene directories: `<root>/<scene>/noisy.png` + `<root>/<scene>/mean.png`
//!   * flat pairs: `<root>/<id>_real.png` + `<root>/<id>_mean.png`
//! Pairs with unreadable or mismatched images are skipped with a warning.

use crate::error::{HarnessError, Result};
use nltd::Image;
use std::path::{Path, PathBuf};

/// A noisy / ground-truth image pair.
#[derive(Debug, Clone)]
pub struct ScenePair {
    pub scene: String,
    pub noisy: PathBuf,
    pub ground_truth: PathBuf,
    /// Free-text camera/ISO tag parsed from the scene name.
    pub camera: String,
}

/// Scan result: valid pairs in deterministic lexicographic order, plus a
/// warning per skipped candidate.
#[derive(Debug, Default)]
pub struct ScanResult {
    pub pairs: Vec<ScenePair>,
    pub warnings: Vec<String>,
}

fn camera_tag(scene: &str) -> String {
    // Leading tokens up to the first numeric-ish segment read naturally as
    // the camera model; fall back to the full name.
    let mut parts = scene.split('_');
    parts.next().unwrap_or(scene).to_string()
}

fn check_pair(noisy: &Path, gt: &Path) -> std::result::Result<(), String> {
    let nd = image::image_dimensions(noisy).map_err(|e| format!("unreadable {noisy:?}: {e}"))?;
    let gd = image::image_dimensions(gt).map_err(|e| format!("unreadable {gt:?}: {e}"))?;
    if nd != gd {
        return Err(format!(
            "extent mismatch {noisy:?} {}x{} vs {gt:?} {}x{}",
            nd.0, nd.1, gd.0, gd.1
        ));
    }
    Ok(())
}

/// Discover scene pairs under `root`.
pub fn scan_dataset(root: &Path) -> Result<ScanResult> {
    if !root.is_dir() {
        return Err(HarnessError::Dataset(format!(
            "dataset root {root:?} is not a directory"
        )));
    }
    let mut result = ScanResult::default();
    let mut entries: Vec<PathBuf> = std::fs::read_dir(root)?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .collect();
    entries.sort();

    for entry in &entries {
        if entry.is_dir() {
            let noisy = entry.join("noisy.png");
            let gt = entry.join("mean.png");
            let scene = entry
                .file_name()
                .map(|s| s.to_string_lossy().into_owned())
                .unwrap_or_default();
            if !noisy.is_file() || !gt.is_file() {
                continue; // not a scene directory
            }
            match check_pair(&noisy, &gt) {
                Ok(()) => result.pairs.push(ScenePair {
                    camera: camera_tag(&scene),
                    scene,
                    noisy,
                    ground_truth: gt,
                }),
                Err(w) => result.warnings.push(w),
            }
        } else if let Some(name) = entry.file_name().and_then(|s| s.to_str()) {
            // Flat fallback: <id>_real.png paired with <id>_mean.png.
            if let Some(id) = name.strip_suffix("_real.png") {
                let gt = root.join(format!("{id}_mean.png"));
                if !gt.is_file() {
                    result
                        .warnings
                        .push(format!("no mean image for {}", entry.display()));
                    continue;
                }
                match check_pair(entry, &gt) {
                    Ok(()) => result.pairs.push(ScenePair {
                        scene: id.to_string(),
                        noisy: entry.clone(),
                        ground_truth: gt,
                        camera: camera_tag(id),
                    }),
                    Err(w) => result.warnings.push(w),
                }
            }
        }
    }
    result.pairs.sort_by(|a, b| a.scene.cmp(&b.scene));
    Ok(result)
}

/// Per-pixel arithmetic mean of aligned frames of a static scene; the noise
/// shrinks as `sigma / sqrt(frames)`.
pub fn mean_ground_truth(frames: &[Image]) -> Result<Image> {
    if frames.len() < 2 {
        return Err(HarnessError::Usage(
            "ground-truth averaging needs at least 2 frames".into(),
        ));
    }
    let (h, w) = (frames[0].height(), frames[0].width());
    for f in frames {
        if f.height() != h || f.width() != w {
            return Err(HarnessError::Core(nltd::Error::DimensionMismatch(
                "frame extents differ".into(),
            )));
        }
    }
    let mut acc = vec![0.0f64; h * w * 3];
    for f in frames {
        for (a, &v) in acc.iter_mut().zip(f.data()) {
            *a += v;
        }
    }
    let inv = 1.0 / frames.len() as f64;
    for a in &mut acc {
        *a *= inv;
    }
    Ok(Image::from_data(h, w, acc)?)
}
