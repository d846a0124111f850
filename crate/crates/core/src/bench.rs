//! Resolution sweep: run the full pipeline over a dataset at a list of
//! target resolutions, recording mean wall time and the tracked
//! allocation high-water mark (see [`crate::memtrack`]).

use std::path::Path;
use std::time::Instant;

use crate::config::PipelineConfig;
use crate::error::{Error, Result};
use crate::evaluator::{accuracy, match_ground_truth, Confusion, GroundTruth};
use crate::memtrack;
use crate::pipeline;
use crate::raster::{load_image, GrayImage};

/// The six sweep resolutions, 0.3 through 3 megapixels.
pub const SWEEP_RESOLUTIONS: [(u32, u32); 6] = [
    (640, 480),
    (800, 600),
    (1024, 768),
    (1182, 886),
    (1672, 1254),
    (2048, 1536),
];

#[derive(Debug, Clone, Copy)]
pub struct BenchResult {
    pub width: u32,
    pub height: u32,
    /// Mean pipeline wall time per image, seconds.
    pub mean_time_s: f64,
    /// Maximum tracked-allocation high-water mark over the runs. Zero when
    /// the tracking allocator is not installed in the current binary.
    pub peak_alloc_bytes: u64,
    pub accuracy: Option<f64>,
}

#[derive(Debug, Clone)]
pub struct BenchOptions {
    pub resolutions: Vec<(u32, u32)>,
    pub repeats: u32,
    pub config: PipelineConfig,
}

impl Default for BenchOptions {
    fn default() -> Self {
        BenchOptions {
            resolutions: SWEEP_RESOLUTIONS.to_vec(),
            repeats: 3,
            config: PipelineConfig::default(),
        }
    }
}

/// Image files (pgm/pnm/pbm/png) in a dataset directory, sorted by name.
pub fn load_dataset(dir: &Path) -> Result<Vec<(String, GrayImage)>> {
    let mut entries: Vec<_> = std::fs::read_dir(dir)?
        .filter_map(|e| e.ok())
        .map(|e| e.path())
        .filter(|p| {
            p.extension()
                .and_then(|e| e.to_str())
                .map(|e| matches!(e.to_ascii_lowercase().as_str(), "pgm" | "pnm" | "pbm" | "png"))
                .unwrap_or(false)
        })
        .collect();
    entries.sort();
    let mut images = Vec::with_capacity(entries.len());
    for path in entries {
        let name = path
            .file_name()
            .and_then(|n| n.to_str())
            .unwrap_or_default()
            .to_string();
        images.push((name, load_image(&path)?));
    }
    Ok(images)
}

/// Rescale every dataset image to each target resolution (bilinear), run
/// the pipeline `repeats` times, and report per-resolution means. Ground
/// truth, when given, is matched by image name with boxes rescaled to the
/// target resolution.
pub fn run_bench(
    dataset: &Path,
    gt: Option<&[GroundTruth]>,
    opts: &BenchOptions,
) -> Result<Vec<BenchResult>> {
    assert!(opts.repeats >= 1);
    let images = load_dataset(dataset)?;
    if images.is_empty() {
        return Err(Error::EmptyDataset {
            path: dataset.to_path_buf(),
        });
    }

    let mut results = Vec::with_capacity(opts.resolutions.len());
    for &(width, height) in &opts.resolutions {
        let mut total_time = 0.0f64;
        let mut peak = 0u64;
        let mut confusion = Confusion::default();
        let mut scored = false;
        for (name, img) in &images {
            let scaled = img.resize_bilinear(width, height);
            memtrack::reset_peak();
            let mut output = None;
            let start = Instant::now();
            for _ in 0..opts.repeats {
                output = Some(pipeline::run(&scaled, &opts.config)?);
            }
            total_time += start.elapsed().as_secs_f64() / opts.repeats as f64;
            peak = peak.max(memtrack::peak_bytes() as u64);
            if let (Some(gt), Some(output)) = (gt, output) {
                if let Some(entry) = find_ground_truth(gt, name) {
                    let sx = width as f64 / img.width as f64;
                    let sy = height as f64 / img.height as f64;
                    let boxes: Vec<_> = entry
                        .text_boxes
                        .iter()
                        .map(|b| b.scale(sx, sy, width, height))
                        .collect();
                    confusion.add(&match_ground_truth(&output.regions, &boxes).confusion);
                    scored = true;
                }
            }
        }
        results.push(BenchResult {
            width,
            height,
            mean_time_s: total_time / images.len() as f64,
            peak_alloc_bytes: peak,
            accuracy: if scored { accuracy(&confusion).ok() } else { None },
        });
    }
    Ok(results)
}

/// Match a ground-truth entry by exact file name or by stem.
pub fn find_ground_truth<'a>(gt: &'a [GroundTruth], name: &str) -> Option<&'a GroundTruth> {
    let stem = Path::new(name)
        .file_stem()
        .and_then(|s| s.to_str())
        .unwrap_or(name);
    gt.iter()
        .find(|e| e.image == name)
        .or_else(|| gt.iter().find(|e| e.image == stem))
}
