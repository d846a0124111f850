//! End-to-end wiring: background elimination, component labeling, the
//! rule cascade, and binarization of the surviving text regions.

use crate::background::{eliminate_background, BlockGrid};
use crate::binarizer::{binarize_cc, compose_output};
use crate::classifier::{classify_cc_with_ratio, derive_thresholds, RegionLabel};
use crate::components::{label_components, ConnectedComponent};
use crate::config::PipelineConfig;
use crate::error::Result;
use crate::raster::{BinaryImage, GrayImage};

/// A labeled connected component with its cascade features.
#[derive(Debug, Clone)]
pub struct Region {
    pub cc: ConnectedComponent,
    pub r_w2h: f64,
    /// Fill ratio in percent; `None` when the cascade rejected the
    /// component before the fill-ratio step.
    pub ra_cc: Option<f64>,
    pub label: RegionLabel,
}

#[derive(Debug, Clone)]
pub struct PipelineOutput {
    /// Page after coarse background elimination.
    pub background: GrayImage,
    pub grid: BlockGrid,
    /// All components in (bbox.y0, bbox.x0) order.
    pub regions: Vec<Region>,
    /// Binarized page: text-region ink on a background page.
    pub binary: BinaryImage,
}

pub fn run(img: &GrayImage, cfg: &PipelineConfig) -> Result<PipelineOutput> {
    let (background, grid) = eliminate_background(img, &cfg.background_params())?;
    let thresholds = derive_thresholds(img.width, img.height, cfg);
    let ccs = label_components(&grid, cfg.connectivity);

    let mut regions = Vec::with_capacity(ccs.len());
    let mut patches = Vec::new();
    for cc in ccs {
        let (label, ra_cc) =
            classify_cc_with_ratio(&cc, &background, &grid, &thresholds, cfg.ra_region)?;
        if label == RegionLabel::Text {
            patches.push(binarize_cc(&cc, &background, &grid, cfg.ra_region)?);
        }
        let r_w2h = cc.w_cc as f64 / cc.h_cc as f64;
        regions.push(Region {
            cc,
            r_w2h,
            ra_cc,
            label,
        });
    }
    let binary = compose_output(&patches, img.width, img.height)?;
    Ok(PipelineOutput {
        background,
        grid,
        regions,
        binary,
    })
}
