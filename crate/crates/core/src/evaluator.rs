//! Scoring of labeled components against rectangle ground truth.
//!
//! A component's true label is Text when its bounding box reaches IoU 0.5
//! with some ground-truth text box; the prediction is Text when the rule
//! cascade said so. Correct cells are BB and TT.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geom::Rect;
use crate::pipeline::Region;

pub const IOU_MATCH_THRESHOLD: f64 = 0.5;

/// Annotated text rectangles for one image; everything else is background.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroundTruth {
    pub image: String,
    pub text_boxes: Vec<Rect>,
}

/// BB/BT/TB/TT tallies (true label first, predicted label second).
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Confusion {
    pub bb: u64,
    pub bt: u64,
    pub tb: u64,
    pub tt: u64,
}

impl Confusion {
    pub fn total(&self) -> u64 {
        self.bb + self.bt + self.tb + self.tt
    }

    pub fn add(&mut self, other: &Confusion) {
        self.bb += other.bb;
        self.bt += other.bt;
        self.tb += other.tb;
        self.tt += other.tt;
    }
}

/// Result of matching one image's components against its truth boxes.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct MatchOutcome {
    pub confusion: Confusion,
    /// Truth text boxes no component reached IoU 0.5 with; reported
    /// separately so missed regions stay visible even though only formed
    /// components are scored.
    pub unmatched_text_boxes: u64,
}

pub fn match_ground_truth(regions: &[Region], text_boxes: &[Rect]) -> MatchOutcome {
    let mut confusion = Confusion::default();
    for region in regions {
        let truly_text = text_boxes
            .iter()
            .any(|tb| region.cc.bbox.iou(tb) >= IOU_MATCH_THRESHOLD);
        let predicted_text = region.label.is_text();
        match (truly_text, predicted_text) {
            (false, false) => confusion.bb += 1,
            (false, true) => confusion.bt += 1,
            (true, false) => confusion.tb += 1,
            (true, true) => confusion.tt += 1,
        }
    }
    let unmatched_text_boxes = text_boxes
        .iter()
        .filter(|tb| {
            !regions
                .iter()
                .any(|r| r.cc.bbox.iou(tb) >= IOU_MATCH_THRESHOLD)
        })
        .count() as u64;
    MatchOutcome {
        confusion,
        unmatched_text_boxes,
    }
}

/// Fraction of true classifications: (BB + TT) / total.
pub fn accuracy(c: &Confusion) -> Result<f64> {
    let total = c.total();
    if total == 0 {
        return Err(Error::EmptyEvaluation);
    }
    Ok((c.bb + c.tt) as f64 / total as f64)
}

/// Per-image scores for the report JSON.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ImageEval {
    pub image: String,
    pub confusion: Confusion,
    pub unmatched_text_boxes: u64,
}

/// Aggregate evaluation of a dataset.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EvalReport {
    pub images: Vec<ImageEval>,
    pub aggregate: Confusion,
    pub accuracy: f64,
    pub unmatched_text_boxes: u64,
    pub wall_time_s: f64,
    pub peak_alloc_bytes: u64,
}
