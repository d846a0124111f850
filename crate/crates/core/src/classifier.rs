//! Rule cascade labeling each connected component: line tests, noise
//! tests, width-to-height ratio, and the foreground fill ratio.
//!
//! A horizontal or vertical line always also has a height (or width) below
//! the minimum-character thresholds, so the line rules run before the noise
//! rules; otherwise every rule would classify lines as noise and the line
//! labels could never fire.

use serde::{Deserialize, Serialize};

use crate::background::BlockGrid;
use crate::components::ConnectedComponent;
use crate::config::PipelineConfig;
use crate::error::{Error, Result};
use crate::raster::GrayImage;
use crate::region::{is_foreground, region_extremes, RegionArea, RegionMask};

/// Size and ratio thresholds, derived from the page dimensions.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RuleThresholds {
    pub h_th: f64,
    pub w_th: f64,
    pub a_th: f64,
    pub b_th: f64,
    pub l_th: f64,
    pub r_min: f64,
    pub r_max: f64,
    pub ra_min: f64,
    pub ra_max: f64,
}

/// Final label of a component. Only `Text` regions are binarized; the
/// non-text labels are diagnostic refinements.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RegionLabel {
    Text,
    Noise,
    #[serde(rename = "hline")]
    HorizontalLine,
    #[serde(rename = "vline")]
    VerticalLine,
    #[serde(rename = "nontext")]
    NonText,
}

impl RegionLabel {
    pub fn as_str(&self) -> &'static str {
        match self {
            RegionLabel::Text => "text",
            RegionLabel::Noise => "noise",
            RegionLabel::HorizontalLine => "hline",
            RegionLabel::VerticalLine => "vline",
            RegionLabel::NonText => "nontext",
        }
    }

    pub fn is_text(&self) -> bool {
        matches!(self, RegionLabel::Text)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LineKind {
    Horizontal,
    Vertical,
    NotLine,
}

/// Real-valued thresholds from the page dimensions; divisors and ratio
/// bounds come from the config, with no premature integer truncation.
pub fn derive_thresholds(width: u32, height: u32, cfg: &PipelineConfig) -> RuleThresholds {
    let (w, h) = (width as f64, height as f64);
    RuleThresholds {
        h_th: h / cfg.h_th_div,
        w_th: w / cfg.w_th_div,
        a_th: w * h / cfg.a_th_div,
        b_th: h / cfg.b_th_div,
        l_th: w / cfg.l_th_div,
        r_min: cfg.r_min,
        r_max: cfg.r_max,
        ra_min: cfg.ra_min,
        ra_max: cfg.ra_max,
    }
}

/// Noise when any dimension falls below the smallest-character thresholds.
pub fn is_noise(cc: &ConnectedComponent, th: &RuleThresholds) -> bool {
    (cc.h_cc as f64) < th.h_th || (cc.w_cc as f64) < th.w_th || (cc.a_cc as f64) < th.a_th
}

pub fn is_line(cc: &ConnectedComponent, th: &RuleThresholds) -> LineKind {
    let h = cc.h_cc as f64;
    let w = cc.w_cc as f64;
    if h < th.b_th && w > th.l_th {
        LineKind::Horizontal
    } else if w < th.b_th && h > th.l_th {
        LineKind::Vertical
    } else {
        LineKind::NotLine
    }
}

pub fn width_to_height(cc: &ConnectedComponent) -> f64 {
    cc.w_cc as f64 / cc.h_cc as f64
}

/// Strictly inside (r_min, r_max).
pub fn aspect_ok(cc: &ConnectedComponent, th: &RuleThresholds) -> bool {
    let r = width_to_height(cc);
    th.r_min < r && r < th.r_max
}

/// Foreground-to-background pixel ratio over the component's region, as a
/// percent. Foreground is the mean-of-extremes threshold over that region.
/// Returns +infinity when there are no background pixels.
pub fn fill_ratio(
    cc: &ConnectedComponent,
    img: &GrayImage,
    grid: &BlockGrid,
    area: RegionArea,
) -> Result<f64> {
    let mask = RegionMask::from_cc(cc, grid, area);
    let (g_min, g_max) = region_extremes(img, &mask).ok_or(Error::EmptyRegion)?;
    let mut fg = 0u64;
    let mut total = 0u64;
    for (x, y) in mask.iter() {
        total += 1;
        if is_foreground(img.get(x, y), g_min, g_max) {
            fg += 1;
        }
    }
    let bg = total - fg;
    if bg == 0 {
        return Ok(f64::INFINITY);
    }
    Ok(100.0 * fg as f64 / bg as f64)
}

/// Full cascade. The fill ratio is only computed when the component
/// survives every earlier rule; the second element reports it (None when
/// the cascade stopped earlier).
pub fn classify_cc_with_ratio(
    cc: &ConnectedComponent,
    img: &GrayImage,
    grid: &BlockGrid,
    th: &RuleThresholds,
    area: RegionArea,
) -> Result<(RegionLabel, Option<f64>)> {
    match is_line(cc, th) {
        LineKind::Horizontal => return Ok((RegionLabel::HorizontalLine, None)),
        LineKind::Vertical => return Ok((RegionLabel::VerticalLine, None)),
        LineKind::NotLine => {}
    }
    if is_noise(cc, th) {
        return Ok((RegionLabel::Noise, None));
    }
    if !aspect_ok(cc, th) {
        return Ok((RegionLabel::NonText, None));
    }
    let ra = fill_ratio(cc, img, grid, area)?;
    if th.ra_min < ra && ra < th.ra_max {
        Ok((RegionLabel::Text, Some(ra)))
    } else {
        Ok((RegionLabel::NonText, Some(ra)))
    }
}

pub fn classify_cc(
    cc: &ConnectedComponent,
    img: &GrayImage,
    grid: &BlockGrid,
    th: &RuleThresholds,
    area: RegionArea,
) -> Result<RegionLabel> {
    classify_cc_with_ratio(cc, img, grid, th, area).map(|(label, _)| label)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::background::{build_grid, BackgroundParams};
    use crate::components::{label_components, Connectivity};
    use crate::geom::Rect;
    use proptest::prelude::*;

    fn cc(w: u32, h: u32, a: u64) -> ConnectedComponent {
        ConnectedComponent {
            blocks: vec![(0, 0)],
            bbox: Rect::new(0, 0, w - 1, h - 1),
            h_cc: h,
            w_cc: w,
            a_cc: a,
        }
    }

    fn th_1024() -> RuleThresholds {
        derive_thresholds(1024, 768, &PipelineConfig::default())
    }

    #[test]
    fn thresholds_for_1024x768() {
        let th = th_1024();
        assert_eq!(th.h_th, 12.8);
        assert_eq!(th.w_th, 25.6);
        assert_eq!(th.a_th, 524.288);
        assert_eq!(th.b_th, 7.68);
        assert_eq!(th.l_th, 25.6);
        assert_eq!((th.r_min, th.r_max), (1.2, 32.0));
        assert_eq!((th.ra_min, th.ra_max), (5.0, 90.0));
    }

    #[test]
    fn thresholds_for_640x480() {
        let th = derive_thresholds(640, 480, &PipelineConfig::default());
        assert_eq!(th.h_th, 8.0);
        assert_eq!(th.w_th, 16.0);
        assert_eq!(th.a_th, 204.8);
        assert_eq!(th.b_th, 4.8);
        assert_eq!(th.l_th, 16.0);
    }

    #[test]
    fn threshold_override_passthrough() {
        let cfg = PipelineConfig {
            r_min: 1.0,
            ..PipelineConfig::default()
        };
        let th = derive_thresholds(1024, 768, &cfg);
        assert_eq!(th.r_min, 1.0);
        assert_eq!(th.h_th, 12.8);
    }

    #[test]
    fn noise_rule_cases() {
        let th = th_1024();
        assert!(is_noise(&cc(10, 10, 100), &th));
        assert!(!is_noise(&cc(30, 20, 600), &th));
        // exactly at threshold: strict inequality, not noise
        // (h_th=12.8 not representable as pixel count; use a_th-equivalent)
        let at = ConnectedComponent {
            a_cc: 600,
            ..cc(26, 13, 600)
        };
        assert!(!is_noise(&at, &th));
    }

    #[test]
    fn line_rule_cases() {
        let th = th_1024();
        assert_eq!(is_line(&cc(200, 5, 1000), &th), LineKind::Horizontal);
        assert_eq!(is_line(&cc(5, 200, 1000), &th), LineKind::Vertical);
        assert_eq!(is_line(&cc(100, 50, 5000), &th), LineKind::NotLine);
    }

    #[test]
    fn aspect_rule_cases() {
        let th = th_1024();
        assert!(aspect_ok(&cc(120, 40, 4800), &th));
        assert!(!aspect_ok(&cc(40, 40, 1600), &th));
        // exactly r_min: strict
        assert!(!aspect_ok(&cc(12, 10, 120), &th));
    }

    #[test]
    fn fill_ratio_uniform_region_is_zero() {
        let img = GrayImage::from_fn(5, 2, |_, _| 90);
        let grid = grid_1px_cols(&img);
        let cc = all_blocks_cc(&grid);
        assert_eq!(
            fill_ratio(&cc, &img, &grid, RegionArea::Blocks).unwrap(),
            0.0
        );
    }

    #[test]
    fn fill_ratio_hand_count() {
        // 10 pixels: three at 0, seven at 90; threshold 45 -> 3 fg / 7 bg
        let vals = [0u8, 0, 0, 90, 90, 90, 90, 90, 90, 90];
        let img = GrayImage::new(5, 2, vals.to_vec()).unwrap();
        let grid = grid_1px_cols(&img);
        let cc = all_blocks_cc(&grid);
        let ra = fill_ratio(&cc, &img, &grid, RegionArea::Blocks).unwrap();
        assert!((ra - 300.0 / 7.0).abs() < 1e-9, "ra = {ra}");
        // passes the default (5, 90) window
        assert!(5.0 < ra && ra < 90.0);
    }

    /// 1-pixel-wide blocks so every pixel of a small image is in-region.
    fn grid_1px_cols(img: &GrayImage) -> BlockGrid {
        let params = BackgroundParams {
            t_min: 255, // force every block to Information
            ..BackgroundParams::default()
        };
        build_grid(img, &params).unwrap()
    }

    fn all_blocks_cc(grid: &BlockGrid) -> ConnectedComponent {
        let ccs = label_components(grid, Connectivity::Eight);
        assert_eq!(ccs.len(), 1);
        ccs.into_iter().next().unwrap()
    }

    #[test]
    fn cascade_fixtures() {
        let th = th_1024();
        let img = GrayImage::from_fn(64, 2, |_, _| 128);
        let grid = grid_1px_cols(&img);
        let classify = |c: &ConnectedComponent| classify_cc(c, &img, &grid, &th, RegionArea::Blocks).unwrap();
        assert_eq!(classify(&cc(10, 10, 100)), RegionLabel::Noise);
        assert_eq!(classify(&cc(200, 5, 1000)), RegionLabel::HorizontalLine);
        assert_eq!(classify(&cc(5, 200, 1000)), RegionLabel::VerticalLine);
        assert_eq!(classify(&cc(40, 40, 1600)), RegionLabel::NonText);
    }

    proptest! {
        #[test]
        fn transpose_inverts_aspect_ratio(w in 1u32..500, h in 1u32..500) {
            let a = cc(w, h, (w * h) as u64);
            let b = cc(h, w, (w * h) as u64);
            let prod = width_to_height(&a) * width_to_height(&b);
            prop_assert!((prod - 1.0).abs() < 1e-12);
        }

        #[test]
        fn integer_scaling_preserves_decisions(w in 2u32..200, h in 2u32..200, k in 1u32..5) {
            let cfg = PipelineConfig::default();
            let th1 = derive_thresholds(1024, 768, &cfg);
            let thk = derive_thresholds(1024 * k, 768 * k, &cfg);
            let a = cc(w, h, (w as u64) * (h as u64));
            let b = cc(w * k, h * k, (w as u64) * (h as u64) * (k as u64) * (k as u64));
            prop_assert_eq!(is_noise(&a, &th1), is_noise(&b, &thk));
            prop_assert_eq!(is_line(&a, &th1), is_line(&b, &thk));
            prop_assert_eq!(aspect_ok(&a, &th1), aspect_ok(&b, &thk));
        }

        #[test]
        fn noise_label_never_clears_all_thresholds(w in 1u32..300, h in 1u32..300, a in 1u64..90000) {
            let th = th_1024();
            let c = cc(w, h, a);
            if is_line(&c, &th) == LineKind::NotLine && is_noise(&c, &th) {
                prop_assert!(
                    (c.h_cc as f64) < th.h_th
                        || (c.w_cc as f64) < th.w_th
                        || (c.a_cc as f64) < th.a_th
                );
            }
        }
    }
}
