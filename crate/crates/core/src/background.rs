//! Coarse background elimination.
//!
//! The page is tiled into blocks of width `W / width_divisor` and height
//! `block_height` pixels. A block is background when its minimum intensity
//! exceeds `T_min` and its intensity spread stays under the dynamic
//! threshold `T_sigma = T_fixed + T_var`, with
//! `T_var = ((G_min - T_min) - min(T_fixed, G_min - T_min)) * 2`.
//! Background blocks are flattened to gray level 255.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geom::Rect;
use crate::raster::GrayImage;

/// How a block's intensity spread is measured.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SpreadStatistic {
    /// Gray-level range `G_max - G_min` (the default, in threshold units).
    #[default]
    Range,
    /// Population standard deviation of the block's pixels.
    StdDev,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BackgroundParams {
    pub t_fixed: i32,
    pub t_min: u8,
    pub width_divisor: u32,
    pub block_height: u32,
    pub spread_statistic: SpreadStatistic,
}

impl Default for BackgroundParams {
    fn default() -> Self {
        BackgroundParams {
            t_fixed: 20,
            t_min: 100,
            width_divisor: 64,
            block_height: 2,
            spread_statistic: SpreadStatistic::Range,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BlockStats {
    pub g_min: u8,
    pub g_max: u8,
    pub spread: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BlockLabel {
    Background,
    Information,
}

/// Per-block labels and statistics over the page tiling. The rightmost
/// block column and bottom block row absorb the remainder pixels so that
/// every pixel belongs to exactly one block.
#[derive(Debug, Clone)]
pub struct BlockGrid {
    pub cols: u32,
    pub rows: u32,
    pub block_width: u32,
    pub block_height: u32,
    pub width: u32,
    pub height: u32,
    pub labels: Vec<BlockLabel>,
    pub stats: Vec<BlockStats>,
}

impl BlockGrid {
    #[inline]
    pub fn index(&self, row: u32, col: u32) -> usize {
        row as usize * self.cols as usize + col as usize
    }

    pub fn label(&self, row: u32, col: u32) -> BlockLabel {
        self.labels[self.index(row, col)]
    }

    /// Pixel rectangle covered by block (row, col), edge remainders included.
    pub fn block_rect(&self, row: u32, col: u32) -> Rect {
        let x0 = col * self.block_width;
        let y0 = row * self.block_height;
        let x1 = if col == self.cols - 1 {
            self.width - 1
        } else {
            (col + 1) * self.block_width - 1
        };
        let y1 = if row == self.rows - 1 {
            self.height - 1
        } else {
            (row + 1) * self.block_height - 1
        };
        Rect::new(x0, y0, x1, y1)
    }

    pub fn block_pixel_count(&self, row: u32, col: u32) -> u64 {
        self.block_rect(row, col).area()
    }
}

/// Dynamic background threshold `T_sigma` for one block.
///
/// Total over all stats: when `G_min - T_min <= T_fixed` the variable term
/// is zero and the result is just `T_fixed` (the background guard in
/// [`classify_block`] makes the value immaterial for dark blocks anyway).
pub fn sigma_threshold(stats: &BlockStats, params: &BackgroundParams) -> i32 {
    let diff = stats.g_min as i32 - params.t_min as i32;
    let t_var = (diff - diff.min(params.t_fixed)).max(0) * 2;
    params.t_fixed + t_var
}

/// Background iff the block is bright everywhere (`G_min > T_min`) and its
/// spread stays under the dynamic threshold.
pub fn classify_block(stats: &BlockStats, params: &BackgroundParams) -> BlockLabel {
    if stats.g_min > params.t_min && stats.spread < sigma_threshold(stats, params) as f64 {
        BlockLabel::Background
    } else {
        BlockLabel::Information
    }
}

fn block_stats(img: &GrayImage, rect: &Rect, statistic: SpreadStatistic) -> BlockStats {
    let mut g_min = u8::MAX;
    let mut g_max = u8::MIN;
    let mut sum = 0u64;
    let mut sum_sq = 0u64;
    let mut n = 0u64;
    for y in rect.y0..=rect.y1 {
        for x in rect.x0..=rect.x1 {
            let v = img.get(x, y);
            g_min = g_min.min(v);
            g_max = g_max.max(v);
            sum += v as u64;
            sum_sq += (v as u64) * (v as u64);
            n += 1;
        }
    }
    let spread = match statistic {
        SpreadStatistic::Range => (g_max - g_min) as f64,
        SpreadStatistic::StdDev => {
            let mean = sum as f64 / n as f64;
            (sum_sq as f64 / n as f64 - mean * mean).max(0.0).sqrt()
        }
    };
    BlockStats {
        g_min,
        g_max,
        spread,
    }
}

/// Tile the image and classify every block.
pub fn build_grid(img: &GrayImage, params: &BackgroundParams) -> Result<BlockGrid> {
    let block_width = (img.width / params.width_divisor).max(1);
    let block_height = params.block_height.max(1);
    if img.height < block_height || img.width < block_width {
        return Err(Error::ImageTooSmall {
            width: img.width,
            height: img.height,
            block_width,
            block_height,
        });
    }
    let cols = img.width / block_width;
    let rows = img.height / block_height;
    let mut grid = BlockGrid {
        cols,
        rows,
        block_width,
        block_height,
        width: img.width,
        height: img.height,
        labels: Vec::with_capacity((cols * rows) as usize),
        stats: Vec::with_capacity((cols * rows) as usize),
    };
    for row in 0..rows {
        for col in 0..cols {
            let rect = grid.block_rect(row, col);
            let stats = block_stats(img, &rect, params.spread_statistic);
            grid.labels.push(classify_block(&stats, params));
            grid.stats.push(stats);
        }
    }
    Ok(grid)
}

/// Classify blocks and flatten every background block to 255.
/// Information-block pixels pass through unchanged.
pub fn eliminate_background(
    img: &GrayImage,
    params: &BackgroundParams,
) -> Result<(GrayImage, BlockGrid)> {
    let grid = build_grid(img, params)?;
    let mut out = img.clone();
    for row in 0..grid.rows {
        for col in 0..grid.cols {
            if grid.label(row, col) == BlockLabel::Background {
                let rect = grid.block_rect(row, col);
                for y in rect.y0..=rect.y1 {
                    for x in rect.x0..=rect.x1 {
                        out.set(x, y, 255);
                    }
                }
            }
        }
    }
    Ok((out, grid))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn params() -> BackgroundParams {
        BackgroundParams::default()
    }

    fn stats(g_min: u8, g_max: u8) -> BlockStats {
        BlockStats {
            g_min,
            g_max,
            spread: (g_max - g_min) as f64,
        }
    }

    #[test]
    fn sigma_threshold_hand_values() {
        // G_min=110: T_var = (10 - 10) * 2 = 0, T_sigma = 20
        assert_eq!(sigma_threshold(&stats(110, 110), &params()), 20);
        // G_min=150: T_var = (50 - 20) * 2 = 60, T_sigma = 80
        assert_eq!(sigma_threshold(&stats(150, 150), &params()), 80);
        // G_min == T_min: T_var = 0
        assert_eq!(sigma_threshold(&stats(100, 100), &params()), 20);
    }

    #[test]
    fn classify_block_cases() {
        // uniform bright block
        assert_eq!(classify_block(&stats(255, 255), &params()), BlockLabel::Background);
        // dark pixel present: guard wins regardless of spread
        assert_eq!(classify_block(&stats(40, 40), &params()), BlockLabel::Information);
        assert_eq!(classify_block(&stats(40, 240), &params()), BlockLabel::Information);
        // spread 100 >= T_sigma 80
        assert_eq!(classify_block(&stats(150, 250), &params()), BlockLabel::Information);
    }

    #[test]
    fn all_white_image_is_all_background() {
        // 128/64 = 2 px wide blocks: 64 cols x 2 rows
        let img = GrayImage::from_fn(128, 4, |_, _| 255);
        let (out, grid) = eliminate_background(&img, &params()).unwrap();
        assert_eq!(out, img);
        assert_eq!((grid.cols, grid.rows), (64, 2));
        assert!(grid.labels.iter().all(|&l| l == BlockLabel::Background));
    }

    #[test]
    fn dark_pixel_preserves_its_block_only() {
        // one zero pixel in block (row 0, col 1) of the 2x2-px tiling
        let img = GrayImage::from_fn(128, 4, |x, y| if x == 3 && y == 0 { 0 } else { 200 });
        let (out, grid) = eliminate_background(&img, &params()).unwrap();
        assert_eq!(grid.label(0, 1), BlockLabel::Information);
        // information block pixels unchanged
        assert_eq!(out.get(3, 0), 0);
        assert_eq!(out.get(2, 1), 200);
        // all other blocks flattened
        assert_eq!(out.get(64, 0), 255);
        assert_eq!(out.get(3, 2), 255);
    }

    #[test]
    fn too_small_image_errors() {
        let img = GrayImage::new(10, 1, vec![0; 10]).unwrap();
        match eliminate_background(&img, &params()) {
            Err(crate::error::Error::ImageTooSmall { .. }) => {}
            other => panic!("expected ImageTooSmall, got {other:?}"),
        }
    }

    #[test]
    fn edge_blocks_absorb_remainders() {
        // 130x5 with divisor 64: block_width=2, cols=65 (no remainder in x),
        // use 131 instead to get one: block_width = 131/64 = 2, cols=65, 1 extra col pixel
        let img = GrayImage::from_fn(131, 5, |_, _| 128);
        let grid = build_grid(&img, &params()).unwrap();
        assert_eq!(grid.block_rect(grid.rows - 1, grid.cols - 1).x1, 130);
        assert_eq!(grid.block_rect(grid.rows - 1, grid.cols - 1).y1, 4);
        // every pixel covered exactly once
        let total: u64 = (0..grid.rows)
            .flat_map(|r| (0..grid.cols).map(move |c| (r, c)))
            .map(|(r, c)| grid.block_pixel_count(r, c))
            .sum();
        assert_eq!(total, 131 * 5);
    }

    proptest! {
        #[test]
        fn output_pixels_unchanged_or_255(seed in any::<u64>()) {
            use rand::{Rng, SeedableRng};
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let img = GrayImage::from_fn(96, 8, |_, _| rng.gen());
            let (out, _) = eliminate_background(&img, &params()).unwrap();
            for (o, i) in out.pixels.iter().zip(&img.pixels) {
                prop_assert!(*o == 255 || o == i);
            }
        }

        #[test]
        fn idempotent(seed in any::<u64>()) {
            use rand::{Rng, SeedableRng};
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let img = GrayImage::from_fn(96, 8, |_, _| rng.gen());
            let (once, _) = eliminate_background(&img, &params()).unwrap();
            let (twice, _) = eliminate_background(&once, &params()).unwrap();
            prop_assert_eq!(once, twice);
        }

        #[test]
        fn spread_monotone_at_fixed_g_min(g_min in 0u8..=255, s1 in 0u16..512, s2 in 0u16..512) {
            // increasing spread never flips Information -> Background
            let (lo, hi) = (s1.min(s2) as f64, s1.max(s2) as f64);
            let mk = |spread| BlockStats { g_min, g_max: 255.min(g_min), spread };
            let p = params();
            if classify_block(&mk(lo), &p) == BlockLabel::Information {
                prop_assert_eq!(classify_block(&mk(hi), &p), BlockLabel::Information);
            }
        }

        #[test]
        fn t_var_nonnegative_and_zero_below_tolerance(g_min in any::<u8>(), t_min in any::<u8>(), t_fixed in 0i32..200) {
            let p = BackgroundParams { t_fixed, t_min, ..params() };
            let s = stats(g_min, g_min);
            let t_sigma = sigma_threshold(&s, &p);
            prop_assert!(t_sigma >= t_fixed);
            if g_min as i32 - t_min as i32 <= t_fixed {
                prop_assert_eq!(t_sigma, t_fixed);
            }
        }
    }
}
