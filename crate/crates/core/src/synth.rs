//! Deterministic synthetic business-card generator with exact ground
//! truth, used by the evaluation harness and the test fixtures. Cards get
//! a light noisy background, stroke-textured text lines, a horizontal
//! rule, a solid logo, and a few noise specks.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::geom::Rect;
use crate::raster::GrayImage;

#[derive(Debug, Clone)]
pub struct SyntheticCard {
    pub image: GrayImage,
    /// Exact extents of the generated text lines.
    pub text_boxes: Vec<Rect>,
}

fn fill_rect(img: &mut GrayImage, x0: u32, y0: u32, x1: u32, y1: u32, v: u8) {
    for y in y0..=y1.min(img.height - 1) {
        for x in x0..=x1.min(img.width - 1) {
            img.set(x, y, v);
        }
    }
}

/// Draw a text line as evenly pitched vertical strokes; returns its exact
/// bounding box.
fn draw_text_line(img: &mut GrayImage, x0: u32, y0: u32, width: u32, height: u32, ink: u8) -> Rect {
    let stroke = (height / 8).max(2);
    let pitch = stroke * 3;
    let mut x = x0;
    let mut last_x1 = x0;
    while x + stroke <= x0 + width {
        fill_rect(img, x, y0, x + stroke - 1, y0 + height - 1, ink);
        last_x1 = x + stroke - 1;
        x += pitch;
    }
    Rect::new(x0, y0, last_x1, y0 + height - 1)
}

/// Generate one card. Same (width, height, seed) always yields the same
/// card; dimensions must be at least 256x192.
pub fn generate_card(width: u32, height: u32, seed: u64) -> SyntheticCard {
    assert!(width >= 256 && height >= 192, "card too small");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let base: u8 = rng.gen_range(215..=230);
    let mut image = GrayImage::from_fn(width, height, |_, _| base + rng.gen_range(0..=4));

    let mut text_boxes = Vec::new();

    // solid logo square in the top-right corner; fails the aspect rule
    let side = height / 9;
    let logo_x = width - width / 20 - side;
    let logo_y = height / 16;
    fill_rect(&mut image, logo_x, logo_y, logo_x + side - 1, logo_y + side - 1, 45);

    // text lines down the left side, kept clear of the logo column
    let mut y = height / 14;
    let n_lines = 6 + (seed % 3) as u32;
    let rule_after = 2 + (seed % 2) as u32;
    for i in 0..n_lines {
        let line_h = rng.gen_range(height / 38..=height / 30).max(14);
        if y + line_h + height / 20 >= height - height / 8 {
            break;
        }
        let x0 = rng.gen_range(width / 20..=width / 9);
        let max_w = (26 * line_h).min(width * 11 / 20);
        let line_w = rng.gen_range(width / 4..=max_w.max(width / 4 + 1));
        let ink = rng.gen_range(25..=55);
        text_boxes.push(draw_text_line(&mut image, x0, y, line_w, line_h, ink));
        y += line_h + height / 28 + rng.gen_range(0..height / 40);

        if i == rule_after {
            // full-width horizontal rule, 3 px tall
            let rx0 = width / 20;
            fill_rect(&mut image, rx0, y, width - width / 20, y + 2, 60);
            y += 3 + height / 28;
        }
    }

    // a few 2x2 noise specks along the bottom margin
    let speck_y = height - height / 12;
    for k in 0..4u32 {
        let sx = width / 10 + k * width / 7 + rng.gen_range(0..width / 20);
        fill_rect(&mut image, sx, speck_y, sx + 1, speck_y + 1, 35);
    }

    SyntheticCard { image, text_boxes }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classifier::RegionLabel;
    use crate::config::PipelineConfig;
    use crate::evaluator::{accuracy, match_ground_truth, Confusion};
    use crate::pipeline;

    #[test]
    fn generation_is_deterministic() {
        let a = generate_card(512, 384, 7);
        let b = generate_card(512, 384, 7);
        assert_eq!(a.image, b.image);
        assert_eq!(a.text_boxes, b.text_boxes);
    }

    #[test]
    fn card_scores_well_through_the_pipeline() {
        let card = generate_card(1024, 768, 42);
        let out = pipeline::run(&card.image, &PipelineConfig::default()).unwrap();
        assert!(out.regions.iter().any(|r| r.label == RegionLabel::Text));
        let m = match_ground_truth(&out.regions, &card.text_boxes);
        assert!(m.confusion.tt as usize >= card.text_boxes.len() - 1);
        assert!(accuracy(&m.confusion).unwrap() >= 0.8);
        assert_ne!(m.confusion, Confusion::default());
    }
}
