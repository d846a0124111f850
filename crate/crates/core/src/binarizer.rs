//! Per-component binarization and page composition.
//!
//! Two deterministic passes: pass 1 marks pixels strictly below the
//! mean-of-extremes threshold as foreground; pass 2 promotes any pixel
//! with five or more of its eight neighbors foreground *in the frozen
//! pass-1 mask*. Pixels on the region border have fewer than eight
//! in-region neighbors and are never promoted.

use crate::background::BlockGrid;
use crate::components::ConnectedComponent;
use crate::error::{Error, Result};
use crate::raster::{BinaryImage, GrayImage};
use crate::region::{is_foreground, region_extremes, RegionArea, RegionMask};

/// Binarized mask over one component's bounding box; pixels outside the
/// component's region stay background.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BinaryPatch {
    pub x0: u32,
    pub y0: u32,
    pub width: u32,
    pub height: u32,
    pub mask: Vec<bool>,
}

impl BinaryPatch {
    #[inline]
    pub fn get(&self, dx: u32, dy: u32) -> bool {
        self.mask[dy as usize * self.width as usize + dx as usize]
    }
}

/// Pass-1 mask alone (bounding-box local, row-major).
pub fn threshold_mask(img: &GrayImage, mask: &RegionMask) -> Result<Vec<bool>> {
    let (g_min, g_max) = region_extremes(img, mask).ok_or(Error::EmptyRegion)?;
    let bbox = mask.bbox;
    let w = bbox.width() as usize;
    let mut out = vec![false; w * bbox.height() as usize];
    for (x, y) in mask.iter() {
        if is_foreground(img.get(x, y), g_min, g_max) {
            out[(y - bbox.y0) as usize * w + (x - bbox.x0) as usize] = true;
        }
    }
    Ok(out)
}

/// Binarize an arbitrary region mask.
pub fn binarize_masked(img: &GrayImage, mask: &RegionMask) -> Result<BinaryPatch> {
    let pass1 = threshold_mask(img, mask)?;
    let bbox = mask.bbox;
    let w = bbox.width();
    let h = bbox.height();
    let mut out = pass1.clone();
    for (x, y) in mask.iter() {
        let local = (y - bbox.y0) as usize * w as usize + (x - bbox.x0) as usize;
        if pass1[local] {
            continue;
        }
        // only pixels with all 8 neighbors in-region qualify
        if x == 0 || y == 0 {
            continue;
        }
        let mut fg = 0u32;
        let mut interior = true;
        'outer: for ny in y - 1..=y + 1 {
            for nx in x - 1..=x + 1 {
                if nx == x && ny == y {
                    continue;
                }
                if !mask.contains(nx, ny) {
                    interior = false;
                    break 'outer;
                }
                let nlocal = (ny - bbox.y0) as usize * w as usize + (nx - bbox.x0) as usize;
                if pass1[nlocal] {
                    fg += 1;
                }
            }
        }
        if interior && fg > 4 {
            out[local] = true;
        }
    }
    Ok(BinaryPatch {
        x0: bbox.x0,
        y0: bbox.y0,
        width: w,
        height: h,
        mask: out,
    })
}

/// Binarize a component's region within the page image.
pub fn binarize_cc(
    cc: &ConnectedComponent,
    img: &GrayImage,
    grid: &BlockGrid,
    area: RegionArea,
) -> Result<BinaryPatch> {
    binarize_masked(img, &RegionMask::from_cc(cc, grid, area))
}

/// Compose disjoint patches onto a full-size page, background elsewhere.
pub fn compose_output(patches: &[BinaryPatch], width: u32, height: u32) -> Result<BinaryImage> {
    let mut page = BinaryImage::blank(width, height);
    for p in patches {
        if p.x0 + p.width > width || p.y0 + p.height > height {
            return Err(Error::PatchOutOfBounds {
                x0: p.x0,
                y0: p.y0,
                patch_width: p.width,
                patch_height: p.height,
                page_width: width,
                page_height: height,
            });
        }
        for dy in 0..p.height {
            for dx in 0..p.width {
                if p.get(dx, dy) {
                    page.set(p.x0 + dx, p.y0 + dy, true);
                }
            }
        }
    }
    Ok(page)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::Rect;
    use proptest::prelude::*;

    fn patch_from_values(vals: &[&[u8]]) -> (GrayImage, RegionMask) {
        let h = vals.len() as u32;
        let w = vals[0].len() as u32;
        let img = GrayImage::from_fn(w, h, |x, y| vals[y as usize][x as usize]);
        (img, RegionMask::full(Rect::new(0, 0, w - 1, h - 1)))
    }

    #[test]
    fn uniform_region_is_all_background() {
        let (img, mask) = patch_from_values(&[&[128, 128], &[128, 128]]);
        let patch = binarize_masked(&img, &mask).unwrap();
        assert!(patch.mask.iter().all(|&m| !m));
    }

    #[test]
    fn hand_trace_3x3() {
        // G_min=70, G_max=140, threshold 105; pass-1 fg: 90, 80, 95, 70.
        // Center 110 has only 4 fg neighbors and stays background;
        // border pixels are never promoted.
        let (img, mask) = patch_from_values(&[&[90, 120, 80], &[130, 110, 95], &[70, 105, 140]]);
        let patch = binarize_masked(&img, &mask).unwrap();
        let fg: Vec<(u32, u32)> = (0..3)
            .flat_map(|y| (0..3).map(move |x| (x, y)))
            .filter(|&(x, y)| patch.get(x, y))
            .collect();
        assert_eq!(fg, vec![(0, 0), (2, 0), (2, 1), (0, 2)]);
    }

    #[test]
    fn center_with_five_foreground_neighbors_is_promoted() {
        // G_min=0, G_max=255, threshold 127.5; the five 0s are fg.
        let (img, mask) = patch_from_values(&[&[0, 0, 0], &[0, 200, 0], &[255, 255, 255]]);
        let patch = binarize_masked(&img, &mask).unwrap();
        assert!(patch.get(1, 1));
    }

    #[test]
    fn compose_empty_is_blank() {
        let page = compose_output(&[], 8, 8).unwrap();
        assert!(page.mask.iter().all(|&m| !m));
    }

    #[test]
    fn compose_single_pixel() {
        let patch = BinaryPatch {
            x0: 5,
            y0: 5,
            width: 1,
            height: 1,
            mask: vec![true],
        };
        let page = compose_output(&[patch], 10, 10).unwrap();
        assert_eq!(page.mask.iter().filter(|&&m| m).count(), 1);
        assert!(page.get(5, 5));
    }

    #[test]
    fn compose_out_of_bounds_errors() {
        let patch = BinaryPatch {
            x0: 9,
            y0: 9,
            width: 2,
            height: 2,
            mask: vec![true; 4],
        };
        match compose_output(&[patch], 10, 10) {
            Err(Error::PatchOutOfBounds { .. }) => {}
            other => panic!("expected PatchOutOfBounds, got {other:?}"),
        }
    }

    fn random_patch(seed: u64, w: u32, h: u32) -> (GrayImage, RegionMask) {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let img = GrayImage::from_fn(w, h, |_, _| rng.gen());
        (img, RegionMask::full(Rect::new(0, 0, w - 1, h - 1)))
    }

    proptest! {
        #[test]
        fn pass1_subset_of_final(seed in any::<u64>(), w in 2u32..12, h in 2u32..12) {
            let (img, mask) = random_patch(seed, w, h);
            let pass1 = threshold_mask(&img, &mask).unwrap();
            let patch = binarize_masked(&img, &mask).unwrap();
            for (a, b) in pass1.iter().zip(&patch.mask) {
                prop_assert!(!a || *b);
            }
        }

        #[test]
        fn inversion_complements_pass1_off_threshold(seed in any::<u64>(), w in 2u32..10, h in 2u32..10) {
            let (img, mask) = random_patch(seed, w, h);
            let inv = GrayImage::from_fn(w, h, |x, y| 255 - img.get(x, y));
            let (g_min, g_max) = region_extremes(&img, &mask).unwrap();
            let a = threshold_mask(&img, &mask).unwrap();
            let b = threshold_mask(&inv, &mask).unwrap();
            let s = g_min as u16 + g_max as u16;
            for (i, (x, y)) in mask.iter().enumerate() {
                if 2 * img.get(x, y) as u16 != s {
                    prop_assert_eq!(a[i], !b[i]);
                }
            }
        }

        #[test]
        fn compose_additive_over_disjoint_patches(seed in any::<u64>()) {
            use rand::{Rng, SeedableRng};
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            // 4x4 patches on a disjoint 8-aligned lattice
            let mut patches: Vec<BinaryPatch> = Vec::new();
            for gy in 0..4u32 {
                for gx in 0..4u32 {
                    if rng.gen_bool(0.6) {
                        patches.push(BinaryPatch {
                            x0: gx * 8,
                            y0: gy * 8,
                            width: 4,
                            height: 4,
                            mask: (0..16).map(|_| rng.gen()).collect(),
                        });
                    }
                }
            }
            let page = compose_output(&patches, 32, 32).unwrap();
            let total: usize = patches.iter().map(|p| p.mask.iter().filter(|&&m| m).count()).sum();
            prop_assert_eq!(page.mask.iter().filter(|&&m| m).count(), total);
            // permutation invariance
            patches.reverse();
            prop_assert_eq!(compose_output(&patches, 32, 32).unwrap(), page);
        }
    }
}
