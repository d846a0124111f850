//! Pixel-region view of a connected component.

use serde::{Deserialize, Serialize};

use crate::background::BlockGrid;
use crate::components::ConnectedComponent;
use crate::geom::Rect;
use crate::raster::GrayImage;

/// Which pixels count as a component's region: the union of its member
/// blocks (default) or its full bounding box.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RegionArea {
    #[default]
    Blocks,
    Bbox,
}

/// Membership mask over a component's bounding box.
#[derive(Debug, Clone)]
pub struct RegionMask {
    pub bbox: Rect,
    inside: Vec<bool>,
}

impl RegionMask {
    pub fn from_cc(cc: &ConnectedComponent, grid: &BlockGrid, area: RegionArea) -> RegionMask {
        match area {
            RegionArea::Bbox => RegionMask::full(cc.bbox),
            RegionArea::Blocks => {
                let bbox = cc.bbox;
                let w = bbox.width() as usize;
                let mut inside = vec![false; w * bbox.height() as usize];
                for &(row, col) in &cc.blocks {
                    let r = grid.block_rect(row, col);
                    for y in r.y0..=r.y1 {
                        let base = (y - bbox.y0) as usize * w;
                        for x in r.x0..=r.x1 {
                            inside[base + (x - bbox.x0) as usize] = true;
                        }
                    }
                }
                RegionMask { bbox, inside }
            }
        }
    }

    pub fn full(bbox: Rect) -> RegionMask {
        RegionMask {
            bbox,
            inside: vec![true; bbox.area() as usize],
        }
    }

    /// Membership test in absolute image coordinates.
    #[inline]
    pub fn contains(&self, x: u32, y: u32) -> bool {
        self.bbox.contains(x, y)
            && self.inside
                [(y - self.bbox.y0) as usize * self.bbox.width() as usize + (x - self.bbox.x0) as usize]
    }

    /// In-region pixels in row-major order, absolute coordinates.
    pub fn iter(&self) -> impl Iterator<Item = (u32, u32)> + '_ {
        let w = self.bbox.width();
        let bbox = self.bbox;
        self.inside.iter().enumerate().filter_map(move |(i, &m)| {
            m.then(|| (bbox.x0 + i as u32 % w, bbox.y0 + i as u32 / w))
        })
    }

    pub fn pixel_count(&self) -> u64 {
        self.inside.iter().filter(|&&m| m).count() as u64
    }
}

/// Min/max intensity over the in-region pixels, `None` when empty.
pub fn region_extremes(img: &GrayImage, mask: &RegionMask) -> Option<(u8, u8)> {
    let mut ext: Option<(u8, u8)> = None;
    for (x, y) in mask.iter() {
        let v = img.get(x, y);
        ext = Some(match ext {
            None => (v, v),
            Some((lo, hi)) => (lo.min(v), hi.max(v)),
        });
    }
    ext
}

/// Mean-of-extremes foreground test: intensity strictly below
/// `(G_min + G_max) / 2`, compared in doubled units to avoid rounding.
#[inline]
pub fn is_foreground(v: u8, g_min: u8, g_max: u8) -> bool {
    2 * (v as u16) < g_min as u16 + g_max as u16
}
