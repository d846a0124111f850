//! Grouping of touching information blocks into connected components by
//! region growing (explicit-stack flood fill over the block grid).

use serde::{Deserialize, Serialize};

use crate::background::{BlockGrid, BlockLabel};
use crate::geom::Rect;

/// Block adjacency used when growing regions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(into = "u8", try_from = "u8")]
pub enum Connectivity {
    Four,
    Eight,
}

impl Default for Connectivity {
    fn default() -> Self {
        Connectivity::Eight
    }
}

impl From<Connectivity> for u8 {
    fn from(c: Connectivity) -> u8 {
        match c {
            Connectivity::Four => 4,
            Connectivity::Eight => 8,
        }
    }
}

impl TryFrom<u8> for Connectivity {
    type Error = String;

    fn try_from(v: u8) -> std::result::Result<Self, String> {
        match v {
            4 => Ok(Connectivity::Four),
            8 => Ok(Connectivity::Eight),
            other => Err(format!("connectivity must be 4 or 8, got {other}")),
        }
    }
}

/// A maximal group of touching information blocks, with its tight
/// pixel-space bounding box and geometric features.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConnectedComponent {
    /// Member blocks as (row, col), sorted.
    pub blocks: Vec<(u32, u32)>,
    pub bbox: Rect,
    pub h_cc: u32,
    pub w_cc: u32,
    /// Total pixels covered by the member blocks (edge blocks count their
    /// absorbed remainder pixels).
    pub a_cc: u64,
}

/// Build a component from its member blocks: bounding box, height, width
/// and block-covered pixel area.
pub fn cc_features(mut blocks: Vec<(u32, u32)>, grid: &BlockGrid) -> ConnectedComponent {
    assert!(!blocks.is_empty());
    blocks.sort_unstable();
    let mut bbox: Option<Rect> = None;
    let mut a_cc = 0u64;
    for &(row, col) in &blocks {
        let r = grid.block_rect(row, col);
        a_cc += r.area();
        bbox = Some(match bbox {
            None => r,
            Some(b) => Rect::new(b.x0.min(r.x0), b.y0.min(r.y0), b.x1.max(r.x1), b.y1.max(r.y1)),
        });
    }
    let bbox = bbox.unwrap();
    ConnectedComponent {
        blocks,
        h_cc: bbox.height(),
        w_cc: bbox.width(),
        a_cc,
        bbox,
    }
}

/// All maximal connected groups of information blocks, in ascending
/// (bbox.y0, bbox.x0) order.
pub fn label_components(grid: &BlockGrid, connectivity: Connectivity) -> Vec<ConnectedComponent> {
    let mut visited = vec![false; grid.labels.len()];
    let mut out = Vec::new();
    let mut stack = Vec::new();
    for row in 0..grid.rows {
        for col in 0..grid.cols {
            let idx = grid.index(row, col);
            if visited[idx] || grid.labels[idx] != BlockLabel::Information {
                continue;
            }
            visited[idx] = true;
            stack.push((row, col));
            let mut members = Vec::new();
            while let Some((r, c)) = stack.pop() {
                members.push((r, c));
                for (nr, nc) in neighbors(r, c, grid.rows, grid.cols, connectivity) {
                    let nidx = grid.index(nr, nc);
                    if !visited[nidx] && grid.labels[nidx] == BlockLabel::Information {
                        visited[nidx] = true;
                        stack.push((nr, nc));
                    }
                }
            }
            out.push(cc_features(members, grid));
        }
    }
    out.sort_by_key(|cc| (cc.bbox.y0, cc.bbox.x0));
    out
}

fn neighbors(
    row: u32,
    col: u32,
    rows: u32,
    cols: u32,
    connectivity: Connectivity,
) -> impl Iterator<Item = (u32, u32)> {
    const OFFSETS8: [(i64, i64); 8] = [
        (-1, -1),
        (-1, 0),
        (-1, 1),
        (0, -1),
        (0, 1),
        (1, -1),
        (1, 0),
        (1, 1),
    ];
    const OFFSETS4: [(i64, i64); 4] = [(-1, 0), (0, -1), (0, 1), (1, 0)];
    let offsets: &'static [(i64, i64)] = match connectivity {
        Connectivity::Four => &OFFSETS4,
        Connectivity::Eight => &OFFSETS8,
    };
    offsets.iter().filter_map(move |&(dr, dc)| {
        let nr = row as i64 + dr;
        let nc = col as i64 + dc;
        if nr >= 0 && nc >= 0 && (nr as u32) < rows && (nc as u32) < cols {
            Some((nr as u32, nc as u32))
        } else {
            None
        }
    })
}
