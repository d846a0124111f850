use serde::{Deserialize, Serialize};

/// Axis-aligned rectangle with inclusive pixel bounds.
///
/// Serializes as `[x0, y0, x1, y1]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(into = "[u32; 4]", try_from = "[u32; 4]")]
pub struct Rect {
    pub x0: u32,
    pub y0: u32,
    pub x1: u32,
    pub y1: u32,
}

impl Rect {
    pub fn new(x0: u32, y0: u32, x1: u32, y1: u32) -> Self {
        debug_assert!(x0 <= x1 && y0 <= y1);
        Rect { x0, y0, x1, y1 }
    }

    pub fn width(&self) -> u32 {
        self.x1 - self.x0 + 1
    }

    pub fn height(&self) -> u32 {
        self.y1 - self.y0 + 1
    }

    pub fn area(&self) -> u64 {
        self.width() as u64 * self.height() as u64
    }

    pub fn contains(&self, x: u32, y: u32) -> bool {
        x >= self.x0 && x <= self.x1 && y >= self.y0 && y <= self.y1
    }

    pub fn intersection(&self, other: &Rect) -> Option<Rect> {
        let x0 = self.x0.max(other.x0);
        let y0 = self.y0.max(other.y0);
        let x1 = self.x1.min(other.x1);
        let y1 = self.y1.min(other.y1);
        if x0 <= x1 && y0 <= y1 {
            Some(Rect { x0, y0, x1, y1 })
        } else {
            None
        }
    }

    /// Intersection-over-union of two rectangles, in [0, 1].
    pub fn iou(&self, other: &Rect) -> f64 {
        let inter = match self.intersection(other) {
            Some(r) => r.area() as f64,
            None => return 0.0,
        };
        let union = self.area() as f64 + other.area() as f64 - inter;
        inter / union
    }

    /// Rescale by independent x/y factors, clamped to the target page.
    pub fn scale(&self, sx: f64, sy: f64, page_width: u32, page_height: u32) -> Rect {
        let clamp = |v: f64, hi: u32| (v.round().max(0.0) as u32).min(hi.saturating_sub(1));
        let x0 = clamp(self.x0 as f64 * sx, page_width);
        let y0 = clamp(self.y0 as f64 * sy, page_height);
        let x1 = clamp(self.x1 as f64 * sx, page_width).max(x0);
        let y1 = clamp(self.y1 as f64 * sy, page_height).max(y0);
        Rect { x0, y0, x1, y1 }
    }
}

impl From<Rect> for [u32; 4] {
    fn from(r: Rect) -> Self {
        [r.x0, r.y0, r.x1, r.y1]
    }
}

impl TryFrom<[u32; 4]> for Rect {
    type Error = String;

    fn try_from(v: [u32; 4]) -> std::result::Result<Self, String> {
        if v[0] > v[2] || v[1] > v[3] {
            return Err(format!("degenerate rectangle {v:?}"));
        }
        Ok(Rect {
            x0: v[0],
            y0: v[1],
            x1: v[2],
            y1: v[3],
        })
    }
}
