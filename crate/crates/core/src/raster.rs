//! Image loading, saving and conversion. All file-format concerns live here;
//! the algorithmic modules only ever see [`GrayImage`] and [`BinaryImage`].
//!
//! Supported on disk: binary PGM (`P5`, maxval <= 255), bit-packed PBM (`P4`,
//! MSB first), and 8-bit PNG (read only; RGB inputs are converted with
//! BT.601 luma weights).

use std::fs;
use std::io::Write as _;
use std::path::Path;

use crate::error::{Error, Result};

/// Row-major 8-bit grayscale raster.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GrayImage {
    pub width: u32,
    pub height: u32,
    pub pixels: Vec<u8>,
}

impl GrayImage {
    pub fn new(width: u32, height: u32, pixels: Vec<u8>) -> Result<Self> {
        if width == 0 || height == 0 || pixels.len() != (width as usize) * (height as usize) {
            return Err(Error::BadDimensions {
                width,
                height,
                got: pixels.len(),
            });
        }
        Ok(GrayImage {
            width,
            height,
            pixels,
        })
    }

    pub fn from_fn(width: u32, height: u32, mut f: impl FnMut(u32, u32) -> u8) -> Self {
        let mut pixels = Vec::with_capacity(width as usize * height as usize);
        for y in 0..height {
            for x in 0..width {
                pixels.push(f(x, y));
            }
        }
        GrayImage {
            width,
            height,
            pixels,
        }
    }

    #[inline]
    pub fn get(&self, x: u32, y: u32) -> u8 {
        self.pixels[y as usize * self.width as usize + x as usize]
    }

    #[inline]
    pub fn set(&mut self, x: u32, y: u32, v: u8) {
        self.pixels[y as usize * self.width as usize + x as usize] = v;
    }

    /// Bilinear rescale to `new_width` x `new_height`.
    pub fn resize_bilinear(&self, new_width: u32, new_height: u32) -> GrayImage {
        assert!(new_width > 0 && new_height > 0);
        if new_width == self.width && new_height == self.height {
            return self.clone();
        }
        let sx = self.width as f64 / new_width as f64;
        let sy = self.height as f64 / new_height as f64;
        GrayImage::from_fn(new_width, new_height, |x, y| {
            let fx = ((x as f64 + 0.5) * sx - 0.5).max(0.0);
            let fy = ((y as f64 + 0.5) * sy - 0.5).max(0.0);
            let x0 = (fx.floor() as u32).min(self.width - 1);
            let y0 = (fy.floor() as u32).min(self.height - 1);
            let x1 = (x0 + 1).min(self.width - 1);
            let y1 = (y0 + 1).min(self.height - 1);
            let tx = fx - x0 as f64;
            let ty = fy - y0 as f64;
            let top = self.get(x0, y0) as f64 * (1.0 - tx) + self.get(x1, y0) as f64 * tx;
            let bot = self.get(x0, y1) as f64 * (1.0 - tx) + self.get(x1, y1) as f64 * tx;
            (top * (1.0 - ty) + bot * ty).round().clamp(0.0, 255.0) as u8
        })
    }
}

/// Two-level page mask; `true` is Foreground (ink).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BinaryImage {
    pub width: u32,
    pub height: u32,
    pub mask: Vec<bool>,
}

impl BinaryImage {
    pub fn blank(width: u32, height: u32) -> Self {
        BinaryImage {
            width,
            height,
            mask: vec![false; width as usize * height as usize],
        }
    }

    #[inline]
    pub fn get(&self, x: u32, y: u32) -> bool {
        self.mask[y as usize * self.width as usize + x as usize]
    }

    #[inline]
    pub fn set(&mut self, x: u32, y: u32, fg: bool) {
        self.mask[y as usize * self.width as usize + x as usize] = fg;
    }
}

/// BT.601 luma conversion, rounded to the nearest gray level.
pub fn to_grayscale(r: u8, g: u8, b: u8) -> u8 {
    let y = 0.299 * r as f64 + 0.587 * g as f64 + 0.114 * b as f64;
    y.round().clamp(0.0, 255.0) as u8
}

const PNG_MAGIC: [u8; 8] = [0x89, b'P', b'N', b'G', 0x0d, 0x0a, 0x1a, 0x0a];

/// Load a P5/P4/PNG image as grayscale. P4 bits map to gray 0 (set) / 255.
pub fn load_image(path: impl AsRef<Path>) -> Result<GrayImage> {
    let path = path.as_ref();
    let bytes = match fs::read(path) {
        Ok(b) => b,
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => {
            return Err(Error::FileNotFound {
                path: path.to_path_buf(),
            })
        }
        Err(e) => return Err(e.into()),
    };
    if bytes.starts_with(b"P5") {
        parse_pgm(path, &bytes)
    } else if bytes.starts_with(b"P4") {
        parse_pbm(path, &bytes)
    } else if bytes.starts_with(&PNG_MAGIC) {
        parse_png(path, &bytes)
    } else {
        Err(Error::UnsupportedFormat {
            path: path.to_path_buf(),
        })
    }
}

/// Save as binary PGM (`P5`, maxval 255).
pub fn save_gray(img: &GrayImage, path: impl AsRef<Path>) -> Result<()> {
    let mut out = Vec::with_capacity(img.pixels.len() + 32);
    write!(out, "P5\n{} {}\n255\n", img.width, img.height)?;
    out.extend_from_slice(&img.pixels);
    fs::write(path, out)?;
    Ok(())
}

/// Save a binary page. `.pbm` writes bit-packed P4 (1 = Foreground);
/// anything else writes P5 with Foreground = 0 and Background = 255.
pub fn save_binary(img: &BinaryImage, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let pbm = path
        .extension()
        .map(|e| e.eq_ignore_ascii_case("pbm"))
        .unwrap_or(false);
    let mut out = Vec::new();
    if pbm {
        write!(out, "P4\n{} {}\n", img.width, img.height)?;
        let row_bytes = (img.width as usize + 7) / 8;
        for y in 0..img.height {
            let mut row = vec![0u8; row_bytes];
            for x in 0..img.width {
                if img.get(x, y) {
                    row[x as usize / 8] |= 0x80 >> (x % 8);
                }
            }
            out.extend_from_slice(&row);
        }
    } else {
        write!(out, "P5\n{} {}\n255\n", img.width, img.height)?;
        out.extend(img.mask.iter().map(|&fg| if fg { 0u8 } else { 255u8 }));
    }
    fs::write(path, out)?;
    Ok(())
}

struct Tokens<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Tokens<'a> {
    fn skip_ws(&mut self) {
        loop {
            while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_whitespace() {
                self.pos += 1;
            }
            // '#' starts a comment running to end of line
            if self.pos < self.bytes.len() && self.bytes[self.pos] == b'#' {
                while self.pos < self.bytes.len() && self.bytes[self.pos] != b'\n' {
                    self.pos += 1;
                }
            } else {
                return;
            }
        }
    }

    fn next_uint(&mut self) -> Option<u32> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if self.pos == start || self.pos - start > 9 {
            return None;
        }
        std::str::from_utf8(&self.bytes[start..self.pos])
            .ok()?
            .parse()
            .ok()
    }
}

fn corrupt(path: &Path, offset: usize) -> Error {
    Error::CorruptHeader {
        path: path.to_path_buf(),
        offset,
    }
}

fn parse_pgm(path: &Path, bytes: &[u8]) -> Result<GrayImage> {
    let mut t = Tokens { bytes, pos: 2 };
    let width = t.next_uint().ok_or_else(|| corrupt(path, t.pos))?;
    let height = t.next_uint().ok_or_else(|| corrupt(path, t.pos))?;
    let maxval = t.next_uint().ok_or_else(|| corrupt(path, t.pos))?;
    if width == 0 || height == 0 || maxval == 0 || maxval > 255 {
        return Err(corrupt(path, t.pos));
    }
    // exactly one whitespace byte separates the header from the raster
    if t.pos >= bytes.len() || !bytes[t.pos].is_ascii_whitespace() {
        return Err(corrupt(path, t.pos));
    }
    let data = &bytes[t.pos + 1..];
    let need = width as usize * height as usize;
    if data.len() < need {
        return Err(corrupt(path, bytes.len()));
    }
    let mut pixels = data[..need].to_vec();
    if maxval != 255 {
        for p in &mut pixels {
            *p = ((*p as u32 * 255 + maxval / 2) / maxval) as u8;
        }
    }
    GrayImage::new(width, height, pixels)
}

fn parse_pbm(path: &Path, bytes: &[u8]) -> Result<GrayImage> {
    let mut t = Tokens { bytes, pos: 2 };
    let width = t.next_uint().ok_or_else(|| corrupt(path, t.pos))?;
    let height = t.next_uint().ok_or_else(|| corrupt(path, t.pos))?;
    if width == 0 || height == 0 {
        return Err(corrupt(path, t.pos));
    }
    if t.pos >= bytes.len() || !bytes[t.pos].is_ascii_whitespace() {
        return Err(corrupt(path, t.pos));
    }
    let data = &bytes[t.pos + 1..];
    let row_bytes = (width as usize + 7) / 8;
    if data.len() < row_bytes * height as usize {
        return Err(corrupt(path, bytes.len()));
    }
    let mut pixels = Vec::with_capacity(width as usize * height as usize);
    for y in 0..height as usize {
        let row = &data[y * row_bytes..(y + 1) * row_bytes];
        for x in 0..width as usize {
            let set = row[x / 8] & (0x80 >> (x % 8)) != 0;
            pixels.push(if set { 0 } else { 255 });
        }
    }
    GrayImage::new(width, height, pixels)
}

fn parse_png(path: &Path, bytes: &[u8]) -> Result<GrayImage> {
    let decoded = image::load_from_memory_with_format(bytes, image::ImageFormat::Png)
        .map_err(|_| corrupt(path, 0))?;
    let (width, height) = (decoded.width(), decoded.height());
    let pixels = match decoded {
        image::DynamicImage::ImageLuma8(g) => g.into_raw(),
        other => {
            let rgb = other.to_rgb8();
            rgb.pixels()
                .map(|p| to_grayscale(p[0], p[1], p[2]))
                .collect()
        }
    };
    GrayImage::new(width, height, pixels)
}
