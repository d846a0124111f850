use std::path::PathBuf;

use thiserror::Error;

/// Errors produced anywhere in the extraction pipeline.
#[derive(Debug, Error)]
pub enum Error {
    #[error("file not found: {path}")]
    FileNotFound { path: PathBuf },

    #[error("unsupported image format: {path}")]
    UnsupportedFormat { path: PathBuf },

    #[error("corrupt header or truncated data in {path} at byte {offset}")]
    CorruptHeader { path: PathBuf, offset: usize },

    #[error("i/o failure: {0}")]
    Io(#[from] std::io::Error),

    #[error("pixel buffer length {got} does not match {width}x{height}")]
    BadDimensions { width: u32, height: u32, got: usize },

    #[error("image {width}x{height} too small for one {block_width}x{block_height} block")]
    ImageTooSmall {
        width: u32,
        height: u32,
        block_width: u32,
        block_height: u32,
    },

    #[error("empty pixel region")]
    EmptyRegion,

    #[error("patch {patch_width}x{patch_height} at ({x0},{y0}) exceeds page {page_width}x{page_height}")]
    PatchOutOfBounds {
        x0: u32,
        y0: u32,
        patch_width: u32,
        patch_height: u32,
        page_width: u32,
        page_height: u32,
    },

    #[error("missing ground truth for image {image}")]
    MissingGroundTruth { image: String },

    #[error("evaluation over zero connected components")]
    EmptyEvaluation,

    #[error("no images found in dataset {path}")]
    EmptyDataset { path: PathBuf },
}

pub type Result<T> = std::result::Result<T, Error>;
