//! Text region extraction and binarization for camera-captured business
//! card images.
//!
//! The pipeline works in three stages: coarse background elimination over
//! a block grid ([`background`]), region growing of the surviving
//! information blocks into connected components ([`components`]) with a
//! rule cascade separating text from noise, lines, and pictures
//! ([`classifier`]), and a light-weight two-pass binarization of the text
//! regions ([`binarizer`]). [`evaluator`] scores labeled components
//! against rectangle ground truth and [`bench`] sweeps the pipeline
//! across resolutions.

pub mod background;
pub mod bench;
pub mod binarizer;
pub mod classifier;
pub mod components;
pub mod config;
pub mod error;
pub mod evaluator;
pub mod geom;
pub mod memtrack;
pub mod pipeline;
pub mod raster;
pub mod region;
pub mod synth;

pub use config::PipelineConfig;
pub use error::{Error, Result};
pub use geom::Rect;
pub use pipeline::{run, PipelineOutput, Region};
pub use raster::{BinaryImage, GrayImage};
