//! Converts color images into tactile graphics: edge lines of varying
//! thickness, directional textures that encode hue, and a framed page with a
//! thumbnail.

pub mod blur;
pub mod color_quant;
pub mod config;
pub mod distance;
pub mod edge_detect;
pub mod error;
pub mod image_io;
pub mod layout;
pub mod line_render;
pub mod pipeline;
pub mod raster;
pub mod texture_synth;

pub use config::{load_config, PipelineConfig};
pub use error::{Error, Result};
pub use raster::Grid;
