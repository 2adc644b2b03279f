//! Strength-valued edge detection.
//!
//! The detector smooths each channel with a Gaussian (σ = half the color blur
//! radius), takes central differences, and keeps for every pixel the channel
//! with the largest gradient norm. Magnitudes are normalized by the image-wide
//! maximum and thinned by non-maximum suppression along the gradient, quantized
//! to eight directions.
//!
//! Suppression keeps a pixel when it is not smaller than its neighbor on the
//! darker side and strictly larger than its neighbor on the brighter side.
//! Comparisons allow a tolerance of `1e-9` of the peak magnitude. For a step
//! edge this keeps exactly one pixel, the first one on the bright side, and
//! the choice rotates with the image.

use std::path::Path;

use rayon::prelude::*;

use crate::blur::gaussian_blur;
use crate::config::PipelineConfig;
use crate::error::{Error, Result};
use crate::image_io::{load_gray_image, save_gray_image, BitDepth, ColorImage, GrayImage};
use crate::raster::{raster_newtype, Grid};

raster_newtype!(
    /// Normalized edge strength in `[0, 1]`, nonzero only on thinned edge loci.
    EdgeStrengthMap,
    f64
);

raster_newtype!(
    /// `true` where the edge strength exceeds the threshold.
    BinaryEdgeMap,
    bool
);

/// Relative tolerance of the suppression comparisons.
const NMS_TOLERANCE: f64 = 1e-9;
/// tan(22.5°), the boundary between axis-aligned and diagonal directions.
const TAN_PI_8: f64 = 0.414_213_562_373_095_03;

impl EdgeStrengthMap {
    /// Wraps strengths, checking they lie in `[0, 1]`.
    pub fn new(grid: Grid<f64>) -> Result<Self> {
        if let Some(bad) = grid.iter().find(|s| !(0.0..=1.0).contains(*s)) {
            return Err(Error::Invalid(format!("edge strength {bad} outside [0, 1]")));
        }
        Ok(Self(grid))
    }

    /// Strengths rounded to the 16-bit grid used by the export format, so a
    /// run on exported-then-imported edges sees exactly the same values.
    pub fn quantized_16(&self) -> Self {
        Self(GrayImage(self.0.clone()).quantized(BitDepth::Sixteen).into_grid())
    }
}

#[derive(Clone, Copy, Default)]
struct Gradient {
    magnitude: f64,
    gx: f64,
    gy: f64,
}

fn channel_gradients(img: &ColorImage, sigma: f64) -> Grid<Gradient> {
    let smoothed: Vec<Grid<f64>> = (0..3)
        .map(|c| gaussian_blur(&img.channel(c), sigma))
        .collect();
    let (w, h) = img.dimensions();
    let mut out = vec![Gradient::default(); w * h];
    out.par_chunks_mut(w).enumerate().for_each(|(y, row)| {
        let y = y as isize;
        for (x, slot) in row.iter_mut().enumerate() {
            let xi = x as isize;
            let mut best = Gradient::default();
            for ch in &smoothed {
                let gx = (ch.get_clamped(xi + 1, y) - ch.get_clamped(xi - 1, y)) / 2.0;
                let gy = (ch.get_clamped(xi, y + 1) - ch.get_clamped(xi, y - 1)) / 2.0;
                let magnitude = gx.hypot(gy);
                if magnitude > best.magnitude {
                    best = Gradient { magnitude, gx, gy };
                }
            }
            *slot = best;
        }
    });
    Grid::from_vec(w, h, out).expect("same size")
}

/// Unit step toward the brighter side, snapped to one of eight directions.
fn step_along(gx: f64, gy: f64) -> (isize, isize) {
    let (ax, ay) = (gx.abs(), gy.abs());
    let sx = if gx > 0.0 { 1 } else { -1 };
    let sy = if gy > 0.0 { 1 } else { -1 };
    if ay <= TAN_PI_8 * ax {
        (sx, 0)
    } else if ax <= TAN_PI_8 * ay {
        (0, sy)
    } else {
        (sx, sy)
    }
}

/// Magnitude at `(x + dx, y + dy)`, or at `(x, y)` itself when that is off the raster.
fn neighbor(grads: &Grid<Gradient>, x: usize, y: usize, dx: isize, dy: isize) -> f64 {
    let nx = x as isize + dx;
    let ny = y as isize + dy;
    if nx < 0 || ny < 0 || nx >= grads.width() as isize || ny >= grads.height() as isize {
        grads.get(x, y).magnitude
    } else {
        grads.get(nx as usize, ny as usize).magnitude
    }
}

/// Detects edges on the unblurred color image.
pub fn detect_edges(img: &ColorImage, cfg: &PipelineConfig) -> EdgeStrengthMap {
    let grads = channel_gradients(img, cfg.color_blur_radius / 2.0);
    let peak = grads.iter().map(|g| g.magnitude).fold(0.0, f64::max);
    let (w, h) = grads.dimensions();
    if peak == 0.0 {
        return EdgeStrengthMap(Grid::filled(w, h, 0.0));
    }
    let eps = NMS_TOLERANCE * peak;
    let mut out = vec![0.0; w * h];
    out.par_chunks_mut(w).enumerate().for_each(|(y, row)| {
        for (x, slot) in row.iter_mut().enumerate() {
            let g = grads.get(x, y);
            if g.magnitude <= eps {
                continue;
            }
            let (dx, dy) = step_along(g.gx, g.gy);
            let darker = neighbor(&grads, x, y, -dx, -dy);
            let brighter = neighbor(&grads, x, y, dx, dy);
            if g.magnitude + eps >= darker && g.magnitude > brighter + eps {
                *slot = (g.magnitude / peak).min(1.0);
            }
        }
    });
    EdgeStrengthMap(Grid::from_vec(w, h, out).expect("same size"))
}

/// Marks pixels whose strength is strictly above `threshold`.
pub fn threshold_edges(edges: &EdgeStrengthMap, threshold: f64) -> BinaryEdgeMap {
    BinaryEdgeMap(edges.map(|&s| s > threshold))
}

/// Writes the edge map as a 16-bit gray image for external editing.
pub fn export_edges(edges: &EdgeStrengthMap, path: impl AsRef<Path>) -> Result<()> {
    save_gray_image(&GrayImage(edges.0.clone()), path, BitDepth::Sixteen)
}

/// Reads an edited edge map. The values are used as they are, without
/// re-thinning; the raster must match the color image size.
pub fn import_edges(path: impl AsRef<Path>, width: usize, height: usize) -> Result<EdgeStrengthMap> {
    let gray = load_gray_image(path)?;
    if gray.dimensions() != (width, height) {
        return Err(Error::DimensionMismatch {
            expected: (width, height),
            found: gray.dimensions(),
        });
    }
    Ok(EdgeStrengthMap(gray.into_grid()))
}
