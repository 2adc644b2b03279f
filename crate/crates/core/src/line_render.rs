//! Edge lines of strength-dependent thickness, and the texture-free gap
//! around them.

use crate::config::PipelineConfig;
use crate::distance::squared_distance_to;
use crate::edge_detect::EdgeStrengthMap;
use crate::raster::{raster_newtype, Grid};

raster_newtype!(
    /// Binary ink of the rendered edge lines.
    LineLayer,
    bool
);

impl LineLayer {
    pub fn empty(width: usize, height: usize) -> Self {
        Self(Grid::filled(width, height, false))
    }
}

/// Pixels where textures are not allowed, plus the distance of every pixel
/// to the nearest line ink.
#[derive(Debug, Clone, PartialEq)]
pub struct GapMask {
    excluded: Grid<bool>,
    clearance: Grid<f64>,
    gap_width: f64,
}

impl GapMask {
    /// A mask that excludes nothing; every pixel is infinitely far from ink.
    pub fn none(width: usize, height: usize) -> Self {
        Self {
            excluded: Grid::filled(width, height, false),
            clearance: Grid::filled(width, height, f64::INFINITY),
            gap_width: 0.0,
        }
    }

    /// A mask that excludes every pixel.
    pub fn all(width: usize, height: usize) -> Self {
        Self {
            excluded: Grid::filled(width, height, true),
            clearance: Grid::filled(width, height, 0.0),
            gap_width: 0.0,
        }
    }

    pub fn excluded(&self) -> &Grid<bool> {
        &self.excluded
    }

    #[inline]
    pub fn is_excluded(&self, x: usize, y: usize) -> bool {
        *self.excluded.get(x, y)
    }

    /// Euclidean distance from `(x, y)` to the nearest inked line pixel.
    #[inline]
    pub fn clearance(&self, x: usize, y: usize) -> f64 {
        *self.clearance.get(x, y)
    }

    /// Whether a feature of the given radius centred on `(x, y)` stays
    /// entirely outside the excluded band.
    #[inline]
    pub fn admits(&self, x: usize, y: usize, radius: f64) -> bool {
        !self.is_excluded(x, y) && self.clearance(x, y) - radius > self.gap_width
    }

    pub fn gap_width(&self) -> f64 {
        self.gap_width
    }

    pub fn dimensions(&self) -> (usize, usize) {
        self.excluded.dimensions()
    }
}

/// Line thickness for a normalized edge strength: nothing at or below the
/// threshold, then linear from the minimum to the maximum thickness, flat
/// from the saturation strength on.
pub fn thickness_for_strength(s: f64, cfg: &PipelineConfig) -> f64 {
    let (s0, s1) = (cfg.edge_threshold, cfg.edge_saturation);
    let (t_min, t_max) = (cfg.line_thickness_min, cfg.line_thickness_max);
    if s <= s0 {
        0.0
    } else if s >= s1 {
        t_max
    } else {
        t_min + (t_max - t_min) * (s - s0) / (s1 - s0)
    }
}

/// Stamps a disk of diameter `thickness_for_strength(s)` on every edge pixel
/// above the threshold.
pub fn render_lines(edges: &EdgeStrengthMap, cfg: &PipelineConfig) -> LineLayer {
    let (w, h) = edges.dimensions();
    let mut ink = Grid::filled(w, h, false);
    for y in 0..h {
        for x in 0..w {
            let s = *edges.get(x, y);
            if s <= cfg.edge_threshold {
                continue;
            }
            let r = thickness_for_strength(s, cfg) / 2.0;
            let r2 = r * r;
            let reach = r.floor() as isize;
            for dy in -reach..=reach {
                let py = y as isize + dy;
                if py < 0 || py >= h as isize {
                    continue;
                }
                for dx in -reach..=reach {
                    let px = x as isize + dx;
                    if px < 0 || px >= w as isize {
                        continue;
                    }
                    if (dx * dx + dy * dy) as f64 <= r2 {
                        ink.set(px as usize, py as usize, true);
                    }
                }
            }
        }
    }
    LineLayer(ink)
}

/// Excludes every pixel within `gap_width` of line ink.
pub fn compute_gap_mask(lines: &LineLayer, gap_width: f64) -> GapMask {
    let d2 = squared_distance_to(lines);
    let g2 = gap_width * gap_width;
    GapMask {
        excluded: d2.map(|&d| d <= g2),
        clearance: d2.map(|d| d.sqrt()),
        gap_width,
    }
}
