//! Procedural tactile textures.
//!
//! Saturated classes are drawn as rows of small rhombuses. The rows run along
//! the class's lattice angle; rows are one period apart and features within a
//! row half a period apart, with every other row shifted by half a pitch.
//! Neutral is drawn as round dots on a square grid. Feature area grows with
//! darkness, the period shrinks with edge density, and features that would
//! reach into the line gap are left out whole.
//!
//! Angles are in degrees, counterclockwise as seen on screen, so a direction
//! at angle `θ` is `(cos θ, −sin θ)` in pixel coordinates.

use rayon::prelude::*;

use crate::blur::gaussian_blur;
use crate::color_quant::{ColorClass, ColorGroup, QuantizedColorField};
use crate::config::PipelineConfig;
use crate::edge_detect::BinaryEdgeMap;
use crate::error::{Error, Result};
use crate::line_render::GapMask;
use crate::raster::{raster_newtype, Grid};

raster_newtype!(
    /// Texture spacing control in `[density_floor, 1]`, high near edges.
    DensityField,
    f64
);

raster_newtype!(
    /// Binary ink of the synthesized textures.
    TextureLayer,
    bool
);

impl TextureLayer {
    pub fn empty(width: usize, height: usize) -> Self {
        Self(Grid::filled(width, height, false))
    }
}

/// Everything that determines the feature drawn for one class and location.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TextureParams {
    pub class: ColorClass,
    pub lattice_angle: f64,
    pub feature_angle: f64,
    pub period: f64,
    pub boldness: f64,
}

/// Blurs the edge map and lifts it to the configured floor.
pub fn compute_density(edges: &BinaryEdgeMap, cfg: &PipelineConfig) -> DensityField {
    let ones = edges.map(|&e| if e { 1.0 } else { 0.0 });
    let blurred = gaussian_blur(&ones, cfg.density_blur_radius);
    DensityField(blurred.map(|&d| d.max(cfg.density_floor)))
}

/// Row angle of a saturated group.
pub fn group_angle(group: ColorGroup, cfg: &PipelineConfig) -> Option<f64> {
    match group {
        ColorGroup::Blue => Some(cfg.angle_blue),
        ColorGroup::Green => Some(cfg.angle_green),
        ColorGroup::Yellow => Some(cfg.angle_yellow),
        ColorGroup::Red => Some(cfg.angle_red),
        ColorGroup::Neutral => None,
    }
}

/// Lattice and feature angles of a saturated class.
pub fn class_orientation(class: ColorClass, cfg: &PipelineConfig) -> Result<(f64, f64)> {
    let lattice = group_angle(class.group, cfg)
        .ok_or_else(|| Error::Invalid("the neutral class has no orientation".into()))?;
    let feature = group_angle(class.feature_group(), cfg).expect("fringe neighbors are saturated");
    Ok((lattice, feature))
}

pub fn boldness_for_brightness(v: f64) -> f64 {
    (1.0 - v).clamp(0.0, 1.0)
}

/// Row period for a density value: the maximum period at zero density, the
/// minimum at full density, linear in between.
pub fn period_for_density(d: f64, cfg: &PipelineConfig) -> f64 {
    let (p_min, p_max) = cfg.period_range();
    p_max + d * (p_min - p_max)
}

/// Index of the discrete period used for density `d`.
pub fn period_level(d: f64, cfg: &PipelineConfig) -> usize {
    let top = (cfg.texture_period_levels - 1) as f64;
    (d.clamp(0.0, 1.0) * top).round() as usize
}

pub fn level_period(level: usize, cfg: &PipelineConfig) -> f64 {
    period_for_density(level as f64 / (cfg.texture_period_levels - 1) as f64, cfg)
}

/// Texture parameters at a pixel with the given class, brightness and
/// density, with the period snapped to its discrete level.
pub fn texture_params(
    class: ColorClass,
    brightness: f64,
    density: f64,
    cfg: &PipelineConfig,
) -> TextureParams {
    let (lattice_angle, feature_angle) = class_orientation(class, cfg).unwrap_or((0.0, 0.0));
    TextureParams {
        class,
        lattice_angle,
        feature_angle,
        period: level_period(period_level(density, cfg), cfg),
        boldness: boldness_for_brightness(brightness),
    }
}

fn direction(deg: f64) -> (f64, f64) {
    let r = deg.to_radians();
    (r.cos(), -r.sin())
}

/// Feature centers of one class at one period.
#[derive(Debug, Clone, Copy)]
struct Lattice {
    /// Along-row unit vector.
    u: (f64, f64),
    /// Row-normal unit vector.
    n: (f64, f64),
    /// Spacing of features within a row.
    pitch: f64,
    /// Spacing of rows.
    row_gap: f64,
    staggered: bool,
}

impl Lattice {
    fn new(group: ColorGroup, period: f64, cfg: &PipelineConfig) -> Self {
        match group_angle(group, cfg) {
            Some(angle) => {
                let u = direction(angle);
                Self {
                    u,
                    n: (-u.1, u.0),
                    pitch: cfg.row_pitch_ratio * period,
                    row_gap: period,
                    staggered: true,
                }
            }
            None => Self {
                u: (1.0, 0.0),
                n: (0.0, 1.0),
                pitch: period,
                row_gap: period,
                staggered: false,
            },
        }
    }

    /// Nearest center to `(x, y)` in the nearest row. The lattice origin
    /// sits on a pixel corner.
    fn nearest(&self, x: f64, y: f64) -> (f64, f64) {
        let (x, y) = (x - 0.5, y - 0.5);
        let s = x * self.u.0 + y * self.u.1;
        let t = x * self.n.0 + y * self.n.1;
        let row = (t / self.row_gap).round();
        let shift = if self.staggered && (row as i64).rem_euclid(2) == 1 {
            self.pitch / 2.0
        } else {
            0.0
        };
        let col = ((s - shift) / self.pitch).round();
        let cs = col * self.pitch + shift;
        let ct = row * self.row_gap;
        (cs * self.u.0 + ct * self.n.0 + 0.5, cs * self.u.1 + ct * self.n.1 + 0.5)
    }

    fn cell_area(&self) -> f64 {
        self.pitch * self.row_gap
    }
}

/// Shape of one feature, relative to its center.
#[derive(Debug, Clone, Copy)]
enum Feature {
    /// Half diagonals along the feature axis and across it.
    Rhombus { axis: (f64, f64), half_long: f64, half_short: f64 },
    Disk { radius: f64 },
}

impl Feature {
    fn new(group: ColorGroup, feature_angle: f64, area: f64, cfg: &PipelineConfig) -> Option<Self> {
        if area <= 0.0 || area < cfg.feature_min_area {
            return None;
        }
        Some(if group.is_saturated() {
            let long = (2.0 * cfg.rhombus_aspect * area).sqrt();
            Feature::Rhombus {
                axis: direction(feature_angle),
                half_long: long / 2.0,
                half_short: long / cfg.rhombus_aspect / 2.0,
            }
        } else {
            Feature::Disk { radius: (area / std::f64::consts::PI).sqrt() }
        })
    }

    fn radius(&self) -> f64 {
        match *self {
            Feature::Rhombus { half_long, .. } => half_long,
            Feature::Disk { radius } => radius,
        }
    }

    fn contains(&self, dx: f64, dy: f64) -> bool {
        match *self {
            Feature::Rhombus { axis, half_long, half_short } => {
                let s = dx * axis.0 + dy * axis.1;
                let t = -dx * axis.1 + dy * axis.0;
                s.abs() / half_long + t.abs() / half_short <= 1.0
            }
            Feature::Disk { radius } => dx * dx + dy * dy <= radius * radius,
        }
    }
}

fn fill_ratio(group: ColorGroup, cfg: &PipelineConfig) -> f64 {
    if group.is_saturated() {
        cfg.rhombus_fill
    } else {
        cfg.dot_fill
    }
}

/// Draws the textures for a classified image.
///
/// Each pixel checks the nearest feature center of every class lattice at
/// every period level. A center only carries a feature if the pixel under it
/// has that class and period level; the feature's size and elongation come
/// from that pixel, so every feature is drawn whole or not at all.
pub fn stamp_texture(
    field: &QuantizedColorField,
    density: &DensityField,
    gap: &GapMask,
    cfg: &PipelineConfig,
) -> Result<TextureLayer> {
    let (w, h) = field.dimensions();
    field.classes().ensure_same_size(density.grid())?;
    field.classes().ensure_same_size(gap.excluded())?;

    let levels = density.map(|&d| period_level(d, cfg) as u8);
    let lattices: Vec<(ColorGroup, u8, Lattice)> = ColorGroup::ALL
        .iter()
        .flat_map(|&g| {
            (0..cfg.texture_period_levels)
                .map(move |k| (g, k as u8, Lattice::new(g, level_period(k, cfg), cfg)))
        })
        .collect();
    let present: Vec<bool> = lattices
        .iter()
        .map(|&(g, k, _)| {
            field
                .classes()
                .iter()
                .zip(levels.iter())
                .any(|(c, &l)| c.group == g && l == k)
        })
        .collect();
    let lattices: Vec<_> = lattices
        .into_iter()
        .zip(present)
        .filter_map(|(l, p)| p.then_some(l))
        .collect();

    let feature_at = |group: ColorGroup, lattice: &Lattice, cx: usize, cy: usize| {
        let class = field.class(cx, cy);
        let boldness = boldness_for_brightness(field.brightness(cx, cy));
        let area = boldness * fill_ratio(group, cfg) * lattice.cell_area();
        let feature_angle = group_angle(class.feature_group(), cfg).unwrap_or(0.0);
        Feature::new(group, feature_angle, area, cfg)
    };

    let mut ink = vec![false; w * h];
    ink.par_chunks_mut(w).enumerate().for_each(|(y, row)| {
        for (x, slot) in row.iter_mut().enumerate() {
            if gap.is_excluded(x, y) {
                continue;
            }
            let (px, py) = (x as f64, y as f64);
            *slot = lattices.iter().any(|&(group, level, ref lattice)| {
                let (cx, cy) = lattice.nearest(px, py);
                let (ix, iy) = (cx.round(), cy.round());
                if ix < 0.0 || iy < 0.0 || ix >= w as f64 || iy >= h as f64 {
                    return false;
                }
                let (ix, iy) = (ix as usize, iy as usize);
                if field.class(ix, iy).group != group || *levels.get(ix, iy) != level {
                    return false;
                }
                let Some(feature) = feature_at(group, lattice, ix, iy) else {
                    return false;
                };
                // The center pixel lies within sqrt(1/2) of the exact center.
                feature.contains(px - cx, py - cy)
                    && gap.admits(ix, iy, feature.radius() + std::f64::consts::FRAC_1_SQRT_2)
            });
        }
    });
    Ok(TextureLayer(Grid::from_vec(w, h, ink)?))
}
