//! Color blur, HSV conversion, value-dependent hue correction and the
//! five-way color classification.

use crate::blur::gaussian_blur;
use crate::config::PipelineConfig;
use crate::error::Result;
use crate::image_io::{ColorImage, Rgb};
use crate::raster::Grid;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HsvColor {
    /// Hue in degrees, `[0, 360)`. Zero for achromatic colors.
    pub h: f64,
    pub s: f64,
    pub v: f64,
}

impl HsvColor {
    pub fn new(h: f64, s: f64, v: f64) -> Self {
        Self { h: h.rem_euclid(360.0), s, v }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ColorGroup {
    Blue,
    Green,
    Yellow,
    Red,
    Neutral,
}

impl ColorGroup {
    pub const ALL: [ColorGroup; 5] = [
        ColorGroup::Blue,
        ColorGroup::Green,
        ColorGroup::Yellow,
        ColorGroup::Red,
        ColorGroup::Neutral,
    ];

    /// The saturated groups in increasing hue order around the wheel.
    pub const WHEEL: [ColorGroup; 4] = [
        ColorGroup::Red,
        ColorGroup::Yellow,
        ColorGroup::Green,
        ColorGroup::Blue,
    ];

    /// Palette index used in the class debug image.
    pub fn index(self) -> u8 {
        match self {
            ColorGroup::Blue => 0,
            ColorGroup::Green => 1,
            ColorGroup::Yellow => 2,
            ColorGroup::Red => 3,
            ColorGroup::Neutral => 4,
        }
    }

    pub fn from_index(i: u8) -> Option<Self> {
        Self::ALL.get(i as usize).copied()
    }

    pub fn is_saturated(self) -> bool {
        self != ColorGroup::Neutral
    }

    pub fn name(self) -> &'static str {
        match self {
            ColorGroup::Blue => "blue",
            ColorGroup::Green => "green",
            ColorGroup::Yellow => "yellow",
            ColorGroup::Red => "red",
            ColorGroup::Neutral => "neutral",
        }
    }

    /// Neighbor on the wheel toward lower hue (`-1`) or higher hue (`+1`).
    fn wheel_neighbor(self, step: isize) -> ColorGroup {
        let pos = Self::WHEEL.iter().position(|&g| g == self).expect("saturated group") as isize;
        Self::WHEEL[(pos + step).rem_euclid(4) as usize]
    }

    /// Hue arc `[start, end)` of a saturated group.
    pub fn hue_arc(self, cfg: &PipelineConfig) -> Option<(f64, f64)> {
        match self {
            ColorGroup::Yellow => Some((cfg.hue_yellow_start, cfg.hue_green_start)),
            ColorGroup::Green => Some((cfg.hue_green_start, cfg.hue_blue_start)),
            ColorGroup::Blue => Some((cfg.hue_blue_start, cfg.hue_red_start)),
            ColorGroup::Red => Some((cfg.hue_red_start, cfg.hue_yellow_start)),
            ColorGroup::Neutral => None,
        }
    }
}

/// Position of a hue within the thirds of its class arc.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Fringe {
    Lower,
    Center,
    Upper,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ColorClass {
    pub group: ColorGroup,
    pub fringe: Fringe,
}

impl ColorClass {
    pub const NEUTRAL: ColorClass = ColorClass::center(ColorGroup::Neutral);

    pub const fn center(group: ColorGroup) -> Self {
        Self { group, fringe: Fringe::Center }
    }

    /// The group whose orientation the feature takes: the wheel neighbor for
    /// a fringe hue, the group itself otherwise.
    pub fn feature_group(self) -> ColorGroup {
        match (self.group, self.fringe) {
            (ColorGroup::Neutral, _) | (_, Fringe::Center) => self.group,
            (g, Fringe::Lower) => g.wheel_neighbor(-1),
            (g, Fringe::Upper) => g.wheel_neighbor(1),
        }
    }
}

/// Per-pixel color class and brightness.
#[derive(Debug, Clone, PartialEq)]
pub struct QuantizedColorField {
    classes: Grid<ColorClass>,
    brightness: Grid<f64>,
}

impl QuantizedColorField {
    pub fn new(classes: Grid<ColorClass>, brightness: Grid<f64>) -> Result<Self> {
        classes.ensure_same_size(&brightness)?;
        Ok(Self { classes, brightness })
    }

    pub fn uniform(width: usize, height: usize, class: ColorClass, brightness: f64) -> Self {
        Self {
            classes: Grid::filled(width, height, class),
            brightness: Grid::filled(width, height, brightness),
        }
    }

    pub fn width(&self) -> usize {
        self.classes.width()
    }

    pub fn height(&self) -> usize {
        self.classes.height()
    }

    pub fn dimensions(&self) -> (usize, usize) {
        self.classes.dimensions()
    }

    #[inline]
    pub fn class(&self, x: usize, y: usize) -> ColorClass {
        *self.classes.get(x, y)
    }

    #[inline]
    pub fn brightness(&self, x: usize, y: usize) -> f64 {
        *self.brightness.get(x, y)
    }

    pub fn classes(&self) -> &Grid<ColorClass> {
        &self.classes
    }

    pub fn brightness_grid(&self) -> &Grid<f64> {
        &self.brightness
    }

    /// Palette indices for the class debug image.
    pub fn class_indices(&self) -> Grid<u8> {
        self.classes.map(|c| c.group.index())
    }
}

/// Debug palette, indexed by [`ColorGroup::index`].
pub const CLASS_PALETTE: [[u8; 3]; 5] = [
    [0, 70, 220],
    [0, 160, 60],
    [240, 210, 0],
    [210, 30, 30],
    [150, 150, 150],
];

/// Gaussian blur of every channel with `σ = sigma`.
pub fn blur_colors(img: &ColorImage, sigma: f64) -> ColorImage {
    ColorImage::from_channels([0, 1, 2].map(|c| gaussian_blur(&img.channel(c), sigma)))
}

/// Hexcone RGB to HSV.
pub fn rgb_to_hsv(c: Rgb) -> HsvColor {
    let [r, g, b] = c;
    let max = r.max(g).max(b);
    let min = r.min(g).min(b);
    let d = max - min;
    if max <= 0.0 {
        return HsvColor { h: 0.0, s: 0.0, v: 0.0 };
    }
    let s = d / max;
    if d <= 0.0 {
        return HsvColor { h: 0.0, s: 0.0, v: max };
    }
    let sector = if max == r {
        ((g - b) / d).rem_euclid(6.0)
    } else if max == g {
        (b - r) / d + 2.0
    } else {
        (r - g) / d + 4.0
    };
    let mut h = 60.0 * sector;
    if h >= 360.0 {
        h -= 360.0;
    }
    HsvColor { h, s, v: max }
}

/// Offset of `h` from `start`, measured counterclockwise, in `[0, 360)`.
fn arc_offset(h: f64, start: f64) -> f64 {
    (h - start).rem_euclid(360.0)
}

fn arc_len(start: f64, end: f64) -> f64 {
    let len = (end - start).rem_euclid(360.0);
    if len == 0.0 {
        360.0
    } else {
        len
    }
}

fn in_arc(h: f64, start: f64, end: f64) -> bool {
    arc_offset(h, start) < arc_len(start, end)
}

fn arc_center(start: f64, end: f64) -> f64 {
    (start + arc_len(start, end) / 2.0).rem_euclid(360.0)
}

/// Signed shortest rotation from `from` to `to`, in `(-180, 180]`.
pub fn hue_displacement(from: f64, to: f64) -> f64 {
    let d = (to - from).rem_euclid(360.0);
    if d > 180.0 {
        d - 360.0
    } else {
        d
    }
}

fn rotate_toward(h: f64, target: f64, amount: f64) -> f64 {
    let d = hue_displacement(h, target);
    let step = amount.min(d.abs()).copysign(d);
    (h + step).rem_euclid(360.0)
}

/// Shifts dark orange toward yellow and dark yellow toward green.
///
/// Below the configured value threshold the hue moves toward the center of
/// the target arc by `rate · (threshold − v)` degrees, stopping at the center.
/// The orange rule takes precedence where the two ranges overlap.
pub fn correct_hue(c: HsvColor, cfg: &PipelineConfig) -> HsvColor {
    let yellow = (cfg.hue_yellow_start, cfg.hue_green_start);
    let green = (cfg.hue_green_start, cfg.hue_blue_start);
    let h = if in_arc(c.h, cfg.orange_hue_min, cfg.orange_hue_max) {
        if c.v < cfg.orange_correction_value {
            let amount = cfg.orange_correction_rate * (cfg.orange_correction_value - c.v);
            rotate_toward(c.h, arc_center(yellow.0, yellow.1), amount)
        } else {
            c.h
        }
    } else if in_arc(c.h, yellow.0, yellow.1) && c.v < cfg.yellow_correction_value {
        let amount = cfg.yellow_correction_rate * (cfg.yellow_correction_value - c.v);
        rotate_toward(c.h, arc_center(green.0, green.1), amount)
    } else {
        c.h
    };
    HsvColor { h, ..c }
}

/// Assigns a hue-corrected color to its class. The second value is the
/// brightness carried alongside the class.
pub fn classify_color(c: HsvColor, cfg: &PipelineConfig) -> (ColorClass, f64) {
    if c.s <= cfg.neutral_saturation_max || c.v <= cfg.neutral_value_max {
        return (ColorClass::NEUTRAL, c.v);
    }
    let (group, (start, end)) = ColorGroup::WHEEL
        .iter()
        .map(|&g| (g, g.hue_arc(cfg).expect("saturated group")))
        .find(|&(_, (start, end))| in_arc(c.h, start, end))
        .expect("hue arcs tile the wheel");
    let fringe = if cfg.fringe_enabled {
        let t = arc_offset(c.h, start) / arc_len(start, end);
        if t < 1.0 / 3.0 {
            Fringe::Lower
        } else if t < 2.0 / 3.0 {
            Fringe::Center
        } else {
            Fringe::Upper
        }
    } else {
        Fringe::Center
    };
    (ColorClass { group, fringe }, c.v)
}

/// Blur, convert, correct and classify every pixel.
pub fn quantize_field(img: &ColorImage, cfg: &PipelineConfig) -> QuantizedColorField {
    let blurred = blur_colors(img, cfg.color_blur_radius);
    let (w, h) = blurred.dimensions();
    let mut classes = Vec::with_capacity(w * h);
    let mut brightness = Vec::with_capacity(w * h);
    for &rgb in blurred.iter() {
        let (class, v) = classify_color(correct_hue(rgb_to_hsv(rgb), cfg), cfg);
        classes.push(class);
        brightness.push(v);
    }
    QuantizedColorField {
        classes: Grid::from_vec(w, h, classes).expect("sized"),
        brightness: Grid::from_vec(w, h, brightness).expect("sized"),
    }
}
