//! Pipeline configuration: every numeric free parameter of the conversion.
//!
//! The on-disk form is UTF-8 text with one `key=value` per line. Blank lines
//! and lines starting with `#` are ignored, unknown keys are rejected, and
//! missing keys keep their defaults. `auto` is accepted for the optional
//! layout keys.

use std::fmt::Write as _;
use std::path::Path;
use std::str::FromStr;

use crate::error::{Error, Result};

trait ConfigValue: Sized {
    fn parse_value(raw: &str) -> Option<Self>;
    fn render(&self) -> String;
}

impl ConfigValue for f64 {
    fn parse_value(raw: &str) -> Option<Self> {
        f64::from_str(raw).ok().filter(|v| v.is_finite())
    }
    fn render(&self) -> String {
        self.to_string()
    }
}

impl ConfigValue for usize {
    fn parse_value(raw: &str) -> Option<Self> {
        usize::from_str(raw).ok()
    }
    fn render(&self) -> String {
        self.to_string()
    }
}

impl ConfigValue for bool {
    fn parse_value(raw: &str) -> Option<Self> {
        match raw {
            "true" | "1" | "yes" | "on" => Some(true),
            "false" | "0" | "no" | "off" => Some(false),
            _ => None,
        }
    }
    fn render(&self) -> String {
        self.to_string()
    }
}

impl<T: ConfigValue> ConfigValue for Option<T> {
    fn parse_value(raw: &str) -> Option<Self> {
        if raw == "auto" {
            Some(None)
        } else {
            T::parse_value(raw).map(Some)
        }
    }
    fn render(&self) -> String {
        match self {
            Some(v) => v.render(),
            None => "auto".to_string(),
        }
    }
}

macro_rules! pipeline_config {
    ($( $(#[$doc:meta])* $field:ident : $ty:ty = $default:expr ),* $(,)?) => {
        /// All tunable parameters of the conversion. Distances are in image
        /// pixels, angles in degrees, and hue angles on the `[0, 360)` wheel.
        #[derive(Debug, Clone, PartialEq)]
        pub struct PipelineConfig {
            $( $(#[$doc])* pub $field: $ty, )*
        }

        impl Default for PipelineConfig {
            fn default() -> Self {
                Self { $( $field: $default, )* }
            }
        }

        impl PipelineConfig {
            /// Every recognized key, in file order.
            pub const KEYS: &'static [&'static str] = &[ $( stringify!($field), )* ];

            fn set(&mut self, key: &str, raw: &str) -> Result<()> {
                match key {
                    $( stringify!($field) => {
                        self.$field = <$ty as ConfigValue>::parse_value(raw).ok_or_else(|| {
                            Error::config(key, format!("cannot parse `{raw}` as {}", stringify!($ty)))
                        })?;
                    } )*
                    _ => return Err(Error::config(key, "unknown key")),
                }
                Ok(())
            }

            /// `(key, value)` pairs for every field, rendered so that
            /// [`PipelineConfig::parse`] reads them back unchanged.
            pub fn entries(&self) -> Vec<(&'static str, String)> {
                vec![ $( (stringify!($field), ConfigValue::render(&self.$field)), )* ]
            }
        }
    };
}

pipeline_config! {
    /// Edges at or below this normalized strength are not drawn (s₀).
    edge_threshold: f64 = 0.2,
    /// Strength at which line thickness saturates at the maximum (s₁).
    edge_saturation: f64 = 0.5,
    line_thickness_min: f64 = 2.0,
    line_thickness_max: f64 = 6.0,
    /// Texture-free clearance around drawn lines.
    gap_width: f64 = 3.0,
    /// Gaussian sigma of the color blur; the edge detector pre-smooths at half of it.
    color_blur_radius: f64 = 3.0,
    /// Gaussian sigma used to turn the binary edge map into a density field.
    density_blur_radius: f64 = 8.0,
    /// Lower clamp of the density field so empty regions stay sparsely textured.
    density_floor: f64 = 0.08,
    neutral_saturation_max: f64 = 0.2,
    neutral_value_max: f64 = 0.15,
    hue_yellow_start: f64 = 30.0,
    hue_green_start: f64 = 90.0,
    hue_blue_start: f64 = 180.0,
    /// Red wraps around from here to `hue_yellow_start`, taking in the purples.
    hue_red_start: f64 = 270.0,
    /// Yellows darker than this drift toward green.
    yellow_correction_value: f64 = 0.5,
    /// Hue shift in degrees per unit of value below the yellow threshold.
    yellow_correction_rate: f64 = 150.0,
    orange_hue_min: f64 = 15.0,
    orange_hue_max: f64 = 45.0,
    /// Oranges darker than this drift toward yellow.
    orange_correction_value: f64 = 0.5,
    orange_correction_rate: f64 = 100.0,
    /// Texture row angles, counterclockwise from horizontal as seen on the page.
    angle_blue: f64 = 0.0,
    angle_green: f64 = 45.0,
    angle_yellow: f64 = 90.0,
    angle_red: f64 = 135.0,
    /// Row spacing used at density 1.
    texture_period_min: f64 = 10.0,
    /// Row spacing used at density 0.
    texture_period_max: f64 = 20.0,
    /// Number of discrete periods the density field is quantized to.
    texture_period_levels: usize = 4,
    /// Spacing of rhombuses along a row, relative to the row spacing.
    row_pitch_ratio: f64 = 0.5,
    /// Long-to-short diagonal ratio of a rhombus.
    rhombus_aspect: f64 = 3.0,
    /// Rhombus area at boldness 1, relative to its lattice cell.
    rhombus_fill: f64 = 0.08,
    /// Dot area at boldness 1, relative to its lattice cell.
    dot_fill: f64 = 0.2,
    /// Features with a smaller area, in square pixels, are not drawn.
    feature_min_area: f64 = 1.0,
    fringe_enabled: bool = false,
    frame_thickness: usize = 10,
    /// Empty band between a frame and the content it surrounds.
    frame_gap: usize = 8,
    frame_period: f64 = 5.0,
    frame_dot_radius: f64 = 1.5,
    /// Vertical gap between the two frames; `auto` means twice the frame thickness.
    inter_frame_gap: Option<usize> = None,
    page_margin: usize = 20,
    /// Physical page size; `auto` sizes the page to its content.
    page_width_mm: Option<f64> = None,
    page_height_mm: Option<f64> = None,
    thumbnail_scale: f64 = 1.0 / 3.0,
    dpi: f64 = 100.0,
}

impl PipelineConfig {
    /// Parses `key=value` text and validates the result.
    pub fn parse(text: &str) -> Result<Self> {
        let mut cfg = Self::default();
        let mut seen = std::collections::HashSet::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                return Err(Error::config(
                    line,
                    format!("line {}: expected `key=value`", lineno + 1),
                ));
            };
            let key = key.trim();
            if !seen.insert(key.to_string()) {
                return Err(Error::config(key, "given more than once"));
            }
            cfg.set(key, value.trim())?;
        }
        cfg.validate()?;
        Ok(cfg)
    }

    /// Renders the config in the same format [`PipelineConfig::parse`] reads.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for (key, value) in self.entries() {
            let _ = writeln!(out, "{key}={value}");
        }
        out
    }

    pub fn inter_frame_gap_px(&self) -> usize {
        self.inter_frame_gap.unwrap_or(2 * self.frame_thickness)
    }

    /// Checks every cross-field invariant, naming the first offending key.
    pub fn validate(&self) -> Result<()> {
        fn check(ok: bool, key: &str, message: &str) -> Result<()> {
            if ok {
                Ok(())
            } else {
                Err(Error::config(key, message))
            }
        }
        let unit = |v: f64| (0.0..=1.0).contains(&v);
        let hue = |v: f64| (0.0..360.0).contains(&v);

        check(
            self.edge_threshold > 0.0 && self.edge_threshold < 1.0,
            "edge_threshold",
            "must lie in (0, 1)",
        )?;
        check(
            self.edge_saturation > self.edge_threshold && self.edge_saturation <= 1.0,
            "edge_saturation",
            "must lie in (edge_threshold, 1]",
        )?;
        check(self.line_thickness_min > 0.0, "line_thickness_min", "must be positive")?;
        check(
            self.line_thickness_max >= self.line_thickness_min,
            "line_thickness_max",
            "must be at least line_thickness_min",
        )?;
        check(self.gap_width > 0.0, "gap_width", "must be positive")?;
        check(self.color_blur_radius > 0.0, "color_blur_radius", "must be positive")?;
        check(self.density_blur_radius > 0.0, "density_blur_radius", "must be positive")?;
        check(
            self.density_floor > 0.0 && self.density_floor <= 1.0,
            "density_floor",
            "must lie in (0, 1]",
        )?;
        check(unit(self.neutral_saturation_max), "neutral_saturation_max", "must lie in [0, 1]")?;
        check(unit(self.neutral_value_max), "neutral_value_max", "must lie in [0, 1]")?;

        for (key, v) in [
            ("hue_yellow_start", self.hue_yellow_start),
            ("hue_green_start", self.hue_green_start),
            ("hue_blue_start", self.hue_blue_start),
            ("hue_red_start", self.hue_red_start),
            ("orange_hue_min", self.orange_hue_min),
            ("orange_hue_max", self.orange_hue_max),
        ] {
            check(hue(v), key, "must lie in [0, 360)")?;
        }
        // The four arcs must tile the wheel in Red → Yellow → Green → Blue order.
        let starts = [
            ("hue_yellow_start", self.hue_red_start, self.hue_yellow_start),
            ("hue_green_start", self.hue_yellow_start, self.hue_green_start),
            ("hue_blue_start", self.hue_green_start, self.hue_blue_start),
            ("hue_red_start", self.hue_blue_start, self.hue_red_start),
        ];
        let mut total = 0.0;
        for (key, from, to) in starts {
            let span = (to - from).rem_euclid(360.0);
            check(span > 0.0, key, "hue arcs must be nonempty")?;
            total += span;
        }
        check(
            (total - 360.0).abs() < 1e-9,
            "hue_red_start",
            "hue arcs must cover the wheel once in red, yellow, green, blue order",
        )?;
        check(
            self.orange_hue_min != self.orange_hue_max,
            "orange_hue_max",
            "orange arc must be nonempty",
        )?;
        check(unit(self.yellow_correction_value), "yellow_correction_value", "must lie in [0, 1]")?;
        check(unit(self.orange_correction_value), "orange_correction_value", "must lie in [0, 1]")?;
        check(self.yellow_correction_rate >= 0.0, "yellow_correction_rate", "must be non-negative")?;
        check(self.orange_correction_rate >= 0.0, "orange_correction_rate", "must be non-negative")?;

        for (key, v) in [
            ("angle_blue", self.angle_blue),
            ("angle_green", self.angle_green),
            ("angle_yellow", self.angle_yellow),
            ("angle_red", self.angle_red),
        ] {
            check((0.0..180.0).contains(&v), key, "must lie in [0, 180)")?;
        }

        check(self.texture_period_min > 0.0, "texture_period_min", "must be positive")?;
        check(
            self.texture_period_max > self.texture_period_min,
            "texture_period_max",
            "must exceed texture_period_min",
        )?;
        check(self.texture_period_levels >= 2, "texture_period_levels", "must be at least 2")?;
        check(
            self.row_pitch_ratio > 0.0 && self.row_pitch_ratio <= 1.0,
            "row_pitch_ratio",
            "must lie in (0, 1]",
        )?;
        check(self.rhombus_aspect >= 1.0, "rhombus_aspect", "must be at least 1")?;
        // A rhombus longer than the along-row pitch would run into its neighbors.
        let fill_limit = self.row_pitch_ratio / (2.0 * self.rhombus_aspect);
        check(
            self.rhombus_fill > 0.0 && self.rhombus_fill <= fill_limit + 1e-12,
            "rhombus_fill",
            &format!("must lie in (0, row_pitch_ratio / (2 * rhombus_aspect)] = (0, {fill_limit}]"),
        )?;
        check(
            self.dot_fill > 0.0 && self.dot_fill <= std::f64::consts::FRAC_PI_4,
            "dot_fill",
            "must lie in (0, pi/4]",
        )?;
        check(self.feature_min_area >= 0.0, "feature_min_area", "must be non-negative")?;

        check(self.frame_thickness >= 1, "frame_thickness", "must be at least 1")?;
        check(
            self.frame_period > 0.0 && self.frame_period < self.texture_period_min,
            "frame_period",
            "must be positive and finer than texture_period_min",
        )?;
        check(
            self.frame_dot_radius > 0.0 && 2.0 * self.frame_dot_radius < self.frame_period,
            "frame_dot_radius",
            "dots must be smaller than the frame period",
        )?;
        check(
            self.frame_thickness as f64 >= self.frame_period + 2.0 * self.frame_dot_radius + 1.0,
            "frame_thickness",
            "must hold at least one whole row of frame dots (frame_period + 2 * frame_dot_radius + 1)",
        )?;
        check(
            self.thumbnail_scale > 0.0 && self.thumbnail_scale <= 1.0,
            "thumbnail_scale",
            "must lie in (0, 1]",
        )?;
        check(self.dpi > 0.0, "dpi", "must be positive")?;
        for (key, v) in [("page_width_mm", self.page_width_mm), ("page_height_mm", self.page_height_mm)] {
            check(v.is_none_or(|mm| mm > 0.0), key, "must be positive or `auto`")?;
        }
        Ok(())
    }

    pub fn period_range(&self) -> (f64, f64) {
        (self.texture_period_min, self.texture_period_max)
    }
}

impl FromStr for PipelineConfig {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::parse(s)
    }
}

/// Reads and validates a config file.
pub fn load_config(path: impl AsRef<Path>) -> Result<PipelineConfig> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    PipelineConfig::parse(&text)
}
