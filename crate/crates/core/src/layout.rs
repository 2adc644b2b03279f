//! Page composition: framed main image on top, framed line-only thumbnail
//! below.

use crate::config::PipelineConfig;
use crate::error::{Error, Result};
use crate::line_render::LineLayer;
use crate::raster::{raster_newtype, Grid};
use crate::texture_synth::TextureLayer;

raster_newtype!(
    /// Lines and textures merged into one binary image.
    TactileImage,
    bool
);

/// Frame geometry in pixels.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FrameSpec {
    pub thickness: usize,
    /// Empty band between the frame and the content.
    pub gap: usize,
    /// Spacing of the frame's dot texture.
    pub period: f64,
    pub dot_radius: f64,
}

impl FrameSpec {
    pub fn from_config(cfg: &PipelineConfig) -> Self {
        Self {
            thickness: cfg.frame_thickness,
            gap: cfg.frame_gap,
            period: cfg.frame_period,
            dot_radius: cfg.frame_dot_radius,
        }
    }

    /// Width added on each side of the content.
    pub fn border(&self) -> usize {
        self.thickness + self.gap
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Rect {
    pub x: usize,
    pub y: usize,
    pub width: usize,
    pub height: usize,
}

impl Rect {
    pub fn right(&self) -> usize {
        self.x + self.width
    }

    pub fn bottom(&self) -> usize {
        self.y + self.height
    }

    pub fn contains(&self, x: usize, y: usize) -> bool {
        x >= self.x && x < self.right() && y >= self.y && y < self.bottom()
    }

    pub fn intersects(&self, other: &Rect) -> bool {
        self.x < other.right() && other.x < self.right() && self.y < other.bottom() && other.y < self.bottom()
    }
}

/// The printable page and where its parts sit.
#[derive(Debug, Clone, PartialEq)]
pub struct TactilePage {
    pub ink: Grid<bool>,
    pub dpi: f64,
    pub main_frame: Rect,
    pub main_content: Rect,
    pub thumb_frame: Rect,
    pub thumb_content: Rect,
}

impl TactilePage {
    pub fn width(&self) -> usize {
        self.ink.width()
    }

    pub fn height(&self) -> usize {
        self.ink.height()
    }

    /// Copies the pixels inside `rect`.
    pub fn crop(&self, rect: Rect) -> Grid<bool> {
        Grid::from_fn(rect.width, rect.height, |x, y| *self.ink.get(rect.x + x, rect.y + y))
    }
}

/// Union of line and texture ink.
pub fn compose_tactile(lines: &LineLayer, textures: &TextureLayer) -> Result<TactileImage> {
    lines.ensure_same_size(textures.grid())?;
    let (w, h) = lines.dimensions();
    let ink = lines.iter().zip(textures.iter()).map(|(&a, &b)| a || b).collect();
    Ok(TactileImage(Grid::from_vec(w, h, ink)?))
}

/// A ring of fine dots around an empty band that surrounds the content.
/// The returned raster has the content area (left blank) at offset
/// `spec.border()` on both axes.
pub fn render_frame(content_w: usize, content_h: usize, spec: &FrameSpec) -> Grid<bool> {
    let b = spec.border();
    let (w, h) = (content_w + 2 * b, content_h + 2 * b);
    let t = spec.thickness as f64;
    let r = spec.dot_radius;
    let p = spec.period;
    let rows_in_band = ((t - 1.0 - 2.0 * r) / p).floor().max(0.0);
    let origin = ((t - 1.0) - p * rows_in_band) / 2.0;

    // Dot centers whose whole disk lies inside the ring.
    let (wf, hf, tf) = (w as f64, h as f64, t);
    let inside_band = |cx: f64, cy: f64| {
        let in_outer = cx - r >= 0.0 && cy - r >= 0.0 && cx + r <= wf - 1.0 && cy + r <= hf - 1.0;
        let in_inner = cx + r > tf - 1.0 && cy + r > tf - 1.0 && cx - r < wf - tf && cy - r < hf - tf;
        in_outer && !in_inner
    };
    let centers = |len: f64| {
        (0..)
            .map(move |k| origin + k as f64 * p)
            .take_while(move |&c| c <= len)
    };

    let mut ink = Grid::filled(w, h, false);
    let reach = r.floor() as isize;
    for cy in centers(hf) {
        for cx in centers(wf) {
            if !inside_band(cx, cy) {
                continue;
            }
            let (ix, iy) = (cx.round() as isize, cy.round() as isize);
            for dy in -reach - 1..=reach + 1 {
                for dx in -reach - 1..=reach + 1 {
                    let (px, py) = (ix + dx, iy + dy);
                    let (ex, ey) = (px as f64 - cx, py as f64 - cy);
                    if ex * ex + ey * ey <= r * r && px >= 0 && py >= 0 && (px as usize) < w && (py as usize) < h {
                        ink.set(px as usize, py as usize, true);
                    }
                }
            }
        }
    }
    ink
}

/// Shrinks a line layer; a thumbnail pixel is inked when any source pixel in
/// its footprint is.
pub fn make_thumbnail(lines: &LineLayer, scale: f64) -> Result<LineLayer> {
    let (w, h) = lines.dimensions();
    let tw = (w as f64 * scale).round() as usize;
    let th = (h as f64 * scale).round() as usize;
    if tw == 0 || th == 0 || scale <= 0.0 {
        return Err(Error::Invalid(format!(
            "thumbnail scale {scale} shrinks a {w}x{h} image to nothing"
        )));
    }
    let span = |i: usize, src: usize, dst: usize| {
        let a = i * src / dst;
        let b = ((i + 1) * src / dst).max(a + 1).min(src);
        a..b
    };
    let out = Grid::from_fn(tw, th, |x, y| {
        span(y, h, th).any(|sy| span(x, w, tw).any(|sx| *lines.get(sx, sy)))
    });
    Ok(LineLayer::from_grid(out))
}

fn blit(page: &mut Grid<bool>, src: &Grid<bool>, ox: usize, oy: usize) {
    for y in 0..src.height() {
        for x in 0..src.width() {
            if *src.get(x, y) {
                page.set(ox + x, oy + y, true);
            }
        }
    }
}

fn mm_to_px(mm: f64, dpi: f64) -> usize {
    (mm / 25.4 * dpi).round() as usize
}

/// Lays out the page. Both images are framed and centered horizontally; the
/// thumbnail goes below the main image.
pub fn compose_page(main: &Grid<bool>, thumb: &Grid<bool>, cfg: &PipelineConfig) -> Result<TactilePage> {
    let spec = FrameSpec::from_config(cfg);
    let b = spec.border();
    let margin = cfg.page_margin;
    let gap = cfg.inter_frame_gap_px();
    let main_frame = (main.width() + 2 * b, main.height() + 2 * b);
    let thumb_frame = (thumb.width() + 2 * b, thumb.height() + 2 * b);

    let required = (
        2 * margin + main_frame.0.max(thumb_frame.0),
        2 * margin + main_frame.1 + gap + thumb_frame.1,
    );
    let page_w = cfg.page_width_mm.map_or(required.0, |mm| mm_to_px(mm, cfg.dpi));
    let page_h = cfg.page_height_mm.map_or(required.1, |mm| mm_to_px(mm, cfg.dpi));
    if required.0 > page_w || required.1 > page_h {
        return Err(Error::Layout { required, available: (page_w, page_h) });
    }

    let main_rect = Rect {
        x: (page_w - main_frame.0) / 2,
        y: margin,
        width: main_frame.0,
        height: main_frame.1,
    };
    let thumb_rect = Rect {
        x: (page_w - thumb_frame.0) / 2,
        y: main_rect.bottom() + gap,
        width: thumb_frame.0,
        height: thumb_frame.1,
    };
    let inner = |r: Rect, c: &Grid<bool>| Rect { x: r.x + b, y: r.y + b, width: c.width(), height: c.height() };

    let mut ink = Grid::filled(page_w, page_h, false);
    for (rect, content) in [(main_rect, main), (thumb_rect, thumb)] {
        blit(&mut ink, &render_frame(content.width(), content.height(), &spec), rect.x, rect.y);
        blit(&mut ink, content, rect.x + b, rect.y + b);
    }
    Ok(TactilePage {
        ink,
        dpi: cfg.dpi,
        main_frame: main_rect,
        main_content: inner(main_rect, main),
        thumb_frame: thumb_rect,
        thumb_content: inner(thumb_rect, thumb),
    })
}
