//! Test images and measurement oracles shared by the integration tests.
#![allow(dead_code)]

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use tactile::image_io::{ColorImage, Rgb};
use tactile::Grid;

pub const FIVE_BAR_SIZE: (usize, usize) = (600, 200);

/// Bar colors in left-to-right order: blue, green, yellow, red, gray.
pub const BAR_COLORS: [Rgb; 5] = [
    [0.1, 0.15, 0.5],
    [0.1, 0.5, 0.15],
    [0.6, 0.56, 0.06],
    [0.5, 0.08, 0.1],
    [0.5, 0.5, 0.5],
];

/// Half-open pixel rectangle `[x0, x1) × [y0, y1)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Area {
    pub x0: usize,
    pub y0: usize,
    pub x1: usize,
    pub y1: usize,
}

impl Area {
    pub fn shrink(self, by: usize) -> Area {
        Area { x0: self.x0 + by, y0: self.y0 + by, x1: self.x1 - by, y1: self.y1 - by }
    }

    pub fn contains(&self, x: usize, y: usize) -> bool {
        x >= self.x0 && x < self.x1 && y >= self.y0 && y < self.y1
    }

    pub fn full(w: usize, h: usize) -> Area {
        Area { x0: 0, y0: 0, x1: w, y1: h }
    }
}

pub fn bar_area(i: usize) -> Area {
    let x0 = 12 + i * 118;
    Area { x0, y0: 20, x1: x0 + 100, y1: 180 }
}

/// Five colored bars on white.
pub fn five_bar_image() -> ColorImage {
    let (w, h) = FIVE_BAR_SIZE;
    ColorImage::from_fn(w, h, |x, y| {
        (0..5)
            .find(|&i| bar_area(i).contains(x, y))
            .map_or([1.0; 3], |i| BAR_COLORS[i])
    })
    .unwrap()
}

fn smooth_noise(x: f64, y: f64, seed: u64) -> f64 {
    let s = seed as f64 * 0.37;
    ((x * 0.013 + s).sin() * (y * 0.021 - s).cos()
        + (x * 0.041 + y * 0.017 + 2.0 * s).sin() * 0.5
        + ((x - y) * 0.007 + s).cos() * 0.25)
        / 1.75
}

fn mix(a: Rgb, b: Rgb, t: f64) -> Rgb {
    [0, 1, 2].map(|c| a[c] + (b[c] - a[c]) * t)
}

/// A photograph-like scene: sky, sun, hills, a house, a road, with smooth
/// shading and fine grain.
pub fn synthetic_photo(w: usize, h: usize, seed: u64) -> ColorImage {
    let mut rng = StdRng::seed_from_u64(seed);
    let grain: Vec<f64> = (0..w * h).map(|_| rng.random_range(-0.04..0.04)).collect();
    let (wf, hf) = (w as f64, h as f64);
    ColorImage::from_fn(w, h, |x, y| {
        let (xf, yf) = (x as f64, y as f64);
        let n = smooth_noise(xf, yf, seed);
        let horizon = hf * 0.45 + (xf / wf * 6.0).sin() * hf * 0.05;
        let mut c = if yf < horizon {
            mix([0.25, 0.45, 0.85], [0.75, 0.85, 0.98], yf / horizon)
        } else {
            mix([0.2, 0.55, 0.15], [0.05, 0.25, 0.05], (yf - horizon) / (hf - horizon))
        };
        let sun = ((xf - wf * 0.8).powi(2) + (yf - hf * 0.18).powi(2)).sqrt();
        if sun < hf * 0.09 {
            c = [0.98, 0.85, 0.2];
        }
        let (hx0, hx1, hy0, hy1) = (wf * 0.15, wf * 0.4, hf * 0.38, hf * 0.7);
        if xf >= hx0 && xf < hx1 && yf >= hy0 && yf < hy1 {
            c = [0.7, 0.15, 0.12];
            if (xf - hx0) % 60.0 > 35.0 && (yf - hy0) % 70.0 > 30.0 {
                c = [0.9, 0.9, 0.8];
            }
        }
        let roof = hy0 - (xf - (hx0 + hx1) / 2.0).abs() * 0.6;
        if xf >= hx0 - 10.0 && xf < hx1 + 10.0 && yf < hy0 && yf >= roof {
            c = [0.35, 0.2, 0.15];
        }
        let road = (xf - wf * 0.6 - (yf - hf) * 0.5).abs();
        if yf > horizon + 20.0 && road < 20.0 + (yf - horizon) * 0.25 {
            c = [0.45, 0.45, 0.47];
        }
        let flower = ((xf - wf * 0.55).powi(2) * 1.5 + (yf - hf * 0.8).powi(2)).sqrt();
        if flower < 40.0 {
            c = [0.85, 0.55, 0.1];
        }
        let g = grain[y * w + x];
        c.map(|v| (v * (0.9 + 0.1 * n) + g).clamp(0.0, 1.0))
    })
    .unwrap()
}

/// Random rectangles and disks of random colors on a random background.
pub fn random_scene(rng: &mut StdRng, w: usize, h: usize) -> ColorImage {
    let color = |rng: &mut StdRng| [0; 3].map(|_| rng.random_range(0.0..=1.0));
    let background = color(rng);
    let shapes: Vec<(bool, f64, f64, f64, f64, Rgb)> = (0..rng.random_range(1..8))
        .map(|_| {
            (
                rng.random_bool(0.5),
                rng.random_range(0.0..w as f64),
                rng.random_range(0.0..h as f64),
                rng.random_range(4.0..w as f64 / 2.0),
                rng.random_range(4.0..h as f64 / 2.0),
                color(rng),
            )
        })
        .collect();
    ColorImage::from_fn(w, h, |x, y| {
        let (xf, yf) = (x as f64, y as f64);
        shapes
            .iter()
            .rev()
            .find(|&&(disk, cx, cy, rx, ry, _)| {
                if disk {
                    ((xf - cx) / rx).powi(2) + ((yf - cy) / ry).powi(2) <= 1.0
                } else {
                    (xf - cx).abs() <= rx && (yf - cy).abs() <= ry
                }
            })
            .map_or(background, |s| s.5)
    })
    .unwrap()
}

/// Smallest difference between two axial angles, in degrees.
pub fn axial_diff(a: f64, b: f64) -> f64 {
    let d = (a - b).rem_euclid(180.0);
    d.min(180.0 - d)
}

/// Converts an angle measured in pixel coordinates (y down) to degrees
/// counterclockwise on screen, in `[0, 180)`.
fn screen_axial(pixel_rad: f64) -> f64 {
    (-pixel_rad.to_degrees()).rem_euclid(180.0) + 0.0
}

/// Axial mean of angles in degrees, weighted.
pub fn axial_mean(angles: impl IntoIterator<Item = (f64, f64)>) -> f64 {
    let (mut c, mut s) = (0.0, 0.0);
    for (a, w) in angles {
        let r = (2.0 * a).to_radians();
        c += w * r.cos();
        s += w * r.sin();
    }
    (s.atan2(c).to_degrees() / 2.0).rem_euclid(180.0)
}

/// Gradient structure tensor of binary ink, summed over an area.
#[derive(Debug, Clone, Copy)]
pub struct StructureTensor {
    pub jxx: f64,
    pub jxy: f64,
    pub jyy: f64,
}

impl StructureTensor {
    pub fn of(ink: &Grid<bool>, area: Area) -> Self {
        let v = |x: isize, y: isize| if *ink.get_clamped(x, y) { 1.0 } else { 0.0 };
        let (mut jxx, mut jxy, mut jyy) = (0.0, 0.0, 0.0);
        for y in area.y0..area.y1 {
            for x in area.x0..area.x1 {
                let (x, y) = (x as isize, y as isize);
                // Sobel
                let gx = (v(x + 1, y - 1) + 2.0 * v(x + 1, y) + v(x + 1, y + 1))
                    - (v(x - 1, y - 1) + 2.0 * v(x - 1, y) + v(x - 1, y + 1));
                let gy = (v(x - 1, y + 1) + 2.0 * v(x, y + 1) + v(x + 1, y + 1))
                    - (v(x - 1, y - 1) + 2.0 * v(x, y - 1) + v(x + 1, y - 1));
                jxx += gx * gx;
                jxy += gx * gy;
                jyy += gy * gy;
            }
        }
        Self { jxx, jxy, jyy }
    }

    fn eigen(&self) -> (f64, f64) {
        let mean = (self.jxx + self.jyy) / 2.0;
        let r = (((self.jxx - self.jyy) / 2.0).powi(2) + self.jxy * self.jxy).sqrt();
        (mean + r, mean - r)
    }

    /// Direction along which the ink varies least, on screen, `[0, 180)`.
    pub fn orientation(&self) -> f64 {
        let gradient = 0.5 * (2.0 * self.jxy).atan2(self.jxx - self.jyy);
        screen_axial(gradient + std::f64::consts::FRAC_PI_2)
    }

    /// Ratio of the larger to the smaller eigenvalue.
    pub fn anisotropy(&self) -> f64 {
        let (a, b) = self.eigen();
        a / b
    }
}

/// An 8-connected blob of ink.
#[derive(Debug, Clone, Copy)]
pub struct Blob {
    pub cx: f64,
    pub cy: f64,
    pub pixels: usize,
    /// Major axis, on screen, `[0, 180)`.
    pub axis: f64,
    /// Ratio of the second moments along the principal axes.
    pub elongation: f64,
}

/// Blobs lying entirely inside `area`.
pub fn blobs(ink: &Grid<bool>, area: Area) -> Vec<Blob> {
    let (w, h) = ink.dimensions();
    let mut seen = Grid::filled(w, h, false);
    let mut out = Vec::new();
    for y0 in area.y0..area.y1 {
        for x0 in area.x0..area.x1 {
            if !*ink.get(x0, y0) || *seen.get(x0, y0) {
                continue;
            }
            let mut stack = vec![(x0, y0)];
            seen.set(x0, y0, true);
            let mut pts = Vec::new();
            let mut inside = true;
            while let Some((x, y)) = stack.pop() {
                pts.push((x as f64, y as f64));
                inside &= area.contains(x, y);
                for dy in -1isize..=1 {
                    for dx in -1isize..=1 {
                        let (nx, ny) = (x as isize + dx, y as isize + dy);
                        if nx < 0 || ny < 0 || nx >= w as isize || ny >= h as isize {
                            continue;
                        }
                        let (nx, ny) = (nx as usize, ny as usize);
                        if *ink.get(nx, ny) && !*seen.get(nx, ny) {
                            seen.set(nx, ny, true);
                            stack.push((nx, ny));
                        }
                    }
                }
            }
            if !inside {
                continue;
            }
            let n = pts.len() as f64;
            let cx = pts.iter().map(|p| p.0).sum::<f64>() / n;
            let cy = pts.iter().map(|p| p.1).sum::<f64>() / n;
            let (mut m20, mut m02, mut m11) = (0.0, 0.0, 0.0);
            for &(x, y) in &pts {
                m20 += (x - cx).powi(2);
                m02 += (y - cy).powi(2);
                m11 += (x - cx) * (y - cy);
            }
            let mean = (m20 + m02) / 2.0;
            let r = (((m20 - m02) / 2.0).powi(2) + m11 * m11).sqrt();
            out.push(Blob {
                cx,
                cy,
                pixels: pts.len(),
                axis: screen_axial(0.5 * (2.0 * m11).atan2(m20 - m02)),
                elongation: if mean - r > 0.0 { (mean + r) / (mean - r) } else { f64::INFINITY },
            });
        }
    }
    out
}

/// Mean major-axis direction of elongated blobs.
pub fn feature_angle(blobs: &[Blob]) -> f64 {
    axial_mean(
        blobs
            .iter()
            .filter(|b| b.elongation > 2.0 && b.elongation.is_finite())
            .map(|b| (b.axis, b.pixels as f64)),
    )
}

/// Mean direction from each blob to its nearest neighbor.
pub fn lattice_angle(blobs: &[Blob]) -> f64 {
    axial_mean(blobs.iter().filter_map(|b| {
        blobs
            .iter()
            .filter(|o| !std::ptr::eq(*o, b))
            .map(|o| (o.cx - b.cx, o.cy - b.cy))
            .min_by(|p, q| (p.0.hypot(p.1)).total_cmp(&q.0.hypot(q.1)))
            .map(|(dx, dy)| (screen_axial(dy.atan2(dx)), 1.0))
    }))
}
