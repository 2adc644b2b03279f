//! Separable Gaussian blur with clamp-to-edge borders.
//!
//! The kernel is `exp(-i² / 2σ²)` for `|i| ≤ ceil(3σ)`. Each pass divides by
//! the weight sum accumulated in the same order as the samples, so a grid of
//! all zeros or all ones comes back bit-identical.

use rayon::prelude::*;

use crate::raster::Grid;

/// Unnormalized kernel taps from `-radius` to `radius`.
pub fn gaussian_kernel(sigma: f64) -> Vec<f64> {
    assert!(sigma > 0.0, "blur sigma must be positive");
    let radius = (3.0 * sigma).ceil() as isize;
    let denom = 2.0 * sigma * sigma;
    (-radius..=radius)
        .map(|i| (-((i * i) as f64) / denom).exp())
        .collect()
}

fn blur_rows(src: &Grid<f64>, kernel: &[f64]) -> Grid<f64> {
    let (w, h) = src.dimensions();
    let radius = (kernel.len() / 2) as isize;
    let mut out = vec![0.0; w * h];
    out.par_chunks_mut(w).enumerate().for_each(|(y, row_out)| {
        let row = src.row(y);
        for (x, slot) in row_out.iter_mut().enumerate() {
            let mut acc = 0.0;
            let mut norm = 0.0;
            for (k, &wk) in kernel.iter().enumerate() {
                let sx = (x as isize + k as isize - radius).clamp(0, w as isize - 1) as usize;
                acc += wk * row[sx];
                norm += wk;
            }
            *slot = acc / norm;
        }
    });
    Grid::from_vec(w, h, out).expect("same size")
}

fn blur_cols(src: &Grid<f64>, kernel: &[f64]) -> Grid<f64> {
    let (w, h) = src.dimensions();
    let radius = (kernel.len() / 2) as isize;
    let mut out = vec![0.0; w * h];
    out.par_chunks_mut(w).enumerate().for_each(|(y, row_out)| {
        for (x, slot) in row_out.iter_mut().enumerate() {
            let mut acc = 0.0;
            let mut norm = 0.0;
            for (k, &wk) in kernel.iter().enumerate() {
                let sy = (y as isize + k as isize - radius).clamp(0, h as isize - 1) as usize;
                acc += wk * *src.get(x, sy);
                norm += wk;
            }
            *slot = acc / norm;
        }
    });
    Grid::from_vec(w, h, out).expect("same size")
}

/// Blurs a scalar grid with a Gaussian of standard deviation `sigma`.
pub fn gaussian_blur(src: &Grid<f64>, sigma: f64) -> Grid<f64> {
    let kernel = gaussian_kernel(sigma);
    blur_cols(&blur_rows(src, &kernel), &kernel)
}
