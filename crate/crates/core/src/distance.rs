//! Exact Euclidean distance transform (Felzenszwalb & Huttenlocher).

use crate::raster::Grid;

const FAR: f64 = 1e20;

/// Squared distance transform of a sampled function along one line.
fn transform_line(f: &[f64], out: &mut [f64], v: &mut [usize], z: &mut [f64]) {
    let n = f.len();
    let mut k = 0;
    v[0] = 0;
    z[0] = f64::NEG_INFINITY;
    z[1] = f64::INFINITY;
    for q in 1..n {
        let qf = q as f64;
        loop {
            let p = v[k] as f64;
            let s = ((f[q] + qf * qf) - (f[v[k]] + p * p)) / (2.0 * qf - 2.0 * p);
            if s <= z[k] {
                // k == 0 never gets here: z[0] is -inf
                k -= 1;
            } else {
                k += 1;
                v[k] = q;
                z[k] = s;
                z[k + 1] = f64::INFINITY;
                break;
            }
        }
    }
    k = 0;
    for (q, slot) in out.iter_mut().enumerate() {
        let qf = q as f64;
        while z[k + 1] < qf {
            k += 1;
        }
        let d = qf - v[k] as f64;
        *slot = d * d + f[v[k]];
    }
}

/// Squared Euclidean distance from every pixel to the nearest `true` pixel.
/// Pixels with no `true` pixel anywhere get `f64::INFINITY`.
pub fn squared_distance_to(mask: &Grid<bool>) -> Grid<f64> {
    let (w, h) = mask.dimensions();
    let mut grid = mask.map(|&on| if on { 0.0 } else { FAR });
    let n = w.max(h);
    let (mut f, mut out) = (vec![0.0; n], vec![0.0; n]);
    let (mut v, mut z) = (vec![0usize; n], vec![0.0; n + 1]);

    for x in 0..w {
        for (y, fy) in f[..h].iter_mut().enumerate() {
            *fy = *grid.get(x, y);
        }
        transform_line(&f[..h], &mut out[..h], &mut v, &mut z);
        for (y, &d) in out[..h].iter().enumerate() {
            grid.set(x, y, d);
        }
    }
    for y in 0..h {
        f[..w].copy_from_slice(grid.row(y));
        transform_line(&f[..w], &mut out[..w], &mut v, &mut z);
        for (x, &d) in out[..w].iter().enumerate() {
            grid.set(x, y, d);
        }
    }
    grid.map(|&d| if d >= FAR / 2.0 { f64::INFINITY } else { d })
}
