//! Histogram of Oriented Gradients.
//!
//! Centered [-1,0,1] gradients, zero-padded at the borders (the stencil is
//! applied where it fits and border gradients are zero, so a constant image
//! has no structure anywhere); orientations are binned over [0,180) degrees
//! (unsigned) or [0,360) (signed) with bilinear vote splitting by angle
//! between the two nearest bin centers; magnitude-weighted cell histograms;
//! L2 block normalization with `eps = 1e-6`; blocks concatenated in
//! row-major order. Blocks slide with a one-cell stride.

use super::Image;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HogParams {
    /// Cell side length in pixels.
    pub cell_size: usize,
    /// Block side length in cells.
    pub block_size: usize,
    pub n_orientations: usize,
    pub signed: bool,
}

impl Default for HogParams {
    fn default() -> Self {
        Self {
            cell_size: 7,
            block_size: 1,
            n_orientations: 9,
            signed: false,
        }
    }
}

pub fn hog(image: &Image, params: &HogParams) -> Result<Vec<f64>> {
    if params.cell_size == 0 || params.block_size == 0 || params.n_orientations == 0 {
        return Err(Error::InvalidParameter("HOG parameters must be positive".into()));
    }
    if image.rows % params.cell_size != 0 || image.cols % params.cell_size != 0 {
        return Err(Error::Shape(format!(
            "image {}x{} is not divisible by cell size {}",
            image.rows, image.cols, params.cell_size
        )));
    }
    let cells_y = image.rows / params.cell_size;
    let cells_x = image.cols / params.cell_size;
    if cells_y < params.block_size || cells_x < params.block_size {
        return Err(Error::Shape(format!(
            "{cells_y}x{cells_x} cell grid cannot hold a {0}x{0} block",
            params.block_size
        )));
    }

    let n_bins = params.n_orientations;
    let range = if params.signed { 360.0 } else { 180.0 };
    let bin_width = range / n_bins as f64;
    let mut cell_hist = vec![0.0f64; cells_y * cells_x * n_bins];

    for r in 0..image.rows {
        for c in 0..image.cols {
            let gx = if c >= 1 && c + 1 < image.cols {
                image.get(r, c + 1) - image.get(r, c - 1)
            } else {
                0.0
            };
            let gy = if r >= 1 && r + 1 < image.rows {
                image.get(r + 1, c) - image.get(r - 1, c)
            } else {
                0.0
            };
            let mag = (gx * gx + gy * gy).sqrt();
            if mag == 0.0 {
                continue;
            }
            let mut theta = gy.atan2(gx).to_degrees();
            if theta < 0.0 {
                theta += 360.0;
            }
            if !params.signed && theta >= 180.0 {
                theta -= 180.0;
            }
            // split the vote between the two nearest bin centers, wrapping
            let pos = theta / bin_width - 0.5;
            let lower = pos.floor();
            let frac = pos - lower;
            let lo = (lower as i64).rem_euclid(n_bins as i64) as usize;
            let hi = (lo + 1) % n_bins;
            let cell = (r / params.cell_size) * cells_x + c / params.cell_size;
            cell_hist[cell * n_bins + lo] += mag * (1.0 - frac);
            cell_hist[cell * n_bins + hi] += mag * frac;
        }
    }

    let blocks_y = cells_y - params.block_size + 1;
    let blocks_x = cells_x - params.block_size + 1;
    let block_dim = params.block_size * params.block_size * n_bins;
    let eps = 1e-6f64;
    let mut descriptor = Vec::with_capacity(blocks_y * blocks_x * block_dim);
    for by in 0..blocks_y {
        for bx in 0..blocks_x {
            let start = descriptor.len();
            let mut norm_sq = 0.0;
            for cy in 0..params.block_size {
                for cx in 0..params.block_size {
                    let cell = (by + cy) * cells_x + bx + cx;
                    for b in 0..n_bins {
                        let v = cell_hist[cell * n_bins + b];
                        norm_sq += v * v;
                        descriptor.push(v);
                    }
                }
            }
            let norm = (norm_sq + eps * eps).sqrt();
            for v in &mut descriptor[start..] {
                *v /= norm;
            }
        }
    }
    Ok(descriptor)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::stream;
    use rand::Rng;

    #[test]
    fn constant_image_gives_zero_descriptor() {
        let img = Image::new(14, 14, vec![0.42; 196]).unwrap();
        let d = hog(&img, &HogParams::default()).unwrap();
        assert_eq!(d.len(), 2 * 2 * 9);
        assert!(d.iter().all(|&v| v == 0.0));
    }

    #[test]
    fn descriptor_length_arithmetic() {
        let img = Image::zeros(28, 28);
        let d = hog(&img, &HogParams::default()).unwrap();
        assert_eq!(d.len(), 4 * 4 * 9);
        let strip = Image::zeros(28, 7);
        let d = hog(&strip, &HogParams::default()).unwrap();
        assert_eq!(d.len(), 4 * 9);
        // sliding 2x2 blocks over a 4x4 cell grid
        let params = HogParams {
            block_size: 2,
            ..HogParams::default()
        };
        let d = hog(&Image::zeros(28, 28), &params).unwrap();
        assert_eq!(d.len(), 3 * 3 * 2 * 2 * 9);
    }

    #[test]
    fn incompatible_dims_rejected() {
        let img = Image::zeros(27, 28);
        assert!(matches!(hog(&img, &HogParams::default()), Err(Error::Shape(_))));
        let params = HogParams {
            block_size: 5,
            ..HogParams::default()
        };
        assert!(matches!(hog(&Image::zeros(28, 28), &params), Err(Error::Shape(_))));
    }

    #[test]
    fn vertical_step_edge_votes_horizontal_gradient_bins() {
        // left half dark, right half bright: gradients point along +x
        // (theta = 0), whose vote splits between the two bins adjacent to 0
        let mut img = Image::zeros(16, 16);
        for r in 0..16 {
            for c in 8..16 {
                img.data[r * 16 + c] = 1.0;
            }
        }
        let params = HogParams {
            cell_size: 16,
            block_size: 1,
            n_orientations: 9,
            signed: false,
        };
        let d = hog(&img, &params).unwrap();
        // all gradients point along +x: only the two bins adjacent to 0 vote
        let horizontal = d[0] + d[8];
        let rest: f64 = d[1..8].iter().sum();
        assert!(horizontal > 0.99, "horizontal bins {horizontal} in {d:?}");
        assert!(rest == 0.0, "spurious votes {rest} in {d:?}");
    }

    #[test]
    fn descriptor_nonnegative_blocks_unit_bounded() {
        let mut rng = stream(31, "hog");
        for _ in 0..10 {
            let img = Image::new(21, 14, (0..294).map(|_| rng.random()).collect()).unwrap();
            let d = hog(&img, &HogParams::default()).unwrap();
            assert!(d.iter().all(|&v| v >= 0.0));
            for block in d.chunks(9) {
                let norm: f64 = block.iter().map(|v| v * v).sum::<f64>().sqrt();
                assert!(norm <= 1.0 + 1e-6);
            }
        }
    }

    /// Straight-line reimplementation used as an independent oracle: votes
    /// accumulated per pixel directly into a flat (cell, bin) table.
    fn hog_oracle(img: &Image, cell: usize, n_bins: usize) -> Vec<f64> {
        let cy = img.rows / cell;
        let cx = img.cols / cell;
        let mut hist = vec![0.0; cy * cx * n_bins];
        for r in 0..img.rows {
            for c in 0..img.cols {
                let gx = if c >= 1 && c + 1 < img.cols {
                    img.get(r, c + 1) - img.get(r, c - 1)
                } else {
                    0.0
                };
                let gy = if r >= 1 && r + 1 < img.rows {
                    img.get(r + 1, c) - img.get(r - 1, c)
                } else {
                    0.0
                };
                let mag = gx.hypot(gy);
                if mag == 0.0 {
                    continue;
                }
                let theta = gy.atan2(gx).rem_euclid(std::f64::consts::PI);
                let w = std::f64::consts::PI / n_bins as f64;
                let pos = theta / w - 0.5;
                let lo_f = pos.floor();
                let frac = pos - lo_f;
                let lo = (lo_f as i64).rem_euclid(n_bins as i64) as usize;
                let cell_idx = (r / cell) * cx + c / cell;
                hist[cell_idx * n_bins + lo] += mag * (1.0 - frac);
                hist[cell_idx * n_bins + (lo + 1) % n_bins] += mag * frac;
            }
        }
        // block 1x1 L2 normalization
        for block in hist.chunks_mut(n_bins) {
            let norm = (block.iter().map(|v| v * v).sum::<f64>() + 1e-12).sqrt();
            for v in block {
                *v /= norm;
            }
        }
        hist
    }

    #[test]
    fn matches_independent_reference_on_random_images() {
        let mut rng = stream(77, "hog-oracle");
        for _ in 0..8 {
            let img = Image::new(14, 21, (0..294).map(|_| rng.random()).collect()).unwrap();
            let params = HogParams {
                cell_size: 7,
                block_size: 1,
                n_orientations: 9,
                signed: false,
            };
            let got = hog(&img, &params).unwrap();
            let expect = hog_oracle(&img, 7, 9);
            assert_eq!(got.len(), expect.len());
            for (g, e) in got.iter().zip(&expect) {
                assert!((g - e).abs() < 1e-9, "{g} vs {e}");
            }
        }
    }
}
