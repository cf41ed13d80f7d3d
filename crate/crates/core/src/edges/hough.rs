//! Progressive probabilistic Hough transform for line segments.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::GrayImage;
use crate::camera::Pixel;

/// Finite segment between two edge pixels.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LineSegment {
    pub p0: Pixel,
    pub p1: Pixel,
}

impl LineSegment {
    pub fn new(p0: Pixel, p1: Pixel) -> Option<Self> {
        (p0 != p1).then_some(Self { p0, p1 })
    }

    pub fn length(&self) -> f64 {
        (self.p1.u - self.p0.u).hypot(self.p1.v - self.p0.v)
    }

    /// Inclination from the u axis in degrees, in `[0, 180)`.
    pub fn inclination_deg(&self) -> f64 {
        let a = (self.p1.v - self.p0.v).atan2(self.p1.u - self.p0.u).to_degrees();
        let a = a.rem_euclid(180.0);
        if a >= 180.0 {
            0.0
        } else {
            a
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HoughParams {
    /// Distance resolution, pixels.
    pub rho: f64,
    /// Angle resolution, radians.
    pub theta: f64,
    /// Minimum accumulator votes before a line is traced.
    pub threshold: i32,
    pub min_line_length: i64,
    pub max_line_gap: i64,
    /// Seed for the pixel visiting order.
    pub seed: u64,
}

impl Default for HoughParams {
    fn default() -> Self {
        Self {
            rho: 1.0,
            theta: std::f64::consts::PI / 180.0,
            threshold: 5,
            min_line_length: 40,
            max_line_gap: 10,
            seed: 0,
        }
    }
}

/// Segments of the binary edge map `edges` (nonzero = edge).
pub fn hough_lines_p(edges: &GrayImage) -> Vec<LineSegment> {
    hough_lines_p_with(edges, &HoughParams::default())
}

/// Progressive probabilistic Hough transform.
///
/// Edge pixels are visited in a seeded random order. Each pixel votes into
/// the `(ρ, θ)` accumulator; once its strongest bin reaches the threshold
/// the line is walked from the pixel in both directions, tolerating gaps of
/// at most `max_line_gap`. Walked pixels are removed from further voting,
/// and, if the run spans at least `min_line_length` along u or v, their
/// votes are withdrawn and the segment is reported.
pub fn hough_lines_p_with(edges: &GrayImage, params: &HoughParams) -> Vec<LineSegment> {
    const SHIFT: u32 = 16;
    let (w, h) = (edges.width() as i64, edges.height() as i64);
    let num_angle = (std::f64::consts::PI / params.theta).round() as usize;
    let num_rho = (((w + h) * 2 + 1) as f64 / params.rho).round() as usize;
    let rho_offset = ((num_rho - 1) / 2) as i64;
    let trig: Vec<(f64, f64)> = (0..num_angle)
        .map(|n| {
            let a = n as f64 * params.theta;
            (a.cos() / params.rho, a.sin() / params.rho)
        })
        .collect();

    let mut accum = vec![0i32; num_angle * num_rho];
    let mut mask: Vec<bool> = edges.data().iter().map(|&v| v != 0).collect();
    let mut pending: Vec<(i64, i64)> = (0..h)
        .flat_map(|y| (0..w).map(move |x| (x, y)))
        .filter(|&(x, y)| mask[(y * w + x) as usize])
        .collect();
    let bin = |n: usize, x: i64, y: i64| -> usize {
        let (c, s) = trig[n];
        let r = (x as f64 * c + y as f64 * s).round() as i64 + rho_offset;
        n * num_rho + r as usize
    };

    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let mut segments = Vec::new();
    let mut count = pending.len();
    while count > 0 {
        let idx = rng.random_range(0..count);
        let (x, y) = pending[idx];
        pending[idx] = pending[count - 1];
        count -= 1;
        if !mask[(y * w + x) as usize] {
            continue;
        }

        let mut max_val = params.threshold - 1;
        let mut max_n = 0;
        for n in 0..num_angle {
            let b = bin(n, x, y);
            accum[b] += 1;
            if accum[b] > max_val {
                max_val = accum[b];
                max_n = n;
            }
        }
        if max_val < params.threshold {
            continue;
        }

        // walk along the line direction (−sin θ, cos θ) in fixed point
        let (c, s) = trig[max_n];
        let (a, b) = (-s, c);
        let x_major = a.abs() > b.abs();
        let (dx0, dy0, x0, y0) = if x_major {
            let dy = (b * (1i64 << SHIFT) as f64 / a.abs()).round() as i64;
            (a.signum() as i64, dy, x, (y << SHIFT) + (1 << (SHIFT - 1)))
        } else {
            let dx = (a * (1i64 << SHIFT) as f64 / b.abs()).round() as i64;
            (dx, b.signum() as i64, (x << SHIFT) + (1 << (SHIFT - 1)), y)
        };
        let to_pixel = |px: i64, py: i64| -> (i64, i64) {
            if x_major {
                (px, py >> SHIFT)
            } else {
                (px >> SHIFT, py)
            }
        };

        let mut ends = [(x, y); 2];
        for (k, end) in ends.iter_mut().enumerate() {
            let (dx, dy) = if k == 0 { (dx0, dy0) } else { (-dx0, -dy0) };
            let (mut px, mut py) = (x0, y0);
            let mut gap = 0;
            loop {
                let (j, i) = to_pixel(px, py);
                if j < 0 || j >= w || i < 0 || i >= h {
                    break;
                }
                if mask[(i * w + j) as usize] {
                    gap = 0;
                    *end = (j, i);
                } else {
                    gap += 1;
                    if gap > params.max_line_gap {
                        break;
                    }
                }
                px += dx;
                py += dy;
            }
        }

        let good = (ends[1].0 - ends[0].0).abs() >= params.min_line_length
            || (ends[1].1 - ends[0].1).abs() >= params.min_line_length;

        for (k, end) in ends.iter().enumerate() {
            let (dx, dy) = if k == 0 { (dx0, dy0) } else { (-dx0, -dy0) };
            let (mut px, mut py) = (x0, y0);
            loop {
                let (j, i) = to_pixel(px, py);
                let m = (i * w + j) as usize;
                if mask[m] {
                    if good {
                        for n in 0..num_angle {
                            accum[bin(n, j, i)] -= 1;
                        }
                    }
                    mask[m] = false;
                }
                if (j, i) == *end {
                    break;
                }
                px += dx;
                py += dy;
            }
        }

        if good {
            let p = |(x, y): (i64, i64)| Pixel::new(x as f64, y as f64);
            if let Some(seg) = LineSegment::new(p(ends[0]), p(ends[1])) {
                segments.push(seg);
            }
        }
    }
    segments
}
