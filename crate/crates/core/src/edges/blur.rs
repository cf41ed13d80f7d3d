use super::GrayImage;
use crate::error::{Error, Result};

/// Kernel size used by the mining pipeline.
pub const BLUR_KSIZE: usize = 13;
/// Standard deviation used by the mining pipeline, pixels.
pub const BLUR_SIGMA: f64 = 4.0;

/// Normalized 1-D Gaussian kernel of odd length `ksize`.
pub fn gaussian_kernel(ksize: usize, sigma: f64) -> Vec<f64> {
    let half = (ksize / 2) as f64;
    let w: Vec<f64> = (0..ksize)
        .map(|i| {
            let d = i as f64 - half;
            (-d * d / (2.0 * sigma * sigma)).exp()
        })
        .collect();
    let sum: f64 = w.iter().sum();
    w.into_iter().map(|x| x / sum).collect()
}

/// 13x13 Gaussian blur with σ = 4 and replicated borders.
pub fn gaussian_blur(img: &GrayImage) -> Result<GrayImage> {
    gaussian_blur_with(img, BLUR_KSIZE, BLUR_SIGMA)
}

/// Separable Gaussian blur with replicated borders. The intermediate pass
/// is kept in floating point; the result is rounded to nearest.
pub fn gaussian_blur_with(img: &GrayImage, ksize: usize, sigma: f64) -> Result<GrayImage> {
    if ksize.is_multiple_of(2) || !(sigma > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "blur needs an odd kernel size and positive sigma (ksize = {ksize}, sigma = {sigma})"
        )));
    }
    img.require_at_least(ksize)?;
    let (w, h) = (img.width(), img.height());
    let kernel = gaussian_kernel(ksize, sigma);
    let half = (ksize / 2) as isize;

    let mut rows = vec![0.0f64; w * h];
    for y in 0..h {
        for x in 0..w {
            rows[y * w + x] = kernel
                .iter()
                .enumerate()
                .map(|(i, k)| k * img.get_clamped(x as isize + i as isize - half, y as isize) as f64)
                .sum();
        }
    }
    let mut out = Vec::with_capacity(w * h);
    for y in 0..h {
        for x in 0..w {
            let v: f64 = kernel
                .iter()
                .enumerate()
                .map(|(i, k)| {
                    let yy = (y as isize + i as isize - half).clamp(0, h as isize - 1) as usize;
                    k * rows[yy * w + x]
                })
                .sum();
            out.push(v.round().clamp(0.0, 255.0) as u8);
        }
    }
    GrayImage::new(w, h, out)
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Dense 2-D convolution with an explicitly evaluated 2-D Gaussian.
    fn dense_blur(img: &GrayImage, ksize: usize, sigma: f64, x: usize, y: usize) -> f64 {
        let half = (ksize / 2) as isize;
        let mut num = 0.0;
        let mut den = 0.0;
        for dy in -half..=half {
            for dx in -half..=half {
                let g = (-((dx * dx + dy * dy) as f64) / (2.0 * sigma * sigma)).exp();
                num += g * img.get_clamped(x as isize + dx, y as isize + dy) as f64;
                den += g;
            }
        }
        num / den
    }

    #[test]
    fn preserves_constant_images() {
        let img = GrayImage::filled(20, 15, 77);
        assert_eq!(gaussian_blur(&img).unwrap(), img);
    }

    #[test]
    fn impulse_response_matches_dense_kernel() {
        let mut img = GrayImage::filled(31, 31, 0);
        img.set(15, 15, 255);
        let out = gaussian_blur(&img).unwrap();
        for (x, y) in [(15, 15), (16, 15), (20, 18), (9, 21), (21, 21)] {
            let want = dense_blur(&img, 13, 4.0, x, y).round() as u8;
            assert_eq!(out.get(x, y), want, "at ({x}, {y})");
        }
        let g0 = gaussian_kernel(13, 4.0)[6];
        assert_eq!(out.get(15, 15), (255.0 * g0 * g0).round() as u8);
        assert_eq!(out.get(0, 0), 0);
    }

    #[test]
    fn double_blur_matches_composed_kernel() {
        let (w, h) = (96, 96);
        let data: Vec<u8> = (0..w * h)
            .map(|i| {
                let (x, y) = (i % w, i / w);
                let block = if (30..66).contains(&x) && (30..66).contains(&y) { 120 } else { 0 };
                (x + y / 2 + block) as u8
            })
            .collect();
        let img = GrayImage::new(w, h, data).unwrap();
        let twice = gaussian_blur(&gaussian_blur(&img).unwrap()).unwrap();

        // 25-tap self-convolution of the normalized 13-tap Gaussian
        let g: Vec<f64> = (-6..=6).map(|d: i32| (-(d * d) as f64 / 32.0).exp()).collect();
        let total: f64 = g.iter().sum();
        let mut c = [0.0; 25];
        for (i, a) in g.iter().enumerate() {
            for (j, b) in g.iter().enumerate() {
                c[i + j] += a * b / (total * total);
            }
        }
        for y in (20..76).step_by(3) {
            for x in (20..76).step_by(3) {
                let mut want = 0.0;
                for dy in 0..25 {
                    for dx in 0..25 {
                        let p = img.get(x + dx - 12, y + dy - 12) as f64;
                        want += c[dx] * c[dy] * p;
                    }
                }
                let got = twice.get(x, y) as f64;
                // one rounding after each pass
                assert!((got - want).abs() <= 1.0, "({x}, {y}): {got} vs {want}");
            }
        }
    }

    #[test]
    fn rejects_small_images() {
        let img = GrayImage::filled(12, 40, 0);
        assert!(matches!(gaussian_blur(&img), Err(Error::ImageTooSmall { .. })));
        assert!(gaussian_blur_with(&GrayImage::filled(20, 20, 0), 4, 1.0).is_err());
    }
}
