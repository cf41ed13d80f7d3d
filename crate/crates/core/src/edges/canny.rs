use super::GrayImage;
use crate::error::Result;

pub const CANNY_LOW: i32 = 50;
pub const CANNY_HIGH: i32 = 100;

const TAN_22_5: f64 = 0.414_213_562_373_095_1;
const TAN_67_5: f64 = 2.414_213_562_373_095;

/// Canny edge map with 3x3 Sobel gradients and thresholds 50/100.
pub fn canny(img: &GrayImage) -> Result<GrayImage> {
    canny_with(img, CANNY_LOW, CANNY_HIGH)
}

/// Canny edge detector; output pixels are 0 or 255.
///
/// Gradient magnitude is `|gx| + |gy|`. Non-maximum suppression compares
/// against the two neighbors along the gradient direction quantized to
/// 0°, 45°, 90° or 135°, using a strict comparison on one side and a
/// non-strict one on the other so plateaus thin to a single pixel.
/// Hysteresis keeps weak pixels (> low) 8-connected to strong ones (> high).
pub fn canny_with(img: &GrayImage, low: i32, high: i32) -> Result<GrayImage> {
    img.require_at_least(3)?;
    let (w, h) = (img.width(), img.height());
    let (gx, gy) = sobel(img);
    let mag: Vec<i32> = gx.iter().zip(&gy).map(|(x, y)| x.abs() + y.abs()).collect();
    let m = |x: isize, y: isize| -> i32 {
        if x < 0 || y < 0 || x >= w as isize || y >= h as isize {
            0
        } else {
            mag[y as usize * w + x as usize]
        }
    };

    // 0 = suppressed, 1 = weak, 2 = strong
    let mut class = vec![0u8; w * h];
    for y in 0..h {
        for x in 0..w {
            let i = y * w + x;
            let v = mag[i];
            if v <= low {
                continue;
            }
            let (xi, yi) = (x as isize, y as isize);
            let ax = gx[i].abs() as f64;
            let ay = gy[i].abs() as f64;
            let is_max = if ay < TAN_22_5 * ax {
                v > m(xi - 1, yi) && v >= m(xi + 1, yi)
            } else if ay > TAN_67_5 * ax {
                v > m(xi, yi - 1) && v >= m(xi, yi + 1)
            } else {
                let s = if (gx[i] ^ gy[i]) < 0 { -1 } else { 1 };
                v > m(xi - s, yi - 1) && v > m(xi + s, yi + 1)
            };
            if is_max {
                class[i] = if v > high { 2 } else { 1 };
            }
        }
    }

    let mut out = vec![0u8; w * h];
    let mut stack: Vec<usize> = (0..w * h).filter(|&i| class[i] == 2).collect();
    for &i in &stack {
        out[i] = 255;
    }
    while let Some(i) = stack.pop() {
        let (x, y) = ((i % w) as isize, (i / w) as isize);
        for dy in -1..=1 {
            for dx in -1..=1 {
                let (nx, ny) = (x + dx, y + dy);
                if nx < 0 || ny < 0 || nx >= w as isize || ny >= h as isize {
                    continue;
                }
                let j = ny as usize * w + nx as usize;
                if class[j] == 1 && out[j] == 0 {
                    out[j] = 255;
                    stack.push(j);
                }
            }
        }
    }
    GrayImage::new(w, h, out)
}

/// 3x3 Sobel derivatives with replicated borders.
pub fn sobel(img: &GrayImage) -> (Vec<i32>, Vec<i32>) {
    let (w, h) = (img.width(), img.height());
    let mut gx = vec![0i32; w * h];
    let mut gy = vec![0i32; w * h];
    for y in 0..h as isize {
        for x in 0..w as isize {
            let p = |dx: isize, dy: isize| img.get_clamped(x + dx, y + dy) as i32;
            let i = y as usize * w + x as usize;
            gx[i] = (p(1, -1) + 2 * p(1, 0) + p(1, 1)) - (p(-1, -1) + 2 * p(-1, 0) + p(-1, 1));
            gy[i] = (p(-1, 1) + 2 * p(0, 1) + p(1, 1)) - (p(-1, -1) + 2 * p(0, -1) + p(1, -1));
        }
    }
    (gx, gy)
}
