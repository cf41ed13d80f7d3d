//! Drawing helpers for synthetic test imagery.

use super::GrayImage;

/// Slack for pixel centers exactly on the bar outline.
const EPS: f64 = 1e-9;

/// Filled rectangle of the given `length` along the inclination `angle_deg`
/// (from the u axis, v down) and `thickness` across it, centered at
/// `(cu, cv)`. Pixels whose centers fall inside are set to `value`.
pub fn draw_bar(
    img: &mut GrayImage,
    (cu, cv): (f64, f64),
    angle_deg: f64,
    length: f64,
    thickness: f64,
    value: u8,
) {
    let (s, c) = angle_deg.to_radians().sin_cos();
    let reach = (length + thickness) / 2.0 + 1.0;
    let x0 = (cu - reach).floor().max(0.0) as usize;
    let x1 = ((cu + reach).ceil() as usize).min(img.width() - 1);
    let y0 = (cv - reach).floor().max(0.0) as usize;
    let y1 = ((cv + reach).ceil() as usize).min(img.height() - 1);
    for y in y0..=y1 {
        for x in x0..=x1 {
            let (dx, dy) = (x as f64 - cu, y as f64 - cv);
            let along = dx * c + dy * s;
            let across = -dx * s + dy * c;
            if along.abs() <= length / 2.0 + EPS && across.abs() <= thickness / 2.0 + EPS {
                img.set(x, y, value);
            }
        }
    }
}

/// White image with `n` evenly spaced dark bars, all inclined at
/// `angle_deg`.
pub fn bar_scene(width: usize, height: usize, n: usize, angle_deg: f64) -> GrayImage {
    let mut img = GrayImage::filled(width, height, 255);
    let length = height as f64 * 0.6;
    let pitch = width as f64 / (n as f64 + 1.0);
    for i in 0..n {
        let cu = pitch * (i as f64 + 1.0);
        draw_bar(&mut img, (cu, height as f64 / 2.0), angle_deg, length, 14.0, 0);
    }
    img
}
