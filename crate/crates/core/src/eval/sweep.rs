//! Depth drift caused by assuming level ground on tilted roads.

use crate::camera::{project, CameraIntrinsics};
use crate::deduce::backproject_contact;
use crate::error::{Error, Result};
use crate::ground::{plane_to_horizon, GroundPlane, ImageLine};

pub const MAX_SWEEP_PITCH_DEG: f64 = 10.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepRow {
    pub pitch_deg: f64,
    pub depth: f64,
    /// `|z_est − z_true|` when back-projecting with the level horizon.
    pub fixed_error: f64,
    /// `|z_est − z_true|` with the true horizon.
    pub dynamic_error: f64,
    /// `z_est − z_true` for the level horizon.
    pub fixed_signed_error: f64,
}

impl SweepRow {
    pub const CSV_HEADER: &'static str = "pitch_deg,depth_m,fixed_plane_error_m,dynamic_plane_error_m,fixed_plane_signed_error_m";
}

/// For every `(pitch, depth)` places a ground point on the optical axis
/// plane `x = 0` of the pitched ground `y = tan(pitch)·z + H`, projects it,
/// and back-projects it once with the level horizon `(0, cv)` and once with
/// the true horizon.
pub fn tilt_sweep(pitches_deg: &[f64], depths: &[f64], k: &CameraIntrinsics, height: f64) -> Result<Vec<SweepRow>> {
    let level = ImageLine::level(k);
    let mut rows = Vec::with_capacity(pitches_deg.len() * depths.len());
    for &pitch_deg in pitches_deg {
        if !(pitch_deg.abs() <= MAX_SWEEP_PITCH_DEG) {
            return Err(Error::InvalidParameter(format!(
                "pitch {pitch_deg}° outside ±{MAX_SWEEP_PITCH_DEG}°"
            )));
        }
        let plane = GroundPlane::from_angles(0.0, pitch_deg.to_radians(), height);
        let true_horizon = plane_to_horizon(plane, k);
        for &depth in depths {
            if !(depth > 0.0) {
                return Err(Error::NonPositiveDepth(depth));
            }
            let pixel = project(plane.lift(0.0, depth), k)?;
            let fixed = backproject_contact(pixel, level, k, height)?;
            let dynamic = backproject_contact(pixel, true_horizon, k, height)?;
            rows.push(SweepRow {
                pitch_deg,
                depth,
                fixed_error: (fixed.z - depth).abs(),
                dynamic_error: (dynamic.z - depth).abs(),
                fixed_signed_error: fixed.z - depth,
            });
        }
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn k() -> CameraIntrinsics {
        CameraIntrinsics::new(700.0, 700.0, 600.0, 180.0).unwrap()
    }

    #[test]
    fn level_ground_has_no_error() {
        let rows = tilt_sweep(&[0.0], &[10.0, 40.0], &k(), 1.65).unwrap();
        for r in rows {
            assert!(r.fixed_error < 1e-12 && r.dynamic_error < 1e-12);
        }
    }

    #[test]
    fn drift_grows_with_depth() {
        let depths: Vec<f64> = (1..=16).map(|i| i as f64 * 5.0).collect();
        let rows = tilt_sweep(&[2.0], &depths, &k(), 1.65).unwrap();
        for pair in rows.windows(2) {
            assert!(pair[1].fixed_error > pair[0].fixed_error);
        }
        for r in &rows {
            // closed form: level back-projection gives z = H·d / (d·tan p + H)
            let t = 2f64.to_radians().tan();
            let flat = 1.65 * r.depth / (r.depth * t + 1.65);
            assert!((r.fixed_error - (r.depth - flat)).abs() < 1e-9);
            assert!(r.dynamic_error < 1e-9);
        }
    }

    #[test]
    fn inverse_depth_drift_is_odd_in_pitch() {
        let up = tilt_sweep(&[1.5], &[10.0, 30.0], &k(), 1.65).unwrap();
        let down = tilt_sweep(&[-1.5], &[10.0, 30.0], &k(), 1.65).unwrap();
        for (a, b) in up.iter().zip(&down) {
            let inv = |r: &SweepRow| 1.0 / (r.depth + r.fixed_signed_error) - 1.0 / r.depth;
            assert!((inv(a) + inv(b)).abs() < 1e-12);
        }
    }

    #[test]
    fn rejects_steep_pitch_and_surfaces_horizon_errors() {
        assert!(matches!(tilt_sweep(&[12.0], &[10.0], &k(), 1.65), Err(Error::InvalidParameter(_))));
        // the downhill ground point at 60 m is above the camera
        assert!(matches!(tilt_sweep(&[-2.0], &[60.0], &k(), 1.65), Err(Error::AboveHorizon { .. })));
    }
}
