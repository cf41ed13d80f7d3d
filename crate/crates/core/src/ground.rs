//! Horizon line and ground plane mathematics.
//!
//! A horizon line `v = k·u + b` in the image and the camera's optical center
//! span a plane through the origin. Translating that plane by the camera
//! height `H` along `Y` gives the ground plane `y = a·x + b·z + c` in the
//! camera frame, with
//!
//! ```text
//! a = k·fx/fy
//! b = (k·cu + b_h − cv)/fy
//! c = H
//! ```
//!
//! The mapping is f-free and exactly invertible in `(k, b_h)`.

use nalgebra::{DMatrix, DVector};

use crate::camera::{CameraIntrinsics, CameraPoint, Pixel};
use crate::error::{Error, Result};

/// KITTI camera mounting height, meters.
pub const DEFAULT_CAMERA_HEIGHT: f64 = 1.65;

/// Largest accepted `|a|` or `|b|`; beyond this the plane is nearly vertical.
pub const MAX_PLANE_SLOPE: f64 = 10.0;

/// Minimum determinant of the column-scaled normal matrix.
const MIN_SCALED_DETERMINANT: f64 = 1e-12;

/// Image line `v = k·u + b` in pixel coordinates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ImageLine {
    pub k: f64,
    pub b: f64,
}

impl ImageLine {
    pub const fn new(k: f64, b: f64) -> Self {
        Self { k, b }
    }

    /// Level horizon through the principal row.
    pub fn level(k: &CameraIntrinsics) -> Self {
        Self::new(0.0, k.cv)
    }

    pub fn v_at(&self, u: f64) -> f64 {
        self.k * u + self.b
    }
}

/// Plane `y = a·x + b·z + c` in the camera frame.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GroundPlane {
    pub a: f64,
    pub b: f64,
    pub c: f64,
}

impl GroundPlane {
    pub const fn new(a: f64, b: f64, c: f64) -> Self {
        Self { a, b, c }
    }

    /// Level ground `height` meters below the camera.
    pub const fn level(height: f64) -> Self {
        Self::new(0.0, 0.0, height)
    }

    /// Plane from roll and pitch angles (radians) and camera height.
    pub fn from_angles(roll: f64, pitch: f64, height: f64) -> Self {
        Self::new(roll.tan(), pitch.tan(), height)
    }

    pub fn y_at(&self, x: f64, z: f64) -> f64 {
        self.a * x + self.b * z + self.c
    }

    /// Signed vertical residual `y − (a·x + b·z + c)`.
    pub fn residual(&self, p: CameraPoint) -> f64 {
        p.y - self.y_at(p.x, p.z)
    }

    /// Snaps a point onto the plane along `Y`.
    pub fn lift(&self, x: f64, z: f64) -> CameraPoint {
        CameraPoint::new(x, self.y_at(x, z), z)
    }

    /// Upward-agnostic normal `(a, −1, b)`, normalized.
    pub fn unit_normal(&self) -> CameraPoint {
        let n = CameraPoint::new(self.a, -1.0, self.b);
        n * (1.0 / n.norm())
    }

    pub fn ego_pose(&self) -> EgoPose {
        EgoPose {
            roll: self.a.atan(),
            pitch: self.b.atan(),
        }
    }
}

/// Camera attitude relative to the ground, radians.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EgoPose {
    pub roll: f64,
    pub pitch: f64,
}

/// Plane through the optical center and the horizon line at infinity.
/// Parallel to the ground plane.
pub fn horizon_plane_through_origin(hl: ImageLine, k: &CameraIntrinsics) -> GroundPlane {
    GroundPlane::new(
        hl.k * k.fx / k.fy,
        (hl.k * k.cu + hl.b - k.cv) / k.fy,
        0.0,
    )
}

/// Ground plane implied by a horizon line and the camera height.
pub fn horizon_to_plane(hl: ImageLine, k: &CameraIntrinsics, height: f64) -> Result<GroundPlane> {
    if !(height > 0.0) {
        return Err(Error::NonPositiveHeight(height));
    }
    let GroundPlane { a, b, .. } = horizon_plane_through_origin(hl, k);
    if !(a.abs() <= MAX_PLANE_SLOPE && b.abs() <= MAX_PLANE_SLOPE) {
        return Err(Error::ImplausiblePlane {
            a,
            b,
            limit: MAX_PLANE_SLOPE,
        });
    }
    Ok(GroundPlane::new(a, b, height))
}

/// Horizon line of a plane: the image of its points at infinite depth.
/// Independent of `c`.
pub fn plane_to_horizon(pl: GroundPlane, k: &CameraIntrinsics) -> ImageLine {
    let slope = pl.a * k.fy / k.fx;
    ImageLine::new(slope, pl.b * k.fy - slope * k.cu + k.cv)
}

/// Roll and pitch of the ground plane implied by a horizon line.
pub fn ego_pose(hl: ImageLine, k: &CameraIntrinsics) -> EgoPose {
    EgoPose {
        roll: (hl.k * k.fx / k.fy).atan(),
        pitch: ((hl.k * k.cu + hl.b - k.cv) / k.fy).atan(),
    }
}

/// Least-squares line `v = k·u + b` through pixels.
pub fn fit_line_lsq(points: &[Pixel]) -> Result<ImageLine> {
    if points.len() < 2 {
        return Err(Error::DegenerateInput("line fit needs at least 2 points"));
    }
    let rows = points.iter().map(|p| ([p.u, 1.0], p.v));
    let [k, b] = solve_least_squares::<2>(rows)
        .ok_or(Error::DegenerateInput("line fit needs two distinct u values"))?;
    Ok(ImageLine::new(k, b))
}

/// Least-squares plane `y = a·x + b·z + c` through camera-frame points.
pub fn fit_plane_lsq(points: &[CameraPoint]) -> Result<GroundPlane> {
    if points.len() < 3 {
        return Err(Error::DegenerateInput("plane fit needs at least 3 points"));
    }
    let rows = points.iter().map(|p| ([p.x, p.z, 1.0], p.y));
    let [a, b, c] = solve_least_squares::<3>(rows).ok_or(Error::DegenerateInput(
        "plane fit needs points that are not collinear in (x, z)",
    ))?;
    Ok(GroundPlane::new(a, b, c))
}

/// Solves the normal equations for `rows` of `(design row, target)`.
///
/// Columns are scaled to unit norm before the determinant guard, so the
/// check is invariant to the units of each regressor.
fn solve_least_squares<const N: usize>(
    rows: impl Iterator<Item = ([f64; N], f64)>,
) -> Option<[f64; N]> {
    let mut gram = DMatrix::<f64>::zeros(N, N);
    let mut rhs = DVector::<f64>::zeros(N);
    for (x, y) in rows {
        let x = DVector::from_column_slice(&x);
        gram += &x * x.transpose();
        rhs += x * y;
    }
    let scale = DVector::from_fn(N, |i, _| gram[(i, i)].sqrt());
    if scale.iter().any(|s| !(*s > 0.0) || !s.is_finite()) {
        return None;
    }
    let scaled = DMatrix::from_fn(N, N, |i, j| gram[(i, j)] / (scale[i] * scale[j]));
    if scaled.determinant().abs() < MIN_SCALED_DETERMINANT {
        return None;
    }
    let scaled_rhs = rhs.component_div(&scale);
    let y = scaled.cholesky()?.solve(&scaled_rhs);
    let coef = y.component_div(&scale);
    let mut out = [0.0; N];
    out.copy_from_slice(coef.as_slice());
    Some(out)
}
