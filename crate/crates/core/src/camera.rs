//! Pinhole camera model.
//!
//! Coordinate conventions:
//!
//! * image: origin at the top-left corner, `u` to the right, `v` down;
//! * camera: origin at the optical center, `X` right, `Y` down, `Z` forward
//!   along the optical axis.
//!
//! Images are assumed rectified (KITTI style): no skew and no lens
//! distortion. Pixel coordinates are continuous.

use std::ops::{Add, Mul, Sub};

use crate::error::{Error, Result};

/// Pinhole intrinsics `K = [[fx, 0, cu], [0, fy, cv], [0, 0, 1]]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CameraIntrinsics {
    pub fx: f64,
    pub fy: f64,
    pub cu: f64,
    pub cv: f64,
}

impl CameraIntrinsics {
    pub fn new(fx: f64, fy: f64, cu: f64, cv: f64) -> Result<Self> {
        if !(fx > 0.0 && fy > 0.0 && fx.is_finite() && fy.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "focal lengths must be positive and finite (fx = {fx}, fy = {fy})"
            )));
        }
        if !(cu.is_finite() && cv.is_finite()) {
            return Err(Error::InvalidParameter(
                "principal point must be finite".into(),
            ));
        }
        Ok(Self { fx, fy, cu, cv })
    }

    /// The 3x3 intrinsic matrix, row-major.
    pub fn matrix(&self) -> [[f64; 3]; 3] {
        [
            [self.fx, 0.0, self.cu],
            [0.0, self.fy, self.cv],
            [0.0, 0.0, 1.0],
        ]
    }

    pub fn project(&self, p: CameraPoint) -> Result<Pixel> {
        project(p, self)
    }

    pub fn backproject_ray(&self, p: Pixel) -> CameraPoint {
        backproject_ray(p, self)
    }
}

/// Image position in pixels.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Pixel {
    pub u: f64,
    pub v: f64,
}

impl Pixel {
    pub const fn new(u: f64, v: f64) -> Self {
        Self { u, v }
    }
}

/// Point in the camera coordinate system, meters.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct CameraPoint {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl CameraPoint {
    pub const fn new(x: f64, y: f64, z: f64) -> Self {
        Self { x, y, z }
    }

    pub fn norm(&self) -> f64 {
        self.dot(*self).sqrt()
    }

    pub fn dot(&self, o: CameraPoint) -> f64 {
        self.x * o.x + self.y * o.y + self.z * o.z
    }

    pub fn cross(&self, o: CameraPoint) -> CameraPoint {
        CameraPoint::new(
            self.y * o.z - self.z * o.y,
            self.z * o.x - self.x * o.z,
            self.x * o.y - self.y * o.x,
        )
    }
}

impl Add for CameraPoint {
    type Output = CameraPoint;
    fn add(self, o: CameraPoint) -> CameraPoint {
        CameraPoint::new(self.x + o.x, self.y + o.y, self.z + o.z)
    }
}

impl Sub for CameraPoint {
    type Output = CameraPoint;
    fn sub(self, o: CameraPoint) -> CameraPoint {
        CameraPoint::new(self.x - o.x, self.y - o.y, self.z - o.z)
    }
}

impl Mul<f64> for CameraPoint {
    type Output = CameraPoint;
    fn mul(self, s: f64) -> CameraPoint {
        CameraPoint::new(self.x * s, self.y * s, self.z * s)
    }
}

/// Perspective projection `u = fx·x/z + cu`, `v = fy·y/z + cv`.
pub fn project(p: CameraPoint, k: &CameraIntrinsics) -> Result<Pixel> {
    if !(p.z > 0.0) {
        return Err(Error::NonPositiveDepth(p.z));
    }
    Ok(Pixel::new(
        k.fx * p.x / p.z + k.cu,
        k.fy * p.y / p.z + k.cv,
    ))
}

/// Direction of the viewing ray through `p`, scaled to unit depth.
pub fn backproject_ray(p: Pixel, k: &CameraIntrinsics) -> CameraPoint {
    CameraPoint::new((p.u - k.cu) / k.fx, (p.v - k.cv) / k.fy, 1.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn kitti_like() -> CameraIntrinsics {
        CameraIntrinsics::new(700.0, 700.0, 600.0, 180.0).unwrap()
    }

    #[test]
    fn principal_ray_hits_principal_point() {
        let px = project(CameraPoint::new(0.0, 0.0, 10.0), &kitti_like()).unwrap();
        assert_eq!(px, Pixel::new(600.0, 180.0));
    }

    #[test]
    fn projects_contact_point() {
        // 700*1.4/10.72 + 600, 700*1.65/10.72 + 180
        let px = project(CameraPoint::new(1.4, 1.65, 10.72), &kitti_like()).unwrap();
        assert!((px.u - 691.417_910_447_761_2).abs() < 1e-9);
        assert!((px.v - 287.742_537_313_432_8).abs() < 1e-9);
    }

    #[test]
    fn rejects_points_behind_camera() {
        let k = kitti_like();
        assert_eq!(
            project(CameraPoint::new(0.0, 0.0, -1.0), &k),
            Err(Error::NonPositiveDepth(-1.0))
        );
        assert!(project(CameraPoint::new(1.0, 0.0, 0.0), &k).is_err());
    }

    #[test]
    fn backprojects_rays() {
        let k = kitti_like();
        assert_eq!(
            backproject_ray(Pixel::new(600.0, 180.0), &k),
            CameraPoint::new(0.0, 0.0, 1.0)
        );
        let r = backproject_ray(Pixel::new(670.0, 180.0), &k);
        assert!((r.x - 0.1).abs() < 1e-15 && r.y == 0.0 && r.z == 1.0);
    }

    #[test]
    fn rejects_bad_intrinsics() {
        assert!(CameraIntrinsics::new(0.0, 700.0, 1.0, 1.0).is_err());
        assert!(CameraIntrinsics::new(700.0, -1.0, 1.0, 1.0).is_err());
        assert!(CameraIntrinsics::new(700.0, 700.0, f64::NAN, 1.0).is_err());
    }

    proptest! {
        #[test]
        fn ray_round_trip(u in -500.0f64..2000.0, v in -500.0f64..1000.0, s in 0.1f64..100.0) {
            let k = kitti_like();
            let p = Pixel::new(u, v);
            let back = project(backproject_ray(p, &k) * s, &k).unwrap();
            prop_assert!((back.u - u).abs() < 1e-9 && (back.v - v).abs() < 1e-9);
        }

        #[test]
        fn point_round_trip(x in -50.0f64..50.0, y in -5.0f64..5.0, z in 0.5f64..100.0) {
            let k = kitti_like();
            let p = CameraPoint::new(x, y, z);
            let q = backproject_ray(project(p, &k).unwrap(), &k) * z;
            for (a, b) in [(q.x, p.x), (q.y, p.y), (q.z, p.z)] {
                prop_assert!((a - b).abs() <= 1e-9 * b.abs().max(1.0));
            }
        }

        #[test]
        fn projection_is_homogeneous(x in -50.0f64..50.0, y in -5.0f64..5.0, z in 0.5f64..100.0, s in 0.01f64..100.0) {
            let k = kitti_like();
            let p = CameraPoint::new(x, y, z);
            let a = project(p, &k).unwrap();
            let b = project(p * s, &k).unwrap();
            prop_assert!((a.u - b.u).abs() < 1e-9 && (a.v - b.v).abs() < 1e-9);
        }
    }
}
