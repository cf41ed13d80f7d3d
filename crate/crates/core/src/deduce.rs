//! Dynamic back-projection of ground contact pixels and closed-form 3D box
//! deduction.
//!
//! A contact pixel's viewing ray is intersected with the ground plane
//! implied by the frame's horizon line. With
//! `λ = (v − k_h·u − b_h)/H` the intersection is
//!
//! ```text
//! x = (u − cu)/λ · fy/fx,   y = (v − cv)/λ,   z = fy/λ
//! ```
//!
//! The box center, depth, length, width and heading then follow from the
//! recovered contact points; the height comes from the 2D box height by
//! similar triangles.

use crate::camera::{CameraIntrinsics, CameraPoint, Pixel};
use crate::error::{Error, Result};
use crate::ground::ImageLine;
use crate::object::{
    wrap_angle, Category, CategoryPriors, ContactPointSet, ObjectBox3D, TwoPointYaw,
    WheelbaseRatios,
};

const MIN_FRONT_OFFSET: f64 = 1e-9;

/// Intersects the ray through `p` with the ground plane of horizon `hl`.
pub fn backproject_contact(
    p: Pixel,
    hl: ImageLine,
    k: &CameraIntrinsics,
    height: f64,
) -> Result<CameraPoint> {
    if !(height > 0.0) {
        return Err(Error::NonPositiveHeight(height));
    }
    // pixel distance below the horizon; the ray meets the ground at depth fy·H/gap
    let gap = p.v - hl.k * p.u - hl.b;
    if !(gap > 0.0) {
        return Err(Error::AboveHorizon { u: p.u, v: p.v });
    }
    let z = k.fy * height / gap;
    Ok(CameraPoint::new(
        (p.u - k.cu) / k.fx * z,
        (p.v - k.cv) * height / gap,
        z,
    ))
}

/// Mean of two or four contact points.
pub fn bottom_center(points: &[CameraPoint]) -> Result<CameraPoint> {
    if !matches!(points.len(), 2 | 4) {
        return Err(Error::WrongArity {
            expected: 4,
            got: points.len(),
        });
    }
    let sum = points
        .iter()
        .fold(CameraPoint::default(), |acc, p| acc + *p);
    Ok(sum * (1.0 / points.len() as f64))
}

/// Box size `(length, width, height)` in meters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Dimensions {
    pub length: f64,
    pub width: f64,
    pub height: f64,
}

/// Length and width from the wheel spacing of a car (`points` in LF, RF,
/// RR, LR order) or from category priors for two-contact classes; height
/// from `depth·h2d/fy`.
pub fn derive_dimensions(
    category: Category,
    points: &[CameraPoint],
    ratios: WheelbaseRatios,
    priors: &CategoryPriors,
    depth: f64,
    h2d: f64,
    fy: f64,
) -> Result<Dimensions> {
    if points.len() != category.arity() {
        return Err(Error::WrongArity {
            expected: category.arity(),
            got: points.len(),
        });
    }
    if !(depth > 0.0) {
        return Err(Error::NonPositiveDepth(depth));
    }
    let height = depth * h2d / fy;
    let (length, width) = match priors.two_point(category) {
        None => {
            let [lf, rf, rr, lr] = [points[0], points[1], points[2], points[3]];
            let length = ((lf + rf) - (lr + rr)).norm() / (2.0 * ratios.kl);
            let width = ((rf + rr) - (lf + lr)).norm() / (2.0 * ratios.kw);
            (length, width)
        }
        Some(prior) => (prior.length, prior.width),
    };
    Ok(Dimensions {
        length,
        width,
        height,
    })
}

/// Heading of a car in the X-Z plane from its front contacts and bottom
/// center, in `(−π, π]`.
///
/// The two-argument arctangent covers all four quadrants, so the
/// `r₀ ± π` orientation adjustment of the single-argument form is implicit.
pub fn derive_rotation(points: &[CameraPoint], center: CameraPoint) -> Result<f64> {
    if points.len() != 4 {
        return Err(Error::WrongArity {
            expected: 4,
            got: points.len(),
        });
    }
    let (lf, rf) = (points[0], points[1]);
    let dz = lf.z + rf.z - 2.0 * center.z;
    let dx = lf.x + rf.x - 2.0 * center.x;
    if dx.hypot(dz) < 2.0 * MIN_FRONT_OFFSET {
        return Err(Error::DegenerateFront);
    }
    Ok(wrap_angle(dz.atan2(dx)))
}

fn two_point_rotation(category: Category, points: &[CameraPoint], mode: TwoPointYaw) -> Result<f64> {
    if mode == TwoPointYaw::Zero {
        return Ok(0.0);
    }
    let d = points[0] - points[1];
    if d.x.hypot(d.z) < MIN_FRONT_OFFSET {
        return Err(Error::DegenerateFront);
    }
    let yaw = match category {
        // front wheel minus rear wheel points along the heading
        Category::Cyclist => d.z.atan2(d.x),
        // left foot minus right foot points along the rotated local +Z
        _ => (-d.x).atan2(d.z),
    };
    Ok(wrap_angle(yaw))
}

/// Everything needed to deduce boxes besides the per-frame inputs.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct DeductionConfig {
    pub ratios: WheelbaseRatios,
    pub priors: CategoryPriors,
}

/// Additive corrections from an external refinement stage.
///
/// `depth` moves the box along its viewing ray; `size` is `(l, w, h)`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct RefinementBias {
    pub depth: f64,
    pub size: [f64; 3],
    pub rotation: f64,
}

/// Recovers the 3D box of one object from its contact pixels.
pub fn deduce_box(
    cps: &ContactPointSet,
    hl: ImageLine,
    k: &CameraIntrinsics,
    height: f64,
    config: &DeductionConfig,
) -> Result<ObjectBox3D> {
    deduce_box_refined(cps, hl, k, height, config, &RefinementBias::default())
}

pub fn deduce_box_refined(
    cps: &ContactPointSet,
    hl: ImageLine,
    k: &CameraIntrinsics,
    height: f64,
    config: &DeductionConfig,
    bias: &RefinementBias,
) -> Result<ObjectBox3D> {
    let category = cps.category();
    let points = cps
        .points()
        .iter()
        .map(|c| backproject_contact(c.pixel, hl, k, height))
        .collect::<Result<Vec<_>>>()?;
    let center = bottom_center(&points)?;
    let depth = center.z;
    let dims = derive_dimensions(
        category,
        &points,
        config.ratios,
        &config.priors,
        depth,
        cps.h2d(),
        k.fy,
    )?;
    let yaw = match config.priors.two_point(category) {
        None => derive_rotation(&points, center)?,
        Some(prior) => two_point_rotation(category, &points, prior.yaw)?,
    };

    let refined_depth = depth + bias.depth;
    if !(refined_depth > 0.0) {
        return Err(Error::NonPositiveDepth(refined_depth));
    }
    let center = if bias.depth == 0.0 {
        center
    } else {
        center * (refined_depth / depth)
    };
    ObjectBox3D::new(
        category,
        center,
        dims.length + bias.size[0],
        dims.width + bias.size[1],
        dims.height + bias.size[2],
        yaw + bias.rotation,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::camera::project;
    use crate::ground::{horizon_to_plane, GroundPlane};
    use std::f64::consts::PI;

    fn k() -> CameraIntrinsics {
        CameraIntrinsics::new(700.0, 700.0, 600.0, 180.0).unwrap()
    }

    #[test]
    fn flat_ground_back_projection() {
        let p = backproject_contact(Pixel::new(600.0, 250.0), ImageLine::new(0.0, 180.0), &k(), 1.65)
            .unwrap();
        assert!(p.x.abs() < 1e-15);
        assert!((p.y - 1.65).abs() < 1e-12);
        assert!((p.z - 16.5).abs() < 1e-12);
    }

    #[test]
    fn tilted_ground_back_projection() {
        let hl = ImageLine::new(0.0, 156.0);
        let p = backproject_contact(Pixel::new(600.0, 250.0), hl, &k(), 1.65).unwrap();
        // λ = 94/1.65
        assert!((p.z - 700.0 * 1.65 / 94.0).abs() < 1e-12);
        assert!((p.y - 70.0 * 1.65 / 94.0).abs() < 1e-12);
        assert!((p.z - 12.287_234).abs() < 1e-6);
        assert!((p.y - 1.228_723).abs() < 1e-6);
        let plane = GroundPlane::new(0.0, -24.0 / 700.0, 1.65);
        assert!(plane.residual(p).abs() < 1e-12);
        assert_eq!(plane, horizon_to_plane(hl, &k(), 1.65).unwrap());
    }

    #[test]
    fn above_horizon_is_rejected() {
        let hl = ImageLine::new(0.0, 180.0);
        assert!(matches!(
            backproject_contact(Pixel::new(600.0, 150.0), hl, &k(), 1.65),
            Err(Error::AboveHorizon { .. })
        ));
        assert!(backproject_contact(Pixel::new(600.0, 180.0), hl, &k(), 1.65).is_err());
        assert!(matches!(
            backproject_contact(Pixel::new(600.0, 250.0), hl, &k(), 0.0),
            Err(Error::NonPositiveHeight(_))
        ));
    }

    #[test]
    fn back_projected_points_reproject_and_lie_on_plane() {
        let hl = ImageLine::new(0.013, 171.5);
        let plane = horizon_to_plane(hl, &k(), 1.65).unwrap();
        for i in 0..40 {
            let u = 20.0 + 30.0 * i as f64;
            let v = hl.v_at(u) + 2.0 + 4.5 * i as f64;
            let p = backproject_contact(Pixel::new(u, v), hl, &k(), 1.65).unwrap();
            assert!(plane.residual(p).abs() < 1e-9);
            let back = project(p, &k()).unwrap();
            assert!((back.u - u).abs() < 1e-9 && (back.v - v).abs() < 1e-9);
        }
    }

    #[test]
    fn bottom_center_means() {
        let square = [
            CameraPoint::new(2.0, 1.65, 21.0),
            CameraPoint::new(2.0, 1.65, 19.0),
            CameraPoint::new(0.0, 1.65, 19.0),
            CameraPoint::new(0.0, 1.65, 21.0),
        ];
        let c = bottom_center(&square).unwrap();
        assert!((c.x - 1.0).abs() < 1e-15 && (c.y - 1.65).abs() < 1e-15 && (c.z - 20.0).abs() < 1e-15);
        let feet = [CameraPoint::new(0.2, 1.65, 8.0), CameraPoint::new(-0.2, 1.65, 8.0)];
        assert_eq!(bottom_center(&feet).unwrap(), CameraPoint::new(0.0, 1.65, 8.0));
        assert!(matches!(
            bottom_center(&square[..3]),
            Err(Error::WrongArity { got: 3, .. })
        ));
    }

    #[test]
    fn bottom_center_matches_mean_oracle() {
        let pts: Vec<CameraPoint> = (0..4)
            .map(|i| {
                let t = i as f64 * 1.7 + 0.3;
                CameraPoint::new(t.sin() * 3.0, 1.6 + t.cos() * 0.1, 20.0 + t * 2.0)
            })
            .collect();
        let c = bottom_center(&pts).unwrap();
        let mx = (pts[0].x + pts[1].x + pts[2].x + pts[3].x) / 4.0;
        let my = (pts[0].y + pts[1].y + pts[2].y + pts[3].y) / 4.0;
        let mz = (pts[0].z + pts[1].z + pts[2].z + pts[3].z) / 4.0;
        assert!((c.x - mx).abs() < 1e-12 && (c.y - my).abs() < 1e-12 && (c.z - mz).abs() < 1e-12);
    }

    fn car_points(yaw: f64) -> Vec<CameraPoint> {
        // LF, RF, RR, LR of a 4 x 1.6 car at the origin, Eq-5 rotation
        let (s, c) = yaw.sin_cos();
        [(1.4, 0.72), (1.4, -0.72), (-1.4, -0.72), (-1.4, 0.72)]
            .iter()
            .map(|&(x, z)| CameraPoint::new(c * x - s * z, 0.0, s * x + c * z))
            .collect()
    }

    #[test]
    fn car_dimensions_from_wheels() {
        let priors = CategoryPriors::default();
        let r = WheelbaseRatios::KITTI;
        for yaw in [0.0, PI / 6.0, -2.0, 3.0] {
            let d = derive_dimensions(Category::Car, &car_points(yaw), r, &priors, 16.5, 70.0, 700.0)
                .unwrap();
            assert!((d.length - 4.0).abs() < 1e-9, "{yaw}: {}", d.length);
            assert!((d.width - 1.6).abs() < 1e-9);
            assert!((d.height - 1.65).abs() < 1e-12);
        }
    }

    #[test]
    fn dimensions_errors_and_priors() {
        let priors = CategoryPriors::default();
        let r = WheelbaseRatios::KITTI;
        assert!(matches!(
            derive_dimensions(Category::Car, &car_points(0.0)[..2], r, &priors, 10.0, 1.0, 700.0),
            Err(Error::WrongArity { .. })
        ));
        assert!(matches!(
            derive_dimensions(Category::Car, &car_points(0.0), r, &priors, 0.0, 1.0, 700.0),
            Err(Error::NonPositiveDepth(_))
        ));
        let feet = [CameraPoint::new(0.0, 1.65, 8.15), CameraPoint::new(0.0, 1.65, 7.85)];
        let d = derive_dimensions(Category::Pedestrian, &feet, r, &priors, 8.0, 140.0, 700.0).unwrap();
        assert_eq!((d.length, d.width), (0.8, 0.6));
        assert!((d.height - 1.6).abs() < 1e-12);
    }

    #[test]
    fn rotation_quadrants() {
        let center = CameraPoint::default();
        for deg in [0.0f64, 30.0, 90.0, 150.0, 180.0, -30.0, -120.0, -179.0] {
            let yaw = deg.to_radians();
            let got = derive_rotation(&car_points(yaw), center).unwrap();
            assert!((wrap_angle(got - yaw)).abs() < 1e-9, "{deg}: {got}");
            assert!(got > -PI && got <= PI);
        }
        let flat = derive_rotation(&car_points(0.0), center).unwrap();
        assert_eq!(flat, 0.0);
    }

    #[test]
    fn rotation_of_degenerate_front() {
        let p = CameraPoint::new(1.0, 0.0, 1.0);
        let pts = [p, p, p, p];
        assert_eq!(derive_rotation(&pts, p), Err(Error::DegenerateFront));
    }

    #[test]
    fn rotation_is_equivariant() {
        let base = car_points(0.4);
        let center = CameraPoint::default();
        let r0 = derive_rotation(&base, center).unwrap();
        for delta in [0.3, 1.9, -2.5, 3.1] {
            let (s, c) = f64::sin_cos(delta);
            let rotated: Vec<CameraPoint> = base
                .iter()
                .map(|p| CameraPoint::new(c * p.x - s * p.z, p.y, s * p.x + c * p.z))
                .collect();
            let r1 = derive_rotation(&rotated, center).unwrap();
            assert!(wrap_angle(r1 - (r0 + delta)).abs() < 1e-9);
        }
    }

    #[test]
    fn two_point_rotations() {
        let yaw = 0.8f64;
        let (s, c) = yaw.sin_cos();
        let front = CameraPoint::new(0.6 * c, 0.0, 0.6 * s);
        let rear = front * -1.0;
        assert!((two_point_rotation(Category::Cyclist, &[front, rear], TwoPointYaw::FromAxis).unwrap() - yaw).abs() < 1e-12);
        let left = CameraPoint::new(-0.15 * s, 0.0, 0.15 * c);
        let right = left * -1.0;
        assert!((two_point_rotation(Category::Pedestrian, &[left, right], TwoPointYaw::FromAxis).unwrap() - yaw).abs() < 1e-12);
        assert_eq!(two_point_rotation(Category::Pedestrian, &[left, right], TwoPointYaw::Zero).unwrap(), 0.0);
    }

    #[test]
    fn refinement_bias_is_applied() {
        let hl = ImageLine::new(0.0, 180.0);
        let pts: Vec<Pixel> = car_points(0.0)
            .iter()
            .map(|p| project(*p + CameraPoint::new(0.0, 1.65, 20.0), &k()).unwrap())
            .collect();
        let cps = ContactPointSet::from_pixels(Category::Car, &pts, 700.0 * 1.5 / 20.0).unwrap();
        let cfg = DeductionConfig::default();
        let base = deduce_box(&cps, hl, &k(), 1.65, &cfg).unwrap();
        let bias = RefinementBias { depth: 1.0, size: [0.1, -0.1, 0.05], rotation: 0.2 };
        let refined = deduce_box_refined(&cps, hl, &k(), 1.65, &cfg, &bias).unwrap();
        assert!((refined.depth() - base.depth() - 1.0).abs() < 1e-9);
        assert!((refined.length - base.length - 0.1).abs() < 1e-12);
        assert!((refined.width - base.width + 0.1).abs() < 1e-12);
        assert!((refined.height - base.height - 0.05).abs() < 1e-12);
        assert!((refined.yaw - base.yaw - 0.2).abs() < 1e-12);
        // still on the same viewing ray
        let a = project(base.bottom_center, &k()).unwrap();
        let b = project(refined.bottom_center, &k()).unwrap();
        assert!((a.u - b.u).abs() < 1e-9 && (a.v - b.v).abs() < 1e-9);
    }
}
