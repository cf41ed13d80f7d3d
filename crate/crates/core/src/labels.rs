//! Pseudo labels from 3D box annotations: ground contact pixels per object
//! and the horizon line per frame.

use crate::camera::{project, CameraIntrinsics, CameraPoint, Pixel};
use crate::error::{Error, Result};
use crate::ground::{fit_plane_lsq, plane_to_horizon, GroundPlane, ImageLine};
use crate::object::{
    Category, CategoryPriors, ContactPointSet, ObjectBox3D, WheelbaseRatios,
};

/// Car wheel contacts in the object frame (front along +X, left along +Z,
/// origin at the bottom-face center).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LocalContactPoints {
    pub left_front: CameraPoint,
    pub right_front: CameraPoint,
    pub right_rear: CameraPoint,
    pub left_rear: CameraPoint,
}

impl LocalContactPoints {
    /// LF, RF, RR, LR.
    pub fn to_array(self) -> [CameraPoint; 4] {
        [self.left_front, self.right_front, self.right_rear, self.left_rear]
    }
}

/// Object pose: heading about the camera Y axis and bottom-center position.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PoseRT {
    pub yaw: f64,
    pub translation: CameraPoint,
}

impl PoseRT {
    pub fn of_box(b: &ObjectBox3D) -> Self {
        Self {
            yaw: b.yaw,
            translation: b.bottom_center,
        }
    }
}

pub fn local_contact_points(length: f64, width: f64, ratios: WheelbaseRatios) -> Result<LocalContactPoints> {
    if !(length > 0.0 && width > 0.0) {
        return Err(Error::NonPositiveDimension);
    }
    let hl = ratios.kl / 2.0 * length;
    let hw = ratios.kw / 2.0 * width;
    Ok(LocalContactPoints {
        left_front: CameraPoint::new(hl, 0.0, hw),
        right_front: CameraPoint::new(hl, 0.0, -hw),
        right_rear: CameraPoint::new(-hl, 0.0, -hw),
        left_rear: CameraPoint::new(-hl, 0.0, hw),
    })
}

/// `R·p + T` with `R = [[cos, 0, −sin], [0, 1, 0], [sin, 0, cos]]`.
pub fn local_to_camera(p: CameraPoint, pose: &PoseRT) -> CameraPoint {
    let (s, c) = pose.yaw.sin_cos();
    CameraPoint::new(c * p.x - s * p.z, p.y, s * p.x + c * p.z) + pose.translation
}

/// Object frame axes expressed in camera coordinates.
#[derive(Debug, Clone, Copy)]
struct ObjectAxes {
    front: CameraPoint,
    down: CameraPoint,
    left: CameraPoint,
}

impl ObjectAxes {
    fn upright(yaw: f64) -> Self {
        let (s, c) = yaw.sin_cos();
        Self {
            front: CameraPoint::new(c, 0.0, s),
            down: CameraPoint::new(0.0, 1.0, 0.0),
            left: CameraPoint::new(-s, 0.0, c),
        }
    }

    /// Axes of an object resting on `plane`: front and left lie in the
    /// plane, the front keeps heading `yaw` in bird's-eye view.
    fn on_plane(yaw: f64, plane: &GroundPlane) -> Self {
        let (s, c) = yaw.sin_cos();
        let front = CameraPoint::new(c, plane.a * c + plane.b * s, s);
        let front = front * (1.0 / front.norm());
        let normal = plane.unit_normal();
        let mut left = normal.cross(front);
        if left.dot(CameraPoint::new(-s, 0.0, c)) < 0.0 {
            left = left * -1.0;
        }
        let left = left * (1.0 / left.norm());
        Self {
            front,
            down: left.cross(front),
            left,
        }
    }

    fn apply(&self, p: CameraPoint, origin: CameraPoint) -> CameraPoint {
        origin + self.front * p.x + self.down * p.y + self.left * p.z
    }
}

/// Local contact offsets of `b` in canonical tag order.
fn local_offsets(b: &ObjectBox3D, ratios: WheelbaseRatios, priors: &CategoryPriors) -> Result<Vec<CameraPoint>> {
    match priors.two_point(b.category) {
        None => Ok(local_contact_points(b.length, b.width, ratios)?.to_array().to_vec()),
        Some(prior) => {
            let d = prior.offset_for(b.length);
            Ok(match b.category {
                // left foot, right foot
                Category::Pedestrian => vec![CameraPoint::new(0.0, 0.0, d), CameraPoint::new(0.0, 0.0, -d)],
                // front wheel, rear wheel
                _ => vec![CameraPoint::new(d, 0.0, 0.0), CameraPoint::new(-d, 0.0, 0.0)],
            })
        }
    }
}

fn project_contacts(b: &ObjectBox3D, points: &[CameraPoint], k: &CameraIntrinsics) -> Result<ContactPointSet> {
    let pixels = points
        .iter()
        .map(|p| {
            if p.z > 0.0 {
                project(*p, k)
            } else {
                Err(Error::BehindCamera(p.z))
            }
        })
        .collect::<Result<Vec<Pixel>>>()?;
    ContactPointSet::from_pixels(b.category, &pixels, k.fy * b.height / b.depth())
}

/// Camera-frame contact points of `b`, rotated about Y only.
pub fn contact_points_camera(
    b: &ObjectBox3D,
    ratios: WheelbaseRatios,
    priors: &CategoryPriors,
) -> Result<Vec<CameraPoint>> {
    let axes = ObjectAxes::upright(b.yaw);
    Ok(local_offsets(b, ratios, priors)?
        .into_iter()
        .map(|p| axes.apply(p, b.bottom_center))
        .collect())
}

/// Camera-frame contact points of `b` resting on `plane`.
///
/// The box is tilted with the ground so that every contact point lies on
/// the plane and the in-plane wheel spacing is `kl·l` by `kw·w`.
/// For a level plane this equals [`contact_points_camera`].
pub fn contact_points_on_plane(
    b: &ObjectBox3D,
    plane: &GroundPlane,
    ratios: WheelbaseRatios,
    priors: &CategoryPriors,
) -> Result<Vec<CameraPoint>> {
    let axes = ObjectAxes::on_plane(b.yaw, plane);
    Ok(local_offsets(b, ratios, priors)?
        .into_iter()
        .map(|p| axes.apply(p, b.bottom_center))
        .collect())
}

/// Contact pixel labels of a car box. The 2D height is `fy·h/z`.
pub fn contact_pixel_labels(b: &ObjectBox3D, ratios: WheelbaseRatios, k: &CameraIntrinsics) -> Result<ContactPointSet> {
    let pose = PoseRT::of_box(b);
    let points: Vec<CameraPoint> = local_contact_points(b.length, b.width, ratios)?
        .to_array()
        .iter()
        .map(|p| local_to_camera(*p, &pose))
        .collect();
    project_contacts(&ObjectBox3D { category: Category::Car, ..*b }, &points, k)
}

/// Two-point labels for pedestrians and cyclists.
pub fn pedestrian_cyclist_labels(
    b: &ObjectBox3D,
    priors: &CategoryPriors,
    k: &CameraIntrinsics,
) -> Result<ContactPointSet> {
    if b.category == Category::Car {
        return Err(Error::InvalidParameter("cars have four contact points".into()));
    }
    let points = contact_points_camera(b, WheelbaseRatios::KITTI, priors)?;
    project_contacts(b, &points, k)
}

/// Contact labels for any category, box rotated about Y only.
pub fn object_labels(
    b: &ObjectBox3D,
    ratios: WheelbaseRatios,
    priors: &CategoryPriors,
    k: &CameraIntrinsics,
) -> Result<ContactPointSet> {
    match b.category {
        Category::Car => contact_pixel_labels(b, ratios, k),
        _ => pedestrian_cyclist_labels(b, priors, k),
    }
}

/// Contact labels for a box resting on a tilted `plane`.
pub fn object_labels_on_plane(
    b: &ObjectBox3D,
    plane: &GroundPlane,
    ratios: WheelbaseRatios,
    priors: &CategoryPriors,
    k: &CameraIntrinsics,
) -> Result<ContactPointSet> {
    let points = contact_points_on_plane(b, plane, ratios, priors)?;
    project_contacts(b, &points, k)
}

/// Horizon label of a frame: least-squares plane through the boxes'
/// bottom centers, projected to infinity.
pub fn horizon_pseudo_label(boxes: &[ObjectBox3D], k: &CameraIntrinsics) -> Result<ImageLine> {
    horizon_pseudo_label_min(boxes, k, 3)
}

/// As [`horizon_pseudo_label`] but requiring at least `min_boxes` boxes.
pub fn horizon_pseudo_label_min(boxes: &[ObjectBox3D], k: &CameraIntrinsics, min_boxes: usize) -> Result<ImageLine> {
    if boxes.len() < min_boxes.max(3) {
        return Err(Error::DegenerateInput("too few boxes for a ground plane fit"));
    }
    let centers: Vec<CameraPoint> = boxes.iter().map(|b| b.bottom_center).collect();
    Ok(plane_to_horizon(fit_plane_lsq(&centers)?, k))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::deduce::{backproject_contact, deduce_box, DeductionConfig};
    use crate::object::{wrap_angle, ContactTag};
    use std::f64::consts::PI;

    fn k() -> CameraIntrinsics {
        CameraIntrinsics::new(700.0, 700.0, 600.0, 180.0).unwrap()
    }

    fn car(x: f64, z: f64, yaw: f64) -> ObjectBox3D {
        ObjectBox3D::new(Category::Car, CameraPoint::new(x, 1.65, z), 4.0, 1.6, 1.5, yaw).unwrap()
    }

    #[test]
    fn local_points_match_wheelbase_layout() {
        let p = local_contact_points(4.0, 1.6, WheelbaseRatios::KITTI).unwrap();
        let close = |a: CameraPoint, b: CameraPoint| (a - b).norm() < 1e-12;
        assert!(close(p.left_front, CameraPoint::new(1.4, 0.0, 0.72)));
        assert!(close(p.right_rear, CameraPoint::new(-1.4, 0.0, -0.72)));
        assert!(close(p.left_rear, CameraPoint::new(-1.4, 0.0, 0.72)));
        assert!(close(p.right_front, CameraPoint::new(1.4, 0.0, -0.72)));
        let sum = p.to_array().iter().fold(CameraPoint::default(), |a, b| a + *b);
        assert!(sum.norm() < 1e-12);
        assert_eq!(
            local_contact_points(0.0, 0.0, WheelbaseRatios::KITTI),
            Err(Error::NonPositiveDimension)
        );
    }

    #[test]
    fn local_to_camera_cases() {
        let pose = PoseRT { yaw: 0.0, translation: CameraPoint::new(0.0, 1.65, 10.0) };
        let p = local_to_camera(CameraPoint::new(1.4, 0.0, 0.72), &pose);
        assert!((p - CameraPoint::new(1.4, 1.65, 10.72)).norm() < 1e-12);
        let quarter = PoseRT { yaw: PI / 2.0, translation: CameraPoint::default() };
        let q = local_to_camera(CameraPoint::new(1.0, 0.0, 0.0), &quarter);
        assert!((q - CameraPoint::new(0.0, 0.0, 1.0)).norm() < 1e-15);
        for i in 0..20 {
            let pose = PoseRT { yaw: i as f64 * 0.77 - 5.0, translation: CameraPoint::default() };
            let p = CameraPoint::new(1.3, -0.4, 2.2);
            assert!((local_to_camera(p, &pose).norm() - p.norm()).abs() < 1e-12);
        }
    }

    #[test]
    fn worked_car_example() {
        let labels = contact_pixel_labels(&car(0.0, 10.0, 0.0), WheelbaseRatios::KITTI, &k()).unwrap();
        let lf = labels.pixel(ContactTag::LeftFront).unwrap();
        // 700·1.4/10.72 + 600, 700·1.65/10.72 + 180
        assert!((lf.u - 691.417_910_447_761_2).abs() < 1e-6);
        assert!((lf.v - 287.742_537_313_432_8).abs() < 1e-6);
        // centered on the optical axis: left/right mirror about cu
        let rf = labels.pixel(ContactTag::RightFront).unwrap();
        let rr = labels.pixel(ContactTag::RightRear).unwrap();
        let lr = labels.pixel(ContactTag::LeftRear).unwrap();
        // at yaw 0 the front wheels sit at +X, so the mirror pairs are front/rear
        // at the same depth: LF (x=+1.4, z=10.72) vs LR (x=-1.4, z=10.72)
        assert!((lf.u + lr.u - 1200.0).abs() < 1e-9 && (lf.v - lr.v).abs() < 1e-9);
        assert!((rf.u + rr.u - 1200.0).abs() < 1e-9 && (rf.v - rr.v).abs() < 1e-9);
        assert!((labels.h2d() - 105.0).abs() < 1e-12);
    }

    #[test]
    fn behind_camera_is_rejected() {
        let b = car(0.0, 1.0, PI / 2.0);
        assert!(matches!(
            contact_pixel_labels(&b, WheelbaseRatios::KITTI, &k()),
            Err(Error::BehindCamera(_))
        ));
    }

    #[test]
    fn labels_round_trip_through_back_projection() {
        let hl = ImageLine::new(0.0, 180.0);
        for (i, yaw) in [0.0, 0.5, -1.2, 2.9, PI].iter().enumerate() {
            let b = car(-4.0 + 2.0 * i as f64, 8.0 + 9.0 * i as f64, *yaw);
            let cam = contact_points_camera(&b, WheelbaseRatios::KITTI, &CategoryPriors::default()).unwrap();
            let labels = contact_pixel_labels(&b, WheelbaseRatios::KITTI, &k()).unwrap();
            for (c, p) in cam.iter().zip(labels.points()) {
                let back = backproject_contact(p.pixel, hl, &k(), 1.65).unwrap();
                assert!((back - *c).norm() < 1e-9);
            }
            let d = deduce_box(&labels, hl, &k(), 1.65, &DeductionConfig::default()).unwrap();
            assert!((d.bottom_center - b.bottom_center).norm() < 1e-9);
            assert!((d.length - 4.0).abs() < 1e-9 && (d.width - 1.6).abs() < 1e-9);
            assert!(wrap_angle(d.yaw - b.yaw).abs() < 1e-9);
            assert!((d.height - 1.5).abs() < 1e-9);
        }
    }

    #[test]
    fn on_plane_contacts_lie_on_plane_and_keep_spacing() {
        let plane = GroundPlane::new(0.04, -0.06, 1.65);
        let mut b = car(3.0, 25.0, 2.2);
        b.bottom_center = plane.lift(3.0, 25.0);
        let pts = contact_points_on_plane(&b, &plane, WheelbaseRatios::KITTI, &CategoryPriors::default()).unwrap();
        for p in &pts {
            assert!(plane.residual(*p).abs() < 1e-12);
        }
        assert!(((pts[0] - pts[3]).norm() - 2.8).abs() < 1e-12);
        assert!(((pts[0] - pts[1]).norm() - 1.44).abs() < 1e-12);
        let level = contact_points_on_plane(&car(1.0, 9.0, 0.7), &GroundPlane::level(1.65), WheelbaseRatios::KITTI, &CategoryPriors::default()).unwrap();
        let upright = contact_points_camera(&car(1.0, 9.0, 0.7), WheelbaseRatios::KITTI, &CategoryPriors::default()).unwrap();
        for (a, b) in level.iter().zip(&upright) {
            assert!((*a - *b).norm() < 1e-12);
        }
    }

    #[test]
    fn mirrored_layout_flips_yaw() {
        let center = CameraPoint::new(0.0, 1.65, 20.0);
        let b = ObjectBox3D::new(Category::Car, center, 4.0, 1.6, 1.5, 0.6).unwrap();
        let pts = contact_points_camera(&b, WheelbaseRatios::KITTI, &CategoryPriors::default()).unwrap();
        let cfg = DeductionConfig::default();
        let hl = ImageLine::new(0.0, 180.0);
        let pixels = |pts: &[CameraPoint]| -> Vec<Pixel> { pts.iter().map(|p| project(*p, &k()).unwrap()).collect() };

        // swapping left and right labels alone leaves the front midpoint and yaw unchanged
        let px = pixels(&pts);
        let swapped = ContactPointSet::from_pixels(Category::Car, &[px[1], px[0], px[3], px[2]], 50.0).unwrap();
        let d = deduce_box(&swapped, hl, &k(), 1.65, &cfg).unwrap();
        assert!((d.yaw - 0.6).abs() < 1e-9);

        // reflecting the layout across the heading-zero axis and swapping sides gives −yaw
        let mirrored: Vec<CameraPoint> = pts
            .iter()
            .map(|p| CameraPoint::new(p.x, p.y, 2.0 * center.z - p.z))
            .collect();
        let mx = pixels(&mirrored);
        let relabeled = ContactPointSet::from_pixels(Category::Car, &[mx[1], mx[0], mx[3], mx[2]], 50.0).unwrap();
        let d = deduce_box(&relabeled, hl, &k(), 1.65, &cfg).unwrap();
        assert!((d.yaw + 0.6).abs() < 1e-9, "{}", d.yaw);
        assert!((d.width - 1.6).abs() < 1e-9 && (d.length - 4.0).abs() < 1e-9);
    }

    #[test]
    fn pedestrian_and_cyclist_labels() {
        let priors = CategoryPriors::default();
        let ped = ObjectBox3D::new(Category::Pedestrian, CameraPoint::new(0.0, 1.65, 10.0), 0.8, 0.6, 1.7, 0.0).unwrap();
        let l = pedestrian_cyclist_labels(&ped, &priors, &k()).unwrap();
        let (a, b) = (l.points()[0].pixel, l.points()[1].pixel);
        assert!((a.u - 600.0).abs() < 1e-12 && (b.u - 600.0).abs() < 1e-12);
        // feet at depths 10.15 and 9.85
        assert!((a.v - (180.0 + 700.0 * 1.65 / 10.15)).abs() < 1e-9);
        assert!((b.v - (180.0 + 700.0 * 1.65 / 9.85)).abs() < 1e-9);

        let cyc = ObjectBox3D::new(Category::Cyclist, CameraPoint::new(0.0, 1.65, 10.0), 1.76, 0.6, 1.7, 0.0).unwrap();
        let l = pedestrian_cyclist_labels(&cyc, &priors, &k()).unwrap();
        let off = 0.35 * 1.76;
        assert!((l.points()[0].pixel.u - (600.0 + 700.0 * off / 10.0)).abs() < 1e-9);
        assert!((l.points()[1].pixel.u - (600.0 - 700.0 * off / 10.0)).abs() < 1e-9);
        assert!((l.points()[0].pixel.v - (180.0 + 700.0 * 1.65 / 10.0)).abs() < 1e-9);

        let hl = ImageLine::new(0.0, 180.0);
        let cfg = DeductionConfig::default();
        for b in [ped, cyc] {
            let labels = pedestrian_cyclist_labels(&b, &priors, &k()).unwrap();
            let d = deduce_box(&labels, hl, &k(), 1.65, &cfg).unwrap();
            assert!((d.bottom_center - b.bottom_center).norm() < 1e-6);
        }
        assert!(pedestrian_cyclist_labels(&car(0.0, 10.0, 0.0), &priors, &k()).is_err());
    }

    #[test]
    fn horizon_labels() {
        let boxes: Vec<ObjectBox3D> = [(-3.0, 10.0), (4.0, 22.0), (0.0, 40.0), (6.0, 15.0)]
            .iter()
            .map(|&(x, z)| car(x, z, 0.0))
            .collect();
        let hl = horizon_pseudo_label(&boxes, &k()).unwrap();
        assert!(hl.k.abs() < 1e-12 && (hl.b - 180.0).abs() < 1e-9);

        let plane = GroundPlane::new(0.01, -0.03, 1.6);
        let tilted: Vec<ObjectBox3D> = boxes
            .iter()
            .map(|b| ObjectBox3D { bottom_center: plane.lift(b.bottom_center.x, b.bottom_center.z), ..*b })
            .collect();
        let hl = horizon_pseudo_label(&tilted, &k()).unwrap();
        let want = plane_to_horizon(plane, &k());
        assert!((hl.k - want.k).abs() < 1e-9 && (hl.b - want.b).abs() < 1e-9);
        assert!((want.k - 0.01).abs() < 1e-15);
        assert!((want.b - (-0.03 * 700.0 - 0.01 * 600.0 + 180.0)).abs() < 1e-12);

        assert!(matches!(horizon_pseudo_label(&boxes[..2], &k()), Err(Error::DegenerateInput(_))));
        assert!(horizon_pseudo_label_min(&boxes, &k(), 5).is_err());
    }
}
