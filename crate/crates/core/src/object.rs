//! Object-level domain types shared by box deduction and pseudo labeling.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use crate::camera::{CameraPoint, Pixel};
use crate::error::{Error, Result};

/// Object classes with ground contact geometry.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Category {
    Car,
    Pedestrian,
    Cyclist,
}

impl Category {
    /// Number of ground contact points for this class.
    pub fn arity(self) -> usize {
        match self {
            Category::Car => 4,
            Category::Pedestrian | Category::Cyclist => 2,
        }
    }

    /// Contact tags in canonical order.
    pub fn tags(self) -> &'static [ContactTag] {
        use ContactTag::*;
        match self {
            Category::Car => &[LeftFront, RightFront, RightRear, LeftRear],
            Category::Pedestrian => &[Left, Right],
            Category::Cyclist => &[Front, Rear],
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Category::Car => "Car",
            Category::Pedestrian => "Pedestrian",
            Category::Cyclist => "Cyclist",
        }
    }
}

impl fmt::Display for Category {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Category {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "Car" => Ok(Category::Car),
            "Pedestrian" => Ok(Category::Pedestrian),
            "Cyclist" => Ok(Category::Cyclist),
            other => Err(Error::InvalidParameter(format!("unknown category {other:?}"))),
        }
    }
}

/// Label of a single ground contact point.
///
/// Cars use the four wheel contacts. Pedestrians use the left and right
/// foot, cyclists the front and rear wheel.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ContactTag {
    LeftFront,
    RightFront,
    RightRear,
    LeftRear,
    Left,
    Right,
    Front,
    Rear,
}

impl ContactTag {
    pub fn as_str(self) -> &'static str {
        match self {
            ContactTag::LeftFront => "LF",
            ContactTag::RightFront => "RF",
            ContactTag::RightRear => "RR",
            ContactTag::LeftRear => "LR",
            ContactTag::Left => "L",
            ContactTag::Right => "R",
            ContactTag::Front => "F",
            ContactTag::Rear => "B",
        }
    }
}

impl fmt::Display for ContactTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ContactTag {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "LF" => ContactTag::LeftFront,
            "RF" => ContactTag::RightFront,
            "RR" => ContactTag::RightRear,
            "LR" => ContactTag::LeftRear,
            "L" => ContactTag::Left,
            "R" => ContactTag::Right,
            "F" => ContactTag::Front,
            "B" => ContactTag::Rear,
            other => return Err(Error::InvalidParameter(format!("unknown contact tag {other:?}"))),
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ContactPoint {
    pub tag: ContactTag,
    pub pixel: Pixel,
}

/// Image size used to flag contact points outside the frame.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ImageBounds {
    pub width: usize,
    pub height: usize,
}

impl ImageBounds {
    pub fn contains(&self, p: Pixel) -> bool {
        p.u >= 0.0 && p.v >= 0.0 && p.u < self.width as f64 && p.v < self.height as f64
    }
}

/// Labeled ground contact pixels of one object plus its 2D box height.
///
/// Points are stored in the category's canonical tag order.
#[derive(Debug, Clone, PartialEq)]
pub struct ContactPointSet {
    category: Category,
    points: Vec<ContactPoint>,
    h2d: f64,
}

impl ContactPointSet {
    pub fn new(category: Category, points: Vec<ContactPoint>, h2d: f64) -> Result<Self> {
        let tags = category.tags();
        if points.len() != tags.len() {
            return Err(Error::WrongArity {
                expected: tags.len(),
                got: points.len(),
            });
        }
        if !(h2d > 0.0 && h2d.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "2D box height must be positive (got {h2d})"
            )));
        }
        let mut ordered = Vec::with_capacity(tags.len());
        for tag in tags {
            let mut hits = points.iter().filter(|p| p.tag == *tag);
            match (hits.next(), hits.next()) {
                (Some(p), None) => ordered.push(*p),
                _ => {
                    return Err(Error::InvalidParameter(format!(
                        "{category} needs exactly one {tag} contact point"
                    )))
                }
            }
        }
        Ok(Self {
            category,
            points: ordered,
            h2d,
        })
    }

    /// Builds a set from pixels given in canonical tag order.
    pub fn from_pixels(category: Category, pixels: &[Pixel], h2d: f64) -> Result<Self> {
        let tags = category.tags();
        if pixels.len() != tags.len() {
            return Err(Error::WrongArity {
                expected: tags.len(),
                got: pixels.len(),
            });
        }
        let points = tags
            .iter()
            .zip(pixels)
            .map(|(&tag, &pixel)| ContactPoint { tag, pixel })
            .collect();
        Self::new(category, points, h2d)
    }

    pub fn category(&self) -> Category {
        self.category
    }

    pub fn points(&self) -> &[ContactPoint] {
        &self.points
    }

    pub fn pixel(&self, tag: ContactTag) -> Option<Pixel> {
        self.points.iter().find(|p| p.tag == tag).map(|p| p.pixel)
    }

    pub fn h2d(&self) -> f64 {
        self.h2d
    }

    /// Per-point flag: `true` when the pixel lies inside `bounds`.
    pub fn visibility(&self, bounds: ImageBounds) -> Vec<bool> {
        self.points.iter().map(|p| bounds.contains(p.pixel)).collect()
    }
}

/// 3D box resting on the ground: bottom-face center, size and heading.
///
/// `yaw` is the heading of the object's front in the X-Z plane measured
/// from the camera X axis toward Z, in `(−π, π]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ObjectBox3D {
    pub category: Category,
    pub bottom_center: CameraPoint,
    pub length: f64,
    pub width: f64,
    pub height: f64,
    pub yaw: f64,
}

impl ObjectBox3D {
    pub fn new(
        category: Category,
        bottom_center: CameraPoint,
        length: f64,
        width: f64,
        height: f64,
        yaw: f64,
    ) -> Result<Self> {
        if !(length > 0.0 && width > 0.0 && height > 0.0) {
            return Err(Error::NonPositiveDimension);
        }
        if !(bottom_center.z > 0.0) {
            return Err(Error::NonPositiveDepth(bottom_center.z));
        }
        Ok(Self {
            category,
            bottom_center,
            length,
            width,
            height,
            yaw: wrap_angle(yaw),
        })
    }

    pub fn depth(&self) -> f64 {
        self.bottom_center.z
    }
}

/// Wheel spacing as a fraction of box length (`kl`) and width (`kw`).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WheelbaseRatios {
    pub kl: f64,
    pub kw: f64,
}

impl WheelbaseRatios {
    /// KITTI car averages.
    pub const KITTI: WheelbaseRatios = WheelbaseRatios { kl: 0.7, kw: 0.9 };

    pub fn new(kl: f64, kw: f64) -> Result<Self> {
        let ok = |r: f64| r > 0.0 && r <= 1.0;
        if !(ok(kl) && ok(kw)) {
            return Err(Error::InvalidParameter(format!(
                "wheelbase ratios must lie in (0, 1] (kl = {kl}, kw = {kw})"
            )));
        }
        Ok(Self { kl, kw })
    }
}

impl Default for WheelbaseRatios {
    fn default() -> Self {
        Self::KITTI
    }
}

/// How the heading of a two-contact object is recovered.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TwoPointYaw {
    /// Always report zero heading.
    Zero,
    /// Heading from the direction between the two contact points.
    FromAxis,
}

/// Ground geometry and size priors for a two-contact category.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoPointPrior {
    /// Average box length, meters.
    pub length: f64,
    /// Average box width, meters.
    pub width: f64,
    /// Offset of each contact point from the bottom center along the
    /// contact axis, meters when `relative` is false, fraction of the box
    /// length otherwise.
    pub offset: f64,
    pub relative: bool,
    pub yaw: TwoPointYaw,
}

impl TwoPointPrior {
    pub fn offset_for(&self, length: f64) -> f64 {
        if self.relative {
            self.offset * length
        } else {
            self.offset
        }
    }
}

/// Configuration for the two-contact categories. These are tunable
/// defaults, not measured constants.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CategoryPriors {
    /// Feet on the local lateral axis at ±0.15 m.
    pub pedestrian: TwoPointPrior,
    /// Wheels on the local longitudinal axis at ±0.35·l.
    pub cyclist: TwoPointPrior,
}

impl Default for CategoryPriors {
    fn default() -> Self {
        Self {
            pedestrian: TwoPointPrior {
                length: 0.8,
                width: 0.6,
                offset: 0.15,
                relative: false,
                yaw: TwoPointYaw::Zero,
            },
            cyclist: TwoPointPrior {
                length: 1.76,
                width: 0.6,
                offset: 0.35,
                relative: true,
                yaw: TwoPointYaw::FromAxis,
            },
        }
    }
}

impl CategoryPriors {
    pub fn two_point(&self, category: Category) -> Option<&TwoPointPrior> {
        match category {
            Category::Car => None,
            Category::Pedestrian => Some(&self.pedestrian),
            Category::Cyclist => Some(&self.cyclist),
        }
    }
}

/// Wraps an angle to `(−π, π]`.
pub fn wrap_angle(a: f64) -> f64 {
    if a > -PI && a <= PI {
        return a;
    }
    let mut r = a.rem_euclid(2.0 * PI);
    if r > PI {
        r -= 2.0 * PI;
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn wraps_angles() {
        assert_eq!(wrap_angle(0.0), 0.0);
        assert!((wrap_angle(-PI) - PI).abs() < 1e-15);
        assert!((wrap_angle(PI) - PI).abs() < 1e-15);
        assert!((wrap_angle(3.0 * PI / 2.0) + PI / 2.0).abs() < 1e-12);
        assert!((wrap_angle(-7.0) - (-7.0 + 2.0 * PI)).abs() < 1e-12);
    }

    #[test]
    fn contact_sets_validate_arity_and_tags() {
        let px = Pixel::new(1.0, 2.0);
        assert_eq!(
            ContactPointSet::from_pixels(Category::Car, &[px, px], 10.0),
            Err(Error::WrongArity { expected: 4, got: 2 })
        );
        let dup = vec![
            ContactPoint { tag: ContactTag::Left, pixel: px },
            ContactPoint { tag: ContactTag::Left, pixel: px },
        ];
        assert!(ContactPointSet::new(Category::Pedestrian, dup, 10.0).is_err());
        assert!(ContactPointSet::from_pixels(Category::Pedestrian, &[px, px], 0.0).is_err());
    }

    #[test]
    fn contact_sets_are_reordered_canonically() {
        let pts = vec![
            ContactPoint { tag: ContactTag::Rear, pixel: Pixel::new(1.0, 1.0) },
            ContactPoint { tag: ContactTag::Front, pixel: Pixel::new(2.0, 2.0) },
        ];
        let set = ContactPointSet::new(Category::Cyclist, pts, 5.0).unwrap();
        assert_eq!(set.points()[0].tag, ContactTag::Front);
        assert_eq!(set.pixel(ContactTag::Rear), Some(Pixel::new(1.0, 1.0)));
    }

    #[test]
    fn visibility_flags() {
        let set = ContactPointSet::from_pixels(
            Category::Pedestrian,
            &[Pixel::new(10.0, 10.0), Pixel::new(-3.0, 10.0)],
            20.0,
        )
        .unwrap();
        assert_eq!(
            set.visibility(ImageBounds { width: 100, height: 50 }),
            vec![true, false]
        );
    }

    #[test]
    fn ratios_and_boxes_validate() {
        assert!(WheelbaseRatios::new(0.0, 0.5).is_err());
        assert!(WheelbaseRatios::new(0.7, 1.2).is_err());
        assert_eq!(WheelbaseRatios::default(), WheelbaseRatios::new(0.7, 0.9).unwrap());
        let c = CameraPoint::new(0.0, 1.65, 10.0);
        assert_eq!(
            ObjectBox3D::new(Category::Car, c, 0.0, 1.0, 1.0, 0.0),
            Err(Error::NonPositiveDimension)
        );
        assert!(ObjectBox3D::new(Category::Car, CameraPoint::new(0.0, 1.65, -1.0), 4.0, 1.6, 1.5, 0.0).is_err());
        let b = ObjectBox3D::new(Category::Car, c, 4.0, 1.6, 1.5, -PI).unwrap();
        assert!((b.yaw - PI).abs() < 1e-15);
    }
}
