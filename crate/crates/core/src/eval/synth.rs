//! Seeded synthetic scenes with exact ground truth.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

use crate::camera::{project, CameraIntrinsics, Pixel};
use crate::error::{Error, Result};
use crate::ground::{plane_to_horizon, GroundPlane, ImageLine};
use crate::io::{record_from_box, FrameLabels, KeyedLabel};
use crate::labels::object_labels_on_plane;
use crate::object::{
    Category, CategoryPriors, ContactPoint, ContactPointSet, ObjectBox3D, TwoPointYaw,
    WheelbaseRatios,
};

/// Largest plane roll or pitch accepted by the generator, degrees.
const MAX_TILT_DEG: f64 = 10.0;

/// Pixel noise has its own stream so the noise level does not change the boxes.
const NOISE_SEED_SALT: u64 = 0x9E37_79B9_7F4A_7C15;

#[derive(Debug, Clone, PartialEq)]
pub struct SynthOptions {
    /// Depth range of the bottom centers, meters.
    pub depth_range: (f64, f64),
    /// Bound on `|x / z|` of the bottom centers.
    pub lateral_ratio: f64,
    /// Relative weights of car, pedestrian and cyclist.
    pub category_weights: [f64; 3],
    pub ratios: WheelbaseRatios,
    pub priors: CategoryPriors,
    /// RNG stream, so frames of one seed are independent.
    pub stream: u64,
}

impl Default for SynthOptions {
    fn default() -> Self {
        Self {
            depth_range: (5.0, 80.0),
            lateral_ratio: 0.6,
            category_weights: [0.7, 0.15, 0.15],
            ratios: WheelbaseRatios::KITTI,
            priors: CategoryPriors::default(),
            stream: 0,
        }
    }
}

/// Ground truth boxes, their contact labels and the frame horizon.
#[derive(Debug, Clone, PartialEq)]
pub struct SynthScene {
    pub boxes: Vec<ObjectBox3D>,
    pub contacts: Vec<ContactPointSet>,
    pub horizon: ImageLine,
}

impl SynthScene {
    /// Ground truth records keyed `"<frame>:<index>"`.
    pub fn keyed_labels(&self, frame: &str, k: &CameraIntrinsics) -> Vec<KeyedLabel> {
        self.boxes
            .iter()
            .zip(&self.contacts)
            .enumerate()
            .map(|(i, (b, c))| KeyedLabel {
                id: format!("{frame}:{i}"),
                record: record_from_box(b, contact_bbox(b, c, k)),
            })
            .collect()
    }

    pub fn frame_labels(&self, frame: &str) -> FrameLabels {
        FrameLabels {
            frame: frame.to_string(),
            objects: self.contacts.clone(),
            horizon: self.horizon,
        }
    }
}

/// Rough 2D box: contact pixel span horizontally, `h2d` above the bottom
/// center vertically.
pub fn contact_bbox(b: &ObjectBox3D, c: &ContactPointSet, k: &CameraIntrinsics) -> [f64; 4] {
    let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
    for p in c.points() {
        lo = lo.min(p.pixel.u);
        hi = hi.max(p.pixel.u);
    }
    let bottom = project(b.bottom_center, k).map_or(k.cv, |p| p.v);
    [lo, bottom - c.h2d(), hi, bottom]
}

pub fn synth_scene(
    seed: u64,
    n_objects: usize,
    plane: GroundPlane,
    k: &CameraIntrinsics,
    noise: f64,
) -> Result<SynthScene> {
    synth_scene_with(seed, n_objects, plane, k, noise, &SynthOptions::default())
}

/// Places `n_objects` boxes on `plane` with uniform yaw and depth, labels
/// their contact points and adds Gaussian pixel noise of stddev `noise`.
pub fn synth_scene_with(
    seed: u64,
    n_objects: usize,
    plane: GroundPlane,
    k: &CameraIntrinsics,
    noise: f64,
    opts: &SynthOptions,
) -> Result<SynthScene> {
    let pose = plane.ego_pose();
    if pose.roll.to_degrees().abs() > MAX_TILT_DEG || pose.pitch.to_degrees().abs() > MAX_TILT_DEG {
        return Err(Error::ImplausiblePlane {
            a: plane.a,
            b: plane.b,
            limit: MAX_TILT_DEG.to_radians().tan(),
        });
    }
    if !(plane.c > 0.0) {
        return Err(Error::NonPositiveHeight(plane.c));
    }
    if !(noise >= 0.0) || !noise.is_finite() {
        return Err(Error::InvalidParameter(format!("noise stddev {noise}")));
    }
    let (z_lo, z_hi) = opts.depth_range;
    if !(z_lo > 0.0 && z_hi > z_lo) {
        return Err(Error::InvalidParameter("depth range".into()));
    }
    let total: f64 = opts.category_weights.iter().sum();
    if !(total > 0.0) || opts.category_weights.iter().any(|w| *w < 0.0) {
        return Err(Error::InvalidParameter("category weights".into()));
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(opts.stream);
    let mut noise_rng = ChaCha8Rng::seed_from_u64(seed ^ NOISE_SEED_SALT);
    noise_rng.set_stream(opts.stream);
    let jitter = Normal::new(0.0, noise).map_err(|e| Error::InvalidParameter(e.to_string()))?;

    let mut boxes = Vec::with_capacity(n_objects);
    let mut contacts = Vec::with_capacity(n_objects);
    for _ in 0..n_objects {
        let pick = rng.random::<f64>() * total;
        let category = if pick < opts.category_weights[0] {
            Category::Car
        } else if pick < opts.category_weights[0] + opts.category_weights[1] {
            Category::Pedestrian
        } else {
            Category::Cyclist
        };
        let z = rng.random_range(z_lo..=z_hi);
        let x = rng.random_range(-opts.lateral_ratio..=opts.lateral_ratio) * z;
        let yaw = PI - 2.0 * PI * rng.random::<f64>();
        let (length, width, height, yaw) = match opts.priors.two_point(category) {
            None => (
                rng.random_range(3.5..=4.8),
                rng.random_range(1.5..=1.9),
                rng.random_range(1.4..=1.7),
                yaw,
            ),
            Some(prior) => {
                let height = rng.random_range(1.5..=1.9);
                let yaw = if prior.yaw == TwoPointYaw::Zero { 0.0 } else { yaw };
                (prior.length, prior.width, height, yaw)
            }
        };
        let b = ObjectBox3D::new(category, plane.lift(x, z), length, width, height, yaw)?;
        let mut labels = object_labels_on_plane(&b, &plane, opts.ratios, &opts.priors, k)?;
        if noise > 0.0 {
            let noisy: Vec<ContactPoint> = labels
                .points()
                .iter()
                .map(|c| ContactPoint {
                    tag: c.tag,
                    pixel: Pixel::new(c.pixel.u + jitter.sample(&mut noise_rng), c.pixel.v + jitter.sample(&mut noise_rng)),
                })
                .collect();
            labels = ContactPointSet::new(category, noisy, labels.h2d())?;
        }
        boxes.push(b);
        contacts.push(labels);
    }
    Ok(SynthScene {
        boxes,
        contacts,
        horizon: plane_to_horizon(plane, k),
    })
}
