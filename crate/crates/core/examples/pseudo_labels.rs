//! Contact point and horizon pseudo labels from 3D boxes.

use monoground::camera::{CameraIntrinsics, CameraPoint};
use monoground::ground::ImageLine;
use monoground::io::{emit_pseudo_labels, FrameLabels};
use monoground::labels::{horizon_pseudo_label, object_labels};
use monoground::object::{Category, CategoryPriors, ObjectBox3D, WheelbaseRatios};

fn main() -> monoground::Result<()> {
    let k = CameraIntrinsics::new(700.0, 700.0, 600.0, 180.0)?;
    let boxes = [
        ObjectBox3D::new(Category::Car, CameraPoint::new(0.0, 1.65, 10.0), 4.0, 1.6, 1.5, 0.0)?,
        ObjectBox3D::new(Category::Car, CameraPoint::new(-4.0, 1.65, 25.0), 4.4, 1.8, 1.6, 1.2)?,
        ObjectBox3D::new(Category::Pedestrian, CameraPoint::new(3.0, 1.65, 14.0), 0.8, 0.6, 1.75, 0.0)?,
        ObjectBox3D::new(Category::Cyclist, CameraPoint::new(5.0, 1.65, 30.0), 1.76, 0.6, 1.7, 2.5)?,
    ];
    let priors = CategoryPriors::default();
    let objects = boxes
        .iter()
        .map(|b| object_labels(b, WheelbaseRatios::KITTI, &priors, &k))
        .collect::<monoground::Result<Vec<_>>>()?;
    let horizon = horizon_pseudo_label(&boxes, &k)?;
    println!("level horizon would be {:?}", ImageLine::level(&k));
    print!(
        "{}",
        emit_pseudo_labels(&[FrameLabels {
            frame: "000042".into(),
            objects,
            horizon,
        }])
    );
    Ok(())
}
