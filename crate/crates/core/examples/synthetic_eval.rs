//! Depth and dimension errors of contact-point deduction under pixel noise.

use monoground::camera::CameraIntrinsics;
use monoground::deduce::{deduce_box, DeductionConfig};
use monoground::eval::{eval_depth_buckets, eval_dim_errors, synth_scene_with, DepthBucketReport, DimErrorReport, SynthOptions};
use monoground::ground::GroundPlane;
use monoground::io::{record_from_box, KeyedLabel};

fn main() -> monoground::Result<()> {
    let k = CameraIntrinsics::new(721.5377, 721.5377, 609.5593, 172.854)?;
    let plane = GroundPlane::from_angles(0.5f64.to_radians(), 1.5f64.to_radians(), 1.65);
    let cfg = DeductionConfig::default();
    println!("{}", DepthBucketReport::CSV_HEADER);
    let mut dims = Vec::new();
    for noise in [0.0, 0.5, 1.0, 2.0] {
        let (mut gt, mut pred) = (Vec::new(), Vec::new());
        for frame in 0..50u64 {
            let opts = SynthOptions { stream: frame, ..SynthOptions::default() };
            let scene = synth_scene_with(3, 10, plane, &k, noise, &opts)?;
            let id = format!("{frame:06}");
            gt.extend(scene.keyed_labels(&id, &k));
            for (i, cps) in scene.contacts.iter().enumerate() {
                // noisy contacts can land above the horizon
                if let Ok(b) = deduce_box(cps, scene.horizon, &k, plane.c, &cfg) {
                    pred.push(KeyedLabel {
                        id: format!("{id}:{i}"),
                        record: record_from_box(&b, [0.0; 4]),
                    });
                }
            }
        }
        let label = format!("noise={noise}");
        println!("{}", eval_depth_buckets(&pred, &gt)?.csv_row(&label));
        dims.push(eval_dim_errors(&pred, &gt)?.csv_row(&label));
    }
    println!("{}", DimErrorReport::CSV_HEADER);
    for row in dims {
        println!("{row}");
    }
    Ok(())
}
