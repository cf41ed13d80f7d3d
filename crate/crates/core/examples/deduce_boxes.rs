//! Deduces 3D boxes from contact pixels on a tilted road and compares them
//! with their ground truth, with and without the true horizon.

use monoground::camera::CameraIntrinsics;
use monoground::deduce::{deduce_box, DeductionConfig};
use monoground::eval::synth_scene;
use monoground::ground::{GroundPlane, ImageLine};

fn main() -> monoground::Result<()> {
    let k = CameraIntrinsics::new(721.5377, 721.5377, 609.5593, 172.854)?;
    let plane = GroundPlane::from_angles(0.0, 2f64.to_radians(), 1.65);
    let scene = synth_scene(11, 6, plane, &k, 0.0)?;
    let cfg = DeductionConfig::default();
    println!("category    z_true   z_dynamic  z_level");
    for (truth, cps) in scene.boxes.iter().zip(&scene.contacts) {
        let dynamic = deduce_box(cps, scene.horizon, &k, plane.c, &cfg)?;
        let level = deduce_box(cps, ImageLine::level(&k), &k, plane.c, &cfg)
            .map_or_else(|e| e.to_string(), |b| format!("{:.3}", b.depth()));
        println!(
            "{:<10} {:>7.3}  {:>9.3}  {level}",
            truth.category.to_string(),
            truth.depth(),
            dynamic.depth()
        );
    }
    Ok(())
}
