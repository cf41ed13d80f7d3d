//! Projects a ground point into the image and recovers its viewing ray.

use monoground::camera::{CameraIntrinsics, CameraPoint};

fn main() -> monoground::Result<()> {
    let k = CameraIntrinsics::new(700.0, 700.0, 600.0, 180.0)?;
    let p = CameraPoint::new(1.5, 1.65, 10.0);
    let px = k.project(p)?;
    println!("point {p:?} -> pixel ({:.4}, {:.4})", px.u, px.v);

    let ray = k.backproject_ray(px);
    let scaled = ray * (p.z / ray.z);
    println!("ray {ray:?}, rescaled to z = {}: {scaled:?}", p.z);

    match k.project(CameraPoint::new(0.0, 0.0, -1.0)) {
        Err(e) => println!("behind the camera: {e}"),
        Ok(px) => println!("unexpected pixel {px:?}"),
    }
    Ok(())
}
