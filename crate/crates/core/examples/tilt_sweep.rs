//! Depth drift of the level-ground assumption on pitched roads.

use monoground::camera::CameraIntrinsics;
use monoground::eval::tilt_sweep;

fn main() -> monoground::Result<()> {
    let k = CameraIntrinsics::new(721.5377, 721.5377, 609.5593, 172.854)?;
    let depths = [10.0, 20.0, 30.0, 40.0, 50.0, 60.0];
    let rows = tilt_sweep(&[0.5, 1.0, 2.0, 3.0], &depths, &k, 1.65)?;
    println!("pitch  depth  level-plane err  dynamic err");
    for r in rows {
        println!(
            "{:>4.1}°  {:>4.0} m  {:>12.3} m  {:>9.1e} m",
            r.pitch_deg, r.depth, r.fixed_error, r.dynamic_error
        );
    }
    // a downhill road eventually rises above the camera
    match tilt_sweep(&[-3.0], &[60.0], &k, 1.65) {
        Err(e) => println!("-3° at 60 m: {e}"),
        Ok(rows) => println!("-3° at 60 m: {rows:?}"),
    }
    Ok(())
}
