//! Mines the vertical edge slope of synthetic bar images and fuses it with
//! a detected horizon line.

use monoground::edges::raster::bar_scene;
use monoground::edges::{fuse_horizon, mine_vertical_slope, VerticalSlope};
use monoground::ground::ImageLine;

fn main() -> monoground::Result<()> {
    let detected = ImageLine::new(0.01, 172.0);
    for phi in [-4.0, -2.0, 0.0, 2.0, 4.0] {
        let img = bar_scene(640, 480, 6, 90.0 + phi);
        let m = mine_vertical_slope(&img)?;
        let slope = match m.slope {
            VerticalSlope::Finite(kv) => format!("k_v = {kv:.3}"),
            VerticalSlope::Vertical => "vertical".to_string(),
            VerticalSlope::Absent => "absent".to_string(),
        };
        let fused = fuse_horizon(&m, detected);
        println!(
            "phi {phi:+.0}°: {slope}, n_v = {}, s_v = {:.3}°, centroid {:?}, horizon k = {:.5} b = {}",
            m.count, m.std_deg, m.centroid_deg, fused.k, fused.b
        );
    }
    let sparse = mine_vertical_slope(&bar_scene(640, 480, 1, 92.0))?;
    println!("one bar: present = {}, n_v = {}", sparse.is_present(), sparse.count);
    Ok(())
}
