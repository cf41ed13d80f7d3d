//! Ground plane and ego pose from a horizon line, and back again.

use monoground::camera::{CameraIntrinsics, Pixel};
use monoground::deduce::backproject_contact;
use monoground::ground::{
    ego_pose, horizon_to_plane, plane_to_horizon, ImageLine, DEFAULT_CAMERA_HEIGHT,
};

fn main() -> monoground::Result<()> {
    let k = CameraIntrinsics::new(721.5377, 721.5377, 609.5593, 172.854)?;
    for hl in [ImageLine::level(&k), ImageLine::new(0.01, 150.0), ImageLine::new(-0.02, 190.0)] {
        let plane = horizon_to_plane(hl, &k, DEFAULT_CAMERA_HEIGHT)?;
        let pose = ego_pose(hl, &k);
        let back = plane_to_horizon(plane, &k);
        println!(
            "horizon v = {:+.3}·u + {:.3}: plane y = {:+.6}·x {:+.6}·z + {}, roll {:+.3}°, pitch {:+.3}°, round trip ({:+.3}, {:.3})",
            hl.k,
            hl.b,
            plane.a,
            plane.b,
            plane.c,
            pose.roll.to_degrees(),
            pose.pitch.to_degrees(),
            back.k,
            back.b
        );
        let p = backproject_contact(Pixel::new(700.0, 300.0), hl, &k, DEFAULT_CAMERA_HEIGHT)?;
        println!("  pixel (700, 300) lands at {p:?}, plane residual {:.1e}", plane.residual(p));
    }
    Ok(())
}
