//! Reads KITTI labels and calibration, converts to boxes and writes them back.

use monoground::io::{
    box_from_record, emit_calib, emit_labels, parse_calib, parse_labels, record_from_box,
};

const CALIB: &str = "\
P0: 7.215377e+02 0.000000e+00 6.095593e+02 0.000000e+00 0.000000e+00 7.215377e+02 1.728540e+02 0.000000e+00 0.000000e+00 0.000000e+00 1.000000e+00 0.000000e+00
P2: 7.215377e+02 0.000000e+00 6.095593e+02 4.485728e+01 0.000000e+00 7.215377e+02 1.728540e+02 2.163791e-01 0.000000e+00 0.000000e+00 1.000000e+00 2.745884e-03
";

const LABELS: &str = "\
Car 0.00 0 -1.58 587.0 173.3 614.1 200.1 1.50 1.60 4.00 2.00 1.65 20.00 0.52
Pedestrian 0.00 0 0.21 423.2 173.6 451.2 238.2 1.76 0.67 0.86 -4.70 1.71 17.22 -0.06
DontCare -1 -1 -10 503.9 169.7 590.6 190.1 -1 -1 -1 -1000 -1000 -1000 -10
";

fn main() -> monoground::Result<()> {
    let calib = parse_calib(CALIB)?;
    println!("intrinsics {:?}", calib.intrinsics()?);
    print!("{}", emit_calib(&calib));

    let records = parse_labels(LABELS)?;
    assert_eq!(parse_labels(&emit_labels(&records))?, records);
    for rec in &records {
        match box_from_record(rec) {
            Some(b) => {
                let b = b?;
                println!("{} at depth {} m, yaw {:+.3} rad", b.category, b.depth(), b.yaw);
                print!("{}", emit_labels(&[record_from_box(&b, rec.bbox2d)]));
            }
            None => println!("{}: no ground contact geometry", rec.category),
        }
    }
    Ok(())
}
