//! File formats: KITTI labels and calibration, Netpbm images, and the
//! pseudo-label text format.

mod kitti;
mod netpbm;
mod pseudo;

pub use kitti::{
    box_from_record, emit_calib, emit_keyed_labels, emit_labels, parse_calib, parse_keyed_labels,
    parse_labels, record_from_box, CalibRecord, KeyedLabel, LabelRecord,
};
pub use netpbm::{encode_pgm, encode_ppm, load_netpbm};
pub use pseudo::{emit_pseudo_labels, parse_pseudo_labels, FrameLabels};

use crate::error::Error;

pub(crate) fn parse_f64(token: &str, line: usize, field: usize) -> Result<f64, Error> {
    match token.parse::<f64>() {
        Ok(v) if v.is_finite() => Ok(v),
        _ => Err(Error::Parse {
            line,
            field,
            message: format!("expected a finite number, found {token:?}"),
        }),
    }
}

/// Formats with at most 9 significant digits, shortest form; exponent
/// notation below `1e-4` and from `1e15` on.
pub fn fmt_sig9(x: f64) -> String {
    if !x.is_finite() {
        return format!("{x}");
    }
    let rounded: f64 = format!("{x:.8e}").parse().unwrap_or(x);
    let y = if rounded == 0.0 { 0.0 } else { rounded };
    if y != 0.0 && !(1e-4..1e15).contains(&y.abs()) {
        format!("{y:e}")
    } else {
        format!("{y}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sig9_formatting() {
        assert_eq!(fmt_sig9(0.46), "0.46");
        assert_eq!(fmt_sig9(2.0), "2");
        assert_eq!(fmt_sig9(1.0 / 3.0), "0.333333333");
        assert_eq!(fmt_sig9(123456789123.0), "123456789000");
        assert_eq!(fmt_sig9(-0.0), "0");
        assert_eq!(fmt_sig9(0.00012), "0.00012");
        assert_eq!(fmt_sig9(3.1e-6), "3.1e-6");
        assert_eq!(fmt_sig9(-1.234567891e-15), "-1.23456789e-15");
        assert_eq!(fmt_sig9(2.5e20), "2.5e20");
    }
}
