//! KITTI object label and calibration files.
//!
//! Label lines carry 15 whitespace-separated fields:
//! `type truncated occluded alpha left top right bottom h w l x y z rotation_y`.
//! `x y z` is the center of the box's bottom face in the rectified camera
//! frame, the same point used as the box origin throughout this crate.
//!
//! KITTI's `rotation_y` turns the object's front from +X towards −Z, while
//! [`ObjectBox3D::yaw`] turns it towards +Z, so `yaw = −rotation_y`.

use super::parse_f64;
use crate::camera::{CameraIntrinsics, CameraPoint};
use crate::error::{Error, Result};
use crate::object::{wrap_angle, Category, ObjectBox3D};

const LABEL_FIELDS: usize = 15;

#[derive(Debug, Clone, PartialEq)]
pub struct LabelRecord {
    pub category: String,
    pub truncated: f64,
    pub occluded: i32,
    pub alpha: f64,
    /// left, top, right, bottom in pixels.
    pub bbox2d: [f64; 4],
    /// height, width, length in meters.
    pub dims: [f64; 3],
    /// Bottom-face center in the camera frame, meters.
    pub location: [f64; 3],
    pub rotation_y: f64,
}

impl LabelRecord {
    pub fn bbox_height(&self) -> f64 {
        self.bbox2d[3] - self.bbox2d[1]
    }

    fn validate(&self, line: usize) -> Result<()> {
        let [l, t, r, b] = self.bbox2d;
        if r < l || b < t {
            return Err(Error::Parse {
                line,
                field: if r < l { 7 } else { 8 },
                message: "2D box corners are inverted".into(),
            });
        }
        // DontCare regions use -1 placeholders
        if self.category != "DontCare" {
            if let Some(i) = self.dims.iter().position(|d| *d < 0.0) {
                return Err(Error::Parse {
                    line,
                    field: 9 + i,
                    message: "negative box dimension".into(),
                });
            }
        }
        Ok(())
    }

    fn parse_fields(fields: &[&str], line: usize, offset: usize) -> Result<Self> {
        if fields.len() < LABEL_FIELDS {
            return Err(Error::Parse {
                line,
                field: offset + fields.len() + 1,
                message: format!("expected {LABEL_FIELDS} label fields, found {}", fields.len()),
            });
        }
        if fields.len() > LABEL_FIELDS {
            return Err(Error::Parse {
                line,
                field: offset + LABEL_FIELDS + 1,
                message: "unexpected trailing field".into(),
            });
        }
        let num = |i: usize| parse_f64(fields[i], line, offset + i + 1);
        let occluded = fields[2].parse::<i32>().map_err(|_| Error::Parse {
            line,
            field: offset + 3,
            message: format!("expected an integer, found {:?}", fields[2]),
        })?;
        let rec = LabelRecord {
            category: fields[0].to_string(),
            truncated: num(1)?,
            occluded,
            alpha: num(3)?,
            bbox2d: [num(4)?, num(5)?, num(6)?, num(7)?],
            dims: [num(8)?, num(9)?, num(10)?],
            location: [num(11)?, num(12)?, num(13)?],
            rotation_y: num(14)?,
        };
        rec.validate(line)?;
        Ok(rec)
    }

    fn write_fields(&self, out: &mut String) {
        let mut push = |s: String| {
            out.push(' ');
            out.push_str(&s);
        };
        push(format!("{}", self.truncated));
        push(format!("{}", self.occluded));
        push(format!("{}", self.alpha));
        for v in self.bbox2d.iter().chain(&self.dims).chain(&self.location) {
            push(format!("{v}"));
        }
        push(format!("{}", self.rotation_y));
    }

    fn to_line(&self) -> String {
        let mut s = self.category.clone();
        self.write_fields(&mut s);
        s
    }
}

/// Label record with a leading object id, used to match predictions to
/// ground truth.
#[derive(Debug, Clone, PartialEq)]
pub struct KeyedLabel {
    pub id: String,
    pub record: LabelRecord,
}

fn data_lines(text: &str) -> impl Iterator<Item = (usize, Vec<&str>)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split_whitespace().collect::<Vec<_>>()))
        .filter(|(_, f)| !f.is_empty())
}

pub fn parse_labels(text: &str) -> Result<Vec<LabelRecord>> {
    data_lines(text)
        .map(|(line, fields)| LabelRecord::parse_fields(&fields, line, 0))
        .collect()
}

pub fn emit_labels(records: &[LabelRecord]) -> String {
    records.iter().map(|r| r.to_line() + "\n").collect()
}

pub fn parse_keyed_labels(text: &str) -> Result<Vec<KeyedLabel>> {
    data_lines(text)
        .map(|(line, fields)| {
            let record = LabelRecord::parse_fields(&fields[1..], line, 1)?;
            Ok(KeyedLabel {
                id: fields[0].to_string(),
                record,
            })
        })
        .collect()
}

pub fn emit_keyed_labels(labels: &[KeyedLabel]) -> String {
    labels
        .iter()
        .map(|k| format!("{} {}\n", k.id, k.record.to_line()))
        .collect()
}

/// Left color camera projection matrix `P2`.
#[derive(Debug, Clone, PartialEq)]
pub struct CalibRecord {
    pub p2: [[f64; 4]; 3],
}

impl CalibRecord {
    /// Calibration whose `P2` is `K | 0`.
    pub fn from_intrinsics(k: &CameraIntrinsics) -> Self {
        Self {
            p2: [
                [k.fx, 0.0, k.cu, 0.0],
                [0.0, k.fy, k.cv, 0.0],
                [0.0, 0.0, 1.0, 0.0],
            ],
        }
    }

    pub fn intrinsics(&self) -> Result<CameraIntrinsics> {
        CameraIntrinsics::new(self.p2[0][0], self.p2[1][1], self.p2[0][2], self.p2[1][2])
    }
}

/// Reads `P2` from a KITTI calibration file; other entries are ignored.
pub fn parse_calib(text: &str) -> Result<CalibRecord> {
    let mut found = None;
    for (line, raw) in text.lines().enumerate().map(|(i, l)| (i + 1, l)) {
        if raw.trim().is_empty() {
            continue;
        }
        let Some((key, rest)) = raw.split_once(':') else {
            return Err(Error::Parse {
                line,
                field: 1,
                message: "expected `key: values`".into(),
            });
        };
        if key.trim() != "P2" {
            continue;
        }
        if found.is_some() {
            return Err(Error::Parse {
                line,
                field: 1,
                message: "duplicate P2 entry".into(),
            });
        }
        let tokens: Vec<&str> = rest.split_whitespace().collect();
        if tokens.len() != 12 {
            return Err(Error::Parse {
                line,
                field: tokens.len().min(12) + 1,
                message: format!("P2 needs 12 values, found {}", tokens.len()),
            });
        }
        let mut p2 = [[0.0; 4]; 3];
        for (i, t) in tokens.iter().enumerate() {
            p2[i / 4][i % 4] = parse_f64(t, line, i + 1)?;
        }
        let rec = CalibRecord { p2 };
        rec.intrinsics().map_err(|e| Error::Parse {
            line,
            field: 1,
            message: e.to_string(),
        })?;
        found = Some(rec);
    }
    found.ok_or(Error::MissingP2)
}

pub fn emit_calib(calib: &CalibRecord) -> String {
    let values: Vec<String> = calib.p2.iter().flatten().map(|v| format!("{v}")).collect();
    format!("P2: {}\n", values.join(" "))
}

/// Box of a label record, for the categories with ground contact geometry.
pub fn box_from_record(rec: &LabelRecord) -> Option<Result<ObjectBox3D>> {
    let category: Category = rec.category.parse().ok()?;
    let [h, w, l] = rec.dims;
    let [x, y, z] = rec.location;
    Some(ObjectBox3D::new(
        category,
        CameraPoint::new(x, y, z),
        l,
        w,
        h,
        -rec.rotation_y,
    ))
}

/// Label record of a box; the 2D box is the given `(left, top, right, bottom)`.
pub fn record_from_box(b: &ObjectBox3D, bbox2d: [f64; 4]) -> LabelRecord {
    let c = b.bottom_center;
    let rotation_y = wrap_angle(-b.yaw);
    LabelRecord {
        category: b.category.to_string(),
        truncated: 0.0,
        occluded: 0,
        alpha: wrap_angle(rotation_y - c.x.atan2(c.z)),
        bbox2d,
        dims: [b.height, b.width, b.length],
        location: [c.x, c.y, c.z],
        rotation_y,
    }
}
