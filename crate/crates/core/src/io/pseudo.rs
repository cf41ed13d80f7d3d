//! Pseudo-label text format.
//!
//! One line per object, then one horizon line per frame:
//!
//! ```text
//! <frame> <category> <k> <tag> <u> <v> ... <tag> <u> <v> <h2d>
//! <frame> HL <slope> <intercept>
//! ```
//!
//! Pixel coordinates and `h2d` use 6 decimals; the horizon uses the
//! shortest exact decimal. Objects belong to the frame whose `HL` line
//! follows them.

use super::parse_f64;
use crate::camera::Pixel;
use crate::error::{Error, Result};
use crate::ground::ImageLine;
use crate::object::{Category, ContactPoint, ContactPointSet, ContactTag};

#[derive(Debug, Clone, PartialEq)]
pub struct FrameLabels {
    pub frame: String,
    pub objects: Vec<ContactPointSet>,
    pub horizon: ImageLine,
}

pub fn emit_pseudo_labels(frames: &[FrameLabels]) -> String {
    let mut out = String::new();
    for f in frames {
        for obj in &f.objects {
            out.push_str(&format!("{} {} {}", f.frame, obj.category(), obj.points().len()));
            for p in obj.points() {
                out.push_str(&format!(" {} {:.6} {:.6}", p.tag, p.pixel.u, p.pixel.v));
            }
            out.push_str(&format!(" {:.6}\n", obj.h2d()));
        }
        out.push_str(&format!("{} HL {} {}\n", f.frame, f.horizon.k, f.horizon.b));
    }
    out
}

pub fn parse_pseudo_labels(text: &str) -> Result<Vec<FrameLabels>> {
    let mut frames = Vec::new();
    let mut open: Option<(String, Vec<ContactPointSet>)> = None;
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let fields: Vec<&str> = raw.split_whitespace().collect();
        if fields.is_empty() {
            continue;
        }
        let err = |field: usize, message: String| Error::Parse { line, field, message };
        if fields.len() < 2 {
            return Err(err(2, "missing record type".into()));
        }
        let frame = fields[0];
        if let Some((id, _)) = &open {
            if id != frame {
                return Err(err(1, format!("frame {id:?} has no HL line before frame {frame:?}")));
            }
        }

        if fields[1] == "HL" {
            if fields.len() != 4 {
                return Err(err(fields.len().min(4) + 1, "HL needs slope and intercept".into()));
            }
            let horizon = ImageLine::new(parse_f64(fields[2], line, 3)?, parse_f64(fields[3], line, 4)?);
            let objects = open.take().map(|(_, o)| o).unwrap_or_default();
            frames.push(FrameLabels {
                frame: frame.to_string(),
                objects,
                horizon,
            });
            continue;
        }

        let category: Category = fields[1].parse().map_err(|e: Error| err(2, e.to_string()))?;
        let count: usize = fields
            .get(2)
            .and_then(|t| t.parse().ok())
            .ok_or_else(|| err(3, "expected a contact count".into()))?;
        if count != category.arity() {
            return Err(err(3, format!("{category} needs {} contact points", category.arity())));
        }
        let want = 3 + 3 * count + 1;
        if fields.len() != want {
            return Err(err(fields.len().min(want) + 1, format!("expected {want} fields")));
        }
        let mut points = Vec::with_capacity(count);
        for j in 0..count {
            let base = 3 + 3 * j;
            let tag: ContactTag = fields[base].parse().map_err(|e: Error| err(base + 1, e.to_string()))?;
            let u = parse_f64(fields[base + 1], line, base + 2)?;
            let v = parse_f64(fields[base + 2], line, base + 3)?;
            points.push(ContactPoint { tag, pixel: Pixel::new(u, v) });
        }
        let h2d = parse_f64(fields[want - 1], line, want)?;
        let set = ContactPointSet::new(category, points, h2d).map_err(|e| err(4, e.to_string()))?;
        open.get_or_insert_with(|| (frame.to_string(), Vec::new())).1.push(set);
    }
    if let Some((id, _)) = open {
        return Err(Error::Parse {
            line: text.lines().count(),
            field: 1,
            message: format!("frame {id:?} has no HL line"),
        });
    }
    Ok(frames)
}
