//! Vertical edge slope mining and horizon slope fusion.

use super::blur::gaussian_blur_with;
use super::canny::canny_with;
use super::hough::{hough_lines_p_with, HoughParams, LineSegment};
use super::GrayImage;
use crate::error::{Error, Result};
use crate::ground::ImageLine;

/// Every knob of the mining pipeline. Defaults reproduce the reference
/// configuration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MiningParams {
    pub blur_ksize: usize,
    pub blur_sigma: f64,
    pub canny_low: i32,
    pub canny_high: i32,
    pub hough: HoughParams,
    /// Exclusive inclination bounds for a "vertical" segment, degrees.
    pub min_angle: f64,
    pub max_angle: f64,
    /// Single-linkage merge radius for angle clustering, degrees.
    pub cluster_radius: f64,
    /// The result is trusted only with more than this many vertical edges.
    pub min_count: usize,
    /// ... and an angle standard deviation below this, degrees.
    pub max_std: f64,
}

impl Default for MiningParams {
    fn default() -> Self {
        Self {
            blur_ksize: 13,
            blur_sigma: 4.0,
            canny_low: 50,
            canny_high: 100,
            hough: HoughParams::default(),
            min_angle: 80.0,
            max_angle: 100.0,
            cluster_radius: 1.5,
            min_count: 3,
            max_std: 3.0,
        }
    }
}

/// Mined slope `k_v = dv/du` of the dominant vertical edge direction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum VerticalSlope {
    Finite(f64),
    /// Edges are exactly vertical; the slope is infinite.
    Vertical,
    /// Too few vertical edges or too much spread.
    Absent,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EdgeMiningResult {
    pub slope: VerticalSlope,
    /// Number of vertical edges.
    pub count: usize,
    /// Population standard deviation of their inclinations, degrees.
    pub std_deg: f64,
    /// Mean inclination of the largest cluster, degrees.
    pub centroid_deg: Option<f64>,
    /// Size of the largest cluster.
    pub cluster_size: usize,
}

impl EdgeMiningResult {
    pub fn is_present(&self) -> bool {
        !matches!(self.slope, VerticalSlope::Absent)
    }
}

/// Inclinations (degrees) of the segments strictly between 80° and 100°.
pub fn filter_vertical(segments: &[LineSegment]) -> Vec<f64> {
    filter_vertical_within(segments, 80.0, 100.0)
}

pub fn filter_vertical_within(segments: &[LineSegment], min: f64, max: f64) -> Vec<f64> {
    segments
        .iter()
        .map(LineSegment::inclination_deg)
        .filter(|a| *a > min && *a < max)
        .collect()
}

/// Largest single-linkage cluster of `angles` with a 1.5° merge radius.
/// Returns its mean and size; ties go to the mean nearest 90°.
pub fn cluster_angles(angles: &[f64]) -> Result<(f64, usize)> {
    cluster_angles_with(angles, 1.5)
}

pub fn cluster_angles_with(angles: &[f64], radius: f64) -> Result<(f64, usize)> {
    if angles.is_empty() {
        return Err(Error::EmptyInput);
    }
    let mut sorted = angles.to_vec();
    sorted.sort_by(f64::total_cmp);

    let mut best: Option<(f64, usize)> = None;
    let mut start = 0;
    for i in 1..=sorted.len() {
        if i < sorted.len() && sorted[i] - sorted[i - 1] <= radius {
            continue;
        }
        let members = &sorted[start..i];
        let mean = members.iter().sum::<f64>() / members.len() as f64;
        let better = match best {
            None => true,
            Some((m, n)) => {
                members.len() > n || (members.len() == n && (mean - 90.0).abs() < (m - 90.0).abs())
            }
        };
        if better {
            best = Some((mean, members.len()));
        }
        start = i;
    }
    Ok(best.expect("non-empty input has a cluster"))
}

/// Gates and clusters a list of vertical-edge inclinations.
pub fn slope_from_angles(angles: &[f64], params: &MiningParams) -> EdgeMiningResult {
    let n = angles.len();
    let std_deg = if n == 0 {
        0.0
    } else {
        let mean = angles.iter().sum::<f64>() / n as f64;
        (angles.iter().map(|a| (a - mean).powi(2)).sum::<f64>() / n as f64).sqrt()
    };
    let cluster = cluster_angles_with(angles, params.cluster_radius).ok();
    let trusted = n > params.min_count && std_deg < params.max_std;
    let slope = match cluster {
        Some((centroid, _)) if trusted => {
            if (centroid - 90.0).abs() < 1e-9 {
                VerticalSlope::Vertical
            } else {
                VerticalSlope::Finite(centroid.to_radians().tan())
            }
        }
        _ => VerticalSlope::Absent,
    };
    EdgeMiningResult {
        slope,
        count: n,
        std_deg,
        centroid_deg: cluster.map(|c| c.0),
        cluster_size: cluster.map_or(0, |c| c.1),
    }
}

/// Segments found by the blur, Canny and Hough stages.
pub fn detect_segments(img: &GrayImage, params: &MiningParams) -> Result<Vec<LineSegment>> {
    let blurred = gaussian_blur_with(img, params.blur_ksize, params.blur_sigma)?;
    let edges = canny_with(&blurred, params.canny_low, params.canny_high)?;
    Ok(hough_lines_p_with(&edges, &params.hough))
}

/// Dominant vertical edge slope of an image, or `Absent` when the vertical
/// edges are too few or too scattered.
pub fn mine_vertical_slope(img: &GrayImage) -> Result<EdgeMiningResult> {
    mine_vertical_slope_with(img, &MiningParams::default())
}

pub fn mine_vertical_slope_with(img: &GrayImage, params: &MiningParams) -> Result<EdgeMiningResult> {
    let segments = detect_segments(img, params)?;
    let angles = filter_vertical_within(&segments, params.min_angle, params.max_angle);
    Ok(slope_from_angles(&angles, params))
}

/// Horizon line with its slope replaced by the normal of the mined
/// vertical direction when that is trusted; the intercept is always the
/// detected one.
pub fn fuse_horizon(mining: &EdgeMiningResult, detected: ImageLine) -> ImageLine {
    let k = match mining.slope {
        VerticalSlope::Finite(kv) => -1.0 / kv,
        VerticalSlope::Vertical => 0.0,
        VerticalSlope::Absent => detected.k,
    };
    ImageLine::new(k, detected.b)
}
