//! Unsupervised vertical edge slope mining.
//!
//! The pipeline is Gaussian blur (13x13, σ = 4), Canny (50/100, Sobel 3),
//! progressive probabilistic Hough (ρ = 1, θ = 1°, threshold 5, minimum
//! length 40, maximum gap 10), a vertical filter (80° < θ < 100°) and 1-D
//! clustering of the inclination angles. Man-made vertical structure is
//! perpendicular to the horizon, so a trusted vertical slope `k_v` replaces
//! the horizon slope with `−1/k_v`.

mod blur;
mod canny;
mod hough;
mod image;
mod mining;
pub mod raster;

pub use blur::{gaussian_blur, gaussian_blur_with, gaussian_kernel, BLUR_KSIZE, BLUR_SIGMA};
pub use canny::{canny, canny_with, sobel, CANNY_HIGH, CANNY_LOW};
pub use hough::{hough_lines_p, hough_lines_p_with, HoughParams, LineSegment};
pub use image::{luma, GrayImage};
pub use mining::{
    cluster_angles, cluster_angles_with, detect_segments, filter_vertical, filter_vertical_within,
    fuse_horizon, mine_vertical_slope, mine_vertical_slope_with, slope_from_angles,
    EdgeMiningResult, MiningParams, VerticalSlope,
};
