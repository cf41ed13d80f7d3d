//! Ground-plane geometry for monocular 3D object detection.
//!
//! The crate implements the deterministic geometric half of a
//! ground-plane-guided monocular detector:
//!
//! * [`camera`]: pinhole projection and viewing rays;
//! * [`ground`]: horizon line ↔ ground plane equations, ego pose, and
//!   least-squares line and plane fits;
//! * [`edges`]: unsupervised vertical edge slope mining (blur, Canny,
//!   probabilistic Hough, vertical filter, 1-D clustering) and fusion with
//!   a detected horizon line;
//! * [`deduce`]: dynamic back-projection of ground contact pixels and
//!   closed-form 3D box deduction;
//! * [`labels`]: contact point and horizon line pseudo labels from 3D
//!   box annotations;
//! * [`io`]: KITTI label/calibration files, Netpbm images and the pseudo
//!   label text format;
//! * [`eval`]: synthetic scenes, error metrics and the tilt sweep.
//!
//! ```
//! use monoground::prelude::*;
//!
//! let k = CameraIntrinsics::new(700.0, 700.0, 600.0, 180.0).unwrap();
//! let horizon = ImageLine::new(0.0, 156.0);
//! let plane = horizon_to_plane(horizon, &k, DEFAULT_CAMERA_HEIGHT).unwrap();
//! let p = backproject_contact(Pixel::new(600.0, 250.0), horizon, &k, DEFAULT_CAMERA_HEIGHT).unwrap();
//! assert!(plane.residual(p).abs() < 1e-12);
//! ```

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod camera;
pub mod cli;
pub mod deduce;
pub mod edges;
pub mod error;
pub mod eval;
pub mod ground;
pub mod io;
pub mod labels;
pub mod object;

pub use error::{Error, Result};

pub mod prelude {
    pub use crate::camera::{backproject_ray, project, CameraIntrinsics, CameraPoint, Pixel};
    pub use crate::deduce::{
        backproject_contact, bottom_center, deduce_box, derive_dimensions, derive_rotation,
        DeductionConfig, RefinementBias,
    };
    pub use crate::edges::{fuse_horizon, mine_vertical_slope, EdgeMiningResult, GrayImage, VerticalSlope};
    pub use crate::error::{Error, Result};
    pub use crate::ground::{
        ego_pose, fit_line_lsq, fit_plane_lsq, horizon_to_plane, plane_to_horizon, EgoPose,
        GroundPlane, ImageLine, DEFAULT_CAMERA_HEIGHT,
    };
    pub use crate::labels::{
        contact_pixel_labels, horizon_pseudo_label, local_contact_points, local_to_camera,
        pedestrian_cyclist_labels, PoseRT,
    };
    pub use crate::object::{
        Category, CategoryPriors, ContactPoint, ContactPointSet, ContactTag, ObjectBox3D,
        WheelbaseRatios,
    };
}
