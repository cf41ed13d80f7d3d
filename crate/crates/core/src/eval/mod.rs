//! Synthetic scenes, error metrics and the tilt sweep experiment.

mod metrics;
mod sweep;
mod synth;

pub use metrics::{
    depth_buckets, dim_errors, eval_depth_buckets, eval_dim_errors, match_by_id, BucketStat,
    DepthBucketReport, DimErrorReport, MatchedPair, DEPTH_BUCKET_EDGES,
};
pub use sweep::{tilt_sweep, SweepRow, MAX_SWEEP_PITCH_DEG};
pub use synth::{contact_bbox, synth_scene, synth_scene_with, SynthOptions, SynthScene};
