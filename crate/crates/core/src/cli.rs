//! Command-line front end.
//!
//! Exit codes: 0 on success, 1 on usage errors, 2 on data errors.

use std::ffi::OsString;
use std::fs;
use std::io::{Read, Write};
use std::path::{Path, PathBuf};

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};

use crate::camera::CameraIntrinsics;
use crate::deduce::{deduce_box, DeductionConfig};
use crate::edges::{fuse_horizon, mine_vertical_slope, VerticalSlope};
use crate::error::{Error, Result};
use crate::eval::{
    contact_bbox, eval_depth_buckets, eval_dim_errors, synth_scene_with, tilt_sweep, DepthBucketReport,
    DimErrorReport, SweepRow, SynthOptions,
};
use crate::ground::{ego_pose, horizon_to_plane, GroundPlane, ImageLine, DEFAULT_CAMERA_HEIGHT};
use crate::io::{
    box_from_record, emit_calib, emit_keyed_labels, emit_pseudo_labels, fmt_sig9, load_netpbm,
    parse_calib, parse_keyed_labels, parse_labels, parse_pseudo_labels, CalibRecord, FrameLabels,
    KeyedLabel, record_from_box,
};
use crate::labels::{horizon_pseudo_label_min, object_labels};
use crate::object::{CategoryPriors, WheelbaseRatios};

/// Intrinsics used when a command takes `--calib` optionally.
pub const DEFAULT_INTRINSICS: [f64; 4] = [721.5377, 721.5377, 609.5593, 172.854];

#[derive(Debug, Parser)]
#[command(name = "monoground", version, about = "Ground-plane geometry for monocular 3D detection")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Contact-point and horizon pseudo labels from a KITTI label file.
    PseudoLabels(PseudoArgs),
    /// Ground plane and ego pose from a horizon line, optionally refined by an image.
    EstimatePlane(PlaneArgs),
    /// Vertical edge slope of a Netpbm image.
    EdgeSlope(EdgeArgs),
    /// 3D boxes from contact-point labels.
    DeduceBoxes(DeduceArgs),
    /// Depth error per ground-truth depth bucket.
    EvalDepth(EvalArgs),
    /// Mean L1 depth and dimension errors.
    EvalDims(EvalArgs),
    /// Depth drift of the level-ground assumption on pitched roads.
    TiltSweep(SweepArgs),
    /// Synthetic scenes: pseudo labels on stdout, ground truth and calibration to files.
    Synth(SynthArgs),
}

#[derive(Debug, Args)]
struct Ratios {
    /// Wheelbase to length ratio.
    #[arg(long, default_value_t = 0.7)]
    kl: f64,
    /// Track to width ratio.
    #[arg(long, default_value_t = 0.9)]
    kw: f64,
}

impl Ratios {
    fn get(&self) -> Result<WheelbaseRatios> {
        WheelbaseRatios::new(self.kl, self.kw)
    }
}

#[derive(Debug, Args)]
struct Output {
    /// Write to this file instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct PseudoArgs {
    #[arg(long)]
    calib: PathBuf,
    #[arg(long)]
    labels: PathBuf,
    /// Frame id; defaults to the label file stem.
    #[arg(long)]
    frame_id: Option<String>,
    /// Minimum number of boxes for the horizon fit.
    #[arg(long, default_value_t = 3)]
    min_boxes: usize,
    /// Use the level horizon when the frame has too few boxes.
    #[arg(long)]
    fallback_flat: bool,
    #[command(flatten)]
    ratios: Ratios,
    #[command(flatten)]
    output: Output,
}

#[derive(Debug, Args)]
struct PlaneArgs {
    #[arg(long)]
    calib: PathBuf,
    /// Detected horizon line "k,b".
    #[arg(long, value_parser = parse_horizon, allow_hyphen_values = true)]
    horizon: ImageLine,
    /// Image whose vertical edges replace the horizon slope when trusted.
    #[arg(long)]
    image: Option<PathBuf>,
    #[arg(long, default_value_t = DEFAULT_CAMERA_HEIGHT)]
    camera_height: f64,
    #[command(flatten)]
    output: Output,
}

#[derive(Debug, Args)]
struct EdgeArgs {
    #[arg(long)]
    image: PathBuf,
    #[command(flatten)]
    output: Output,
}

#[derive(Debug, Args)]
struct DeduceArgs {
    #[arg(long)]
    calib: PathBuf,
    /// Pseudo-label file; stdin when absent or "-".
    #[arg(long)]
    contacts: Option<PathBuf>,
    /// Horizon "k,b" overriding the per-frame horizon lines.
    #[arg(long, value_parser = parse_horizon, allow_hyphen_values = true)]
    horizon: Option<ImageLine>,
    #[arg(long, default_value_t = DEFAULT_CAMERA_HEIGHT)]
    camera_height: f64,
    #[command(flatten)]
    ratios: Ratios,
    #[command(flatten)]
    output: Output,
}

#[derive(Debug, Args)]
struct EvalArgs {
    /// Keyed ground-truth labels.
    #[arg(long)]
    gt: PathBuf,
    /// Keyed predictions; stdin when absent or "-".
    #[arg(long)]
    pred: Option<PathBuf>,
    /// First CSV column.
    #[arg(long, default_value = "pred")]
    label: String,
    #[command(flatten)]
    output: Output,
}

#[derive(Debug, Args)]
struct SweepArgs {
    /// Pitch angles in degrees, comma separated.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true, default_values_t = [0.0, 1.0, 2.0, 3.0])]
    pitches: Vec<f64>,
    /// Depths in meters, comma separated.
    #[arg(long, value_delimiter = ',', default_values_t = [10.0, 20.0, 30.0, 40.0, 50.0, 60.0])]
    depths: Vec<f64>,
    #[arg(long)]
    calib: Option<PathBuf>,
    #[arg(long, default_value_t = DEFAULT_CAMERA_HEIGHT)]
    camera_height: f64,
    #[command(flatten)]
    output: Output,
}

#[derive(Debug, Args)]
struct SynthArgs {
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 8)]
    n_objects: usize,
    /// Pixel noise standard deviation.
    #[arg(long, default_value_t = 0.0)]
    noise: f64,
    /// Ground pitch, degrees.
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pitch: f64,
    /// Ground roll, degrees.
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    roll: f64,
    #[arg(long, default_value_t = 1)]
    frames: usize,
    #[arg(long, default_value_t = DEFAULT_CAMERA_HEIGHT)]
    camera_height: f64,
    /// Calibration to use; KITTI-like intrinsics otherwise.
    #[arg(long)]
    calib: Option<PathBuf>,
    /// Where to write keyed ground-truth labels.
    #[arg(long)]
    labels_out: Option<PathBuf>,
    /// Where to write the calibration.
    #[arg(long)]
    calib_out: Option<PathBuf>,
    #[command(flatten)]
    ratios: Ratios,
    #[command(flatten)]
    output: Output,
}

fn parse_horizon(s: &str) -> std::result::Result<ImageLine, String> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    let [k, b] = parts.as_slice() else {
        return Err(format!("expected \"k,b\", found {s:?}"));
    };
    let num = |t: &str| match t.parse::<f64>() {
        Ok(v) if v.is_finite() => Ok(v),
        _ => Err(format!("not a finite number: {t:?}")),
    };
    Ok(ImageLine::new(num(k)?, num(b)?))
}

/// Runs the CLI with process stdin, stdout and stderr.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    run_with(
        args,
        &mut std::io::stdin().lock(),
        &mut std::io::stdout().lock(),
        &mut std::io::stderr().lock(),
    )
}

pub fn run_with<I, T>(args: I, stdin: &mut dyn Read, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = stdout.write_all(text.as_bytes());
                    0
                }
                _ => {
                    let _ = stderr.write_all(text.as_bytes());
                    1
                }
            };
        }
    };
    match dispatch(cli.command, stdin, stdout, stderr) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            2
        }
    }
}

/// Failure of a subcommand after argument parsing.
#[derive(Debug)]
enum Failure {
    Data(Error),
    Io(PathBuf, std::io::Error),
}

impl std::fmt::Display for Failure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Failure::Data(e) => write!(f, "{e}"),
            Failure::Io(p, e) => write!(f, "{}: {e}", p.display()),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Data(e)
    }
}

type CmdResult<T> = std::result::Result<T, Failure>;

fn read_text(path: &Path) -> CmdResult<String> {
    fs::read_to_string(path).map_err(|e| Failure::Io(path.to_path_buf(), e))
}

fn read_input(path: Option<&Path>, stdin: &mut dyn Read) -> CmdResult<String> {
    match path {
        Some(p) if p != Path::new("-") => read_text(p),
        _ => {
            let mut s = String::new();
            stdin
                .read_to_string(&mut s)
                .map_err(|e| Failure::Io(PathBuf::from("<stdin>"), e))?;
            Ok(s)
        }
    }
}

fn write_file(path: &Path, text: &str) -> CmdResult<()> {
    fs::write(path, text).map_err(|e| Failure::Io(path.to_path_buf(), e))
}

fn emit(output: &Output, text: &str, stdout: &mut dyn Write) -> CmdResult<()> {
    match &output.out {
        Some(p) => write_file(p, text),
        None => stdout
            .write_all(text.as_bytes())
            .map_err(|e| Failure::Io(PathBuf::from("<stdout>"), e)),
    }
}

fn load_intrinsics(path: &Path) -> CmdResult<CameraIntrinsics> {
    Ok(parse_calib(&read_text(path)?)?.intrinsics()?)
}

fn default_intrinsics() -> CameraIntrinsics {
    let [fx, fy, cu, cv] = DEFAULT_INTRINSICS;
    CameraIntrinsics::new(fx, fy, cu, cv).expect("default intrinsics are valid")
}

fn dispatch(cmd: Command, stdin: &mut dyn Read, stdout: &mut dyn Write, stderr: &mut dyn Write) -> CmdResult<()> {
    match cmd {
        Command::PseudoLabels(a) => pseudo_labels(a, stdout),
        Command::EstimatePlane(a) => estimate_plane(a, stdout),
        Command::EdgeSlope(a) => edge_slope(a, stdout),
        Command::DeduceBoxes(a) => deduce_boxes(a, stdin, stdout, stderr),
        Command::EvalDepth(a) => {
            let (pred, gt) = eval_inputs(&a, stdin)?;
            let r = eval_depth_buckets(&pred, &gt)?;
            let text = format!("{}\n{}\n", DepthBucketReport::CSV_HEADER, r.csv_row(&a.label));
            emit(&a.output, &text, stdout)
        }
        Command::EvalDims(a) => {
            let (pred, gt) = eval_inputs(&a, stdin)?;
            let r = eval_dim_errors(&pred, &gt)?;
            let text = format!("{}\n{}\n", DimErrorReport::CSV_HEADER, r.csv_row(&a.label));
            emit(&a.output, &text, stdout)
        }
        Command::TiltSweep(a) => sweep(a, stdout),
        Command::Synth(a) => synth(a, stdout),
    }
}

fn pseudo_labels(a: PseudoArgs, stdout: &mut dyn Write) -> CmdResult<()> {
    let k = load_intrinsics(&a.calib)?;
    let ratios = a.ratios.get()?;
    let priors = CategoryPriors::default();
    let records = parse_labels(&read_text(&a.labels)?)?;
    let boxes = records
        .iter()
        .filter_map(box_from_record)
        .collect::<Result<Vec<_>>>()?;
    let objects = boxes
        .iter()
        .map(|b| object_labels(b, ratios, &priors, &k))
        .collect::<Result<Vec<_>>>()?;
    let horizon = match horizon_pseudo_label_min(&boxes, &k, a.min_boxes) {
        Ok(hl) => hl,
        Err(Error::DegenerateInput(_)) if a.fallback_flat => ImageLine::level(&k),
        Err(e) => return Err(e.into()),
    };
    let frame = a.frame_id.unwrap_or_else(|| {
        a.labels
            .file_stem()
            .map_or_else(|| "0".to_string(), |s| s.to_string_lossy().into_owned())
    });
    let text = emit_pseudo_labels(&[FrameLabels {
        frame,
        objects,
        horizon,
    }]);
    emit(&a.output, &text, stdout)
}

fn estimate_plane(a: PlaneArgs, stdout: &mut dyn Write) -> CmdResult<()> {
    let k = load_intrinsics(&a.calib)?;
    let horizon = match &a.image {
        Some(p) => {
            let bytes = fs::read(p).map_err(|e| Failure::Io(p.clone(), e))?;
            fuse_horizon(&mine_vertical_slope(&load_netpbm(&bytes)?)?, a.horizon)
        }
        None => a.horizon,
    };
    let plane = horizon_to_plane(horizon, &k, a.camera_height)?;
    let pose = ego_pose(horizon, &k);
    let text = format!(
        "horizon_k,horizon_b,plane_a,plane_b,plane_c,roll_rad,pitch_rad\n{}\n",
        [horizon.k, horizon.b, plane.a, plane.b, plane.c, pose.roll, pose.pitch]
            .map(fmt_sig9)
            .join(",")
    );
    emit(&a.output, &text, stdout)
}

fn edge_slope(a: EdgeArgs, stdout: &mut dyn Write) -> CmdResult<()> {
    let bytes = fs::read(&a.image).map_err(|e| Failure::Io(a.image.clone(), e))?;
    let m = mine_vertical_slope(&load_netpbm(&bytes)?)?;
    let kv = match m.slope {
        VerticalSlope::Absent => None,
        VerticalSlope::Vertical => Some("inf".to_string()),
        VerticalSlope::Finite(kv) => Some(fmt_sig9(kv)),
    };
    let text = match kv {
        None => "absent\n".to_string(),
        Some(kv) => format!("k_v={kv} n_v={} s_v={}\n", m.count, fmt_sig9(m.std_deg)),
    };
    emit(&a.output, &text, stdout)
}

fn deduce_boxes(a: DeduceArgs, stdin: &mut dyn Read, stdout: &mut dyn Write, stderr: &mut dyn Write) -> CmdResult<()> {
    let k = load_intrinsics(&a.calib)?;
    let config = DeductionConfig {
        ratios: a.ratios.get()?,
        priors: CategoryPriors::default(),
    };
    let frames = parse_pseudo_labels(&read_input(a.contacts.as_deref(), stdin)?)?;
    let mut out = Vec::new();
    for f in &frames {
        let horizon = a.horizon.unwrap_or(f.horizon);
        for (i, cps) in f.objects.iter().enumerate() {
            let id = format!("{}:{i}", f.frame);
            match deduce_box(cps, horizon, &k, a.camera_height, &config) {
                Ok(b) => out.push(KeyedLabel {
                    record: record_from_box(&b, contact_bbox(&b, cps, &k)),
                    id,
                }),
                Err(e) => {
                    let _ = writeln!(stderr, "warning: skipping {id}: {e}");
                }
            }
        }
    }
    emit(&a.output, &emit_keyed_labels(&out), stdout)
}

fn eval_inputs(a: &EvalArgs, stdin: &mut dyn Read) -> CmdResult<(Vec<KeyedLabel>, Vec<KeyedLabel>)> {
    let gt = parse_keyed_labels(&read_text(&a.gt)?)?;
    let pred = parse_keyed_labels(&read_input(a.pred.as_deref(), stdin)?)?;
    Ok((pred, gt))
}

fn sweep(a: SweepArgs, stdout: &mut dyn Write) -> CmdResult<()> {
    let k = match &a.calib {
        Some(p) => load_intrinsics(p)?,
        None => default_intrinsics(),
    };
    let rows = tilt_sweep(&a.pitches, &a.depths, &k, a.camera_height)?;
    let mut text = format!("{}\n", SweepRow::CSV_HEADER);
    for r in rows {
        let cells = [r.pitch_deg, r.depth, r.fixed_error, r.dynamic_error, r.fixed_signed_error].map(fmt_sig9);
        text.push_str(&cells.join(","));
        text.push('\n');
    }
    emit(&a.output, &text, stdout)
}

fn synth(a: SynthArgs, stdout: &mut dyn Write) -> CmdResult<()> {
    let k = match &a.calib {
        Some(p) => load_intrinsics(p)?,
        None => default_intrinsics(),
    };
    let plane = GroundPlane::from_angles(a.roll.to_radians(), a.pitch.to_radians(), a.camera_height);
    let mut opts = SynthOptions {
        ratios: a.ratios.get()?,
        ..SynthOptions::default()
    };
    let mut frames = Vec::with_capacity(a.frames);
    let mut labels = Vec::new();
    for f in 0..a.frames {
        opts.stream = f as u64;
        let scene = synth_scene_with(a.seed, a.n_objects, plane, &k, a.noise, &opts)?;
        let id = format!("{f:06}");
        labels.extend(scene.keyed_labels(&id, &k));
        frames.push(scene.frame_labels(&id));
    }
    if let Some(p) = &a.labels_out {
        write_file(p, &emit_keyed_labels(&labels))?;
    }
    if let Some(p) = &a.calib_out {
        write_file(p, &emit_calib(&CalibRecord::from_intrinsics(&k)))?;
    }
    emit(&a.output, &emit_pseudo_labels(&frames), stdout)
}
