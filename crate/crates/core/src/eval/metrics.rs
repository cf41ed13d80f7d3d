use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::io::{fmt_sig9, KeyedLabel, LabelRecord};

/// Lower edges of the depth buckets `[0, 20)`, `[20, 40)`, `[40, ∞)`, meters.
pub const DEPTH_BUCKET_EDGES: [f64; 3] = [0.0, 20.0, 40.0];

/// Prediction and ground truth sharing an object id.
#[derive(Debug, Clone, PartialEq)]
pub struct MatchedPair<'a> {
    pub id: &'a str,
    pub pred: &'a LabelRecord,
    pub gt: &'a LabelRecord,
}

/// Pairs predictions with ground truth by id. Returns the pairs in
/// prediction order and the number of unmatched records on either side.
/// `DontCare` ground truth is ignored.
pub fn match_by_id<'a>(pred: &'a [KeyedLabel], gt: &'a [KeyedLabel]) -> Result<(Vec<MatchedPair<'a>>, usize)> {
    let mut by_id: HashMap<&str, &LabelRecord> = HashMap::new();
    for g in gt.iter().filter(|g| g.record.category != "DontCare") {
        if by_id.insert(g.id.as_str(), &g.record).is_some() {
            return Err(Error::InvalidParameter(format!("duplicate ground truth id {:?}", g.id)));
        }
    }
    let mut seen: HashMap<&str, ()> = HashMap::new();
    let mut pairs = Vec::new();
    let mut unmatched = 0;
    for p in pred {
        if seen.insert(p.id.as_str(), ()).is_some() {
            return Err(Error::InvalidParameter(format!("duplicate prediction id {:?}", p.id)));
        }
        match by_id.get(p.id.as_str()) {
            Some(g) => pairs.push(MatchedPair {
                id: &p.id,
                pred: &p.record,
                gt: g,
            }),
            None => unmatched += 1,
        }
    }
    unmatched += by_id.len() - pairs.len();
    Ok((pairs, unmatched))
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct BucketStat {
    /// Mean absolute depth error, `None` for an empty bucket.
    pub mean_abs_error: Option<f64>,
    pub count: usize,
}

/// Mean absolute depth error per ground-truth depth bucket.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct DepthBucketReport {
    pub buckets: [BucketStat; 3],
    pub unmatched: usize,
}

impl DepthBucketReport {
    pub const CSV_HEADER: &'static str = "label,err_0_20,err_20_40,err_40_inf,n_0_20,n_20_40,n_40_inf,unmatched";

    /// Report holding only the three mean errors, e.g. a published row.
    pub fn from_errors(errors: [f64; 3]) -> Self {
        Self {
            buckets: errors.map(|e| BucketStat {
                mean_abs_error: Some(e),
                count: 0,
            }),
            unmatched: 0,
        }
    }

    /// `label,e0,e1,e2`.
    pub fn error_row(&self, label: &str) -> String {
        let errs: Vec<String> = self.buckets.iter().map(|b| opt(b.mean_abs_error)).collect();
        format!("{label},{}", errs.join(","))
    }

    pub fn csv_row(&self, label: &str) -> String {
        let counts: Vec<String> = self.buckets.iter().map(|b| b.count.to_string()).collect();
        format!("{},{},{}", self.error_row(label), counts.join(","), self.unmatched)
    }
}

/// Mean L1 errors over matched objects, meters.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct DimErrorReport {
    pub depth: f64,
    pub height: f64,
    pub length: f64,
    pub width: f64,
    pub count: usize,
    pub unmatched: usize,
}

impl DimErrorReport {
    pub const CSV_HEADER: &'static str = "label,depth,height,length,width,n,unmatched";

    pub fn from_errors([depth, height, length, width]: [f64; 4]) -> Self {
        Self {
            depth,
            height,
            length,
            width,
            count: 0,
            unmatched: 0,
        }
    }

    /// `label,depth,height,length,width`.
    pub fn error_row(&self, label: &str) -> String {
        format!(
            "{label},{},{},{},{}",
            fmt_sig9(self.depth),
            fmt_sig9(self.height),
            fmt_sig9(self.length),
            fmt_sig9(self.width)
        )
    }

    pub fn csv_row(&self, label: &str) -> String {
        format!("{},{},{}", self.error_row(label), self.count, self.unmatched)
    }
}

fn opt(v: Option<f64>) -> String {
    v.map_or_else(|| "NA".to_string(), fmt_sig9)
}

/// Buckets `(predicted, ground-truth)` depth pairs by ground-truth depth.
pub fn depth_buckets(pairs: &[(f64, f64)]) -> Result<DepthBucketReport> {
    if pairs.is_empty() {
        return Err(Error::EmptyInput);
    }
    let mut sums = [0.0; 3];
    let mut counts = [0usize; 3];
    for &(pred, gt) in pairs {
        let Some(i) = DEPTH_BUCKET_EDGES.iter().rposition(|e| gt >= *e) else {
            continue;
        };
        sums[i] += (pred - gt).abs();
        counts[i] += 1;
    }
    let mut report = DepthBucketReport::default();
    for i in 0..3 {
        report.buckets[i] = BucketStat {
            mean_abs_error: (counts[i] > 0).then(|| sums[i] / counts[i] as f64),
            count: counts[i],
        };
    }
    Ok(report)
}

/// Mean absolute errors of `(pred, gt)` pairs of `[depth, h, l, w]`.
pub fn dim_errors(pairs: &[([f64; 4], [f64; 4])]) -> Result<DimErrorReport> {
    if pairs.is_empty() {
        return Err(Error::EmptyInput);
    }
    let mut sums = [0.0; 4];
    for (p, g) in pairs {
        for i in 0..4 {
            sums[i] += (p[i] - g[i]).abs();
        }
    }
    let n = pairs.len() as f64;
    let mut report = DimErrorReport::from_errors(sums.map(|s| s / n));
    report.count = pairs.len();
    Ok(report)
}

pub fn eval_depth_buckets(pred: &[KeyedLabel], gt: &[KeyedLabel]) -> Result<DepthBucketReport> {
    let (pairs, unmatched) = match_by_id(pred, gt)?;
    let depths: Vec<(f64, f64)> = pairs.iter().map(|p| (p.pred.location[2], p.gt.location[2])).collect();
    let mut report = depth_buckets(&depths)?;
    report.unmatched = unmatched;
    Ok(report)
}

pub fn eval_dim_errors(pred: &[KeyedLabel], gt: &[KeyedLabel]) -> Result<DimErrorReport> {
    let (pairs, unmatched) = match_by_id(pred, gt)?;
    let key = |r: &LabelRecord| [r.location[2], r.dims[0], r.dims[2], r.dims[1]];
    let values: Vec<([f64; 4], [f64; 4])> = pairs.iter().map(|p| (key(p.pred), key(p.gt))).collect();
    let mut report = dim_errors(&values)?;
    report.unmatched = unmatched;
    Ok(report)
}
