//! Cloud cleaning and merging.

use super::{CloudError, LabeledPointCloud, RigidTransform, SpatialIndex};

/// Diagnostics from a statistical outlier removal pass.
#[derive(Debug, Clone)]
pub struct OutlierStats {
    /// Neighbor count actually used; reduced when the cloud is small.
    pub effective_k: usize,
    pub k_reduced: bool,
    pub mean: f64,
    pub std_dev: f64,
    pub threshold: f64,
    pub removed: usize,
}

/// Remove points whose mean distance to their `k` nearest neighbors exceeds
/// `μ + std_ratio·σ`, with `μ, σ` taken over that statistic on the whole
/// cloud (sample standard deviation).
///
/// Labels and colors are carried along. When the cloud has `≤ k` points the
/// neighbor count drops to `len − 1` and the reduction is flagged in the
/// returned stats.
pub fn statistical_outlier_removal(
    pc: &LabeledPointCloud,
    k: usize,
    std_ratio: f64,
) -> Result<(LabeledPointCloud, OutlierStats), CloudError> {
    if pc.is_empty() {
        return Err(CloudError::Empty);
    }
    let mut effective_k = k;
    let mut k_reduced = false;
    if pc.len() <= k {
        effective_k = pc.len() - 1;
        k_reduced = true;
    }
    if effective_k == 0 {
        let stats = OutlierStats {
            effective_k,
            k_reduced,
            mean: 0.0,
            std_dev: 0.0,
            threshold: 0.0,
            removed: 0,
        };
        return Ok((pc.clone(), stats));
    }
    let index = SpatialIndex::build(pc.points())?;
    let mut mean_dists = Vec::with_capacity(pc.len());
    for (i, p) in pc.points().iter().enumerate() {
        let neighbors = index.k_nearest(p, effective_k, Some(i));
        let sum: f64 = neighbors.iter().map(|&(_, d)| d).sum();
        mean_dists.push(sum / neighbors.len() as f64);
    }
    let n = mean_dists.len() as f64;
    let mean = mean_dists.iter().sum::<f64>() / n;
    let var = if pc.len() > 1 {
        mean_dists.iter().map(|d| (d - mean) * (d - mean)).sum::<f64>() / (n - 1.0)
    } else {
        0.0
    };
    let std_dev = var.sqrt();
    let threshold = mean + std_ratio * std_dev;
    let mask: Vec<bool> = mean_dists.iter().map(|&d| d <= threshold).collect();
    let removed = mask.iter().filter(|&&keep| !keep).count();
    let stats = OutlierStats { effective_k, k_reduced, mean, std_dev, threshold, removed };
    Ok((pc.filtered(&mask), stats))
}

/// Transform both views into the shared frame and concatenate, front first.
///
/// Labels (and colors) survive only when both sources carry them.
pub fn merge(
    front: &LabeledPointCloud,
    back: &LabeledPointCloud,
    t_front: &RigidTransform,
    t_back: &RigidTransform,
) -> LabeledPointCloud {
    let f = front.transformed(t_front);
    let b = back.transformed(t_back);
    let mut points = Vec::with_capacity(f.len() + b.len());
    points.extend_from_slice(f.points());
    points.extend_from_slice(b.points());
    let mut merged = LabeledPointCloud::new(points);
    if let (Some(fl), Some(bl)) = (f.labels(), b.labels()) {
        let mut labels = Vec::with_capacity(fl.len() + bl.len());
        labels.extend_from_slice(fl);
        labels.extend_from_slice(bl);
        merged = merged.with_labels(labels).expect("lengths add up");
    }
    if let (Some(fc), Some(bc)) = (f.colors(), b.colors()) {
        let mut colors = Vec::with_capacity(fc.len() + bc.len());
        colors.extend_from_slice(fc);
        colors.extend_from_slice(bc);
        merged = merged.with_colors(colors).expect("lengths add up");
    }
    merged
}

/// Drop every point labeled as head, hand, or foot. Requires labels.
pub fn drop_extremities(pc: &LabeledPointCloud) -> Result<LabeledPointCloud, CloudError> {
    let labels = pc.labels().ok_or(CloudError::LabelsRequired)?;
    let mask: Vec<bool> = labels.iter().map(|l| !l.is_extremity()).collect();
    Ok(pc.filtered(&mask))
}
