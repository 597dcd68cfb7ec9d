//! Rigid pre-alignment: centering and bounding-box diagonal scaling.
//!
//! The acquisition protocol fixes the subject's orientation, so alignment
//! never rotates; it is translation plus one uniform scale.

use nalgebra::{Point3, Vector3};
use thiserror::Error;

use crate::cloud::LabeledPointCloud;
use crate::mesh::TriangleMesh;

#[derive(Debug, Error)]
pub enum AlignError {
    #[error("cannot align an empty shape")]
    Empty,
    #[error("shape has a zero-length bounding-box diagonal")]
    ZeroDiagonal,
}

/// Scale and translations applied to the template.
#[derive(Debug, Clone, Copy)]
pub struct AlignmentParams {
    pub scale: f64,
    /// Translation that centered the template before scaling.
    pub pre_translation: Vector3<f64>,
    /// Translation applied after scaling to align bounding-box centers.
    pub post_translation: Vector3<f64>,
}

/// Axis-aligned bounding box of a point set.
pub fn bounding_box(points: &[Point3<f64>]) -> Option<(Point3<f64>, Point3<f64>)> {
    let first = points.first()?;
    let mut min = *first;
    let mut max = *first;
    for p in &points[1..] {
        for a in 0..3 {
            min[a] = min[a].min(p[a]);
            max[a] = max[a].max(p[a]);
        }
    }
    Some((min, max))
}

fn bbox_center(bbox: (Point3<f64>, Point3<f64>)) -> Point3<f64> {
    nalgebra::center(&bbox.0, &bbox.1)
}

fn bbox_diagonal(bbox: (Point3<f64>, Point3<f64>)) -> f64 {
    (bbox.1 - bbox.0).norm()
}

/// Translate a mesh so its bounding-box center sits at the origin. Returns
/// the applied translation.
pub fn center_mesh(mesh: &TriangleMesh) -> Result<(TriangleMesh, Vector3<f64>), AlignError> {
    let bbox = mesh.bounding_box().ok_or(AlignError::Empty)?;
    let t = -bbox_center(bbox).coords;
    Ok((mesh.translated(t), t))
}

/// Translate a cloud so its bounding-box center sits at the origin. Returns
/// the applied translation.
pub fn center_cloud(
    cloud: &LabeledPointCloud,
) -> Result<(LabeledPointCloud, Vector3<f64>), AlignError> {
    let bbox = cloud.bounding_box().ok_or(AlignError::Empty)?;
    let t = -bbox_center(bbox).coords;
    Ok((cloud.translated(t), t))
}

/// Uniformly scale the template so its bounding-box diagonal matches the
/// target's, then align the two bounding-box centers.
pub fn scale_template(
    template: &TriangleMesh,
    target: &LabeledPointCloud,
) -> Result<(TriangleMesh, AlignmentParams), AlignError> {
    let template_bbox = template.bounding_box().ok_or(AlignError::Empty)?;
    let target_bbox = target.bounding_box().ok_or(AlignError::Empty)?;
    let d_template = bbox_diagonal(template_bbox);
    let d_target = bbox_diagonal(target_bbox);
    if d_template <= 0.0 || d_target <= 0.0 {
        return Err(AlignError::ZeroDiagonal);
    }
    let scale = d_target / d_template;
    let pre = -bbox_center(template_bbox).coords;
    let scaled = template.translated(pre).scaled(scale);
    // Scaling about the origin keeps the centered bbox centered; shift onto
    // the target's center.
    let post = bbox_center(target_bbox).coords;
    Ok((scaled.translated(post), AlignmentParams { scale, pre_translation: pre, post_translation: post }))
}
