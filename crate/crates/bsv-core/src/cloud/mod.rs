//! Point clouds, rigid transforms, and spatial queries.

mod filter;
mod kdtree;

pub use filter::{drop_extremities, merge, statistical_outlier_removal, OutlierStats};
pub use kdtree::SpatialIndex;

use nalgebra::{Matrix3, Point3, Rotation3, Unit, Vector3};
use thiserror::Error;

use crate::labels::SegmentLabel;

#[derive(Debug, Error)]
pub enum CloudError {
    #[error("point cloud is empty")]
    Empty,
    #[error("cloud has {labels} labels for {points} points")]
    LabelCountMismatch { labels: usize, points: usize },
    #[error("operation requires per-point labels")]
    LabelsRequired,
    #[error("rotation matrix is not orthonormal with determinant +1 (|RᵀR - I| = {orthogonality:.2e}, det = {det})")]
    InvalidRotation { orthogonality: f64, det: f64 },
    #[error("point {index} has a non-finite coordinate")]
    NonFinitePoint { index: usize },
    #[error("cloud i/o: {0}")]
    Io(#[from] std::io::Error),
    #[error("cloud parse error: {0}")]
    Parse(String),
}

/// Rotation + translation mapping one frame into another (commonly camera
/// into world).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RigidTransform {
    pub rotation: Rotation3<f64>,
    pub translation: Vector3<f64>,
}

impl RigidTransform {
    pub fn identity() -> Self {
        Self { rotation: Rotation3::identity(), translation: Vector3::zeros() }
    }

    pub fn new(rotation: Rotation3<f64>, translation: Vector3<f64>) -> Self {
        Self { rotation, translation }
    }

    pub fn from_translation(translation: Vector3<f64>) -> Self {
        Self { rotation: Rotation3::identity(), translation }
    }

    pub fn from_axis_angle(axis: Vector3<f64>, angle: f64, translation: Vector3<f64>) -> Self {
        Self {
            rotation: Rotation3::from_axis_angle(&Unit::new_normalize(axis), angle),
            translation,
        }
    }

    /// Validate an arbitrary matrix before use: `RᵀR = I` and `det R = +1`,
    /// both within 1e-9.
    pub fn from_matrix(rotation: Matrix3<f64>, translation: Vector3<f64>) -> Result<Self, CloudError> {
        let orth = (rotation.transpose() * rotation - Matrix3::identity()).abs().max();
        let det = rotation.determinant();
        if orth > 1e-9 || (det - 1.0).abs() > 1e-9 {
            return Err(CloudError::InvalidRotation { orthogonality: orth, det });
        }
        Ok(Self { rotation: Rotation3::from_matrix_unchecked(rotation), translation })
    }

    pub fn apply(&self, p: &Point3<f64>) -> Point3<f64> {
        self.rotation * p + self.translation
    }

    pub fn apply_vector(&self, v: &Vector3<f64>) -> Vector3<f64> {
        self.rotation * v
    }

    pub fn inverse(&self) -> Self {
        let inv = self.rotation.inverse();
        Self { rotation: inv, translation: -(inv * self.translation) }
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &Self) -> Self {
        Self {
            rotation: self.rotation * other.rotation,
            translation: self.rotation * other.translation + self.translation,
        }
    }
}

/// 3D points with optional per-point segment labels and colors.
#[derive(Debug, Clone, Default)]
pub struct LabeledPointCloud {
    points: Vec<Point3<f64>>,
    labels: Option<Vec<SegmentLabel>>,
    colors: Option<Vec<[u8; 3]>>,
}

impl LabeledPointCloud {
    pub fn new(points: Vec<Point3<f64>>) -> Self {
        Self { points, labels: None, colors: None }
    }

    pub fn with_labels(mut self, labels: Vec<SegmentLabel>) -> Result<Self, CloudError> {
        if labels.len() != self.points.len() {
            return Err(CloudError::LabelCountMismatch {
                labels: labels.len(),
                points: self.points.len(),
            });
        }
        self.labels = Some(labels);
        Ok(self)
    }

    pub fn with_colors(mut self, colors: Vec<[u8; 3]>) -> Result<Self, CloudError> {
        if colors.len() != self.points.len() {
            return Err(CloudError::LabelCountMismatch {
                labels: colors.len(),
                points: self.points.len(),
            });
        }
        self.colors = Some(colors);
        Ok(self)
    }

    pub fn points(&self) -> &[Point3<f64>] {
        &self.points
    }

    pub fn labels(&self) -> Option<&[SegmentLabel]> {
        self.labels.as_deref()
    }

    pub fn colors(&self) -> Option<&[[u8; 3]]> {
        self.colors.as_deref()
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Reject clouds containing NaN or infinite coordinates.
    pub fn validate_finite(&self) -> Result<(), CloudError> {
        for (i, p) in self.points.iter().enumerate() {
            if !(p.x.is_finite() && p.y.is_finite() && p.z.is_finite()) {
                return Err(CloudError::NonFinitePoint { index: i });
            }
        }
        Ok(())
    }

    pub fn transformed(&self, t: &RigidTransform) -> Self {
        Self {
            points: self.points.iter().map(|p| t.apply(p)).collect(),
            labels: self.labels.clone(),
            colors: self.colors.clone(),
        }
    }

    pub fn translated(&self, d: Vector3<f64>) -> Self {
        Self {
            points: self.points.iter().map(|p| p + d).collect(),
            labels: self.labels.clone(),
            colors: self.colors.clone(),
        }
    }

    /// Keep the points selected by `mask`, carrying labels and colors along.
    pub fn filtered(&self, mask: &[bool]) -> Self {
        assert_eq!(mask.len(), self.points.len());
        let pick = |keep: &dyn Fn(usize) -> bool| -> Vec<usize> {
            (0..self.points.len()).filter(|&i| keep(&i)).collect()
        };
        let kept = pick(&|i| mask[i]);
        Self {
            points: kept.iter().map(|&i| self.points[i]).collect(),
            labels: self.labels.as_ref().map(|ls| kept.iter().map(|&i| ls[i]).collect()),
            colors: self.colors.as_ref().map(|cs| kept.iter().map(|&i| cs[i]).collect()),
        }
    }

    pub fn bounding_box(&self) -> Option<(Point3<f64>, Point3<f64>)> {
        crate::align::bounding_box(&self.points)
    }
}
