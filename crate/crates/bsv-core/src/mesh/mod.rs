//! Indexed triangle mesh with adjacency, cotangent weights, Laplacian
//! assembly, boundary handling, and geometric measures.
//!
//! Coordinates are in meters. Faces are counter-clockwise when viewed from
//! outside, so consistently oriented closed meshes have positive signed
//! volume.

mod boundary;
mod laplacian;
mod measure;
pub mod obj;
pub mod ply;
mod weights;

pub use boundary::HoleFill;
pub use laplacian::SparseLaplacian;
pub use weights::EdgeWeightMap;

use std::collections::HashMap;

use nalgebra::{Point3, Vector3};
use thiserror::Error;

use crate::cloud::RigidTransform;
use crate::labels::SegmentLabel;

#[derive(Debug, Error)]
pub enum MeshError {
    #[error("face {face} references vertex {index} but the mesh has {count} vertices")]
    IndexOutOfRange { face: usize, index: u32, count: usize },
    #[error("face {face} is degenerate: indices ({0}, {1}, {2})", .indices[0], .indices[1], .indices[2])]
    DegenerateFace { face: usize, indices: [u32; 3] },
    #[error("directed edge ({0}, {1}) appears in more than one face: orientation is inconsistent or the mesh is non-manifold", .edge.0, .edge.1)]
    InconsistentOrientation { edge: (u32, u32) },
    #[error("edge ({0}, {1}) has {count} incident faces (non-manifold)", .edge.0, .edge.1)]
    NonManifoldEdge { edge: (u32, u32), count: usize },
    #[error("mesh is not watertight: {boundary_edges} boundary edges")]
    NotWatertight { boundary_edges: usize },
    #[error("label count {labels} does not match vertex count {vertices}")]
    LabelCountMismatch { labels: usize, vertices: usize },
    #[error("weight map built for {weights} vertices, mesh has {vertices}")]
    WeightDimensionMismatch { weights: usize, vertices: usize },
    #[error("mesh has no vertices")]
    Empty,
    #[error("segment {0:?} not present in mesh")]
    EmptySegment(SegmentLabel),
    #[error("mesh i/o: {0}")]
    Io(#[from] std::io::Error),
    #[error("mesh parse error: {0}")]
    Parse(String),
}

/// Indexed triangle mesh. Immutable after construction; transforms return
/// new meshes.
#[derive(Debug, Clone)]
pub struct TriangleMesh {
    vertices: Vec<Point3<f64>>,
    faces: Vec<[u32; 3]>,
    labels: Option<Vec<SegmentLabel>>,
}

impl TriangleMesh {
    /// Build a mesh, validating indices, degeneracy, and orientation
    /// consistency (each interior edge must appear once in each direction).
    pub fn new(vertices: Vec<Point3<f64>>, faces: Vec<[u32; 3]>) -> Result<Self, MeshError> {
        let n = vertices.len();
        let mut directed = HashMap::with_capacity(faces.len() * 3);
        for (fi, f) in faces.iter().enumerate() {
            for &v in f {
                if v as usize >= n {
                    return Err(MeshError::IndexOutOfRange { face: fi, index: v, count: n });
                }
            }
            if f[0] == f[1] || f[1] == f[2] || f[0] == f[2] {
                return Err(MeshError::DegenerateFace { face: fi, indices: *f });
            }
            for k in 0..3 {
                let e = (f[k], f[(k + 1) % 3]);
                if directed.insert(e, fi).is_some() {
                    return Err(MeshError::InconsistentOrientation { edge: e });
                }
            }
        }
        Ok(Self { vertices, faces, labels: None })
    }

    /// Attach per-vertex segment labels.
    pub fn with_labels(mut self, labels: Vec<SegmentLabel>) -> Result<Self, MeshError> {
        if labels.len() != self.vertices.len() {
            return Err(MeshError::LabelCountMismatch {
                labels: labels.len(),
                vertices: self.vertices.len(),
            });
        }
        self.labels = Some(labels);
        Ok(self)
    }

    pub fn vertices(&self) -> &[Point3<f64>] {
        &self.vertices
    }

    pub fn faces(&self) -> &[[u32; 3]] {
        &self.faces
    }

    pub fn labels(&self) -> Option<&[SegmentLabel]> {
        self.labels.as_deref()
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn face_count(&self) -> usize {
        self.faces.len()
    }

    /// Face corner positions.
    pub fn triangle(&self, face: usize) -> [Point3<f64>; 3] {
        let [a, b, c] = self.faces[face];
        [self.vertices[a as usize], self.vertices[b as usize], self.vertices[c as usize]]
    }

    /// Majority label of a face: the label carried by at least two of its
    /// vertices; three-way ties resolve to the lowest ordinal.
    pub fn face_label(&self, face: usize) -> Option<SegmentLabel> {
        let labels = self.labels.as_ref()?;
        let ls = self.faces[face].map(|v| labels[v as usize]);
        if ls[0] == ls[1] || ls[0] == ls[2] {
            Some(ls[0])
        } else if ls[1] == ls[2] {
            Some(ls[1])
        } else {
            Some(*ls.iter().min().unwrap())
        }
    }

    /// Replace vertex positions, keeping connectivity and labels.
    pub fn with_positions(&self, vertices: Vec<Point3<f64>>) -> Result<Self, MeshError> {
        if vertices.len() != self.vertices.len() {
            return Err(MeshError::LabelCountMismatch {
                labels: vertices.len(),
                vertices: self.vertices.len(),
            });
        }
        Ok(Self { vertices, faces: self.faces.clone(), labels: self.labels.clone() })
    }

    pub fn transformed(&self, t: &RigidTransform) -> Self {
        Self {
            vertices: self.vertices.iter().map(|p| t.apply(p)).collect(),
            faces: self.faces.clone(),
            labels: self.labels.clone(),
        }
    }

    pub fn translated(&self, d: Vector3<f64>) -> Self {
        Self {
            vertices: self.vertices.iter().map(|p| p + d).collect(),
            faces: self.faces.clone(),
            labels: self.labels.clone(),
        }
    }

    /// Uniform scale about the origin.
    pub fn scaled(&self, s: f64) -> Self {
        Self {
            vertices: self.vertices.iter().map(|p| Point3::from(p.coords * s)).collect(),
            faces: self.faces.clone(),
            labels: self.labels.clone(),
        }
    }

    /// Axis-aligned bounding box.
    pub fn bounding_box(&self) -> Option<(Point3<f64>, Point3<f64>)> {
        crate::align::bounding_box(&self.vertices)
    }

    /// Undirected edges as sorted `(lo, hi)` pairs, each listed once.
    pub fn undirected_edges(&self) -> Vec<(u32, u32)> {
        let mut edges: Vec<(u32, u32)> = self
            .faces
            .iter()
            .flat_map(|f| {
                (0..3).map(move |k| {
                    let (a, b) = (f[k], f[(k + 1) % 3]);
                    (a.min(b), a.max(b))
                })
            })
            .collect();
        edges.sort_unstable();
        edges.dedup();
        edges
    }

    /// Flip the orientation of every face.
    pub fn flipped(&self) -> Self {
        Self {
            vertices: self.vertices.clone(),
            faces: self.faces.iter().map(|&[a, b, c]| [a, c, b]).collect(),
            labels: self.labels.clone(),
        }
    }
}
