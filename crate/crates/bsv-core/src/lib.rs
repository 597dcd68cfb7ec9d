//! Body segment volume estimation from two opposed depth cameras.
//!
//! The pipeline warps a watertight template mesh onto a front+back point
//! cloud (which has lateral gaps by construction), then segments the fitted
//! mesh, closes each segment, and integrates volumes:
//!
//! 1. [`scan`] — simulate the two-camera rig: depth rendering, deprojection,
//!    depth noise, and calibration offsets.
//! 2. [`cloud`] — point-cloud cleaning, merging, and spatial queries.
//! 3. [`align`] — rigid pre-alignment (centering + bounding-box scaling).
//! 4. [`arap`] — regularized as-rigid-as-possible non-rigid registration.
//! 5. [`labels`] — body-part label algebra, 2D→3D projection, mesh cuts.
//! 6. [`metrics`] — relative volume/mass errors and report aggregation.
//!
//! [`mesh`] provides the indexed triangle mesh the other modules build on,
//! and [`shapes`] procedural test geometry (boxes, icospheres, a capsule
//! humanoid).

pub mod align;
pub mod arap;
pub mod cloud;
pub mod labels;
pub mod mesh;
pub mod metrics;
pub mod scan;
pub mod shapes;

pub use cloud::{LabeledPointCloud, RigidTransform, SpatialIndex};
pub use labels::SegmentLabel;
pub use mesh::TriangleMesh;
