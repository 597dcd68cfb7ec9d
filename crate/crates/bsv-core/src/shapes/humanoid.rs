//! Procedural watertight humanoid: an ellipsoid torso with capsule limbs
//! and sphere extremities, meshed by marching tetrahedra and labeled per
//! vertex by the closest primitive.
//!
//! The generator knows its joint positions, so it can also emit the
//! landmark set a pose detector would produce.

use std::collections::HashMap;

use nalgebra::{Point3, Vector3};

use super::marching::{marching_tetrahedra, GridSpec};
use crate::labels::SegmentLabel;
use crate::mesh::TriangleMesh;

/// Proportions of the generated body, in meters. `unit_scale` multiplies
/// every length, the per-part factors tweak girth independently.
#[derive(Debug, Clone)]
pub struct HumanoidParams {
    pub unit_scale: f64,
    pub torso_width: f64,
    pub limb_girth: f64,
    /// Include head, hands, and feet. The trimmed variant is the ground
    /// truth the evaluated volume is compared against.
    pub with_extremities: bool,
    /// Marching grid spacing.
    pub voxel: f64,
}

impl Default for HumanoidParams {
    fn default() -> Self {
        Self {
            unit_scale: 1.0,
            torso_width: 1.0,
            limb_girth: 1.0,
            with_extremities: true,
            voxel: 0.02,
        }
    }
}

#[derive(Debug, Clone, Copy)]
enum Primitive {
    Ellipsoid { center: Point3<f64>, radii: Vector3<f64> },
    Capsule { a: Point3<f64>, b: Point3<f64>, r: f64 },
    Sphere { center: Point3<f64>, r: f64 },
}

impl Primitive {
    fn sdf(&self, p: &Point3<f64>) -> f64 {
        match *self {
            Primitive::Ellipsoid { center, radii } => {
                // Scaled-sphere approximation: exact zero set, approximate
                // distance away from the surface (fine for meshing).
                let q = p - center;
                let k = Vector3::new(q.x / radii.x, q.y / radii.y, q.z / radii.z).norm();
                (k - 1.0) * radii.min()
            }
            Primitive::Capsule { a, b, r } => {
                let ab = b - a;
                let t = ((p - a).dot(&ab) / ab.norm_squared()).clamp(0.0, 1.0);
                (p - (a + ab * t)).norm() - r
            }
            Primitive::Sphere { center, r } => (p - center).norm() - r,
        }
    }
}

struct BodyPlan {
    parts: Vec<(Primitive, SegmentLabel)>,
    joints: HashMap<String, Point3<f64>>,
}

fn body_plan(params: &HumanoidParams) -> BodyPlan {
    let s = params.unit_scale;
    let g = params.limb_girth;
    let mirror = |p: Point3<f64>| Point3::new(-p.x, p.y, p.z);

    let shoulder = Point3::new(0.17, 1.40, 0.0) * s;
    let elbow = Point3::new(0.34, 1.17, 0.0) * s;
    let wrist = Point3::new(0.47, 0.95, 0.0) * s;
    let hand = Point3::new(0.52, 0.87, 0.0) * s;
    let hip = Point3::new(0.09, 0.88, 0.0) * s;
    let knee = Point3::new(0.11, 0.48, 0.0) * s;
    let ankle = Point3::new(0.12, 0.10, 0.0) * s;
    let foot = Point3::new(0.12, 0.05, 0.07) * s;
    let neck = Point3::new(0.0, 1.52, 0.0) * s;
    let head = Point3::new(0.0, 1.63, 0.0) * s;

    let torso = Primitive::Ellipsoid {
        center: Point3::new(0.0, 1.13, 0.0) * s,
        radii: Vector3::new(0.17 * params.torso_width, 0.33, 0.11 * params.torso_width) * s,
    };
    let pelvis = Primitive::Ellipsoid {
        center: Point3::new(0.0, 0.90, 0.0) * s,
        radii: Vector3::new(0.15 * params.torso_width, 0.14, 0.11 * params.torso_width) * s,
    };

    let mut parts: Vec<(Primitive, SegmentLabel)> = vec![
        (torso, SegmentLabel::Torso),
        (pelvis, SegmentLabel::Torso),
    ];
    let mut limb = |a: Point3<f64>, b: Point3<f64>, r: f64, left: SegmentLabel, right: SegmentLabel| {
        parts.push((Primitive::Capsule { a, b, r }, left));
        parts.push((Primitive::Capsule { a: mirror(a), b: mirror(b), r }, right));
    };
    limb(shoulder, elbow, 0.048 * g * s, SegmentLabel::LeftArm, SegmentLabel::RightArm);
    limb(elbow, wrist, 0.038 * g * s, SegmentLabel::LeftForearm, SegmentLabel::RightForearm);
    limb(hip, knee, 0.075 * g * s, SegmentLabel::LeftThigh, SegmentLabel::RightThigh);
    limb(knee, ankle, 0.050 * g * s, SegmentLabel::LeftShin, SegmentLabel::RightShin);

    if params.with_extremities {
        parts.push((Primitive::Sphere { center: head, r: 0.105 * s }, SegmentLabel::Head));
        parts.push((
            Primitive::Capsule { a: neck, b: head, r: 0.05 * s },
            SegmentLabel::Head,
        ));
        parts.push((Primitive::Sphere { center: hand, r: 0.045 * g * s }, SegmentLabel::LeftHand));
        parts.push((
            Primitive::Sphere { center: mirror(hand), r: 0.045 * g * s },
            SegmentLabel::RightHand,
        ));
        parts.push((
            Primitive::Capsule { a: ankle, b: foot, r: 0.04 * g * s },
            SegmentLabel::LeftFoot,
        ));
        parts.push((
            Primitive::Capsule { a: mirror(ankle), b: mirror(foot), r: 0.04 * g * s },
            SegmentLabel::RightFoot,
        ));
    }

    // Subject left is +x; the mirrored copies are the right side.
    let mut joints = HashMap::new();
    let mut joint = |name: &str, p: Point3<f64>| {
        joints.insert(format!("left_{name}"), p);
        joints.insert(format!("right_{name}"), mirror(p));
    };
    joint("shoulder", shoulder);
    joint("elbow", elbow);
    joint("wrist", wrist);
    joint("hip", hip);
    joint("knee", knee);
    joint("ankle", ankle);

    BodyPlan { parts, joints }
}

/// Generate the labeled humanoid mesh.
pub fn humanoid(params: &HumanoidParams) -> TriangleMesh {
    let plan = body_plan(params);
    let sdf = |p: &Point3<f64>| {
        plan.parts
            .iter()
            .map(|(prim, _)| prim.sdf(p))
            .fold(f64::INFINITY, f64::min)
    };
    let s = params.unit_scale;
    let reach = 0.62 * s.max(1.0) * params.limb_girth.max(1.0);
    let grid = GridSpec::covering(
        Point3::new(-reach, 0.0, -0.30 * s),
        Point3::new(reach, 1.80 * s, 0.30 * s),
        3.0 * params.voxel,
        params.voxel,
    );
    let mesh = marching_tetrahedra(sdf, &grid);
    let labels: Vec<SegmentLabel> = mesh
        .vertices()
        .iter()
        .map(|p| {
            plan.parts
                .iter()
                .min_by(|(a, _), (b, _)| a.sdf(p).total_cmp(&b.sdf(p)))
                .map(|&(_, label)| label)
                .unwrap()
        })
        .collect();
    mesh.with_labels(labels).unwrap()
}

/// 3D joint positions for the generated body, keyed by landmark name.
pub fn humanoid_joints(params: &HumanoidParams) -> HashMap<String, Point3<f64>> {
    body_plan(params).joints
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn full_body_is_watertight_with_all_labels() {
        let mesh = humanoid(&HumanoidParams { voxel: 0.03, ..Default::default() });
        assert!(mesh.is_watertight());
        assert!(mesh.signed_volume().unwrap() > 0.02);
        let labels = mesh.labels().unwrap();
        for expected in SegmentLabel::ALL_BODY {
            assert!(
                labels.iter().any(|&l| l == expected),
                "label {expected:?} missing"
            );
        }
    }

    #[test]
    fn default_resolution_reaches_face_budget() {
        let mesh = humanoid(&HumanoidParams::default());
        assert!(mesh.face_count() >= 10_000, "{} faces", mesh.face_count());
        assert!(mesh.is_watertight());
    }

    #[test]
    fn trimmed_variant_has_no_extremity_labels() {
        let mesh = humanoid(&HumanoidParams {
            with_extremities: false,
            voxel: 0.03,
            ..Default::default()
        });
        assert!(mesh.is_watertight());
        let labels = mesh.labels().unwrap();
        assert!(labels.iter().all(|l| !l.is_extremity()));
        // Trimmed body is strictly smaller.
        let full = humanoid(&HumanoidParams { voxel: 0.03, ..Default::default() });
        assert!(
            mesh.signed_volume().unwrap() < full.signed_volume().unwrap(),
        );
    }

    #[test]
    fn joints_are_mirrored() {
        let joints = humanoid_joints(&HumanoidParams::default());
        let l = joints["left_knee"];
        let r = joints["right_knee"];
        assert_eq!(l.x, -r.x);
        assert_eq!(l.y, r.y);
    }
}
