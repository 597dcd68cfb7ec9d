//! Surface area and signed volume.

use super::{MeshError, TriangleMesh};

impl TriangleMesh {
    /// Total surface area in m².
    pub fn surface_area(&self) -> f64 {
        (0..self.face_count())
            .map(|f| {
                let [a, b, c] = self.triangle(f);
                0.5 * (b - a).cross(&(c - a)).norm()
            })
            .sum()
    }

    /// Enclosed volume in m³ via the divergence theorem,
    /// `V = Σ det[v0 v1 v2] / 6` over all faces.
    ///
    /// Positive for outward-oriented meshes. Errors when the mesh has
    /// boundary edges.
    pub fn signed_volume(&self) -> Result<f64, MeshError> {
        let boundary = self.boundary_edges().len();
        if boundary > 0 {
            return Err(MeshError::NotWatertight { boundary_edges: boundary });
        }
        Ok(self
            .faces()
            .iter()
            .map(|&[a, b, c]| {
                let (a, b, c) = (
                    self.vertices()[a as usize].coords,
                    self.vertices()[b as usize].coords,
                    self.vertices()[c as usize].coords,
                );
                a.dot(&b.cross(&c)) / 6.0
            })
            .sum())
    }
}

#[cfg(test)]
mod tests {
    use crate::cloud::RigidTransform;
    use crate::mesh::TriangleMesh;
    use crate::shapes;
    use approx::assert_relative_eq;
    use nalgebra::{Point3, Vector3};

    #[test]
    fn unit_cube_volume_and_area() {
        let cube = shapes::unit_cube();
        assert_relative_eq!(cube.signed_volume().unwrap(), 1.0, epsilon = 1e-12);
        assert_relative_eq!(cube.surface_area(), 6.0, epsilon = 1e-12);
    }

    #[test]
    fn paper_box_volume() {
        let mesh = shapes::cuboid(0.558, 0.52, 0.589, 1);
        let v = mesh.signed_volume().unwrap();
        assert_relative_eq!(v, 0.558 * 0.52 * 0.589, epsilon = 1e-12);
        assert!((v - 0.171).abs() < 5e-4);
    }

    #[test]
    fn right_triangle_area() {
        let mesh = TriangleMesh::new(
            vec![
                Point3::new(0.0, 0.0, 0.0),
                Point3::new(3.0, 0.0, 0.0),
                Point3::new(0.0, 4.0, 0.0),
            ],
            vec![[0, 1, 2]],
        )
        .unwrap();
        assert_relative_eq!(mesh.surface_area(), 6.0, epsilon = 1e-12);
    }

    #[test]
    fn icosphere_converges_to_sphere_from_below() {
        let sphere = shapes::icosphere(3, 1.0);
        let v = sphere.signed_volume().unwrap();
        let a = sphere.surface_area();
        let v_exact = 4.0 * std::f64::consts::PI / 3.0;
        let a_exact = 4.0 * std::f64::consts::PI;
        assert!(v < v_exact && v > v_exact * 0.99, "volume {v}");
        assert!(a < a_exact && a > a_exact * 0.99, "area {a}");
    }

    #[test]
    fn volume_is_rigid_invariant_and_scales_cubically() {
        let mesh = shapes::icosphere(2, 0.7);
        let v0 = mesh.signed_volume().unwrap();
        let t = RigidTransform::from_axis_angle(
            Vector3::new(0.3, -1.0, 0.5),
            1.1,
            Vector3::new(0.4, -2.0, 1.7),
        );
        let v1 = mesh.transformed(&t).signed_volume().unwrap();
        assert_relative_eq!(v1, v0, max_relative = 1e-9);
        let s = 1.7;
        let v2 = mesh.scaled(s).signed_volume().unwrap();
        assert_relative_eq!(v2, s.powi(3) * v0, max_relative = 1e-9);
    }

    #[test]
    fn open_mesh_reports_boundary_count() {
        let cyl = shapes::open_cylinder(0.5, 1.0, 8);
        match cyl.signed_volume() {
            Err(crate::mesh::MeshError::NotWatertight { boundary_edges }) => {
                assert_eq!(boundary_edges, 16)
            }
            other => panic!("expected NotWatertight, got {other:?}"),
        }
    }
}
