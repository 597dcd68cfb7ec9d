//! Boundary extraction, hole filling, and the watertight check.

use std::collections::HashMap;

use nalgebra::Point3;

use super::{MeshError, TriangleMesh};
use crate::labels::SegmentLabel;

/// Result of closing a mesh: the closed mesh plus any warnings about
/// ill-formed boundary loops.
#[derive(Debug, Clone)]
pub struct HoleFill {
    pub mesh: TriangleMesh,
    pub warnings: Vec<String>,
}

impl TriangleMesh {
    /// Directed boundary edges: edges whose reverse direction belongs to no
    /// face.
    pub fn boundary_edges(&self) -> Vec<(u32, u32)> {
        let mut directed = HashMap::with_capacity(self.faces().len() * 3);
        for f in self.faces() {
            for k in 0..3 {
                directed.insert((f[k], f[(k + 1) % 3]), ());
            }
        }
        let mut result: Vec<(u32, u32)> = directed
            .keys()
            .filter(|&&(a, b)| !directed.contains_key(&(b, a)))
            .copied()
            .collect();
        result.sort_unstable();
        result
    }

    /// True when the mesh has no boundary edges.
    pub fn is_watertight(&self) -> bool {
        self.boundary_edges().is_empty()
    }

    /// Closed loops of boundary vertices, each ordered along the boundary
    /// direction. Empty iff the mesh is closed.
    pub fn boundary_loops(&self) -> Vec<Vec<u32>> {
        let edges = self.boundary_edges();
        // A vertex may start several boundary edges when holes pinch
        // together; keep a list per start vertex and consume greedily.
        let mut outgoing: HashMap<u32, Vec<u32>> = HashMap::new();
        for &(a, b) in &edges {
            outgoing.entry(a).or_default().push(b);
        }
        for list in outgoing.values_mut() {
            list.sort_unstable_by(|a, b| b.cmp(a)); // pop() takes the smallest
        }
        let mut loops = Vec::new();
        let mut starts: Vec<u32> = outgoing.keys().copied().collect();
        starts.sort_unstable();
        for start in starts {
            loop {
                let Some(first) = outgoing.get_mut(&start).and_then(|l| l.pop()) else {
                    break;
                };
                let mut cycle = vec![start, first];
                let mut current = first;
                while current != start {
                    let next = outgoing
                        .get_mut(&current)
                        .and_then(|l| l.pop())
                        .expect("boundary edges of an oriented mesh form closed cycles");
                    if next == start {
                        break;
                    }
                    cycle.push(next);
                    current = next;
                }
                loops.push(cycle);
            }
        }
        loops
    }

    /// Close every boundary loop.
    ///
    /// Loops of three vertices gain a single triangle; longer loops gain a
    /// centroid vertex and a triangle fan. Original faces are untouched. A
    /// loop that revisits a vertex is recorded as a warning but still
    /// filled.
    pub fn fill_holes(&self) -> HoleFill {
        let loops = self.boundary_loops();
        let mut vertices = self.vertices().to_vec();
        let mut faces = self.faces().to_vec();
        let mut labels = self.labels().map(<[SegmentLabel]>::to_vec);
        let mut warnings = Vec::new();
        for cycle in &loops {
            let mut seen = cycle.to_vec();
            seen.sort_unstable();
            seen.dedup();
            if seen.len() != cycle.len() {
                warnings.push(format!(
                    "boundary loop of {} edges revisits a vertex; fan fill may self-intersect",
                    cycle.len()
                ));
            }
            // A boundary edge (a, b) is traversed as (a, b) by the existing
            // face, so cap faces walk it in reverse to stay consistent.
            if cycle.len() == 3 {
                faces.push([cycle[2], cycle[1], cycle[0]]);
                continue;
            }
            let centroid = cycle
                .iter()
                .fold(Point3::origin(), |acc, &v| acc + vertices[v as usize].coords)
                / cycle.len() as f64;
            let c_idx = vertices.len() as u32;
            vertices.push(centroid);
            if let Some(labels) = labels.as_mut() {
                // Lowest-ordinal label around the loop keeps the choice
                // deterministic.
                let label = cycle.iter().map(|&v| labels[v as usize]).min().unwrap();
                labels.push(label);
            }
            for k in 0..cycle.len() {
                let a = cycle[k];
                let b = cycle[(k + 1) % cycle.len()];
                faces.push([b, a, c_idx]);
            }
        }
        let mut mesh = TriangleMesh::new(vertices, faces)
            .expect("hole filling preserves orientation consistency");
        if let Some(labels) = labels {
            mesh = mesh.with_labels(labels).expect("label count tracks vertex count");
        }
        HoleFill { mesh, warnings }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::shapes;
    use approx::assert_relative_eq;

    #[test]
    fn closed_cube_has_no_loops() {
        let cube = shapes::unit_cube();
        assert!(cube.is_watertight());
        assert!(cube.boundary_loops().is_empty());
    }

    #[test]
    fn cube_with_one_face_removed_has_one_loop_of_four() {
        let cube = shapes::unit_cube();
        // Remove the two triangles of the -z face.
        let faces: Vec<[u32; 3]> = cube
            .faces()
            .iter()
            .filter(|f| {
                !f.iter().all(|&v| cube.vertices()[v as usize].z.abs() < 1e-12)
            })
            .copied()
            .collect();
        let open = TriangleMesh::new(cube.vertices().to_vec(), faces).unwrap();
        let loops = open.boundary_loops();
        assert_eq!(loops.len(), 1);
        assert_eq!(loops[0].len(), 4);
    }

    #[test]
    fn open_cylinder_has_two_loops() {
        let cyl = shapes::open_cylinder(0.5, 2.0, 16);
        // Independent count: boundary edges by incidence.
        let mut counts = std::collections::HashMap::new();
        for f in cyl.faces() {
            for k in 0..3 {
                let (a, b) = (f[k], f[(k + 1) % 3]);
                *counts.entry((a.min(b), a.max(b))).or_insert(0usize) += 1;
            }
        }
        let boundary_edges = counts.values().filter(|&&c| c == 1).count();
        assert_eq!(boundary_edges, 32);
        let loops = cyl.boundary_loops();
        assert_eq!(loops.len(), 2);
        assert!(loops.iter().all(|l| l.len() == 16));
    }

    #[test]
    fn filling_open_cube_restores_volume() {
        let cube = shapes::unit_cube();
        let faces: Vec<[u32; 3]> = cube
            .faces()
            .iter()
            .filter(|f| {
                !f.iter().all(|&v| cube.vertices()[v as usize].z.abs() < 1e-12)
            })
            .copied()
            .collect();
        let open = TriangleMesh::new(cube.vertices().to_vec(), faces).unwrap();
        let filled = open.fill_holes();
        assert!(filled.warnings.is_empty());
        assert!(filled.mesh.is_watertight());
        assert_relative_eq!(filled.mesh.signed_volume().unwrap(), 1.0, epsilon = 1e-12);
    }

    #[test]
    fn filling_closed_mesh_is_identity() {
        let cube = shapes::unit_cube();
        let filled = cube.fill_holes();
        assert_eq!(filled.mesh.vertex_count(), cube.vertex_count());
        assert_eq!(filled.mesh.face_count(), cube.face_count());
    }

    #[test]
    fn capped_cylinder_volume_close_to_analytic() {
        let (r, h) = (0.5, 2.0);
        let cyl = shapes::open_cylinder(r, h, 64);
        let filled = cyl.fill_holes().mesh;
        assert!(filled.is_watertight());
        let analytic = std::f64::consts::PI * r * r * h;
        let got = filled.signed_volume().unwrap();
        assert!(
            (got - analytic).abs() / analytic < 0.02,
            "volume {got} vs analytic {analytic}"
        );
    }
}
