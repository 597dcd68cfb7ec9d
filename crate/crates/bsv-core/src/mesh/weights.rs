//! Cotangent edge weights.
//!
//! For an interior edge the weight is `w_ij = (cot α_ij + cot β_ij) / 2`
//! over the two angles opposite the edge; boundary edges keep the single
//! available term. Individual cotangents are clamped to survive degenerate
//! slivers.

use std::collections::HashMap;

use nalgebra::Point3;

use super::{MeshError, TriangleMesh};

/// Clamp range for a single cotangent term. Unbounded weights destabilize
/// the linear solve.
pub const COT_CLAMP: f64 = 10.0;

/// Symmetric per-edge weights stored as per-vertex neighbor lists.
#[derive(Debug, Clone)]
pub struct EdgeWeightMap {
    offsets: Vec<usize>,
    neighbors: Vec<(u32, f64)>,
    vertex_sums: Vec<f64>,
}

impl EdgeWeightMap {
    /// Neighbors of `v` with their edge weights, sorted by neighbor index.
    pub fn neighbors(&self, v: usize) -> &[(u32, f64)] {
        &self.neighbors[self.offsets[v]..self.offsets[v + 1]]
    }

    /// Sum of edge weights around `v` (the Laplacian diagonal).
    pub fn vertex_sum(&self, v: usize) -> f64 {
        self.vertex_sums[v]
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_sums.len()
    }

    /// Weight of the undirected edge `(i, j)`, if present.
    pub fn edge_weight(&self, i: u32, j: u32) -> Option<f64> {
        let list = self.neighbors(i as usize);
        list.binary_search_by_key(&j, |&(n, _)| n).ok().map(|k| list[k].1)
    }

    pub fn edge_count(&self) -> usize {
        self.neighbors.len() / 2
    }

    fn from_edge_map(n: usize, edges: &HashMap<(u32, u32), f64>) -> Self {
        let mut adjacency: Vec<Vec<(u32, f64)>> = vec![Vec::new(); n];
        for (&(a, b), &w) in edges {
            adjacency[a as usize].push((b, w));
            adjacency[b as usize].push((a, w));
        }
        let mut offsets = Vec::with_capacity(n + 1);
        let mut neighbors = Vec::with_capacity(edges.len() * 2);
        let mut vertex_sums = Vec::with_capacity(n);
        offsets.push(0);
        for list in adjacency.iter_mut() {
            list.sort_unstable_by_key(|&(v, _)| v);
            vertex_sums.push(list.iter().map(|&(_, w)| w).sum());
            neighbors.extend_from_slice(list);
            offsets.push(neighbors.len());
        }
        Self { offsets, neighbors, vertex_sums }
    }
}

fn clamped_cot(apex: Point3<f64>, a: Point3<f64>, b: Point3<f64>) -> f64 {
    let u = a - apex;
    let v = b - apex;
    let cross = u.cross(&v).norm();
    if cross <= f64::EPSILON {
        return COT_CLAMP;
    }
    (u.dot(&v) / cross).clamp(-COT_CLAMP, COT_CLAMP)
}

/// Cotangent weights for every undirected edge of `mesh`.
///
/// Fails on edges with more than two incident faces.
pub fn cotangent_weights(mesh: &TriangleMesh) -> Result<EdgeWeightMap, MeshError> {
    let mut edges: HashMap<(u32, u32), f64> = HashMap::new();
    let mut face_counts: HashMap<(u32, u32), usize> = HashMap::new();
    for f in mesh.faces() {
        for k in 0..3 {
            let (a, b, apex) = (f[k], f[(k + 1) % 3], f[(k + 2) % 3]);
            let key = (a.min(b), a.max(b));
            let count = face_counts.entry(key).or_insert(0);
            *count += 1;
            if *count > 2 {
                return Err(MeshError::NonManifoldEdge { edge: key, count: *count });
            }
            let cot = clamped_cot(
                mesh.vertices()[apex as usize],
                mesh.vertices()[a as usize],
                mesh.vertices()[b as usize],
            );
            *edges.entry(key).or_insert(0.0) += 0.5 * cot;
        }
    }
    Ok(EdgeWeightMap::from_edge_map(mesh.vertex_count(), &edges))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use nalgebra::Point3;

    fn equilateral() -> TriangleMesh {
        TriangleMesh::new(
            vec![
                Point3::new(0.0, 0.0, 0.0),
                Point3::new(1.0, 0.0, 0.0),
                Point3::new(0.5, 3f64.sqrt() / 2.0, 0.0),
            ],
            vec![[0, 1, 2]],
        )
        .unwrap()
    }

    #[test]
    fn interior_edge_two_60_degree_angles() {
        // Two equilateral triangles sharing the edge (0, 1).
        let mesh = TriangleMesh::new(
            vec![
                Point3::new(0.0, 0.0, 0.0),
                Point3::new(1.0, 0.0, 0.0),
                Point3::new(0.5, 3f64.sqrt() / 2.0, 0.0),
                Point3::new(0.5, -(3f64.sqrt()) / 2.0, 0.0),
            ],
            vec![[0, 1, 2], [1, 0, 3]],
        )
        .unwrap();
        let w = cotangent_weights(&mesh).unwrap();
        assert_relative_eq!(w.edge_weight(0, 1).unwrap(), 0.577350, max_relative = 1e-5);
    }

    #[test]
    fn interior_edge_two_right_angles_is_zero() {
        // Unit square split along the diagonal: both opposite angles are 90°.
        let mesh = TriangleMesh::new(
            vec![
                Point3::new(0.0, 0.0, 0.0),
                Point3::new(1.0, 0.0, 0.0),
                Point3::new(1.0, 1.0, 0.0),
                Point3::new(0.0, 1.0, 0.0),
            ],
            vec![[0, 1, 2], [0, 2, 3]],
        )
        .unwrap();
        let w = cotangent_weights(&mesh).unwrap();
        assert_relative_eq!(w.edge_weight(0, 2).unwrap(), 0.0, epsilon = 1e-12);
    }

    #[test]
    fn boundary_edge_of_equilateral_triangle() {
        let w = cotangent_weights(&equilateral()).unwrap();
        assert_relative_eq!(w.edge_weight(0, 1).unwrap(), 0.288675, max_relative = 1e-5);
    }

    #[test]
    fn non_manifold_edge_is_reported() {
        // Three triangles around one edge.
        let mesh = TriangleMesh::new(
            vec![
                Point3::new(0.0, 0.0, 0.0),
                Point3::new(1.0, 0.0, 0.0),
                Point3::new(0.5, 1.0, 0.0),
                Point3::new(0.5, -1.0, 0.0),
                Point3::new(0.5, 0.0, 1.0),
            ],
            vec![[0, 1, 2], [1, 0, 3], [0, 1, 4]],
        );
        // Directed-edge validation already rejects this configuration.
        assert!(matches!(mesh, Err(MeshError::InconsistentOrientation { .. })));
    }

    #[test]
    fn matches_brute_force_on_icosphere() {
        // Independent per-edge evaluation: for every undirected edge scan all
        // faces for opposite vertices and evaluate the cotangents directly.
        let mesh = crate::shapes::icosphere(2, 1.0);
        let weights = cotangent_weights(&mesh).unwrap();
        for (a, b) in mesh.undirected_edges() {
            let mut expect = 0.0;
            for f in mesh.faces() {
                let has_a = f.contains(&a);
                let has_b = f.contains(&b);
                if has_a && has_b {
                    let apex = *f.iter().find(|&&v| v != a && v != b).unwrap();
                    let u = mesh.vertices()[a as usize] - mesh.vertices()[apex as usize];
                    let v = mesh.vertices()[b as usize] - mesh.vertices()[apex as usize];
                    expect += 0.5 * (u.dot(&v) / u.cross(&v).norm()).clamp(-10.0, 10.0);
                }
            }
            assert_relative_eq!(weights.edge_weight(a, b).unwrap(), expect, epsilon = 1e-12);
        }
    }
}
