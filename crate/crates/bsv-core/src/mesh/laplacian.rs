//! Sparse cotangent Laplacian.
//!
//! Row `i` carries `Σ_j w_ij` on the diagonal and `-w_ij` off-diagonal, so
//! every row sums to zero and constants lie in the kernel. The matrix is
//! symmetric positive semi-definite.

use nalgebra::{Point3, Vector3};

use super::{EdgeWeightMap, MeshError, TriangleMesh};

/// Symmetric graph Laplacian in compressed sparse row form.
#[derive(Debug, Clone)]
pub struct SparseLaplacian {
    n: usize,
    row_offsets: Vec<usize>,
    columns: Vec<u32>,
    values: Vec<f64>,
}

impl SparseLaplacian {
    pub fn dimension(&self) -> usize {
        self.n
    }

    /// Non-zero entries of row `i` as `(column, value)`.
    pub fn row(&self, i: usize) -> impl Iterator<Item = (u32, f64)> + '_ {
        let range = self.row_offsets[i]..self.row_offsets[i + 1];
        self.columns[range.clone()].iter().copied().zip(self.values[range].iter().copied())
    }

    pub fn nnz(&self) -> usize {
        self.values.len()
    }

    /// `L · x` for a per-vertex vector of 3D positions.
    pub fn apply_points(&self, x: &[Point3<f64>]) -> Vec<Vector3<f64>> {
        (0..self.n)
            .map(|i| {
                self.row(i)
                    .fold(Vector3::zeros(), |acc, (j, v)| acc + x[j as usize].coords * v)
            })
            .collect()
    }

    /// `L · x` for a scalar vector.
    pub fn apply(&self, x: &[f64]) -> Vec<f64> {
        (0..self.n)
            .map(|i| self.row(i).map(|(j, v)| x[j as usize] * v).sum())
            .collect()
    }

    pub fn triplets(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        (0..self.n).flat_map(move |i| self.row(i).map(move |(j, v)| (i, j as usize, v)))
    }
}

/// Assemble the Laplacian for `mesh` from precomputed edge weights.
pub fn build_laplacian(
    mesh: &TriangleMesh,
    weights: &EdgeWeightMap,
) -> Result<SparseLaplacian, MeshError> {
    let n = mesh.vertex_count();
    if weights.vertex_count() != n {
        return Err(MeshError::WeightDimensionMismatch {
            weights: weights.vertex_count(),
            vertices: n,
        });
    }
    let mut row_offsets = Vec::with_capacity(n + 1);
    let mut columns = Vec::new();
    let mut values = Vec::new();
    row_offsets.push(0);
    for i in 0..n {
        let neighbors = weights.neighbors(i);
        // Neighbor lists are sorted; insert the diagonal in column order.
        let mut placed = false;
        for &(j, w) in neighbors {
            if !placed && (j as usize) > i {
                columns.push(i as u32);
                values.push(weights.vertex_sum(i));
                placed = true;
            }
            columns.push(j);
            values.push(-w);
        }
        if !placed {
            columns.push(i as u32);
            values.push(weights.vertex_sum(i));
        }
        row_offsets.push(columns.len());
    }
    Ok(SparseLaplacian { n, row_offsets, columns, values })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mesh::weights::cotangent_weights;
    use crate::shapes;
    use approx::assert_relative_eq;
    use nalgebra::DMatrix;

    fn dense(l: &SparseLaplacian) -> DMatrix<f64> {
        let mut m = DMatrix::zeros(l.dimension(), l.dimension());
        for (i, j, v) in l.triplets() {
            m[(i, j)] += v;
        }
        m
    }

    #[test]
    fn tetrahedron_rows_sum_to_zero() {
        let mesh = shapes::tetrahedron();
        let w = cotangent_weights(&mesh).unwrap();
        let l = build_laplacian(&mesh, &w).unwrap();
        assert_eq!(l.dimension(), 4);
        for i in 0..4 {
            let sum: f64 = l.row(i).map(|(_, v)| v).sum();
            assert!(sum.abs() < 1e-10, "row {i} sums to {sum}");
        }
    }

    #[test]
    fn constants_lie_in_kernel() {
        let mesh = shapes::icosphere(1, 1.0);
        let w = cotangent_weights(&mesh).unwrap();
        let l = build_laplacian(&mesh, &w).unwrap();
        let ones = vec![1.0; l.dimension()];
        for v in l.apply(&ones) {
            assert!(v.abs() < 1e-10);
        }
    }

    #[test]
    fn symmetric() {
        let mesh = shapes::icosphere(1, 1.0);
        let w = cotangent_weights(&mesh).unwrap();
        let l = build_laplacian(&mesh, &w).unwrap();
        let d = dense(&l);
        let asym = (&d - d.transpose()).abs().max();
        assert!(asym < 1e-12);
    }

    #[test]
    fn matches_dense_reference_assembly() {
        // Brute-force double loop over faces, accumulating clamped cotangents
        // into a dense matrix.
        let mesh = shapes::icosphere(1, 1.0);
        let n = mesh.vertex_count();
        let mut reference = DMatrix::zeros(n, n);
        for f in mesh.faces() {
            for k in 0..3 {
                let (a, b, apex) = (f[k] as usize, f[(k + 1) % 3] as usize, f[(k + 2) % 3]);
                let u = mesh.vertices()[a] - mesh.vertices()[apex as usize];
                let v = mesh.vertices()[b] - mesh.vertices()[apex as usize];
                let w = 0.5 * (u.dot(&v) / u.cross(&v).norm()).clamp(-10.0, 10.0);
                reference[(a, b)] -= w;
                reference[(b, a)] -= w;
                reference[(a, a)] += w;
                reference[(b, b)] += w;
            }
        }
        let w = cotangent_weights(&mesh).unwrap();
        let l = build_laplacian(&mesh, &w).unwrap();
        let d = dense(&l);
        assert_relative_eq!(d, reference, epsilon = 1e-12);
    }

    #[test]
    fn interior_vertices_of_planar_mesh_have_zero_laplacian() {
        let mesh = shapes::grid_plane(6, 6, 1.0);
        let w = cotangent_weights(&mesh).unwrap();
        let l = build_laplacian(&mesh, &w).unwrap();
        let applied = l.apply_points(mesh.vertices());
        // Interior vertices of a flat grid: the cotangent Laplacian of the
        // coordinate functions vanishes.
        for (i, row) in applied.iter().enumerate() {
            let p = mesh.vertices()[i];
            let interior = p.x > 0.1 && p.x < 4.9 && p.y > 0.1 && p.y < 4.9;
            if interior {
                assert!(row.norm() < 1e-10, "vertex {i}: |Lp| = {}", row.norm());
            }
        }
    }
}
