//! Marching tetrahedra over a signed distance field.
//!
//! Each grid cube is split into six tetrahedra sharing the main diagonal;
//! the decomposition uses matching face diagonals on neighboring cubes, so
//! the extracted surface is watertight by construction. Crossing vertices
//! are welded through an edge-keyed cache.

use std::collections::HashMap;

use nalgebra::{Point3, Vector3};

use crate::mesh::TriangleMesh;

/// Sampling lattice for an implicit surface.
#[derive(Debug, Clone, Copy)]
pub struct GridSpec {
    pub origin: Point3<f64>,
    pub spacing: f64,
    /// Cell counts along x, y, z.
    pub cells: [usize; 3],
}

impl GridSpec {
    /// Grid covering `[min, max]` inflated by `margin`, at the given
    /// spacing.
    pub fn covering(min: Point3<f64>, max: Point3<f64>, margin: f64, spacing: f64) -> Self {
        let origin = Point3::new(min.x - margin, min.y - margin, min.z - margin);
        let extent = max - min + Vector3::repeat(2.0 * margin);
        let cells = [
            (extent.x / spacing).ceil() as usize + 1,
            (extent.y / spacing).ceil() as usize + 1,
            (extent.z / spacing).ceil() as usize + 1,
        ];
        Self { origin, spacing, cells }
    }

    fn point(&self, i: usize, j: usize, k: usize) -> Point3<f64> {
        Point3::new(
            self.origin.x + i as f64 * self.spacing,
            self.origin.y + j as f64 * self.spacing,
            self.origin.z + k as f64 * self.spacing,
        )
    }
}

// Corner offsets of a unit cube, indexed 0..8.
const CORNERS: [[usize; 3]; 8] = [
    [0, 0, 0],
    [1, 0, 0],
    [1, 1, 0],
    [0, 1, 0],
    [0, 0, 1],
    [1, 0, 1],
    [1, 1, 1],
    [0, 1, 1],
];

// Six tetrahedra around the main diagonal (corner 0 to corner 6).
const TETS: [[usize; 4]; 6] = [
    [0, 1, 2, 6],
    [0, 2, 3, 6],
    [0, 3, 7, 6],
    [0, 7, 4, 6],
    [0, 4, 5, 6],
    [0, 5, 1, 6],
];

/// Extract the zero level set of `sdf` (negative inside) as a watertight
/// triangle mesh.
pub fn marching_tetrahedra<F: Fn(&Point3<f64>) -> f64>(sdf: F, grid: &GridSpec) -> TriangleMesh {
    let [nx, ny, nz] = grid.cells;
    let (px, py, pz) = (nx + 1, ny + 1, nz + 1);
    let gid = |i: usize, j: usize, k: usize| -> usize { (k * py + j) * px + i };

    let mut values = vec![0.0f64; px * py * pz];
    for k in 0..pz {
        for j in 0..py {
            for i in 0..px {
                let mut v = sdf(&grid.point(i, j, k));
                // Exact zeros would put crossing vertices on grid points,
                // producing coincident vertices with distinct keys.
                if v == 0.0 {
                    v = -1e-12;
                }
                values[gid(i, j, k)] = v;
            }
        }
    }

    let mut cache: HashMap<(usize, usize), u32> = HashMap::new();
    let mut vertices: Vec<Point3<f64>> = Vec::new();
    let mut faces: Vec<[u32; 3]> = Vec::new();

    let mut crossing = |a: usize, b: usize, pa: Point3<f64>, pb: Point3<f64>, va: f64, vb: f64,
                        vertices: &mut Vec<Point3<f64>>|
     -> u32 {
        let key = (a.min(b), a.max(b));
        *cache.entry(key).or_insert_with(|| {
            let t = (va / (va - vb)).clamp(1e-6, 1.0 - 1e-6);
            let p = pa + (pb - pa) * t;
            vertices.push(p);
            (vertices.len() - 1) as u32
        })
    };

    for k in 0..nz {
        for j in 0..ny {
            for i in 0..nx {
                let ids: Vec<usize> = CORNERS
                    .iter()
                    .map(|c| gid(i + c[0], j + c[1], k + c[2]))
                    .collect();
                let pts: Vec<Point3<f64>> = CORNERS
                    .iter()
                    .map(|c| grid.point(i + c[0], j + c[1], k + c[2]))
                    .collect();
                for tet in TETS {
                    let tv = tet.map(|c| values[ids[c]]);
                    let inside: Vec<usize> = (0..4).filter(|&c| tv[c] < 0.0).collect();
                    if inside.is_empty() || inside.len() == 4 {
                        continue;
                    }
                    let outside: Vec<usize> =
                        (0..4).filter(|&c| tv[c] >= 0.0).collect();
                    let mut cross = |ci: usize, co: usize, vs: &mut Vec<Point3<f64>>| {
                        crossing(
                            ids[tet[ci]],
                            ids[tet[co]],
                            pts[tet[ci]],
                            pts[tet[co]],
                            tv[ci],
                            tv[co],
                            vs,
                        )
                    };
                    let mut tris: Vec<[u32; 3]> = Vec::with_capacity(2);
                    match inside.len() {
                        1 => {
                            let a = cross(inside[0], outside[0], &mut vertices);
                            let b = cross(inside[0], outside[1], &mut vertices);
                            let c = cross(inside[0], outside[2], &mut vertices);
                            tris.push([a, b, c]);
                        }
                        3 => {
                            let a = cross(inside[0], outside[0], &mut vertices);
                            let b = cross(inside[1], outside[0], &mut vertices);
                            let c = cross(inside[2], outside[0], &mut vertices);
                            tris.push([a, b, c]);
                        }
                        2 => {
                            let a = cross(inside[0], outside[0], &mut vertices);
                            let b = cross(inside[0], outside[1], &mut vertices);
                            let c = cross(inside[1], outside[1], &mut vertices);
                            let d = cross(inside[1], outside[0], &mut vertices);
                            tris.push([a, b, c]);
                            tris.push([a, c, d]);
                        }
                        _ => unreachable!(),
                    }
                    // Orient each triangle so its normal points toward the
                    // outside corners.
                    let out_ref: Point3<f64> = {
                        let sum = outside
                            .iter()
                            .fold(Vector3::zeros(), |acc, &c| acc + pts[tet[c]].coords);
                        Point3::from(sum / outside.len() as f64)
                    };
                    for t in &mut tris {
                        let (a, b, c) = (
                            vertices[t[0] as usize],
                            vertices[t[1] as usize],
                            vertices[t[2] as usize],
                        );
                        let n = (b - a).cross(&(c - a));
                        let centroid = Point3::from((a.coords + b.coords + c.coords) / 3.0);
                        if n.dot(&(out_ref - centroid)) < 0.0 {
                            t.swap(1, 2);
                        }
                        if t[0] != t[1] && t[1] != t[2] && t[0] != t[2] {
                            faces.push(*t);
                        }
                    }
                }
            }
        }
    }

    TriangleMesh::new(vertices, faces).expect("marching tetrahedra output is consistent")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sphere_is_watertight_and_close_to_analytic() {
        let r = 0.5;
        let sdf = move |p: &Point3<f64>| p.coords.norm() - r;
        let grid = GridSpec::covering(
            Point3::new(-r, -r, -r),
            Point3::new(r, r, r),
            0.1,
            0.05,
        );
        let mesh = marching_tetrahedra(sdf, &grid);
        assert!(mesh.is_watertight());
        let v = mesh.signed_volume().unwrap();
        let exact = 4.0 / 3.0 * std::f64::consts::PI * r.powi(3);
        assert!((v - exact).abs() / exact < 0.02, "volume {v} vs {exact}");
    }

    #[test]
    fn union_of_two_spheres_is_watertight() {
        let sdf = |p: &Point3<f64>| {
            let a = (p - Point3::new(-0.2, 0.0, 0.0)).norm() - 0.4;
            let b = (p - Point3::new(0.2, 0.0, 0.0)).norm() - 0.4;
            a.min(b)
        };
        let grid = GridSpec::covering(
            Point3::new(-0.6, -0.4, -0.4),
            Point3::new(0.6, 0.4, 0.4),
            0.1,
            0.04,
        );
        let mesh = marching_tetrahedra(sdf, &grid);
        assert!(mesh.is_watertight());
        assert!(mesh.signed_volume().unwrap() > 0.0);
    }
}
