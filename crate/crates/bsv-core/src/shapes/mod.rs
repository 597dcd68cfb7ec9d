//! Procedural test geometry: boxes, spheres, cylinders, planes, and a
//! capsule-limbed humanoid.

mod humanoid;
mod marching;

pub use humanoid::{humanoid, humanoid_joints, HumanoidParams};
pub use marching::{marching_tetrahedra, GridSpec};

use std::collections::HashMap;

use nalgebra::Point3;

use crate::mesh::TriangleMesh;

/// Regular tetrahedron inscribed in the unit cube.
pub fn tetrahedron() -> TriangleMesh {
    let vertices = vec![
        Point3::new(0.0, 0.0, 0.0),
        Point3::new(1.0, 1.0, 0.0),
        Point3::new(1.0, 0.0, 1.0),
        Point3::new(0.0, 1.0, 1.0),
    ];
    let faces = vec![[0, 2, 1], [0, 1, 3], [0, 3, 2], [1, 2, 3]];
    TriangleMesh::new(vertices, faces).unwrap()
}

/// Axis-aligned unit cube spanning `[0, 1]³`, outward-oriented.
pub fn unit_cube() -> TriangleMesh {
    cuboid_at(Point3::new(0.5, 0.5, 0.5), 1.0, 1.0, 1.0, 1)
}

/// Axis-aligned box of the given extents centered at the origin, each face
/// subdivided into an `n × n` quad grid.
pub fn cuboid(dx: f64, dy: f64, dz: f64, n: usize) -> TriangleMesh {
    cuboid_at(Point3::origin(), dx, dy, dz, n)
}

/// Box centered at `center`. Vertices along shared edges are welded.
pub fn cuboid_at(center: Point3<f64>, dx: f64, dy: f64, dz: f64, n: usize) -> TriangleMesh {
    assert!(n >= 1);
    let half = [dx / 2.0, dy / 2.0, dz / 2.0];
    let mut keys: HashMap<(i64, i64, i64), u32> = HashMap::new();
    let mut vertices = Vec::new();
    let mut faces: Vec<[u32; 3]> = Vec::new();
    // Lattice coordinates in units of 1/(2n) avoid float keys: corner grid
    // points are integers in [-n, n].
    let mut vertex_at = |lat: [i64; 3]| -> u32 {
        *keys.entry((lat[0], lat[1], lat[2])).or_insert_with(|| {
            let p = Point3::new(
                center.x + half[0] * lat[0] as f64 / n as f64,
                center.y + half[1] * lat[1] as f64 / n as f64,
                center.z + half[2] * lat[2] as f64 / n as f64,
            );
            vertices.push(p);
            (vertices.len() - 1) as u32
        })
    };
    // For each face: the fixed axis, its sign, and the two in-plane axes
    // ordered so that u × v points outward.
    let sides: [(usize, i64, usize, usize); 6] = [
        (0, 1, 1, 2),
        (0, -1, 2, 1),
        (1, 1, 2, 0),
        (1, -1, 0, 2),
        (2, 1, 0, 1),
        (2, -1, 1, 0),
    ];
    let ni = n as i64;
    for (axis, sign, ua, va) in sides {
        for iu in -ni..ni {
            for iv in -ni..ni {
                let mut corner = |du: i64, dv: i64| {
                    let mut lat = [0i64; 3];
                    lat[axis] = sign * ni;
                    lat[ua] = iu + du;
                    lat[va] = iv + dv;
                    vertex_at(lat)
                };
                let (a, b, c, d) = (corner(0, 0), corner(1, 0), corner(1, 1), corner(0, 1));
                faces.push([a, b, c]);
                faces.push([a, c, d]);
            }
        }
    }
    TriangleMesh::new(vertices, faces).unwrap()
}

/// Icosphere of radius `r`: an icosahedron subdivided `subdivisions` times
/// with vertices projected onto the sphere.
pub fn icosphere(subdivisions: usize, r: f64) -> TriangleMesh {
    let phi = (1.0 + 5f64.sqrt()) / 2.0;
    let mut vertices: Vec<Point3<f64>> = [
        (-1.0, phi, 0.0),
        (1.0, phi, 0.0),
        (-1.0, -phi, 0.0),
        (1.0, -phi, 0.0),
        (0.0, -1.0, phi),
        (0.0, 1.0, phi),
        (0.0, -1.0, -phi),
        (0.0, 1.0, -phi),
        (phi, 0.0, -1.0),
        (phi, 0.0, 1.0),
        (-phi, 0.0, -1.0),
        (-phi, 0.0, 1.0),
    ]
    .iter()
    .map(|&(x, y, z)| {
        let v = nalgebra::Vector3::new(x, y, z).normalize() * r;
        Point3::from(v)
    })
    .collect();
    let mut faces: Vec<[u32; 3]> = vec![
        [0, 11, 5],
        [0, 5, 1],
        [0, 1, 7],
        [0, 7, 10],
        [0, 10, 11],
        [1, 5, 9],
        [5, 11, 4],
        [11, 10, 2],
        [10, 7, 6],
        [7, 1, 8],
        [3, 9, 4],
        [3, 4, 2],
        [3, 2, 6],
        [3, 6, 8],
        [3, 8, 9],
        [4, 9, 5],
        [2, 4, 11],
        [6, 2, 10],
        [8, 6, 7],
        [9, 8, 1],
    ];
    for _ in 0..subdivisions {
        let mut midpoints: HashMap<(u32, u32), u32> = HashMap::new();
        let mut next = Vec::with_capacity(faces.len() * 4);
        for &[a, b, c] in &faces {
            let mut mid = |i: u32, j: u32| -> u32 {
                let key = (i.min(j), i.max(j));
                *midpoints.entry(key).or_insert_with(|| {
                    let m = nalgebra::center(&vertices[i as usize], &vertices[j as usize]);
                    let v = m.coords.normalize() * r;
                    vertices.push(Point3::from(v));
                    (vertices.len() - 1) as u32
                })
            };
            let (ab, bc, ca) = (mid(a, b), mid(b, c), mid(c, a));
            next.push([a, ab, ca]);
            next.push([b, bc, ab]);
            next.push([c, ca, bc]);
            next.push([ab, bc, ca]);
        }
        faces = next;
    }
    TriangleMesh::new(vertices, faces).unwrap()
}

/// Cylinder side wall without caps; axis along +z from 0 to `h`.
pub fn open_cylinder(r: f64, h: f64, segments: usize) -> TriangleMesh {
    assert!(segments >= 3);
    let mut vertices = Vec::with_capacity(segments * 2);
    for ring in 0..2 {
        let z = h * ring as f64;
        for s in 0..segments {
            let theta = 2.0 * std::f64::consts::PI * s as f64 / segments as f64;
            vertices.push(Point3::new(r * theta.cos(), r * theta.sin(), z));
        }
    }
    let mut faces = Vec::with_capacity(segments * 2);
    let n = segments as u32;
    for s in 0..n {
        let t = (s + 1) % n;
        // Outward orientation: counter-clockwise seen from outside.
        faces.push([s, t, n + s]);
        faces.push([t, n + t, n + s]);
    }
    TriangleMesh::new(vertices, faces).unwrap()
}

/// Flat triangulated grid in the z = 0 plane with `nx × ny` quads of the
/// given spacing.
pub fn grid_plane(nx: usize, ny: usize, spacing: f64) -> TriangleMesh {
    let mut vertices = Vec::with_capacity((nx + 1) * (ny + 1));
    for j in 0..=ny {
        for i in 0..=nx {
            vertices.push(Point3::new(i as f64 * spacing, j as f64 * spacing, 0.0));
        }
    }
    let idx = |i: usize, j: usize| (j * (nx + 1) + i) as u32;
    let mut faces = Vec::with_capacity(nx * ny * 2);
    for j in 0..ny {
        for i in 0..nx {
            faces.push([idx(i, j), idx(i + 1, j), idx(i + 1, j + 1)]);
            faces.push([idx(i, j), idx(i + 1, j + 1), idx(i, j + 1)]);
        }
    }
    TriangleMesh::new(vertices, faces).unwrap()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn cuboid_is_watertight_at_any_subdivision() {
        for n in [1, 3, 12] {
            let m = cuboid(1.0, 2.0, 0.5, n);
            assert!(m.is_watertight(), "n = {n}");
            assert_relative_eq!(m.signed_volume().unwrap(), 1.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn subdivided_cube_face_count() {
        let m = cuboid(1.0, 1.0, 1.0, 12);
        assert_eq!(m.face_count(), 6 * 12 * 12 * 2);
    }

    #[test]
    fn icosphere_counts() {
        let m = icosphere(0, 1.0);
        assert_eq!(m.vertex_count(), 12);
        assert_eq!(m.face_count(), 20);
        let m = icosphere(2, 1.0);
        assert_eq!(m.face_count(), 320);
        assert!(m.is_watertight());
    }
}
