//! Balanced k-d tree over 3D points.
//!
//! Queries are exact: results match a brute-force scan, with distance ties
//! broken by the lowest point index. The tie rule forces traversal to
//! descend when a splitting plane lies at exactly the current best
//! distance, so pruning only uses strict inequality.

use nalgebra::Point3;

use super::CloudError;

const LEAF_SIZE: usize = 24;

#[derive(Debug, Clone)]
enum Node {
    Leaf {
        start: usize,
        end: usize,
    },
    Split {
        axis: usize,
        value: f64,
        left: usize,
        right: usize,
    },
}

/// Immutable spatial index; queries are thread-safe.
#[derive(Debug, Clone)]
pub struct SpatialIndex {
    points: Vec<Point3<f64>>,
    /// Original indices, permuted so each leaf owns a contiguous range.
    order: Vec<u32>,
    nodes: Vec<Node>,
    root: usize,
}

#[inline]
fn dist2(a: &Point3<f64>, b: &Point3<f64>) -> f64 {
    let dx = a.x - b.x;
    let dy = a.y - b.y;
    let dz = a.z - b.z;
    dx * dx + dy * dy + dz * dz
}

impl SpatialIndex {
    pub fn build(points: &[Point3<f64>]) -> Result<Self, CloudError> {
        if points.is_empty() {
            return Err(CloudError::Empty);
        }
        let mut order: Vec<u32> = (0..points.len() as u32).collect();
        let mut nodes = Vec::new();
        let root = Self::split(points, &mut order, 0, points.len(), &mut nodes);
        Ok(Self { points: points.to_vec(), order, nodes, root })
    }

    fn split(
        points: &[Point3<f64>],
        order: &mut [u32],
        start: usize,
        end: usize,
        nodes: &mut Vec<Node>,
    ) -> usize {
        if end - start <= LEAF_SIZE {
            nodes.push(Node::Leaf { start, end });
            return nodes.len() - 1;
        }
        // Split the widest axis at the median.
        let slice = &mut order[start..end];
        let mut min = [f64::INFINITY; 3];
        let mut max = [f64::NEG_INFINITY; 3];
        for &i in slice.iter() {
            let p = &points[i as usize];
            for a in 0..3 {
                min[a] = min[a].min(p[a]);
                max[a] = max[a].max(p[a]);
            }
        }
        let axis = (0..3).max_by(|&a, &b| (max[a] - min[a]).total_cmp(&(max[b] - min[b]))).unwrap();
        let mid = slice.len() / 2;
        slice.select_nth_unstable_by(mid, |&a, &b| {
            points[a as usize][axis].total_cmp(&points[b as usize][axis])
        });
        let value = points[slice[mid] as usize][axis];
        let left = Self::split(points, order, start, start + mid, nodes);
        let right = Self::split(points, order, start + mid, end, nodes);
        nodes.push(Node::Split { axis, value, left, right });
        nodes.len() - 1
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Index and distance of the nearest stored point. Exact ties go to the
    /// lowest index.
    pub fn nearest(&self, q: &Point3<f64>) -> (usize, f64) {
        let mut best = (usize::MAX, f64::INFINITY);
        self.nearest_rec(self.root, q, &mut best);
        (best.0, best.1.sqrt())
    }

    fn nearest_rec(&self, node: usize, q: &Point3<f64>, best: &mut (usize, f64)) {
        match self.nodes[node] {
            Node::Leaf { start, end } => {
                for &i in &self.order[start..end] {
                    let d2 = dist2(q, &self.points[i as usize]);
                    if d2 < best.1 || (d2 == best.1 && (i as usize) < best.0) {
                        *best = (i as usize, d2);
                    }
                }
            }
            Node::Split { axis, value, left, right } => {
                let delta = q[axis] - value;
                let (near, far) = if delta < 0.0 { (left, right) } else { (right, left) };
                self.nearest_rec(near, q, best);
                if delta * delta <= best.1 {
                    self.nearest_rec(far, q, best);
                }
            }
        }
    }

    /// The `k` nearest stored points, sorted by `(distance, index)`.
    ///
    /// `exclude` skips one stored index (used when querying a cloud against
    /// itself). Returns fewer than `k` entries only when the index is too
    /// small.
    pub fn k_nearest(&self, q: &Point3<f64>, k: usize, exclude: Option<usize>) -> Vec<(usize, f64)> {
        if k == 0 {
            return Vec::new();
        }
        let mut heap = BoundedHeap::new(k);
        self.k_nearest_rec(self.root, q, exclude, &mut heap);
        let mut out = heap.into_sorted();
        for entry in &mut out {
            entry.1 = entry.1.sqrt();
        }
        out
    }

    fn k_nearest_rec(
        &self,
        node: usize,
        q: &Point3<f64>,
        exclude: Option<usize>,
        heap: &mut BoundedHeap,
    ) {
        match self.nodes[node] {
            Node::Leaf { start, end } => {
                for &i in &self.order[start..end] {
                    if Some(i as usize) == exclude {
                        continue;
                    }
                    heap.offer(i as usize, dist2(q, &self.points[i as usize]));
                }
            }
            Node::Split { axis, value, left, right } => {
                let delta = q[axis] - value;
                let (near, far) = if delta < 0.0 { (left, right) } else { (right, left) };
                self.k_nearest_rec(near, q, exclude, heap);
                if !heap.full() || delta * delta <= heap.worst_d2() {
                    self.k_nearest_rec(far, q, exclude, heap);
                }
            }
        }
    }
}

/// Fixed-capacity max-heap ordered lexicographically by `(distance², index)`
/// so the worst entry is also the one a tying lower index may displace.
struct BoundedHeap {
    k: usize,
    entries: Vec<(usize, f64)>,
}

impl BoundedHeap {
    fn new(k: usize) -> Self {
        Self { k, entries: Vec::with_capacity(k + 1) }
    }

    fn full(&self) -> bool {
        self.entries.len() == self.k
    }

    fn worst_d2(&self) -> f64 {
        self.entries[0].1
    }

    #[inline]
    fn greater(a: &(usize, f64), b: &(usize, f64)) -> bool {
        a.1 > b.1 || (a.1 == b.1 && a.0 > b.0)
    }

    fn offer(&mut self, index: usize, d2: f64) {
        let cand = (index, d2);
        if self.full() {
            if !Self::greater(&self.entries[0], &cand) {
                return;
            }
            self.entries[0] = cand;
            self.sift_down();
        } else {
            self.entries.push(cand);
            self.sift_up();
        }
    }

    fn sift_up(&mut self) {
        let mut i = self.entries.len() - 1;
        while i > 0 {
            let parent = (i - 1) / 2;
            if Self::greater(&self.entries[i], &self.entries[parent]) {
                self.entries.swap(i, parent);
                i = parent;
            } else {
                break;
            }
        }
    }

    fn sift_down(&mut self) {
        let n = self.entries.len();
        let mut i = 0;
        loop {
            let (l, r) = (2 * i + 1, 2 * i + 2);
            let mut largest = i;
            if l < n && Self::greater(&self.entries[l], &self.entries[largest]) {
                largest = l;
            }
            if r < n && Self::greater(&self.entries[r], &self.entries[largest]) {
                largest = r;
            }
            if largest == i {
                break;
            }
            self.entries.swap(i, largest);
            i = largest;
        }
    }

    fn into_sorted(self) -> Vec<(usize, f64)> {
        let mut v = self.entries;
        v.sort_unstable_by(|a, b| a.1.total_cmp(&b.1).then(a.0.cmp(&b.0)));
        v
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::prelude::*;
    use rand_chacha::ChaCha8Rng;

    fn random_points(n: usize, rng: &mut impl Rng) -> Vec<Point3<f64>> {
        (0..n)
            .map(|_| Point3::new(rng.random::<f64>(), rng.random::<f64>(), rng.random::<f64>()))
            .collect()
    }

    fn brute_nearest(points: &[Point3<f64>], q: &Point3<f64>) -> (usize, f64) {
        let mut best = (usize::MAX, f64::INFINITY);
        for (i, p) in points.iter().enumerate() {
            let d2 = dist2(q, p);
            if d2 < best.1 || (d2 == best.1 && i < best.0) {
                best = (i, d2);
            }
        }
        (best.0, best.1.sqrt())
    }

    #[test]
    fn stored_point_maps_to_itself() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let pts = random_points(100, &mut rng);
        let index = SpatialIndex::build(&pts).unwrap();
        for (i, p) in pts.iter().enumerate() {
            assert_eq!(index.nearest(p).0, i);
        }
    }

    #[test]
    fn equidistant_points_pick_lower_index() {
        let pts = vec![
            Point3::new(1.0, 0.0, 0.0),
            Point3::new(-1.0, 0.0, 0.0),
            Point3::new(0.0, 1.0, 0.0),
        ];
        let index = SpatialIndex::build(&pts).unwrap();
        assert_eq!(index.nearest(&Point3::origin()).0, 0);
    }

    #[test]
    fn matches_brute_force_on_random_queries() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let pts = random_points(1000, &mut rng);
        let index = SpatialIndex::build(&pts).unwrap();
        for _ in 0..1000 {
            let q = Point3::new(rng.random::<f64>(), rng.random::<f64>(), rng.random::<f64>());
            let got = index.nearest(&q);
            let expect = brute_nearest(&pts, &q);
            assert_eq!(got.0, expect.0);
            assert_eq!(got.1, expect.1);
        }
    }

    #[test]
    fn k_nearest_matches_brute_force() {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        let pts = random_points(300, &mut rng);
        let index = SpatialIndex::build(&pts).unwrap();
        for _ in 0..100 {
            let q = Point3::new(rng.random::<f64>(), rng.random::<f64>(), rng.random::<f64>());
            let got = index.k_nearest(&q, 17, None);
            let mut all: Vec<(usize, f64)> =
                pts.iter().enumerate().map(|(i, p)| (i, dist2(&q, p))).collect();
            all.sort_unstable_by(|a, b| a.1.total_cmp(&b.1).then(a.0.cmp(&b.0)));
            let expect: Vec<(usize, f64)> =
                all[..17].iter().map(|&(i, d2)| (i, d2.sqrt())).collect();
            assert_eq!(got, expect);
        }
    }

    #[test]
    fn k_nearest_exclude_self() {
        let pts = vec![
            Point3::new(0.0, 0.0, 0.0),
            Point3::new(1.0, 0.0, 0.0),
            Point3::new(2.0, 0.0, 0.0),
        ];
        let index = SpatialIndex::build(&pts).unwrap();
        let got = index.k_nearest(&pts[0], 2, Some(0));
        assert_eq!(got[0].0, 1);
        assert_eq!(got[1].0, 2);
    }

    #[test]
    fn empty_cloud_is_an_error() {
        assert!(SpatialIndex::build(&[]).is_err());
    }
}
