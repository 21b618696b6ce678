//! Exact predicates on convex lattice polygons given as counter-clockwise vertex lists.

use crate::lattice::{cross, LatticePoint};

/// True when the interiors of two convex polygons are disjoint.
pub(crate) fn interiors_disjoint(a: &[LatticePoint], b: &[LatticePoint]) -> bool {
    separated_by_edge_of(a, b) || separated_by_edge_of(b, a)
}

fn separated_by_edge_of(a: &[LatticePoint], b: &[LatticePoint]) -> bool {
    let n = a.len();
    (0..n).any(|i| {
        let (u, v) = (a[i], a[(i + 1) % n]);
        b.iter().all(|&w| cross(u, v, w) <= 0)
    })
}

/// True when the closed segment `u v` meets the interior of a convex polygon.
pub(crate) fn segment_meets_interior(u: LatticePoint, v: LatticePoint, poly: &[LatticePoint]) -> bool {
    let n = poly.len();
    for i in 0..n {
        let (a, b) = (poly[i], poly[(i + 1) % n]);
        if cross(a, b, u) <= 0 && cross(a, b, v) <= 0 {
            return false;
        }
    }
    let sides: Vec<i64> = poly.iter().map(|&w| cross(u, v, w)).collect();
    !(sides.iter().all(|&s| s >= 0) || sides.iter().all(|&s| s <= 0))
}

/// Orders three points counter-clockwise.
pub(crate) fn ccw3(mut t: [LatticePoint; 3]) -> [LatticePoint; 3] {
    if cross(t[0], t[1], t[2]) < 0 {
        t.swap(1, 2);
    }
    t
}
