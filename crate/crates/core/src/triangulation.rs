//! Unimodular triangulations of lattice polygons, stars of lattice points and
//! canonical keys of triangulated polygons.

use std::collections::HashMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::geom;
use crate::lattice::{canonical_maps, cross, lattice_points, Equiaffinity, LatticePoint, LatticePolygon};

/// Index triple into the sorted lattice points, stored in increasing order.
pub type Tri = [usize; 3];

/// Largest number of lattice points supported by index-mask algorithms.
pub const MAX_POINTS: usize = 128;

/// A set of triangles on the lattice points of a polygon.
///
/// Construction only checks indices; [`validate`] checks that the triangles
/// form a unimodular triangulation.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Triangulation {
    polygon: LatticePolygon,
    points: Vec<LatticePoint>,
    triangles: Vec<Tri>,
}

impl Triangulation {
    /// Builds a triangulation from index triples; triples are sorted and the
    /// list is sorted, so equal triangulations compare equal.
    pub fn new(polygon: LatticePolygon, triangles: Vec<[usize; 3]>) -> Result<Self> {
        let points = lattice_points(&polygon);
        if points.len() > MAX_POINTS {
            return Err(Error::TooManyPoints(points.len()));
        }
        let mut tris = Vec::with_capacity(triangles.len());
        for mut t in triangles {
            if let Some(&index) = t.iter().find(|&&i| i >= points.len()) {
                return Err(Error::IndexOutOfRange { index, len: points.len() });
            }
            t.sort_unstable();
            tris.push(t);
        }
        tris.sort_unstable();
        Ok(Self { polygon, points, triangles: tris })
    }

    /// Builds a triangulation from triangles given by their vertices.
    pub fn from_point_triangles(polygon: LatticePolygon, triangles: &[[LatticePoint; 3]]) -> Result<Self> {
        let points = lattice_points(&polygon);
        let index = |p: LatticePoint| points.binary_search(&p).map_err(|_| Error::PointNotInPolygon(p));
        let tris =
            triangles.iter().map(|t| Ok([index(t[0])?, index(t[1])?, index(t[2])?])).collect::<Result<Vec<_>>>()?;
        Self::new(polygon, tris)
    }

    pub fn polygon(&self) -> &LatticePolygon {
        &self.polygon
    }

    /// Lattice points of the polygon in lexicographic order.
    pub fn points(&self) -> &[LatticePoint] {
        &self.points
    }

    pub fn triangles(&self) -> &[Tri] {
        &self.triangles
    }

    pub fn len(&self) -> usize {
        self.triangles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.triangles.is_empty()
    }

    pub fn point_index(&self, p: LatticePoint) -> Option<usize> {
        self.points.binary_search(&p).ok()
    }

    /// Vertices of a triangle, counter-clockwise.
    pub fn triangle_points(&self, t: &Tri) -> [LatticePoint; 3] {
        geom::ccw3([self.points[t[0]], self.points[t[1]], self.points[t[2]]])
    }

    /// Interior edges as index pairs `(i, j)` with `i < j`, with the two
    /// triangles sharing them.
    pub fn interior_edges(&self) -> Vec<((usize, usize), usize, usize)> {
        let mut by_edge: HashMap<(usize, usize), Vec<usize>> = HashMap::new();
        for (ti, t) in self.triangles.iter().enumerate() {
            for (a, b) in [(t[0], t[1]), (t[0], t[2]), (t[1], t[2])] {
                by_edge.entry((a, b)).or_default().push(ti);
            }
        }
        let mut out: Vec<_> =
            by_edge.into_iter().filter(|(_, ts)| ts.len() == 2).map(|(e, ts)| (e, ts[0], ts[1])).collect();
        out.sort_unstable();
        out
    }

    /// Triangles as point triples after applying `f`, sorted.
    pub(crate) fn image(&self, f: impl Fn(LatticePoint) -> LatticePoint) -> Vec<[LatticePoint; 3]> {
        let mut out: Vec<[LatticePoint; 3]> = self
            .triangles
            .iter()
            .map(|t| {
                let mut v = [f(self.points[t[0]]), f(self.points[t[1]]), f(self.points[t[2]])];
                v.sort_unstable();
                v
            })
            .collect();
        out.sort_unstable();
        out
    }

    /// The triangulation transported along an equiaffinity.
    pub fn apply(&self, t: &Equiaffinity) -> Self {
        let polygon = crate::lattice::apply(t, &self.polygon);
        let tris = self.image(|p| t.apply_point(p));
        Self::from_point_triangles(polygon, &tris).expect("equiaffinity preserves lattice points")
    }

    /// The mirror image under `(x, y) -> (-x, y)`.
    pub fn mirrored(&self) -> Self {
        let polygon = self.polygon.mirrored();
        let tris = self.image(|p| LatticePoint::new(-p.x, p.y));
        Self::from_point_triangles(polygon, &tris).expect("reflection preserves lattice points")
    }

    pub fn is_valid(&self) -> bool {
        validate(self).is_ok()
    }
}

impl fmt::Display for Triangulation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.polygon)?;
        for t in &self.triangles {
            write!(f, " [{} {} {}]", self.points[t[0]], self.points[t[1]], self.points[t[2]])?;
        }
        Ok(())
    }
}

/// Checks the triangulation invariants, reporting the first violation.
///
/// Order of checks: distinct vertices, unimodularity, triangle count equal to
/// the normalized area, no repeated triangle, pairwise disjoint interiors,
/// every lattice point used. Together these imply that the triangles cover
/// the polygon and meet face to face.
pub fn validate(d: &Triangulation) -> Result<()> {
    let bad = |m: String| Err(Error::InvalidTriangulation(m));
    for t in &d.triangles {
        if t[0] == t[1] || t[1] == t[2] {
            return bad(format!("triangle {t:?} repeats a vertex"));
        }
        let [a, b, c] = d.triangle_points(t);
        let area = cross(a, b, c);
        if area != 1 {
            return bad(format!("triangle {a} {b} {c} has normalized area {area}, not 1"));
        }
    }
    let area = d.polygon.normalized_area();
    if d.triangles.len() as i64 != area {
        return bad(format!("{} triangles but normalized area {area}", d.triangles.len()));
    }
    for w in d.triangles.windows(2) {
        if w[0] == w[1] {
            return bad(format!("triangle {:?} listed twice", w[0]));
        }
    }
    let pts: Vec<[LatticePoint; 3]> = d.triangles.iter().map(|t| d.triangle_points(t)).collect();
    for i in 0..pts.len() {
        for j in i + 1..pts.len() {
            if !geom::interiors_disjoint(&pts[i], &pts[j]) {
                let (a, b) = (&pts[i], &pts[j]);
                return bad(format!("triangles {} {} {} and {} {} {} overlap", a[0], a[1], a[2], b[0], b[1], b[2]));
            }
        }
    }
    let mut used = vec![false; d.points.len()];
    for t in &d.triangles {
        for &i in t {
            used[i] = true;
        }
    }
    if let Some(i) = used.iter().position(|u| !u) {
        return bad(format!("lattice point {} is not a vertex", d.points[i]));
    }
    Ok(())
}

/// All unimodular triangulations of `p`, each once, sorted by triangle list.
///
/// The uncovered region is tracked by its boundary, a set of directed unit
/// edges with the region on the left. The smallest boundary edge is covered by
/// every unimodular triangle that fits inside the region; results are
/// memoized on the boundary.
pub fn enumerate_triangulations(p: &LatticePolygon) -> Result<Vec<Triangulation>> {
    let points = lattice_points(p);
    if points.len() > MAX_POINTS {
        return Err(Error::TooManyPoints(points.len()));
    }
    let mut frontier = Vec::new();
    for (a, b) in p.edges() {
        let seg = crate::lattice::segment_points(a, b);
        for w in seg.windows(2) {
            let i = points.binary_search(&w[0]).expect("boundary point");
            let j = points.binary_search(&w[1]).expect("boundary point");
            frontier.push((i, j));
        }
    }
    frontier.sort_unstable();
    let mut e = Enumerator { points: &points, memo: HashMap::new() };
    let all = e.solve(frontier);
    let mut out: Vec<Triangulation> =
        all.iter().map(|tris| Triangulation::new(p.clone(), tris.clone()).expect("indices in range")).collect();
    out.sort_by(|a, b| a.triangles.cmp(&b.triangles));
    Ok(out)
}

type Frontier = Vec<(usize, usize)>;

struct Enumerator<'a> {
    points: &'a [LatticePoint],
    memo: HashMap<Frontier, std::rc::Rc<Vec<Vec<Tri>>>>,
}

impl Enumerator<'_> {
    fn solve(&mut self, frontier: Frontier) -> std::rc::Rc<Vec<Vec<Tri>>> {
        if frontier.is_empty() {
            return std::rc::Rc::new(vec![Vec::new()]);
        }
        if let Some(r) = self.memo.get(&frontier) {
            return r.clone();
        }
        let (ia, ib) = frontier[0];
        let (a, b) = (self.points[ia], self.points[ib]);
        let mut results = Vec::new();
        for (ic, &c) in self.points.iter().enumerate() {
            if cross(a, b, c) != 1 {
                continue;
            }
            let tri = [a, b, c];
            let blocked =
                frontier[1..].iter().any(|&(u, v)| geom::segment_meets_interior(self.points[u], self.points[v], &tri));
            if blocked {
                continue;
            }
            let mut next: Frontier = frontier[1..].to_vec();
            for (u, v) in [(ib, ic), (ic, ia)] {
                // A triangle edge already on the boundary is glued shut;
                // otherwise it becomes boundary with the region on the other side.
                if let Some(pos) = next.iter().position(|&e| e == (u, v)) {
                    next.remove(pos);
                } else {
                    next.push((v, u));
                }
            }
            next.sort_unstable();
            let sub = self.solve(next);
            let mut t = [ia, ib, ic];
            t.sort_unstable();
            for rest in sub.iter() {
                let mut full = Vec::with_capacity(rest.len() + 1);
                full.push(t);
                full.extend_from_slice(rest);
                results.push(full);
            }
        }
        let r = std::rc::Rc::new(results);
        self.memo.insert(frontier, r.clone());
        r
    }
}

/// The triangles of a triangulation covering a lattice point.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Star {
    pub point: LatticePoint,
    pub triangles: Vec<Tri>,
    /// The union of the triangles when it is convex.
    pub hull: Option<LatticePolygon>,
}

impl Star {
    pub fn degree(&self) -> usize {
        self.triangles.len()
    }
}

/// The star of `p` in `d`.
pub fn star(d: &Triangulation, p: LatticePoint) -> Result<Star> {
    let ip = d.point_index(p).ok_or(Error::PointNotInPolygon(p))?;
    let triangles: Vec<Tri> = d.triangles.iter().filter(|t| t.contains(&ip)).copied().collect();
    let vertices: Vec<LatticePoint> = triangles.iter().flat_map(|t| t.iter().map(|&i| d.points[i])).collect();
    // The union is convex exactly when its hull has the same area.
    let hull = LatticePolygon::hull(&vertices).ok().filter(|h| h.normalized_area() == triangles.len() as i64);
    Ok(Star { point: p, triangles, hull })
}

/// Canonical key of a triangulated polygon: the sorted triangle list of the
/// canonical image, minimized over all equiaffinities onto the canonical form
/// (and over reflections when `reflections` is set).
pub fn canonical_key(d: &Triangulation, reflections: bool) -> Vec<[LatticePoint; 3]> {
    let mut best = key_over_maps(d);
    if reflections {
        best = best.min(key_over_maps(&d.mirrored()));
    }
    best
}

fn key_over_maps(d: &Triangulation) -> Vec<[LatticePoint; 3]> {
    let (_, maps) = canonical_maps(&d.polygon);
    maps.iter().map(|t| d.image(|p| t.apply_point(p))).min().expect("at least one map")
}

/// Canonical key of a triangulated polygon with a marked point.
pub fn canonical_pointed_key(
    d: &Triangulation,
    p: LatticePoint,
    reflections: bool,
) -> (LatticePoint, Vec<[LatticePoint; 3]>) {
    let pointed = |d: &Triangulation, p: LatticePoint| {
        let (_, maps) = canonical_maps(&d.polygon);
        maps.iter().map(|t| (t.apply_point(p), d.image(|q| t.apply_point(q)))).min().expect("at least one map")
    };
    let mut best = pointed(d, p);
    if reflections {
        best = best.min(pointed(&d.mirrored(), LatticePoint::new(-p.x, p.y)));
    }
    best
}

/// Number of det = +1 self-equiaffinities of the polygon that also preserve
/// the triangulation.
pub fn symmetry_count(d: &Triangulation) -> usize {
    let (_, maps) = canonical_maps(&d.polygon);
    let images: Vec<_> = maps.iter().map(|t| d.image(|p| t.apply_point(p))).collect();
    images.iter().filter(|k| **k == images[0]).count()
}
