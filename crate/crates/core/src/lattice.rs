//! Lattice points, convex lattice polygons, equiaffinities and canonical forms.

use std::collections::BTreeSet;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num::Integer;

use crate::error::{Error, Result};

/// A point of Z².
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LatticePoint {
    pub x: i64,
    pub y: i64,
}

impl LatticePoint {
    pub const fn new(x: i64, y: i64) -> Self {
        Self { x, y }
    }
}

impl fmt::Display for LatticePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

impl Add for LatticePoint {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Self::new(self.x + o.x, self.y + o.y)
    }
}

impl Sub for LatticePoint {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Self::new(self.x - o.x, self.y - o.y)
    }
}

impl Neg for LatticePoint {
    type Output = Self;
    fn neg(self) -> Self {
        Self::new(-self.x, -self.y)
    }
}

impl Mul<LatticePoint> for i64 {
    type Output = LatticePoint;
    fn mul(self, p: LatticePoint) -> LatticePoint {
        LatticePoint::new(self * p.x, self * p.y)
    }
}

/// Shorthand constructor.
pub const fn pt(x: i64, y: i64) -> LatticePoint {
    LatticePoint::new(x, y)
}

/// Determinant of the 2×2 matrix with columns `u`, `v`.
pub fn det(u: LatticePoint, v: LatticePoint) -> i64 {
    u.x * v.y - u.y * v.x
}

/// Twice the signed area of the triangle `o, a, b` (positive when counter-clockwise).
pub fn cross(o: LatticePoint, a: LatticePoint, b: LatticePoint) -> i64 {
    det(a - o, b - o)
}

/// Number of lattice steps on the segment `a b` (its normalized length).
pub fn lattice_length(a: LatticePoint, b: LatticePoint) -> i64 {
    (b.x - a.x).gcd(&(b.y - a.y))
}

/// The lattice points of the closed segment `a b`, starting at `a`.
pub fn segment_points(a: LatticePoint, b: LatticePoint) -> Vec<LatticePoint> {
    let n = lattice_length(a, b);
    if n == 0 {
        return vec![a];
    }
    let step = LatticePoint::new((b.x - a.x) / n, (b.y - a.y) / n);
    (0..=n).map(|i| a + i * step).collect()
}

/// Invariants of a lattice polygon; `P^g(l,d,m)` in the usual notation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct PolygonInvariants {
    /// Interior lattice points.
    pub g: i64,
    /// Number of edges (equal to the number of vertices).
    pub l: i64,
    /// Normalized area.
    pub d: i64,
    /// Maximal lattice length of an edge.
    pub m: i64,
    /// Boundary lattice points.
    pub b: i64,
    /// All lattice points.
    pub n_points: i64,
}

/// A convex lattice polygon with positive area.
///
/// Vertices are stored counter-clockwise, without collinear boundary points,
/// starting at the lexicographically smallest vertex. Two polygons are equal
/// iff they have the same vertex set.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LatticePolygon {
    vertices: Vec<LatticePoint>,
}

impl LatticePolygon {
    /// Builds a polygon from counter-clockwise vertices.
    ///
    /// Rejects fewer than three vertices, repeated or collinear vertices,
    /// clockwise order and non-convex input.
    pub fn new(vertices: Vec<LatticePoint>) -> Result<Self> {
        let n = vertices.len();
        if n < 3 {
            return Err(Error::DegeneratePolygon(format!("{n} vertices, need at least 3")));
        }
        for i in 0..n {
            let (a, b) = (vertices[i], vertices[(i + 1) % n]);
            if a == b {
                return Err(Error::DegeneratePolygon(format!("repeated vertex {a}")));
            }
            for (j, &w) in vertices.iter().enumerate() {
                if j == i || j == (i + 1) % n {
                    continue;
                }
                let c = cross(a, b, w);
                if c == 0 {
                    return Err(Error::DegeneratePolygon(format!("vertex {w} is collinear with edge {a}-{b}")));
                }
                if c < 0 {
                    return Err(Error::DegeneratePolygon(
                        "vertices are not in counter-clockwise convex position".into(),
                    ));
                }
            }
        }
        Ok(Self::from_ccw_unchecked(vertices))
    }

    /// Convex hull of a point set; collinear boundary points are dropped.
    pub fn hull(points: &[LatticePoint]) -> Result<Self> {
        let mut pts: Vec<LatticePoint> = points.to_vec();
        pts.sort();
        pts.dedup();
        if pts.len() < 3 {
            return Err(Error::DegeneratePolygon("fewer than 3 distinct points".into()));
        }
        let mut lower: Vec<LatticePoint> = Vec::new();
        for &p in &pts {
            while lower.len() >= 2 && cross(lower[lower.len() - 2], lower[lower.len() - 1], p) <= 0 {
                lower.pop();
            }
            lower.push(p);
        }
        let mut upper: Vec<LatticePoint> = Vec::new();
        for &p in pts.iter().rev() {
            while upper.len() >= 2 && cross(upper[upper.len() - 2], upper[upper.len() - 1], p) <= 0 {
                upper.pop();
            }
            upper.push(p);
        }
        lower.pop();
        upper.pop();
        lower.extend(upper);
        if lower.len() < 3 {
            return Err(Error::DegeneratePolygon("points are collinear".into()));
        }
        Ok(Self::from_ccw_unchecked(lower))
    }

    pub(crate) fn from_ccw_unchecked(mut vertices: Vec<LatticePoint>) -> Self {
        let start = (0..vertices.len()).min_by_key(|&i| vertices[i]).unwrap_or(0);
        vertices.rotate_left(start);
        Self { vertices }
    }

    pub fn vertices(&self) -> &[LatticePoint] {
        &self.vertices
    }

    /// Directed edges in counter-clockwise order.
    pub fn edges(&self) -> impl Iterator<Item = (LatticePoint, LatticePoint)> + '_ {
        let n = self.vertices.len();
        (0..n).map(move |i| (self.vertices[i], self.vertices[(i + 1) % n]))
    }

    /// Twice the Euclidean area.
    pub fn normalized_area(&self) -> i64 {
        let v = &self.vertices;
        (1..v.len() - 1).map(|i| cross(v[0], v[i], v[i + 1])).sum()
    }

    pub fn boundary_count(&self) -> i64 {
        self.edges().map(|(a, b)| lattice_length(a, b)).sum()
    }

    pub fn interior_count(&self) -> i64 {
        // Pick: d = 2g + B - 2.
        (self.normalized_area() - self.boundary_count() + 2) / 2
    }

    /// Closed containment.
    pub fn contains(&self, p: LatticePoint) -> bool {
        self.edges().all(|(a, b)| cross(a, b, p) >= 0)
    }

    pub fn strictly_contains(&self, p: LatticePoint) -> bool {
        self.edges().all(|(a, b)| cross(a, b, p) > 0)
    }

    pub fn on_boundary(&self, p: LatticePoint) -> bool {
        self.contains(p) && !self.strictly_contains(p)
    }

    /// True when the segment `a b` lies on the boundary.
    pub fn segment_on_boundary(&self, a: LatticePoint, b: LatticePoint) -> bool {
        self.edges().any(|(u, v)| cross(u, v, a) == 0 && cross(u, v, b) == 0)
    }

    pub fn bounding_box(&self) -> (LatticePoint, LatticePoint) {
        let xs = self.vertices.iter().map(|p| p.x);
        let ys = self.vertices.iter().map(|p| p.y);
        (pt(xs.clone().min().unwrap(), ys.clone().min().unwrap()), pt(xs.max().unwrap(), ys.max().unwrap()))
    }

    pub fn translated(&self, v: LatticePoint) -> Self {
        Self::from_ccw_unchecked(self.vertices.iter().map(|&p| p + v).collect())
    }

    /// Image under `(x, y) -> (-x, y)`. Not an equiaffinity.
    pub fn mirrored(&self) -> Self {
        Self::from_ccw_unchecked(self.vertices.iter().rev().map(|p| pt(-p.x, p.y)).collect())
    }

    /// True when every vertex cone is unimodular.
    pub fn is_smooth(&self) -> bool {
        self.first_singular_vertex().is_none()
    }

    pub(crate) fn first_singular_vertex(&self) -> Option<LatticePoint> {
        let v = &self.vertices;
        let n = v.len();
        (0..n).map(|i| (v[(i + n - 1) % n], v[i], v[(i + 1) % n])).find_map(|(prev, cur, next)| {
            let e1 = primitive(next - cur);
            let e2 = primitive(prev - cur);
            (det(e1, e2).abs() != 1).then_some(cur)
        })
    }
}

fn primitive(v: LatticePoint) -> LatticePoint {
    let g = v.x.gcd(&v.y);
    pt(v.x / g, v.y / g)
}

impl fmt::Display for LatticePolygon {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.vertices.iter().map(|p| p.to_string()).collect();
        write!(f, "[{}]", parts.join(", "))
    }
}

/// All lattice points of `p`, sorted by `(x, y)`.
pub fn lattice_points(p: &LatticePolygon) -> Vec<LatticePoint> {
    let (lo, hi) = p.bounding_box();
    let mut out = Vec::new();
    for x in lo.x..=hi.x {
        for y in lo.y..=hi.y {
            let q = pt(x, y);
            if p.contains(q) {
                out.push(q);
            }
        }
    }
    out
}

/// Computes `g, l, d, m, B` and the point count, checking Pick's identity.
pub fn invariants(p: &LatticePolygon) -> PolygonInvariants {
    let pts = lattice_points(p);
    let b = pts.iter().filter(|&&q| p.on_boundary(q)).count() as i64;
    let n_points = pts.len() as i64;
    let g = n_points - b;
    let d = p.normalized_area();
    debug_assert_eq!(d, 2 * g + b - 2, "Pick identity");
    debug_assert_eq!(b, p.boundary_count());
    PolygonInvariants {
        g,
        l: p.vertices().len() as i64,
        d,
        m: p.edges().map(|(a, b)| lattice_length(a, b)).max().unwrap_or(0),
        b,
        n_points,
    }
}

/// Number of lattice points of the dilate `tP`, counted directly.
pub fn ehrhart_count(p: &LatticePolygon, t: u64) -> u64 {
    if t == 0 {
        return 1;
    }
    let t = t as i64;
    let dilate = LatticePolygon::from_ccw_unchecked(p.vertices().iter().map(|&v| t * v).collect());
    lattice_points(&dilate).len() as u64
}

/// An integral affine map `x -> M x + t` with `det M = 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Equiaffinity {
    matrix: [[i64; 2]; 2],
    translation: LatticePoint,
}

impl Equiaffinity {
    pub fn new(matrix: [[i64; 2]; 2], translation: LatticePoint) -> Result<Self> {
        let d = matrix[0][0] * matrix[1][1] - matrix[0][1] * matrix[1][0];
        if d != 1 {
            return Err(Error::NotUnimodular(d));
        }
        Ok(Self { matrix, translation })
    }

    pub fn identity() -> Self {
        Self { matrix: [[1, 0], [0, 1]], translation: pt(0, 0) }
    }

    pub fn translation(v: LatticePoint) -> Self {
        Self { matrix: [[1, 0], [0, 1]], translation: v }
    }

    pub fn matrix(&self) -> [[i64; 2]; 2] {
        self.matrix
    }

    pub fn offset(&self) -> LatticePoint {
        self.translation
    }

    pub fn apply_point(&self, p: LatticePoint) -> LatticePoint {
        let m = &self.matrix;
        pt(m[0][0] * p.x + m[0][1] * p.y, m[1][0] * p.x + m[1][1] * p.y) + self.translation
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Self) -> Self {
        let (a, b) = (&self.matrix, &other.matrix);
        let mut m = [[0; 2]; 2];
        for (i, row) in m.iter_mut().enumerate() {
            for (j, cell) in row.iter_mut().enumerate() {
                *cell = a[i][0] * b[0][j] + a[i][1] * b[1][j];
            }
        }
        let lin = Self { matrix: self.matrix, translation: pt(0, 0) };
        Self { matrix: m, translation: lin.apply_point(other.translation) + self.translation }
    }

    pub fn inverse(&self) -> Self {
        let m = &self.matrix;
        let inv = [[m[1][1], -m[0][1]], [-m[1][0], m[0][0]]];
        let lin = Self { matrix: inv, translation: pt(0, 0) };
        Self { matrix: inv, translation: -lin.apply_point(self.translation) }
    }
}

/// Image of a polygon under an equiaffinity.
pub fn apply(t: &Equiaffinity, p: &LatticePolygon) -> LatticePolygon {
    // det = 1 keeps the orientation, so the image is still counter-clockwise.
    LatticePolygon::from_ccw_unchecked(p.vertices().iter().map(|&v| t.apply_point(v)).collect())
}

fn floor_div(a: i64, b: i64) -> i64 {
    Integer::div_floor(&a, &b)
}

/// The equiaffinity sending the directed edge `q1 -> q2` onto `(0,0) -> (m,0)`,
/// with the polygon above the x-axis and the vertex after `q2` sheared into
/// `0 <= x < y`.
fn x_axis_map(q1: LatticePoint, q2: LatticePoint, next: LatticePoint) -> Equiaffinity {
    let e = q2 - q1;
    let g = e.x.gcd(&e.y);
    let (a, b) = (e.x / g, e.y / g);
    let ext = a.extended_gcd(&b);
    let (u, v) = (ext.x, ext.y);
    debug_assert_eq!(u * a + v * b, 1);
    // [[u, v], [-b, a]] sends (a, b) to (1, 0) and has determinant 1.
    let lin = Equiaffinity { matrix: [[u, v], [-b, a]], translation: pt(0, 0) };
    let base = lin.compose(&Equiaffinity::translation(-q1));
    let w = base.apply_point(next);
    let k = -floor_div(w.x, w.y);
    let shear = Equiaffinity { matrix: [[1, k], [0, 1]], translation: pt(0, 0) };
    shear.compose(&base)
}

/// Canonical representative of the equiaffinity class together with every
/// equiaffinity mapping `p` onto it.
///
/// For each edge of maximal lattice length the x-axis map is applied, the
/// residual shear freedom is fixed by the position of the following vertex and
/// the image is translated into the positive quadrant; the lexicographically
/// smallest vertex list wins.
pub fn canonical_maps(p: &LatticePolygon) -> (LatticePolygon, Vec<Equiaffinity>) {
    let v = p.vertices();
    let n = v.len();
    let m = p.edges().map(|(a, b)| lattice_length(a, b)).max().unwrap_or(0);
    let mut best: Option<LatticePolygon> = None;
    let mut maps = Vec::new();
    for i in 0..n {
        let (q1, q2, next) = (v[i], v[(i + 1) % n], v[(i + 2) % n]);
        if lattice_length(q1, q2) != m {
            continue;
        }
        let t = x_axis_map(q1, q2, next);
        let (lo, _) = apply(&t, p).bounding_box();
        let t = Equiaffinity::translation(-lo).compose(&t);
        let image = apply(&t, p);
        match &best {
            Some(b) if image.vertices() > b.vertices() => {}
            Some(b) if image.vertices() == b.vertices() => maps.push(t),
            _ => {
                best = Some(image);
                maps = vec![t];
            }
        }
    }
    (best.expect("polygon has edges"), maps)
}

/// Distinguished representative of the equiaffinity class of `p`.
pub fn canonical_form(p: &LatticePolygon) -> LatticePolygon {
    canonical_maps(p).0
}

/// Lattice equivalence under equiaffinities (orientation preserving).
pub fn are_equivalent(p: &LatticePolygon, q: &LatticePolygon) -> bool {
    canonical_form(p) == canonical_form(q)
}

/// Equivalence allowing reflections as well.
pub fn are_equivalent_up_to_reflection(p: &LatticePolygon, q: &LatticePolygon) -> bool {
    are_equivalent(p, q) || are_equivalent(&p.mirrored(), q)
}

/// All equiaffinity classes of convex lattice polygons with `g` interior
/// points and normalized area at most `d_max`, as canonical forms sorted by
/// `(d, vertex list)`.
///
/// Every class with `g <= 1` and `d <= d_max` has a representative inside the
/// box `[0, d_max]²`: the known representatives (triangles of height one,
/// trapezia of height one, the triangle with legs two, and the sixteen
/// polygons with one interior point) all have width and height at most `d`.
/// The test suite re-runs small cases in a larger box to confirm nothing is
/// missed.
pub fn enumerate_polygons(g: u32, d_max: u32) -> Vec<LatticePolygon> {
    enumerate_polygons_in_box(g as i64, d_max as i64, d_max as i64)
}

/// Brute-force enumeration over vertex chains inside `[0, side]²`.
pub fn enumerate_polygons_in_box(g: i64, d_max: i64, side: i64) -> Vec<LatticePolygon> {
    let grid: Vec<LatticePoint> = (0..=side).flat_map(|x| (0..=side).map(move |y| pt(x, y))).collect();
    let mut found: BTreeSet<(i64, Vec<LatticePoint>)> = BTreeSet::new();
    for y0 in 0..=side {
        let v0 = pt(0, y0);
        let mut chain = vec![v0];
        extend_chain(&grid, &mut chain, g, d_max, &mut found);
    }
    found.into_iter().map(|(_, v)| LatticePolygon::from_ccw_unchecked(v)).collect()
}

fn pick_interior(area2: i64, boundary: i64) -> i64 {
    (area2 - boundary + 2) / 2
}

fn extend_chain(
    grid: &[LatticePoint],
    chain: &mut Vec<LatticePoint>,
    g: i64,
    d_max: i64,
    found: &mut BTreeSet<(i64, Vec<LatticePoint>)>,
) {
    let v0 = chain[0];
    let k = chain.len();
    if k >= 3 {
        let last = chain[k - 1];
        let closes = cross(chain[k - 2], last, v0) > 0 && cross(last, v0, chain[1]) > 0;
        if closes && chain.iter().map(|p| p.y).min() == Some(0) {
            let poly = LatticePolygon::from_ccw_unchecked(chain.clone());
            if poly.interior_count() == g {
                let c = canonical_form(&poly);
                found.insert((c.normalized_area(), c.vertices().to_vec()));
            }
        }
    }
    for &w in grid {
        if w <= v0 {
            continue;
        }
        if k >= 2 {
            let (a, b) = (chain[k - 2], chain[k - 1]);
            if cross(a, b, w) <= 0 || cross(b, w, v0) <= 0 || cross(v0, chain[1], w) <= 0 {
                continue;
            }
        }
        chain.push(w);
        // The hull of the partial chain lies inside the final polygon.
        let ok = if chain.len() >= 3 {
            let n = chain.len();
            let area: i64 = (1..n - 1).map(|i| cross(chain[0], chain[i], chain[i + 1])).sum();
            let bnd: i64 = (0..n).map(|i| lattice_length(chain[i], chain[(i + 1) % n])).sum();
            area <= d_max && pick_interior(area, bnd) <= g
        } else {
            true
        };
        if ok {
            extend_chain(grid, chain, g, d_max, found);
        }
        chain.pop();
    }
}
