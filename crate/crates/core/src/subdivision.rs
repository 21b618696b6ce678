//! Coarse subdivisions of lattice polygons and the intermediate subdivision
//! built around a convex star.

use std::collections::{BTreeSet, HashMap, VecDeque};

use crate::error::{Error, Result};
use crate::geom;
use crate::lattice::{cross, lattice_length, lattice_points, LatticePoint, LatticePolygon};
use crate::triangulation::{star, Tri, Triangulation};

/// A maximal cell of a subdivision.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cell {
    pub polygon: LatticePolygon,
    /// Triangles of a finer triangulation whose union is the cell, as index
    /// triples into the lattice points of the subdivided polygon.
    pub member_triangles: Option<Vec<Tri>>,
    /// Display name such as `Q_p`, `S_1` or `S_1,1`.
    pub label: Option<String>,
}

impl Cell {
    pub fn new(polygon: LatticePolygon) -> Self {
        Self { polygon, member_triangles: None, label: None }
    }
}

/// A polyhedral subdivision of a lattice polygon into convex lattice cells.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subdivision {
    polygon: LatticePolygon,
    points: Vec<LatticePoint>,
    cells: Vec<Cell>,
}

impl Subdivision {
    /// Builds a subdivision, checking that the cells tile the polygon face to
    /// face and that member triangles fill their cells.
    pub fn new(polygon: LatticePolygon, cells: Vec<Cell>) -> Result<Self> {
        let points = lattice_points(&polygon);
        let bad = |m: String| Err(Error::InvalidSubdivision(m));
        let mut total = 0;
        for c in &cells {
            if let Some(&v) = c.polygon.vertices().iter().find(|&&v| !polygon.contains(v)) {
                return bad(format!("cell vertex {v} lies outside the polygon"));
            }
            total += c.polygon.normalized_area();
            if let Some(members) = &c.member_triangles {
                let mut area = 0;
                for t in members {
                    if let Some(&index) = t.iter().find(|&&i| i >= points.len()) {
                        return Err(Error::IndexOutOfRange { index, len: points.len() });
                    }
                    let tri = geom::ccw3([points[t[0]], points[t[1]], points[t[2]]]);
                    if !tri.iter().all(|&v| c.polygon.contains(v)) {
                        return bad(format!("member triangle {t:?} leaves its cell"));
                    }
                    area += cross(tri[0], tri[1], tri[2]);
                }
                if area != c.polygon.normalized_area() {
                    return bad(format!("member triangles of cell {} do not fill it", c.polygon));
                }
            }
        }
        if total != polygon.normalized_area() {
            return bad(format!("cell areas sum to {total}, polygon has {}", polygon.normalized_area()));
        }
        for (i, a) in cells.iter().enumerate() {
            for b in &cells[i + 1..] {
                let (va, vb) = (a.polygon.vertices(), b.polygon.vertices());
                if !geom::interiors_disjoint(va, vb) {
                    return bad(format!("cells {} and {} overlap", a.polygon, b.polygon));
                }
                for (x, y) in [(a, b), (b, a)] {
                    if let Some(v) = x
                        .polygon
                        .vertices()
                        .iter()
                        .find(|&&v| y.polygon.on_boundary(v) && !y.polygon.vertices().contains(&v))
                    {
                        return bad(format!("vertex {v} of {} lies inside an edge of {}", x.polygon, y.polygon));
                    }
                }
            }
        }
        Ok(Self { polygon, points, cells })
    }

    /// The subdivision whose cells are the triangles of `d`.
    pub fn from_triangulation(d: &Triangulation) -> Result<Self> {
        let cells = d
            .triangles()
            .iter()
            .map(|t| Cell {
                polygon: LatticePolygon::new(d.triangle_points(t).to_vec()).expect("unimodular triangle"),
                member_triangles: Some(vec![*t]),
                label: None,
            })
            .collect();
        Self::new(d.polygon().clone(), cells)
    }

    /// The trivial subdivision with a single cell.
    pub fn whole(polygon: LatticePolygon) -> Self {
        let cell = Cell::new(polygon.clone());
        Self::new(polygon, vec![cell]).expect("single cell tiles its polygon")
    }

    pub fn polygon(&self) -> &LatticePolygon {
        &self.polygon
    }

    pub fn points(&self) -> &[LatticePoint] {
        &self.points
    }

    pub fn cells(&self) -> &[Cell] {
        &self.cells
    }

    pub fn point_index(&self, p: LatticePoint) -> Option<usize> {
        self.points.binary_search(&p).ok()
    }

    /// Indices of the lattice points of each cell.
    pub fn cell_point_indices(&self, cell: &Cell) -> Vec<usize> {
        lattice_points(&cell.polygon).into_iter().map(|p| self.point_index(p).expect("cell inside polygon")).collect()
    }
}

/// True when `d` refines `d1`: every triangle lies in a cell and every cell is
/// exactly the union of the triangles inside it.
pub fn refine(d1: &Subdivision, d: &Triangulation) -> Result<bool> {
    if d1.polygon() != d.polygon() {
        return Err(Error::PolygonMismatch);
    }
    let mut filled = vec![0i64; d1.cells.len()];
    for t in d.triangles() {
        let tri = d.triangle_points(t);
        match d1.cells.iter().position(|c| tri.iter().all(|&v| c.polygon.contains(v))) {
            Some(i) => filled[i] += cross(tri[0], tri[1], tri[2]),
            None => return Ok(false),
        }
    }
    Ok(d1.cells.iter().zip(&filled).all(|(c, &a)| a == c.polygon.normalized_area()))
}

/// Builds the subdivision containing the convex star of `p` as a cell.
///
/// Every edge of the star hull with lattice length above one that is not on
/// the polygon boundary is covered on its far side by the smallest convex
/// union of triangles of `d` containing the triangles on that edge. New cells
/// are treated the same way, level by level; all other triangles stay as unit
/// cells.
pub fn intermediate_subdivision(d: &Triangulation, p: LatticePoint) -> Result<Subdivision> {
    let s = star(d, p)?;
    let q = s.hull.ok_or_else(|| Error::Precondition(format!("the star of {p} is not convex")))?;
    let tris = d.triangles();
    let tri_pts: Vec<[LatticePoint; 3]> = tris.iter().map(|t| d.triangle_points(t)).collect();
    // owner[i] is the cell holding triangle i.
    let mut owner: Vec<Option<usize>> = vec![None; tris.len()];
    for t in &s.triangles {
        let i = tris.binary_search(t).expect("star triangle");
        owner[i] = Some(0);
    }
    let mut cells = vec![(q.clone(), "Q_p".to_string())];
    let mut children: HashMap<String, usize> = HashMap::new();
    let long_edges = |poly: &LatticePolygon, parent: &str| -> Vec<(LatticePoint, LatticePoint, String)> {
        poly.edges()
            .filter(|&(a, b)| lattice_length(a, b) > 1 && !d.polygon().segment_on_boundary(a, b))
            .map(|(a, b)| (a, b, parent.to_string()))
            .collect()
    };
    let mut queue: VecDeque<_> = long_edges(&q, "Q_p").into();
    while let Some((a, b, parent)) = queue.pop_front() {
        let seeds = far_side_triangles(&tri_pts, a, b);
        let free: Vec<usize> = seeds.iter().copied().filter(|&i| owner[i].is_none()).collect();
        if free.is_empty() {
            continue;
        }
        let k = *children.entry(parent.clone()).and_modify(|k| *k += 1).or_insert(1);
        let label = if parent == "Q_p" { format!("S_{k}") } else { format!("{parent},{k}") };
        if free.len() != seeds.len() {
            return Err(Error::AlgorithmFailure(format!("cell {label} would overlap an existing cell along {a}-{b}")));
        }
        let members = convex_closure(&tri_pts, &free, |i| match owner[i] {
            None => Ok(()),
            Some(0) => {
                Err(Error::AlgorithmFailure(format!("no convex union of triangles meets Q_p exactly in {a}-{b}")))
            }
            Some(_) => Err(Error::AlgorithmFailure(format!("cell {label} would overlap an existing cell"))),
        })?;
        let id = cells.len();
        for &i in &members {
            owner[i] = Some(id);
        }
        let verts: Vec<LatticePoint> = members.iter().flat_map(|&i| tri_pts[i]).collect();
        let poly = LatticePolygon::hull(&verts).expect("union of triangles has area");
        queue.extend(long_edges(&poly, &label));
        cells.push((poly, label));
    }
    let mut out: Vec<Cell> = cells
        .into_iter()
        .enumerate()
        .map(|(id, (polygon, label))| Cell {
            polygon,
            member_triangles: Some((0..tris.len()).filter(|&i| owner[i] == Some(id)).map(|i| tris[i]).collect()),
            label: Some(label),
        })
        .collect();
    for (i, t) in tris.iter().enumerate() {
        if owner[i].is_none() {
            out.push(Cell {
                polygon: LatticePolygon::new(tri_pts[i].to_vec()).expect("unimodular triangle"),
                member_triangles: Some(vec![*t]),
                label: None,
            });
        }
    }
    Subdivision::new(d.polygon().clone(), out).map_err(|e| Error::AlgorithmFailure(e.to_string()))
}

/// Triangles having a unit piece of the segment `a b` as an edge and lying to
/// its right.
fn far_side_triangles(tri_pts: &[[LatticePoint; 3]], a: LatticePoint, b: LatticePoint) -> Vec<usize> {
    let on_line = |v: LatticePoint| {
        let (u, w) = (v - a, v - b);
        cross(a, b, v) == 0 && u.x * w.x + u.y * w.y <= 0
    };
    tri_pts
        .iter()
        .enumerate()
        .filter(|(_, t)| t.iter().filter(|&&v| on_line(v)).count() == 2 && t.iter().any(|&v| cross(a, b, v) < 0))
        .map(|(i, _)| i)
        .collect()
}

/// Grows a set of triangles until its union is convex, adding every triangle
/// that meets the interior of the current hull. `admit` vets each addition.
fn convex_closure(
    tri_pts: &[[LatticePoint; 3]],
    seeds: &[usize],
    admit: impl Fn(usize) -> Result<()>,
) -> Result<Vec<usize>> {
    let mut set: BTreeSet<usize> = seeds.iter().copied().collect();
    loop {
        let verts: Vec<LatticePoint> = set.iter().flat_map(|&i| tri_pts[i]).collect();
        let hull = LatticePolygon::hull(&verts).expect("union of triangles has area");
        if hull.normalized_area() == set.len() as i64 {
            return Ok(set.into_iter().collect());
        }
        let mut added = false;
        for (i, t) in tri_pts.iter().enumerate() {
            if !set.contains(&i) && !geom::interiors_disjoint(t, hull.vertices()) {
                admit(i)?;
                set.insert(i);
                added = true;
            }
        }
        if !added {
            return Err(Error::AlgorithmFailure("convex closure did not grow".into()));
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::pt;
    use crate::triangulation::enumerate_triangulations;

    fn square() -> LatticePolygon {
        LatticePolygon::new(vec![pt(0, 0), pt(1, 0), pt(1, 1), pt(0, 1)]).unwrap()
    }

    #[test]
    fn refine_square() {
        let whole = Subdivision::whole(square());
        let all = enumerate_triangulations(&square()).unwrap();
        for d in &all {
            assert!(refine(&whole, d).unwrap());
        }
        let by_first = Subdivision::from_triangulation(&all[0]).unwrap();
        assert!(refine(&by_first, &all[0]).unwrap());
        assert!(!refine(&by_first, &all[1]).unwrap());
    }

    #[test]
    fn refine_rejects_other_polygon() {
        let tri = LatticePolygon::new(vec![pt(0, 0), pt(1, 0), pt(0, 1)]).unwrap();
        let d = &enumerate_triangulations(&square()).unwrap()[0];
        assert_eq!(refine(&Subdivision::whole(tri), d), Err(Error::PolygonMismatch));
    }

    #[test]
    fn whole_star_gives_single_cell() {
        let hex = LatticePolygon::new(vec![pt(0, 0), pt(1, 0), pt(2, 1), pt(2, 2), pt(1, 2), pt(0, 1)]).unwrap();
        let c = pt(1, 1);
        let d =
            enumerate_triangulations(&hex).unwrap().into_iter().find(|d| star(d, c).unwrap().degree() == 6).unwrap();
        let s = intermediate_subdivision(&d, c).unwrap();
        assert_eq!(s.cells().len(), 1);
        assert_eq!(s.cells()[0].label.as_deref(), Some("Q_p"));
    }

    #[test]
    fn t_junction_rejected() {
        let p = |v: &[(i64, i64)]| Cell::new(LatticePolygon::new(v.iter().map(|&(x, y)| pt(x, y)).collect()).unwrap());
        let big = LatticePolygon::new(vec![pt(0, 0), pt(2, 0), pt(2, 2), pt(0, 2)]).unwrap();
        let tl = p(&[(0, 1), (1, 1), (1, 2), (0, 2)]);
        let tr = p(&[(1, 1), (2, 1), (2, 2), (1, 2)]);
        let bottom = p(&[(0, 0), (2, 0), (2, 1), (0, 1)]);
        let err = Subdivision::new(big.clone(), vec![bottom, tl.clone(), tr.clone()]).unwrap_err();
        assert!(err.to_string().contains("inside an edge"), "{err}");
        let bl = p(&[(0, 0), (1, 0), (1, 1), (0, 1)]);
        let br = p(&[(1, 0), (2, 0), (2, 1), (1, 1)]);
        assert!(Subdivision::new(big, vec![bl, br, tl, tr]).is_ok());
    }
}
