//! Regularity of triangulations and subdivisions as exact LP feasibility of
//! the strict convexity system of a lifting function.

use std::borrow::Cow;
use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num::{BigInt, BigRational, One, Signed, Zero};

use crate::error::{Error, Result};
use crate::lattice::{cross, lattice_length, lattice_points, LatticePoint, LatticePolygon};
use crate::simplex::{maximize, LpOutcome};
use crate::subdivision::{refine, Cell, Subdivision};
use crate::triangulation::Triangulation;

/// Exact rational heights on the lattice points of a polygon.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LiftingFunction {
    pub heights: BTreeMap<LatticePoint, BigRational>,
}

impl LiftingFunction {
    pub fn get(&self, p: LatticePoint) -> Option<&BigRational> {
        self.heights.get(&p)
    }

    /// Heights in the lexicographic order of `points`.
    fn values(&self, points: &[LatticePoint]) -> Option<Vec<BigRational>> {
        points.iter().map(|p| self.heights.get(p).cloned()).collect()
    }

    fn from_values(points: &[LatticePoint], values: Vec<BigRational>) -> Self {
        Self { heights: points.iter().copied().zip(values).collect() }
    }

    /// Adds a constant so that the smallest height is zero.
    fn shifted_to_zero(mut self) -> Self {
        if let Some(min) = self.heights.values().min().cloned() {
            for v in self.heights.values_mut() {
                *v -= &min;
            }
        }
        self
    }
}

impl fmt::Display for LiftingFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (p, h) in &self.heights {
            writeln!(f, "{} {} {}", p.x, p.y, rational_string(h))?;
        }
        Ok(())
    }
}

/// Formats a rational as `num/den`, always with a denominator.
pub fn rational_string(r: &BigRational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// Strict inequality `h(apex) > Σ λ_j h(base_j)` across an interior edge.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FoldConstraint {
    pub apex: usize,
    pub base: [usize; 3],
    pub coefficients: [BigRational; 3],
}

/// Equality `h(point) = Σ λ_j h(base_j)` keeping a cell flat.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FlatnessEquality {
    pub point: usize,
    pub base: [usize; 3],
    pub coefficients: [BigRational; 3],
}

/// The convexity system of a subdivision, indexed by its lattice points.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FoldSystem {
    pub points: Vec<LatticePoint>,
    pub folds: Vec<FoldConstraint>,
    pub equalities: Vec<FlatnessEquality>,
}

/// Anything that can be viewed as a subdivision.
pub trait Complex {
    fn as_subdivision(&self) -> Cow<'_, Subdivision>;
}

impl Complex for Subdivision {
    fn as_subdivision(&self) -> Cow<'_, Subdivision> {
        Cow::Borrowed(self)
    }
}

impl Complex for Triangulation {
    fn as_subdivision(&self) -> Cow<'_, Subdivision> {
        Cow::Owned(Subdivision::from_triangulation(self).expect("triangulation cells tile the polygon"))
    }
}

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// Affine coordinates of `q` with respect to the triangle `b`.
fn barycentric(b: [LatticePoint; 3], q: LatticePoint) -> [BigRational; 3] {
    let total = cross(b[0], b[1], b[2]);
    [rat(cross(q, b[1], b[2]), total), rat(cross(b[0], q, b[2]), total), rat(cross(b[0], b[1], q), total)]
}

/// Fold inequalities, one per interior edge, and flatness equalities, one per
/// lattice point beyond the first three of each cell.
pub fn fold_constraints<C: Complex + ?Sized>(c: &C) -> FoldSystem {
    let s = c.as_subdivision();
    let points = s.points().to_vec();
    let idx = |p: LatticePoint| s.point_index(p).expect("cell point in polygon");
    let mut by_edge: HashMap<(LatticePoint, LatticePoint), Vec<usize>> = HashMap::new();
    for (ci, cell) in s.cells().iter().enumerate() {
        for (a, b) in cell.polygon.edges() {
            by_edge.entry((a.min(b), a.max(b))).or_default().push(ci);
        }
    }
    let mut edges: Vec<_> = by_edge.into_iter().filter(|(_, cs)| cs.len() == 2).collect();
    edges.sort();
    let third = |cell: &Cell, u: LatticePoint, v: LatticePoint| {
        *cell.polygon.vertices().iter().find(|&&w| w != u && w != v).expect("cell has a third vertex")
    };
    let folds = edges
        .iter()
        .map(|((u, v), cs)| {
            let (c1, c2) = (&s.cells()[cs[0]], &s.cells()[cs[1]]);
            let w = third(c1, *u, *v);
            let apex = third(c2, *u, *v);
            let base = [*u, *v, w];
            FoldConstraint { apex: idx(apex), base: base.map(idx), coefficients: barycentric(base, apex) }
        })
        .collect();
    let mut equalities = Vec::new();
    for cell in s.cells() {
        let v = cell.polygon.vertices();
        let base = [v[0], v[1], v[2]];
        for q in lattice_points(&cell.polygon) {
            if !base.contains(&q) {
                equalities.push(FlatnessEquality {
                    point: idx(q),
                    base: base.map(idx),
                    coefficients: barycentric(base, q),
                });
            }
        }
    }
    FoldSystem { points, folds, equalities }
}

impl FoldConstraint {
    /// `h(apex) - Σ λ_j h(base_j)`.
    pub fn slack(&self, h: &[BigRational]) -> BigRational {
        let mut s = h[self.apex].clone();
        for (j, l) in self.base.iter().zip(&self.coefficients) {
            s -= l * &h[*j];
        }
        s
    }
}

impl FlatnessEquality {
    pub fn residual(&self, h: &[BigRational]) -> BigRational {
        let mut s = h[self.point].clone();
        for (j, l) in self.base.iter().zip(&self.coefficients) {
            s -= l * &h[*j];
        }
        s
    }
}

/// Outcome of the regularity test.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Regularity {
    /// Optimal fold slack with the cap `t <= 1`; regular iff positive.
    pub slack: BigRational,
    /// Heights with minimum zero whenever the complex is regular.
    pub witness: Option<LiftingFunction>,
}

impl Regularity {
    pub fn is_regular(&self) -> bool {
        self.witness.is_some()
    }
}

/// Decides regularity exactly.
///
/// Maximizes `t <= 1` subject to every fold slack being at least `t`, the
/// flatness equalities, and three vertices of the first cell pinned to zero.
/// The equalities are eliminated first, so the remaining program has the
/// feasible slack basis and a single simplex phase suffices.
pub fn is_regular<C: Complex + ?Sized>(c: &C) -> Regularity {
    let sys = fold_constraints(c);
    let s = c.as_subdivision();
    let v = s.cells()[0].polygon.vertices();
    let pins = [v[0], v[1], v[2]].map(|p| s.point_index(p).expect("vertex"));
    solve(&sys, pins)
}

/// Maximizes the common fold slack with the heights at `pins` fixed to zero.
fn solve(sys: &FoldSystem, pins: [usize; 3]) -> Regularity {
    let n = sys.points.len();
    let zero = BigRational::zero;
    // Equality rows over the heights, pins included.
    let mut eq_rows: Vec<Vec<BigRational>> = Vec::new();
    for p in pins {
        let mut r = vec![zero(); n];
        r[p] = BigRational::one();
        eq_rows.push(r);
    }
    for e in &sys.equalities {
        let mut r = vec![zero(); n];
        r[e.point] += BigRational::one();
        for (j, l) in e.base.iter().zip(&e.coefficients) {
            r[*j] -= l;
        }
        eq_rows.push(r);
    }
    let basis = nullspace(eq_rows, n);
    let m = basis.len();
    if sys.folds.is_empty() {
        let h = vec![zero(); n];
        return Regularity { slack: BigRational::one(), witness: Some(LiftingFunction::from_values(&sys.points, h)) };
    }
    // Fold rows in the reduced variables: a_i · y.
    let reduced: Vec<Vec<BigRational>> = sys
        .folds
        .iter()
        .map(|f| {
            (0..m)
                .map(|k| {
                    let col: Vec<BigRational> = basis[k].clone();
                    f.slack(&col)
                })
                .collect()
        })
        .collect();
    // Variables: t, y⁺ (m), y⁻ (m). Rows: t - a·y⁺ + a·y⁻ <= 0, and t <= 1.
    let width = 1 + 2 * m;
    let mut a = Vec::with_capacity(reduced.len() + 1);
    let mut b = Vec::with_capacity(reduced.len() + 1);
    for r in &reduced {
        let mut row = vec![zero(); width];
        row[0] = BigRational::one();
        for k in 0..m {
            row[1 + k] = -r[k].clone();
            row[1 + m + k] = r[k].clone();
        }
        a.push(row);
        b.push(zero());
    }
    let mut cap = vec![zero(); width];
    cap[0] = BigRational::one();
    a.push(cap);
    b.push(BigRational::one());
    let mut c = vec![zero(); width];
    c[0] = BigRational::one();
    let LpOutcome::Optimal { value, x } = maximize(&a, &b, &c) else {
        unreachable!("t is capped at one");
    };
    if !value.is_positive() {
        return Regularity { slack: value, witness: None };
    }
    let mut h = vec![zero(); n];
    for k in 0..m {
        let yk = &x[1 + k] - &x[1 + m + k];
        if yk.is_zero() {
            continue;
        }
        for (hi, bi) in h.iter_mut().zip(&basis[k]) {
            *hi += &yk * bi;
        }
    }
    let witness = LiftingFunction::from_values(&sys.points, h).shifted_to_zero();
    Regularity { slack: value, witness: Some(witness) }
}

/// Basis of `{h : rows · h = 0}` via reduced row echelon form.
fn nullspace(mut rows: Vec<Vec<BigRational>>, n: usize) -> Vec<Vec<BigRational>> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..n {
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][col].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let piv = rows[r][col].clone();
        for v in rows[r].iter_mut() {
            *v /= &piv;
        }
        let pr = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i != r && !row[col].is_zero() {
                let f = row[col].clone();
                for (v, q) in row.iter_mut().zip(&pr) {
                    *v -= &f * q;
                }
            }
        }
        pivots.push(col);
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    let free: Vec<usize> = (0..n).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![BigRational::zero(); n];
            v[f] = BigRational::one();
            for (i, &pc) in pivots.iter().enumerate() {
                v[pc] = -rows[i][f].clone();
            }
            v
        })
        .collect()
}

/// True when `f` satisfies every fold strictly and every flatness equality.
pub fn check_witness<C: Complex + ?Sized>(c: &C, f: &LiftingFunction) -> bool {
    let sys = fold_constraints(c);
    let Some(h) = f.values(&sys.points) else {
        return false;
    };
    sys.folds.iter().all(|fc| fc.slack(&h).is_positive()) && sys.equalities.iter().all(|e| e.residual(&h).is_zero())
}

/// Flattens a lifting function of `d` over the cell `q`, giving a lifting
/// function of the subdivision made of `q` and the triangles of `d` outside it.
///
/// For each triangle `T` of `d` inside `q`, subtracts the affine function
/// agreeing with `f` on `T`, then sets the heights on `q` to one and the others
/// to one plus the remainder. The first candidate satisfying the coarser folds
/// is returned. When none does (for instance when a long edge of `q` on the
/// boundary carries a fold of zero slack), the coarser system is solved
/// exactly instead; the error means the coarser subdivision is not regular.
pub fn flatten_lifting(f: &LiftingFunction, d: &Triangulation, q: &Cell) -> Result<LiftingFunction> {
    let p = d.polygon();
    for (a, b) in q.polygon.edges() {
        if lattice_length(a, b) > 1 && !p.segment_on_boundary(a, b) {
            return Err(Error::Precondition(format!(
                "cell edge {a}-{b} has length {} and is interior",
                lattice_length(a, b)
            )));
        }
    }
    if !check_witness(d, f) {
        return Err(Error::Precondition("the lifting function does not witness the triangulation".into()));
    }
    let inside: Vec<_> =
        d.triangles().iter().filter(|t| d.triangle_points(t).iter().all(|&v| q.polygon.contains(v))).copied().collect();
    let mut cells =
        vec![Cell { polygon: q.polygon.clone(), member_triangles: Some(inside.clone()), label: q.label.clone() }];
    for t in d.triangles() {
        if !inside.contains(t) {
            cells.push(Cell {
                polygon: LatticePolygon::new(d.triangle_points(t).to_vec()).expect("unimodular triangle"),
                member_triangles: Some(vec![*t]),
                label: None,
            });
        }
    }
    let d1 = Subdivision::new(p.clone(), cells)
        .map_err(|e| Error::Precondition(format!("cell is not a union of triangles: {e}")))?;
    if !refine(&d1, d)? {
        return Err(Error::Precondition("cell is not a union of triangles".into()));
    }
    let h = f.values(d.points()).expect("checked above");
    for t in &inside {
        let tp = d.triangle_points(t);
        let ti = tp.map(|v| d.point_index(v).expect("vertex"));
        let heights: Vec<BigRational> = d
            .points()
            .iter()
            .enumerate()
            .map(|(i, &m)| {
                if q.polygon.contains(m) {
                    BigRational::one()
                } else {
                    let lam = barycentric(tp, m);
                    let plane: BigRational = (0..3).map(|j| &lam[j] * &h[ti[j]]).sum();
                    BigRational::one() + (&h[i] - plane)
                }
            })
            .collect();
        let g = LiftingFunction::from_values(d.points(), heights);
        if check_witness(&d1, &g) {
            return Ok(g.shifted_to_zero());
        }
    }
    if let Some(g) = is_regular(&d1).witness {
        return Ok(g);
    }
    Err(Error::AlgorithmFailure("the subdivision with the flattened cell is not regular".into()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::{pt, LatticePolygon};
    use crate::triangulation::enumerate_triangulations;

    fn square() -> LatticePolygon {
        LatticePolygon::new(vec![pt(0, 0), pt(1, 0), pt(1, 1), pt(0, 1)]).unwrap()
    }

    #[test]
    fn square_diagonals_regular() {
        for d in enumerate_triangulations(&square()).unwrap() {
            let sys = fold_constraints(&d);
            assert_eq!(sys.folds.len(), 1);
            assert!(sys.equalities.is_empty());
            let r = is_regular(&d);
            let w = r.witness.expect("regular");
            assert!(check_witness(&d, &w));
            assert!(w.heights.values().all(|h| !h.is_negative()));
        }
    }

    #[test]
    fn whole_polygon_has_only_equalities() {
        let hex = LatticePolygon::new(vec![pt(0, 0), pt(1, 0), pt(2, 1), pt(2, 2), pt(1, 2), pt(0, 1)]).unwrap();
        let s = Subdivision::whole(hex);
        let sys = fold_constraints(&s);
        assert!(sys.folds.is_empty());
        assert_eq!(sys.equalities.len(), 7 - 3);
        assert!(is_regular(&s).is_regular());
    }

    #[test]
    fn flatten_square() {
        let d = &enumerate_triangulations(&square()).unwrap()[0];
        let f = is_regular(d).witness.unwrap();
        let g = flatten_lifting(&f, d, &Cell::new(square())).unwrap();
        assert!(g.heights.values().all(|h| h.is_zero()));
    }

    #[test]
    fn flatten_single_triangle() {
        let d = &enumerate_triangulations(&square()).unwrap()[0];
        let f = is_regular(d).witness.unwrap();
        let t = d.triangle_points(&d.triangles()[0]);
        let cell = Cell::new(LatticePolygon::new(t.to_vec()).unwrap());
        let g = flatten_lifting(&f, d, &cell).unwrap();
        assert!(check_witness(d, &g));
    }

    #[test]
    fn flatten_rejects_long_interior_edge() {
        let tri = LatticePolygon::new(vec![pt(0, 0), pt(2, 0), pt(0, 2)]).unwrap();
        let d = enumerate_triangulations(&tri).unwrap().into_iter().next().unwrap();
        let f = is_regular(&d).witness.unwrap();
        let cell = Cell::new(LatticePolygon::new(vec![pt(0, 0), pt(2, 0), pt(0, 2)]).unwrap());
        assert!(flatten_lifting(&f, &d, &cell).is_ok());
        let big = LatticePolygon::new(vec![pt(0, 0), pt(3, 0), pt(0, 3)]).unwrap();
        let d = enumerate_triangulations(&big).unwrap().into_iter().find(|d| is_regular(d).is_regular()).unwrap();
        let f = is_regular(&d).witness.unwrap();
        let cell = Cell::new(LatticePolygon::new(vec![pt(0, 0), pt(2, 0), pt(0, 2)]).unwrap());
        assert!(matches!(flatten_lifting(&f, &d, &cell), Err(Error::Precondition(_))));
    }
}
