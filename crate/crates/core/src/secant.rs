//! Skew k-sets, the secant catalog for surfaces with at most one interior
//! point, singularities of triangulations and the resulting lower bounds.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::lattice::{
    are_equivalent_up_to_reflection, canonical_form, det, invariants, pt, LatticePoint, LatticePolygon,
};
use crate::regularity::is_regular;
use crate::subdivision::intermediate_subdivision;
use crate::triangulation::{canonical_key, canonical_pointed_key, enumerate_triangulations, star, Tri, Triangulation};

/// Binomial coefficient, zero when `k > n` or `n < 0`.
pub fn binomial(n: i64, k: i64) -> u64 {
    if n < 0 || k < 0 || k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i + 1) as u128) as u64
}

/// `k` pairwise vertex-disjoint triangles of a triangulation.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct SkewSet {
    pub triangles: Vec<Tri>,
}

fn masks(d: &Triangulation) -> Vec<u128> {
    d.triangles().iter().map(|t| t.iter().fold(0u128, |m, &i| m | 1u128 << i)).collect()
}

/// Number of skew k-sets; `k = 0` gives one and `k = 1` gives the area.
pub fn count_skew_k_sets(d: &Triangulation, k: usize) -> u64 {
    fn go(masks: &[u128], start: usize, k: usize, used: u128) -> u64 {
        if k == 0 {
            return 1;
        }
        let mut total = 0;
        for i in start..masks.len() {
            if masks.len() - i < k {
                break;
            }
            if masks[i] & used == 0 {
                total += go(masks, i + 1, k - 1, used | masks[i]);
            }
        }
        total
    }
    go(&masks(d), 0, k, 0)
}

/// All skew k-sets in lexicographic order of triangle indices.
pub fn skew_k_sets(d: &Triangulation, k: usize) -> Vec<SkewSet> {
    fn go(masks: &[u128], start: usize, k: usize, used: u128, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if k == 0 {
            out.push(cur.clone());
            return;
        }
        for i in start..masks.len() {
            if masks[i] & used == 0 {
                cur.push(i);
                go(masks, i + 1, k - 1, used | masks[i], cur, out);
                cur.pop();
            }
        }
    }
    let mut out = Vec::new();
    go(&masks(d), 0, k, 0, &mut Vec::new(), &mut out);
    out.into_iter().map(|ix| SkewSet { triangles: ix.into_iter().map(|i| d.triangles()[i]).collect() }).collect()
}

/// Double-point count `(d² − 10d + 5B + 2V − 12) / 2` of a smooth toric surface.
pub fn nu2_toric_smooth(p: &LatticePolygon) -> Result<i64> {
    if let Some(v) = p.first_singular_vertex() {
        return Err(Error::NotSmooth(v));
    }
    let inv = invariants(p);
    let (d, b, v) = (inv.d, inv.b, inv.l);
    Ok((d * d - 10 * d + 5 * b + 2 * v - 12) / 2)
}

/// Secant data of a cataloged surface for one `k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CatalogEntry {
    pub canonical_polygon: LatticePolygon,
    /// Family name: `scroll(a,b)`, `veronese(2)`, `veronese(3)`,
    /// `delpezzo(d)`, `quadric-v2`, `cone-v2`, `quartic` or `cubic`.
    pub family_tag: String,
    pub k: u32,
    /// Dimension of the ambient projective space.
    pub r: i64,
    /// Dimension of the k-secant variety, when the catalog determines it.
    pub dim_sec_k: Option<i64>,
    /// Degree of the k-secant variety, when the catalog determines it.
    pub deg_sec_k: Option<u64>,
    /// `ν_k`, defined exactly when `dim_sec_k = 3k − 1 ≤ r`.
    pub nu_k: Option<u64>,
    /// Why `nu_k` is undefined.
    pub undefined_reason: Option<String>,
}

impl CatalogEntry {
    fn new(p: &LatticePolygon, tag: String, k: u32, r: i64) -> Self {
        Self {
            canonical_polygon: canonical_form(p),
            family_tag: tag,
            k,
            r,
            dim_sec_k: None,
            deg_sec_k: None,
            nu_k: None,
            undefined_reason: None,
        }
    }

    fn with_nu(mut self, nu: u64) -> Self {
        let expected = 3 * self.k as i64 - 1;
        self.dim_sec_k = Some(expected);
        self.deg_sec_k = Some(nu);
        self.nu_k = Some(nu);
        self
    }

    fn fills(mut self) -> Self {
        self.dim_sec_k = Some(self.r);
        self.deg_sec_k = Some(1);
        self.undefined_reason = Some(format!(
            "the {}-secant variety fills the ambient P^{} (3k-1 = {} > r)",
            self.k,
            self.r,
            3 * self.k - 1
        ));
        self
    }

    fn defective(mut self, dim: Option<i64>, deg: Option<u64>, why: &str) -> Self {
        self.dim_sec_k = dim;
        self.deg_sec_k = deg;
        self.undefined_reason = Some(why.to_string());
        self
    }
}

/// Lattice width one: every lattice point on the longest edge line or the
/// next parallel line. Returns `(δ1, δ2)` with `δ1 <= δ2` points counted as
/// lengths of the two lines.
fn scroll_type(p: &LatticePolygon) -> Option<(i64, i64)> {
    let v = p.vertices();
    let n = v.len();
    let (i, len) = (0..n)
        .map(|i| (i, crate::lattice::lattice_length(v[i], v[(i + 1) % n])))
        .max_by_key(|&(i, l)| (l, std::cmp::Reverse(i)))?;
    let e = v[(i + 1) % n] - v[i];
    let g = len.max(1);
    let dir = pt(e.x / g, e.y / g);
    let height = v.iter().map(|&w| det(dir, w - v[i])).max()?;
    if height != 1 {
        return None;
    }
    let inv = invariants(p);
    let other = inv.n_points - (len + 1) - 1;
    Some((other, len))
}

/// Secant data of the surface of `p` for `k ∈ {2, 3}`.
pub fn catalog_lookup(p: &LatticePolygon, k: u32) -> Result<CatalogEntry> {
    if !(2..=3).contains(&k) {
        return Err(Error::Precondition(format!("k = {k}, the catalog covers k = 2 and k = 3")));
    }
    let inv = invariants(p);
    let r = inv.n_points - 1;
    let kk = k as i64;
    let fills_ambient = 3 * kk - 1 > r;
    match inv.g {
        0 => {
            if let Some((d1, d2)) = scroll_type(p) {
                let e = CatalogEntry::new(p, format!("scroll({d1},{d2})"), k, r);
                return Ok(if fills_ambient {
                    e.fills()
                } else if kk <= d1 + 1 {
                    e.with_nu(binomial(inv.d - 2 * kk + 2, kk))
                } else {
                    e.defective(None, None, &format!("the scroll is {k}-defective ({k} > {d1} + 1)"))
                });
            }
            let v2 = LatticePolygon::new(vec![pt(0, 0), pt(2, 0), pt(0, 2)]).expect("triangle");
            if are_equivalent_up_to_reflection(p, &v2) {
                let e = CatalogEntry::new(p, "veronese(2)".into(), k, r);
                return Ok(if k == 2 {
                    e.defective(Some(4), Some(3), "the 2-secant variety is a cubic hypersurface (defective)")
                } else {
                    e.fills()
                });
            }
            Err(Error::NotInCatalog(format!("{p} has no interior point but is not a scroll or V2")))
        }
        1 => {
            let tag = match (inv.d, inv.l, inv.m) {
                (3, _, _) => "cubic".to_string(),
                (4, _, _) => "quartic".to_string(),
                (8, 4, 2) => "quadric-v2".to_string(),
                (8, 3, 4) => "cone-v2".to_string(),
                (9, _, _) => "veronese(3)".to_string(),
                (d, _, _) => format!("delpezzo({d})"),
            };
            let e = CatalogEntry::new(p, tag.clone(), k, r);
            Ok(match (tag.as_str(), k) {
                ("veronese(3)", 2) => e.with_nu(15),
                ("veronese(3)", 3) => e.with_nu(4),
                ("quadric-v2" | "cone-v2", 2) => e.with_nu(10),
                ("quadric-v2" | "cone-v2", 3) => {
                    e.defective(Some(7), Some(4), "the 3-secant variety has dimension 7 (defective)")
                }
                _ if fills_ambient => e.fills(),
                (_, 2) => e.with_nu(binomial(inv.d - 3, 2)),
                // Only the degree 8 del Pezzo reaches r = 8, where Sec_3 is all of P^8.
                (_, _) => e.with_nu(1),
            })
        }
        g => Err(Error::NotInCatalog(format!("{p} has {g} interior points and is not a scroll"))),
    }
}

/// Kind of a singular point of a triangulation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum SingularityKind {
    Rational,
    Elliptic,
}

impl fmt::Display for SingularityKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Rational => "rational",
            Self::Elliptic => "elliptic",
        })
    }
}

/// Row of the rational (`T1`) or elliptic (`T2`) singularity table.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TableRow {
    pub kind: SingularityKind,
    pub row: u32,
}

impl fmt::Display for TableRow {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let t = match self.kind {
            SingularityKind::Rational => 1,
            SingularityKind::Elliptic => 2,
        };
        write!(f, "T{t}.{}", self.row)
    }
}

/// A lattice point whose convex star matches a singularity table row.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SingularityRecord {
    pub point: LatticePoint,
    pub kind: SingularityKind,
    pub degree: usize,
    /// The convex star `Q_p`.
    pub star: LatticePolygon,
    pub table_row: TableRow,
    /// Family of the surface `Z_p`.
    pub family_tag: String,
    pub nu2: Option<u64>,
    pub nu3: Option<u64>,
    /// An intermediate subdivision containing `Q_p` was built and is regular.
    pub d1_exists: bool,
    /// Why the intermediate subdivision is missing, if it is.
    pub d1_error: Option<String>,
}

impl SingularityRecord {
    pub fn nu(&self, k: u32) -> Option<u64> {
        match k {
            2 => self.nu2,
            3 => self.nu3,
            _ => None,
        }
    }
}

/// Pointed fan of a scroll: trapezium with bottom `(0,0)-(b,0)`, top
/// `(0,1)-(a,1)`, marked at `p`.
fn scroll_fan_key(a: i64, b: i64, p: LatticePoint) -> (LatticePoint, Vec<[LatticePoint; 3]>) {
    let mut verts = vec![pt(0, 0), pt(b, 0)];
    if a > 0 {
        verts.push(pt(a, 1));
    }
    verts.push(pt(0, 1));
    let q = LatticePolygon::new(verts).expect("trapezium");
    let fan = fan_triangulation(&q, p);
    canonical_pointed_key(&fan, p, true)
}

/// The triangulation of `q` by triangles through `p`; panics if not unimodular.
fn fan_triangulation(q: &LatticePolygon, p: LatticePoint) -> Triangulation {
    let mut ring: Vec<LatticePoint> = Vec::new();
    for (a, b) in q.edges() {
        let seg = crate::lattice::segment_points(a, b);
        ring.extend_from_slice(&seg[..seg.len() - 1]);
    }
    let n = ring.len();
    let tris: Vec<[LatticePoint; 3]> = (0..n)
        .map(|i| [p, ring[i], ring[(i + 1) % n]])
        .filter(|t| crate::lattice::cross(t[0], t[1], t[2]) != 0)
        .collect();
    Triangulation::from_point_triangles(q.clone(), &tris).expect("fan points lie in the polygon")
}

/// Matches a rational star against the scroll rows.
fn rational_row(fan: &Triangulation, p: LatticePoint) -> Option<(u32, String, Option<u64>, Option<u64>)> {
    let delta = fan.len() as i64;
    if delta < 4 {
        return None;
    }
    let key = canonical_pointed_key(fan, p, true);
    let s1 = key == scroll_fan_key(1, delta - 1, pt(0, 1)) || key == scroll_fan_key(1, delta - 1, pt(1, 1));
    let s2 = key == scroll_fan_key(2, delta - 2, pt(1, 1));
    let nu2 = Some(binomial(delta - 2, 2));
    let row = |small: u32, large: u32| if delta >= 7 { large } else { small };
    match (s1, s2) {
        (true, _) => Some((row(2 * delta as u32 - 7, 7), format!("scroll(1,{})", delta - 1), nu2, None)),
        (_, true) => {
            let nu3 = (delta >= 7).then(|| binomial(delta - 4, 3));
            Some((row(2 * delta as u32 - 6, 8), format!("scroll(2,{})", delta - 2), nu2, nu3))
        }
        _ => None,
    }
}

/// Matches an elliptic star: every polygon with one interior point and
/// degree at least five.
fn elliptic_row(q: &LatticePolygon) -> Option<(u32, String, Option<u64>, Option<u64>)> {
    let inv = invariants(q);
    let tag = catalog_lookup(q, 2).ok()?.family_tag;
    let nu2 = Some(binomial(inv.d - 3, 2));
    let row = match (inv.d, tag.as_str()) {
        (5, _) => 1,
        (6, _) => 2,
        (7, _) => 3,
        (8, "delpezzo(8)") => 5,
        (8, _) => 4,
        (9, _) => 6,
        _ => return None,
    };
    let nu3 = match row {
        5 => Some(1),
        6 => Some(4),
        _ => None,
    };
    Some((row, tag, nu2, nu3))
}

/// All singular points of `d` whose star matches a table row, in lattice
/// point order.
pub fn classify_singularities(d: &Triangulation) -> Vec<SingularityRecord> {
    let mut out = Vec::new();
    for &p in d.points() {
        let s = star(d, p).expect("lattice point of the polygon");
        let Some(q) = s.hull.clone() else { continue };
        let tris: Vec<[LatticePoint; 3]> = s.triangles.iter().map(|t| d.triangle_points(t)).collect();
        let fan = Triangulation::from_point_triangles(q.clone(), &tris).expect("star inside its hull");
        let interior = d.polygon().strictly_contains(p);
        let (kind, matched) = if interior {
            (SingularityKind::Elliptic, elliptic_row(&q))
        } else {
            (SingularityKind::Rational, rational_row(&fan, p))
        };
        let Some((row, family_tag, nu2, nu3)) = matched else { continue };
        let (d1_exists, d1_error) = match intermediate_subdivision(d, p) {
            Ok(sub) if is_regular(&sub).is_regular() => (true, None),
            Ok(_) => (false, Some("the intermediate subdivision is not regular".to_string())),
            Err(e) => (false, Some(e.to_string())),
        };
        out.push(SingularityRecord {
            point: p,
            kind,
            degree: s.degree(),
            star: q,
            table_row: TableRow { kind, row },
            family_tag,
            nu2,
            nu3,
            d1_exists,
            d1_error,
        });
    }
    out
}

/// One singularity in a lower-bound breakdown.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundTerm {
    pub record: SingularityRecord,
    /// `ν_k(Z_p)` when it counts towards the bound.
    pub contribution: Option<u64>,
    /// Why the term was dropped.
    pub dropped: Option<String>,
}

/// The lower bound `ν̄_k(D) + Σ ν_k(Z_p)` with its terms.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LowerBound {
    pub k: u32,
    pub skew: u64,
    pub terms: Vec<BoundTerm>,
    pub total: u64,
    pub warnings: Vec<String>,
}

impl fmt::Display for LowerBound {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.skew)?;
        for t in &self.terms {
            if let Some(c) = t.contribution {
                write!(f, "+{c}")?;
            }
        }
        write!(f, " = {}", self.total)
    }
}

/// Lower bound for `ν_k(X)` from skew k-sets and singularities.
pub fn lower_bound_nu_k(d: &Triangulation, k: u32) -> Result<LowerBound> {
    if !(2..=3).contains(&k) {
        return Err(Error::Precondition(format!("k = {k}, the bound covers k = 2 and k = 3")));
    }
    let mut warnings = Vec::new();
    match catalog_lookup(d.polygon(), k) {
        Ok(e) if e.nu_k.is_some() => {}
        Ok(e) => warnings.push(format!(
            "dim Sec_{k} = 3k-1 <= r fails for {}: {}",
            e.family_tag,
            e.undefined_reason.unwrap_or_default()
        )),
        Err(e) => warnings.push(format!("dim Sec_{k} = 3k-1 <= r cannot be verified: {e}")),
    }
    let skew = count_skew_k_sets(d, k as usize);
    let mut total = skew;
    let terms = classify_singularities(d)
        .into_iter()
        .map(|record| {
            let (contribution, dropped) = match (record.nu(k), record.d1_exists) {
                (Some(v), true) => (Some(v), None),
                (None, _) => (None, Some(format!("nu_{k} of {} is not available", record.family_tag))),
                (Some(_), false) => (
                    None,
                    Some(format!(
                        "no regular intermediate subdivision: {}",
                        record.d1_error.clone().unwrap_or_default()
                    )),
                ),
            };
            if let (Some(reason), true) = (&dropped, record.nu(k).is_some()) {
                warnings.push(format!("singularity at {} dropped: {reason}", record.point));
            }
            total += contribution.unwrap_or(0);
            BoundTerm { record, contribution, dropped }
        })
        .collect();
    Ok(LowerBound { k, skew, terms, total, warnings })
}

/// True when the skew k-set count reaches the catalog value of `ν_k`.
pub fn is_k_delightful(d: &Triangulation, k: u32) -> Result<bool> {
    let e = catalog_lookup(d.polygon(), k).map_err(|e| Error::NotDecidable(e.to_string()))?;
    let nu = e.nu_k.ok_or_else(|| {
        Error::NotDecidable(format!("{}: {}", e.family_tag, e.undefined_reason.clone().unwrap_or_default()))
    })?;
    Ok(count_skew_k_sets(d, k as usize) == nu)
}

/// Regular triangulations of `p` that are k-delightful for every decidable
/// `k` in `2..=k_max`, one per class under the equiaffinities of `p`, each
/// transported onto the canonical form of `p`.
pub fn find_delightful(p: &LatticePolygon, k_max: u32) -> Result<Vec<Triangulation>> {
    catalog_lookup(p, 2)?;
    let targets: Vec<(usize, u64)> =
        (2..=k_max.min(3)).filter_map(|k| catalog_lookup(p, k).ok()?.nu_k.map(|nu| (k as usize, nu))).collect();
    if targets.is_empty() {
        return Err(Error::NotDecidable(format!("no k in 2..={k_max} has dim Sec_k = 3k-1 <= r for {p}")));
    }
    let canonical = canonical_form(p);
    let mut classes: BTreeMap<Vec<[LatticePoint; 3]>, ()> = BTreeMap::new();
    for d in enumerate_triangulations(p)? {
        if targets.iter().any(|&(k, nu)| count_skew_k_sets(&d, k) != nu) {
            continue;
        }
        let key = canonical_key(&d, false);
        if classes.contains_key(&key) || !is_regular(&d).is_regular() {
            continue;
        }
        classes.insert(key, ());
    }
    Ok(classes
        .into_keys()
        .map(|key| Triangulation::from_point_triangles(canonical.clone(), &key).expect("canonical image"))
        .collect())
}
