#![allow(dead_code)]

use std::path::PathBuf;

use toric_core::io::parse_triangulation;
use toric_core::Triangulation;

pub fn fixture_path(rel: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures/triangulations").join(rel)
}

pub fn load(rel: &str) -> Triangulation {
    let text = std::fs::read_to_string(fixture_path(rel)).unwrap_or_else(|e| panic!("{rel}: {e}"));
    parse_triangulation(&text).unwrap_or_else(|e| panic!("{rel}: {e}"))
}

pub fn load_dir(rel: &str) -> Vec<(String, Triangulation)> {
    let mut names: Vec<_> = std::fs::read_dir(fixture_path(rel))
        .unwrap()
        .map(|e| e.unwrap().file_name().into_string().unwrap())
        .filter(|n| n.ends_with(".tri"))
        .collect();
    names.sort();
    names.into_iter().map(|n| (n.clone(), load(&format!("{rel}/{n}")))).collect()
}

use toric_core::{pt, LatticePoint, LatticePolygon};

/// Trapezium with bottom edge of length `delta + i` and top edge of length `delta`.
pub fn trapezium(delta: i64, i: i64) -> LatticePolygon {
    let mut v = vec![pt(0, 0), pt(delta + i, 0), pt(delta, 1), pt(0, 1)];
    v.dedup();
    LatticePolygon::new(v).unwrap()
}

fn from_triangles(delta: i64, i: i64, tris: Vec<[LatticePoint; 3]>) -> Triangulation {
    Triangulation::from_point_triangles(trapezium(delta, i), &tris).unwrap()
}

/// Vertical rungs with one diagonal per square; `i` is 0 or 1.
pub fn family_d(delta: i64, i: i64) -> Triangulation {
    assert!(i == 0 || i == 1);
    let mut tris = Vec::new();
    for x in 0..delta {
        tris.push([pt(x, 1), pt(x, 0), pt(x + 1, 0)]);
        tris.push([pt(x, 1), pt(x + 1, 1), pt(x + 1, 0)]);
    }
    if i == 1 {
        tris.push([pt(delta, 1), pt(delta, 0), pt(delta + 1, 0)]);
    }
    from_triangles(delta, i, tris)
}

/// Staircase of slope-1/2 diagonals, closed by a vertical rung (`i = 0`) or
/// by a fan from the last top point (`1 <= i <= 3`). With `delta = 0` this is
/// the fan of a height-one triangle.
pub fn family_d_prime(delta: i64, i: i64) -> Triangulation {
    assert!((0..=3).contains(&i) && delta + i.min(1) >= 1);
    let mut tris = vec![[pt(0, 1), pt(0, 0), pt(1, 0)]];
    let steps = if i == 0 { delta - 1 } else { delta };
    for x in 0..steps {
        tris.push([pt(x, 1), pt(x + 1, 0), pt(x + 2, 0)]);
        tris.push([pt(x, 1), pt(x + 1, 1), pt(x + 2, 0)]);
    }
    if i == 0 {
        tris.push([pt(delta - 1, 1), pt(delta, 1), pt(delta, 0)]);
    }
    for j in 1..i {
        tris.push([pt(delta, 1), pt(delta + j, 0), pt(delta + j + 1, 0)]);
    }
    from_triangles(delta, i, tris)
}

/// The pictured delightful classes of a trapezium.
pub fn trapezium_families(delta: i64, i: i64) -> Vec<Triangulation> {
    let mut v = vec![family_d_prime(delta, i)];
    if i <= 1 && delta >= 1 {
        v.push(family_d(delta, i));
    }
    v
}

/// Fourier–Motzkin regularity oracle, independent of the library's LP.
pub mod oracle {
    use std::collections::BTreeSet;

    use toric_core::lattice::cross;
    use toric_core::{LatticePoint, Triangulation};

    /// Integer fold rows `r` with the convexity condition `r · h > 0`, one per
    /// interior edge, built straight from the triangle geometry.
    pub fn fold_rows(d: &Triangulation) -> Vec<Vec<i128>> {
        let n = d.points().len();
        let tris: Vec<[LatticePoint; 3]> = d.triangles().iter().map(|t| d.triangle_points(t)).collect();
        let mut rows = Vec::new();
        for (i, s) in tris.iter().enumerate() {
            for t in &tris[i + 1..] {
                let shared: Vec<_> = s.iter().filter(|p| t.contains(p)).copied().collect();
                let [u, v] = shared[..] else { continue };
                let a = *s.iter().find(|p| !shared.contains(p)).unwrap();
                let b = *t.iter().find(|p| !shared.contains(p)).unwrap();
                // b = λu u + λv v + λa a with denominator D = cross(u, v, a).
                let den = cross(u, v, a);
                let sign = den.signum() as i128;
                let mut r = vec![0i128; n];
                let ix = |p| d.point_index(p).unwrap();
                r[ix(b)] += den.abs() as i128;
                r[ix(u)] -= sign * cross(b, v, a) as i128;
                r[ix(v)] -= sign * cross(u, b, a) as i128;
                r[ix(a)] -= sign * cross(u, v, b) as i128;
                rows.push(r);
            }
        }
        rows
    }

    fn gcd(a: i128, b: i128) -> i128 {
        if b == 0 {
            a.abs()
        } else {
            gcd(b, a % b)
        }
    }

    fn normalize(mut r: Vec<i128>) -> Vec<i128> {
        let g = r.iter().fold(0, |g, &x| gcd(g, x));
        if g > 1 {
            r.iter_mut().for_each(|x| *x /= g);
        }
        r
    }

    /// Fourier–Motzkin elimination for a homogeneous strict system `A h > 0`.
    /// Feasible iff no all-zero row is ever derived.
    fn fm_feasible(rows: Vec<Vec<i128>>, n: usize) -> bool {
        let mut sys: BTreeSet<Vec<i128>> = rows.into_iter().map(normalize).collect();
        let mut alive: Vec<usize> = (0..n).collect();
        loop {
            if sys.iter().any(|r| r.iter().all(|&x| x == 0)) {
                return false;
            }
            if sys.is_empty() || alive.is_empty() {
                return true;
            }
            // Eliminate the variable producing the fewest new rows.
            let cost = |j: usize| {
                let p = sys.iter().filter(|r| r[j] > 0).count();
                let m = sys.iter().filter(|r| r[j] < 0).count();
                p * m
            };
            let (pos_in_alive, &j) = alive.iter().enumerate().min_by_key(|(_, &j)| cost(j)).unwrap();
            alive.swap_remove(pos_in_alive);
            let (pos, rest): (Vec<_>, Vec<_>) = sys.into_iter().partition(|r| r[j] > 0);
            let (neg, zero): (Vec<_>, Vec<_>) = rest.into_iter().partition(|r| r[j] < 0);
            if pos.is_empty() || neg.is_empty() {
                // Variable j is unconstrained on one side: drop its rows.
                sys = zero.into_iter().collect();
                continue;
            }
            let mut next: BTreeSet<Vec<i128>> = zero.into_iter().collect();
            for p in &pos {
                for m in &neg {
                    let r: Vec<i128> = p.iter().zip(m).map(|(&x, &y)| -m[j] * x + p[j] * y).collect();
                    next.insert(normalize(r));
                }
            }
            sys = next;
        }
    }

    pub fn oracle_regular(d: &Triangulation) -> bool {
        fm_feasible(fold_rows(d), d.points().len())
    }
}
