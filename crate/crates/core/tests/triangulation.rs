mod common;

use std::collections::{BTreeSet, VecDeque};

use proptest::prelude::*;
use toric_core::lattice::cross;
use toric_core::subdivision::Cell;
use toric_core::*;

type PointTris = BTreeSet<[LatticePoint; 3]>;

fn sorted(mut t: [LatticePoint; 3]) -> [LatticePoint; 3] {
    t.sort();
    t
}

fn as_points(d: &Triangulation) -> PointTris {
    d.triangles().iter().map(|t| sorted(d.triangle_points(t))).collect()
}

/// Every triangulation reachable from `start` by diagonal flips. Full
/// triangulations of a planar point set are flip-connected, so this is an
/// independent enumeration of all unimodular triangulations.
fn flip_closure(start: PointTris) -> BTreeSet<PointTris> {
    let mut seen = BTreeSet::from([start.clone()]);
    let mut queue = VecDeque::from([start]);
    while let Some(t) = queue.pop_front() {
        let tris: Vec<_> = t.iter().copied().collect();
        for (i, a) in tris.iter().enumerate() {
            for b in &tris[i + 1..] {
                let shared: Vec<_> = a.iter().filter(|p| b.contains(p)).copied().collect();
                let [u, v] = shared[..] else { continue };
                let pa = *a.iter().find(|p| !shared.contains(p)).unwrap();
                let pb = *b.iter().find(|p| !shared.contains(p)).unwrap();
                // The quadrilateral u, pa, v, pb must be strictly convex.
                if cross(pa, pb, u).signum() * cross(pa, pb, v).signum() != -1 {
                    continue;
                }
                let mut next = t.clone();
                next.remove(a);
                next.remove(b);
                next.insert(sorted([pa, pb, u]));
                next.insert(sorted([pa, pb, v]));
                if seen.insert(next.clone()) {
                    queue.push_back(next);
                }
            }
        }
    }
    seen
}

fn small_polygons() -> Vec<LatticePolygon> {
    let mut v = enumerate_polygons(0, 8);
    v.extend(enumerate_polygons(1, 8));
    v.extend(enumerate_polygons(2, 6));
    v
}

fn side_four_triangle() -> LatticePolygon {
    LatticePolygon::new(vec![pt(0, 0), pt(4, 0), pt(0, 4)]).unwrap()
}

#[test]
fn enumeration_matches_flip_oracle() {
    for p in small_polygons().into_iter().chain([side_four_triangle()]) {
        let all = enumerate_triangulations(&p).unwrap();
        let mine: BTreeSet<PointTris> = all.iter().map(as_points).collect();
        assert_eq!(mine.len(), all.len(), "duplicates for {p}");
        let oracle = flip_closure(as_points(&all[0]));
        assert_eq!(mine, oracle, "{p}");
    }
}

#[test]
fn frozen_counts() {
    let cases: &[(&[(i64, i64)], usize)] = &[
        (&[(0, 0), (2, 0), (0, 2)], 4),
        (&[(0, 0), (3, 0), (0, 3)], 79),
        (&[(0, 0), (2, 0), (2, 2), (0, 2)], 64),
        (&[(0, 0), (3, 0), (3, 2), (0, 2)], 852),
        (&[(1, 0), (2, 0), (2, 1), (1, 2), (0, 2), (0, 1)], 18),
        (&[(0, 0), (3, 0), (3, 3), (0, 3)], 46456),
        (&[(0, 0), (4, 0), (0, 4)], 7424),
    ];
    for (verts, n) in cases {
        let p = LatticePolygon::new(verts.iter().map(|&(x, y)| pt(x, y)).collect()).unwrap();
        assert_eq!(enumerate_triangulations(&p).unwrap().len(), *n, "{p}");
    }
}

#[test]
fn star_degrees_sum_to_three_d() {
    for p in small_polygons() {
        for d in enumerate_triangulations(&p).unwrap().iter().take(50) {
            let total: usize = d.points().iter().map(|&q| star(d, q).unwrap().degree()).sum();
            assert_eq!(total as i64, 3 * p.normalized_area());
        }
    }
}

#[test]
fn fixtures_are_valid() {
    for dir in ["figures", "fans", "delightful"] {
        for (name, d) in common::load_dir(dir) {
            validate(&d).unwrap_or_else(|e| panic!("{name}: {e}"));
            assert_eq!(d.len() as i64, d.polygon().normalized_area(), "{name}");
        }
    }
}

#[test]
fn hexagon_star_subdivision() {
    let d = common::load("figures/octagon_hexagon_star.tri");
    let p = pt(2, 2);
    let s = star(&d, p).unwrap();
    assert_eq!(s.degree(), 6);
    let d1 = intermediate_subdivision(&d, p).unwrap();
    let q = &d1.cells()[0];
    assert_eq!(q.label.as_deref(), Some("Q_p"));
    assert_eq!(Some(&q.polygon), s.hull.as_ref());
    assert_eq!(q.polygon.normalized_area(), 6);
    assert!(d1.cells()[1..].iter().all(|c| c.polygon.normalized_area() == 1));
    assert_eq!(d1.cells().len(), 1 + (d.len() - 6));
    assert!(refine(&d1, &d).unwrap());
    assert!(is_regular(&d1).is_regular());
}

#[test]
fn long_edge_star_subdivision() {
    let d = common::load("figures/octagon_long_edge_star.tri");
    let d1 = intermediate_subdivision(&d, pt(2, 0)).unwrap();
    let named: Vec<(&str, Vec<LatticePoint>)> = d1
        .cells()
        .iter()
        .filter(|c| c.polygon.normalized_area() > 1)
        .map(|c| (c.label.as_deref().unwrap(), c.polygon.vertices().to_vec()))
        .collect();
    let poly =
        |v: &[(i64, i64)]| LatticePolygon::new(v.iter().map(|&(x, y)| pt(x, y)).collect()).unwrap().vertices().to_vec();
    assert_eq!(
        named,
        vec![
            ("Q_p", poly(&[(1, 0), (3, 0), (4, 1), (1, 1)])),
            ("S_1", poly(&[(1, 1), (4, 1), (4, 2), (3, 3)])),
            ("S_1,1", poly(&[(1, 1), (3, 3), (1, 2)])),
        ]
    );
    assert!(refine(&d1, &d).unwrap());
    assert!(is_regular(&d1).is_regular());
}

#[test]
fn refine_detects_non_refinement() {
    let d = common::load("figures/rectangle_3x2_a.tri");
    let whole = Subdivision::whole(d.polygon().clone());
    assert!(refine(&whole, &d).unwrap());
    let halves = Subdivision::new(
        d.polygon().clone(),
        vec![
            Cell::new(LatticePolygon::new(vec![pt(0, 0), pt(3, 0), pt(0, 2)]).unwrap()),
            Cell::new(LatticePolygon::new(vec![pt(3, 0), pt(3, 2), pt(0, 2)]).unwrap()),
        ],
    )
    .unwrap();
    let from_d = Subdivision::from_triangulation(&d).unwrap();
    assert!(refine(&from_d, &d).unwrap());
    // D refines the two halves iff the diagonal (3,0)-(0,2) is one of its edges.
    let has_diagonal = as_points(&d).iter().any(|t| t.contains(&pt(3, 0)) && t.contains(&pt(0, 2)));
    assert_eq!(refine(&halves, &d).unwrap(), has_diagonal);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn enumeration_is_equivariant(idx in 0usize..40, shear in -3i64..=3, tx in -5i64..5) {
        let polys = small_polygons();
        let p = &polys[idx % polys.len()];
        let t = Equiaffinity::new([[1, shear], [0, 1]], pt(tx, 2)).unwrap();
        let here: BTreeSet<PointTris> =
            enumerate_triangulations(p).unwrap().iter().map(|d| as_points(&d.apply(&t))).collect();
        let there: BTreeSet<PointTris> =
            enumerate_triangulations(&apply(&t, p)).unwrap().iter().map(as_points).collect();
        prop_assert_eq!(here, there);
    }
}

#[test]
fn text_format_round_trips() {
    use toric_core::io::{parse_triangulation, write_triangulation};
    for p in small_polygons() {
        for d in enumerate_triangulations(&p).unwrap().iter().step_by(11) {
            let back = parse_triangulation(&write_triangulation(d)).unwrap();
            assert_eq!(&back, d);
        }
    }
}
