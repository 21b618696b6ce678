mod common;

use std::sync::OnceLock;

use proptest::prelude::*;
use toric_core::lattice::{are_equivalent_up_to_reflection, canonical_maps, enumerate_polygons_in_box};
use toric_core::*;

fn census() -> &'static [LatticePolygon] {
    static CENSUS: OnceLock<Vec<LatticePolygon>> = OnceLock::new();
    CENSUS.get_or_init(|| {
        let mut v = enumerate_polygons(0, 8);
        v.extend(enumerate_polygons(1, 9));
        v
    })
}

/// Random determinant-one matrix as a product of elementary shears.
fn sl2(shears: &[(bool, i64)]) -> [[i64; 2]; 2] {
    let mut m = [[1, 0], [0, 1]];
    for &(upper, k) in shears {
        let e = if upper { [[1, k], [0, 1]] } else { [[1, 0], [k, 1]] };
        m = [
            [m[0][0] * e[0][0] + m[0][1] * e[1][0], m[0][0] * e[0][1] + m[0][1] * e[1][1]],
            [m[1][0] * e[0][0] + m[1][1] * e[1][0], m[1][0] * e[0][1] + m[1][1] * e[1][1]],
        ];
    }
    m
}

fn equiaffinity() -> impl Strategy<Value = Equiaffinity> {
    (prop::collection::vec((any::<bool>(), -3i64..=3), 0..5), -20i64..20, -20i64..20)
        .prop_map(|(s, x, y)| Equiaffinity::new(sl2(&s), pt(x, y)).unwrap())
}

#[test]
fn pick_and_ehrhart_on_census() {
    for p in census() {
        let inv = invariants(p);
        assert_eq!(inv.d, 2 * inv.g + inv.b - 2, "{p}");
        assert_eq!(inv.n_points, inv.g + inv.b, "{p}");
        assert_eq!(inv.l as usize, p.vertices().len());
        for t in 0..=5u64 {
            let t2 = (t * t) as i64;
            let expect = (inv.d * t2 + inv.b * t as i64 + 2) / 2;
            assert_eq!(ehrhart_count(p, t) as i64, expect, "{p} t={t}");
        }
    }
}

#[test]
fn genus_zero_census_is_the_trapezia_and_the_double_triangle() {
    let census = enumerate_polygons(0, 8);
    let mut expected = vec![LatticePolygon::new(vec![pt(0, 0), pt(2, 0), pt(0, 2)]).unwrap()];
    for delta in 0..=4 {
        for i in 0..=8 {
            if 2 * delta + i <= 8 && delta + i >= 1 {
                expected.push(common::trapezium(delta, i));
            }
        }
    }
    assert_eq!(census.len(), expected.len());
    for e in &expected {
        assert!(census.iter().any(|c| are_equivalent(c, e)), "missing {e}");
    }
}

#[test]
fn census_stable_in_a_larger_box() {
    for g in 0..=1 {
        assert_eq!(enumerate_polygons_in_box(g, 6, 9), enumerate_polygons(g as u32, 6));
    }
}

#[test]
fn genus_one_census_counts() {
    let c = enumerate_polygons(1, 9);
    assert_eq!(c.len(), 20);
    assert!(c.iter().all(|p| p.interior_count() == 1));
    let mut reps: Vec<&LatticePolygon> = Vec::new();
    for p in &c {
        if !reps.iter().any(|r| are_equivalent_up_to_reflection(r, p)) {
            reps.push(p);
        }
    }
    assert_eq!(reps.len(), 16);
}

proptest! {
    #[test]
    fn canonical_form_is_invariant(idx in 0usize..45, t in equiaffinity()) {
        let c = census();
        let p = &c[idx % c.len()];
        let q = apply(&t, p);
        prop_assert_eq!(canonical_form(&q), canonical_form(p));
        prop_assert_eq!(invariants(&q), invariants(p));
        prop_assert_eq!(ehrhart_count(&q, 3), ehrhart_count(p, 3));
    }

    #[test]
    fn canonical_form_is_idempotent(idx in 0usize..45, t in equiaffinity()) {
        let c = census();
        let q = apply(&t, &c[idx % c.len()]);
        let f = canonical_form(&q);
        prop_assert_eq!(canonical_form(&f), f.clone());
        let (form, maps) = canonical_maps(&q);
        prop_assert_eq!(&form, &f);
        for m in maps {
            prop_assert_eq!(apply(&m, &q), f.clone());
        }
    }

    #[test]
    fn equiaffinity_inverse_round_trips(t in equiaffinity(), x in -50i64..50, y in -50i64..50) {
        let p = pt(x, y);
        prop_assert_eq!(t.inverse().apply_point(t.apply_point(p)), p);
        prop_assert_eq!(t.compose(&t.inverse()), Equiaffinity::identity());
    }
}
