//! Cross-checks the subset enumerator against a vertex-chain enumerator on small regions.
//!
//! The oracle walks candidate vertex sets directly: a set is a polygon iff every point in
//! it is a strict corner of its own hull, checked with a brute cross-product test.

use std::collections::BTreeSet;

use jacpair_core::enumerate::{enumerate_polygons, verify_constraints, PolygonConstraints};
use jacpair_core::newton::LatticePolygon;
use jacpair_core::polyarith::Monomial;

fn m(i: u32, j: u32) -> Monomial {
    Monomial::new(i, j)
}

fn cross(o: &Monomial, a: &Monomial, b: &Monomial) -> i64 {
    let (ox, oy) = (o.i as i64, o.j as i64);
    (a.i as i64 - ox) * (b.j as i64 - oy) - (a.j as i64 - oy) * (b.i as i64 - ox)
}

/// Orders points counterclockwise around the lexicographically smallest one, and
/// returns `None` unless they form a strictly convex chain.
fn strictly_convex_chain(pts: &[Monomial]) -> Option<Vec<Monomial>> {
    if pts.len() <= 2 {
        return Some(pts.to_vec());
    }
    let start = *pts.iter().min()?;
    let mut rest: Vec<Monomial> = pts.iter().copied().filter(|p| *p != start).collect();
    // every other point sits in the half-plane i >= start.i, so cross products order them
    rest.sort_by(|a, b| {
        let c = cross(&start, a, b);
        if c > 0 {
            std::cmp::Ordering::Less
        } else if c < 0 {
            std::cmp::Ordering::Greater
        } else {
            let da = (a.i as i64 - start.i as i64).pow(2) + (a.j as i64 - start.j as i64).pow(2);
            let db = (b.i as i64 - start.i as i64).pow(2) + (b.j as i64 - start.j as i64).pow(2);
            da.cmp(&db)
        }
    });
    let mut chain = vec![start];
    chain.extend(rest);
    let n = chain.len();
    for k in 0..n {
        if cross(&chain[k], &chain[(k + 1) % n], &chain[(k + 2) % n]) <= 0 {
            return None;
        }
    }
    Some(chain)
}

fn oracle(c: &PolygonConstraints) -> BTreeSet<Vec<Monomial>> {
    let pts: Vec<Monomial> = c.region().into_iter().filter(|p| !c.forbidden.contains(p)).collect();
    assert!(pts.len() <= 12, "oracle is meant for small regions");
    let mut out = BTreeSet::new();
    for mask in 1u32..1 << pts.len() {
        let chosen: Vec<Monomial> = (0..pts.len()).filter(|k| mask >> k & 1 == 1).map(|k| pts[k]).collect();
        let Some(chain) = strictly_convex_chain(&chosen) else { continue };
        let poly = LatticePolygon::from_vertices(chain).unwrap();
        if verify_constraints(&poly, c).is_ok() {
            out.insert(poly.vertices().to_vec());
        }
    }
    out
}

fn constraints(max_degree: u32, required: Vec<Monomial>, forbidden: Vec<Monomial>) -> PolygonConstraints {
    PolygonConstraints {
        max_degree,
        extra_points: vec![],
        x_saturated: false,
        required,
        forbidden,
        top_face: None,
        transpose_dedupe: false,
        no_positive_slope_outer_edge: false,
    }
}

fn check(c: &PolygonConstraints) {
    let got: BTreeSet<Vec<Monomial>> = enumerate_polygons(c).unwrap().iter().map(|p| p.vertices().to_vec()).collect();
    assert_eq!(got, oracle(c));
}

#[test]
fn free_triangle_of_degree_two() {
    let c = constraints(2, vec![], vec![]);
    check(&c);
}

#[test]
fn degree_three_with_axes_required() {
    check(&constraints(3, vec![m(1, 0), m(0, 1)], vec![m(0, 0)]));
}

#[test]
fn degree_three_with_top_face() {
    let mut c = constraints(3, vec![m(1, 0), m(0, 1)], vec![m(0, 0), m(0, 3)]);
    c.top_face = Some((m(1, 2), m(3, 0)));
    check(&c);
}

#[test]
fn degree_three_without_positive_slopes() {
    let mut c = constraints(3, vec![m(1, 0)], vec![m(0, 0)]);
    c.no_positive_slope_outer_edge = true;
    check(&c);
}

#[test]
fn extra_points_widen_the_region() {
    let mut c = constraints(2, vec![m(0, 1)], vec![]);
    c.extra_points = vec![m(3, 1), m(1, 3)];
    check(&c);
}

#[test]
fn single_points_and_segments_count() {
    let c = constraints(1, vec![], vec![]);
    let got = enumerate_polygons(&c).unwrap();
    // 3 points, 3 segments, 1 triangle
    assert_eq!(got.len(), 7);
    check(&c);
}
