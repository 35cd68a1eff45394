use std::collections::BTreeSet;

use num_traits::Zero;
use proptest::prelude::*;

use jacpair_core::edgecheck::edge_univariate;
use jacpair_core::enumerate::{enumerate_polygons, PolygonConstraints};
use jacpair_core::newton::{newton_polygon, symbolic_restriction, LatticePolygon};
use jacpair_core::polyarith::rational::rat;
use jacpair_core::polyarith::{format_poly, parse_poly, Monomial, Poly2, RootRange, UniPoly};

fn poly2() -> impl Strategy<Value = Poly2> {
    prop::collection::vec(((0u32..7, 0u32..7), -9i64..=9, 1i64..=5), 0..10).prop_map(|terms| {
        Poly2::from_terms(terms.into_iter().map(|((i, j), n, d)| (Monomial::new(i, j), rat(n, d))))
    })
}

fn uni() -> impl Strategy<Value = UniPoly> {
    prop::collection::vec(-6i64..=6, 1..9).prop_map(|c| UniPoly::from_i64s(&c))
}

fn cross(o: &Monomial, a: &Monomial, b: &Monomial) -> i64 {
    let (ox, oy) = (o.i as i64, o.j as i64);
    (a.i as i64 - ox) * (b.j as i64 - oy) - (a.j as i64 - oy) * (b.i as i64 - ox)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn squarefree_decomposition_expands_back(u in uni(), v in uni()) {
        // squaring a factor makes repeated roots common
        let w = &(&u * &v) * &v;
        prop_assume!(!w.is_zero());
        let dec = w.squarefree_decomposition().unwrap();
        prop_assert_eq!(dec.expand(), w.clone());
        for (f, _) in &dec.factors {
            prop_assert!(f.gcd(&f.derivative()).is_constant());
        }
    }

    #[test]
    fn sturm_count_matches_isolation(u in uni(), v in uni()) {
        let w = &u * &v;
        prop_assume!(!w.is_zero());
        let ivs = w.isolate_real_roots().unwrap();
        prop_assert_eq!(w.count_real_roots(&RootRange::WholeLine).unwrap(), ivs.len());
        for pair in ivs.windows(2) {
            // neighbours may share a split point, which is never a root
            prop_assert!(pair[0].hi() <= pair[1].lo());
            prop_assert!(!w.eval(pair[0].hi()).is_zero());
        }
        for iv in &ivs {
            prop_assert_eq!(w.count_real_roots(&RootRange::Interval(iv.clone())).unwrap(), 1);
        }
    }
}

proptest! {
    #[test]
    fn format_parse_round_trip(p in poly2()) {
        prop_assert_eq!(parse_poly(&format_poly(&p)).unwrap(), p);
    }

    #[test]
    fn hull_invariants(pts in prop::collection::vec((0u32..8, 0u32..8), 1..14)) {
        let pts: Vec<Monomial> = pts.into_iter().map(Monomial::from).collect();
        let h = LatticePolygon::hull(pts.clone()).unwrap();
        let vs = h.vertices();
        prop_assert_eq!(vs[0], *pts.iter().min().unwrap());
        for v in vs {
            prop_assert!(pts.contains(v));
        }
        for q in &pts {
            prop_assert!(h.contains(q));
        }
        if vs.len() >= 3 {
            for k in 0..vs.len() {
                let (a, b, c) = (&vs[k], &vs[(k + 1) % vs.len()], &vs[(k + 2) % vs.len()]);
                prop_assert!(cross(a, b, c) > 0);
            }
        }
        let t = h.transpose().transpose();
        prop_assert_eq!(t, h);
    }

    #[test]
    fn edge_reduction_expands_to_restriction(p in poly2()) {
        prop_assume!(!p.is_zero());
        let d = newton_polygon(&p).unwrap();
        // a single point has no edges
        for e in d.edges().unwrap_or_default() {
            let r = edge_univariate(&p, &e).unwrap();
            prop_assert_eq!(r.expand(), symbolic_restriction(&p, &e));
        }
    }

    #[test]
    fn enumeration_ignores_list_order(
        required in prop::collection::btree_set((0u32..4, 0u32..4), 0..3),
        forbidden in prop::collection::btree_set((0u32..4, 0u32..4), 0..3),
        seed in any::<u64>(),
    ) {
        let required: Vec<Monomial> =
            required.into_iter().map(Monomial::from).filter(|m| m.degree() <= 3).collect();
        let forbidden: Vec<Monomial> = forbidden
            .into_iter()
            .map(Monomial::from)
            .filter(|m| m.degree() <= 3 && !required.contains(m))
            .collect();
        let mk = |r: Vec<Monomial>, f: Vec<Monomial>| PolygonConstraints {
            max_degree: 3,
            extra_points: vec![],
            x_saturated: false,
            required: r,
            forbidden: f,
            top_face: None,
            transpose_dedupe: false,
            no_positive_slope_outer_edge: false,
        };
        let a = enumerate_polygons(&mk(required.clone(), forbidden.clone())).unwrap();
        let rot = |mut v: Vec<Monomial>| {
            if !v.is_empty() {
                let k = seed as usize % v.len();
                v.rotate_left(k);
                v.reverse();
            }
            v
        };
        let b = enumerate_polygons(&mk(rot(required), rot(forbidden))).unwrap();
        prop_assert_eq!(&a, &b);
        let distinct: BTreeSet<_> = a.iter().map(|p| p.vertices().to_vec()).collect();
        prop_assert_eq!(distinct.len(), a.len());
    }
}
