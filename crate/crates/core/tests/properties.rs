use proptest::prelude::*;

use setrisk::fixtures;
use setrisk::geometry::{is_feasible, Halfspace, Polyhedron, UpperSet};
use setrisk::measures::worst_case;
use setrisk::rational::{frac, int, vec_of};
use setrisk::scenario::{componentwise_sup, dominates, translate_and_scale, PortfolioVector, RandomVector};
use setrisk::Q;

fn half() -> impl Strategy<Value = Q> {
    (-6i64..=6).prop_map(|k| frac(k, 2))
}

fn vector(d: usize) -> impl Strategy<Value = Vec<Q>> {
    prop::collection::vec(half(), d)
}

fn position(n: usize, d: usize) -> impl Strategy<Value = RandomVector> {
    prop::collection::vec(vector(d), n).prop_map(|rows| RandomVector::new(rows).unwrap())
}

/// Halfspace `a . u >= b` with `a` nonnegative, so it absorbs the orthant.
fn monotone_row() -> impl Strategy<Value = Halfspace> {
    ((0i64..=3), (0i64..=3), -6i64..=6).prop_filter_map("zero normal", |(a, b, c)| {
        (a != 0 || b != 0).then(|| Halfspace::weak(vec_of(&[a, b]), frac(c, 2)))
    })
}

fn row(dim: usize) -> impl Strategy<Value = Halfspace> {
    (prop::collection::vec(-3i64..=3, dim), -6i64..=6)
        .prop_map(|(a, b)| Halfspace::weak(vec_of(&a), frac(b, 2)))
}

fn monotone_pieces() -> impl Strategy<Value = Vec<Vec<Halfspace>>> {
    prop::collection::vec(prop::collection::vec(monotone_row(), 1..=3), 0..=3)
}

fn grid2() -> Vec<Vec<Q>> {
    let mut pts = Vec::new();
    for i in -8..=8 {
        for j in -8..=8 {
            pts.push(vec![frac(i, 2), frac(j, 2)]);
        }
    }
    pts
}

fn orthant_set(rows: &[Vec<Halfspace>]) -> UpperSet {
    let rec = fixtures::mkt_b().cone_m().polyhedron().clone();
    let pieces = rows.iter().map(|r| Polyhedron::new(2, r.clone())).collect();
    UpperSet::from_pieces(pieces, rec).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn canonicalize_is_idempotent_and_keeps_members(rows in monotone_pieces()) {
        let set = orthant_set(&rows);
        let again = set.canonicalize().unwrap();
        prop_assert_eq!(again.pieces(), set.pieces());
        for u in grid2() {
            let raw = rows.iter().any(|r| r.iter().all(|h| h.satisfied_by(&u)));
            prop_assert_eq!(raw, set.contains_point(&u), "at {:?}", u);
        }
    }

    #[test]
    fn upper_sets_absorb_the_cone(rows in monotone_pieces(), k in (0i64..=4, 0i64..=4)) {
        let set = orthant_set(&rows);
        let step = vec![frac(k.0, 2), frac(k.1, 2)];
        for u in grid2() {
            if set.contains_point(&u) {
                let moved: Vec<Q> = u.iter().zip(&step).map(|(a, b)| a + b).collect();
                prop_assert!(set.contains_point(&moved));
            }
        }
    }

    #[test]
    fn projection_matches_fibre_feasibility(rows in prop::collection::vec(row(3), 1..=5)) {
        let p = Polyhedron::new(3, rows.clone());
        let shadow = p.eliminate(&[2]);
        for i in -4..=4 {
            for j in -4..=4 {
                let (a, b) = (frac(i, 2), frac(j, 2));
                let mut fibre = rows.clone();
                fibre.push(Halfspace::weak(vec_of(&[1, 0, 0]), a.clone()));
                fibre.push(Halfspace::weak(vec_of(&[-1, 0, 0]), -a.clone()));
                fibre.push(Halfspace::weak(vec_of(&[0, 1, 0]), b.clone()));
                fibre.push(Halfspace::weak(vec_of(&[0, -1, 0]), -b.clone()));
                prop_assert_eq!(shadow.contains(&[a, b]), is_feasible(3, &fibre));
            }
        }
    }

    #[test]
    fn h_to_v_to_h_round_trip(rows in prop::collection::vec(row(2), 1..=5)) {
        let p = Polyhedron::new(2, rows);
        prop_assume!(!p.is_empty());
        let v = p.compute_vrep().unwrap();
        let q = Polyhedron::from_vrep(2, v.clone()).unwrap();
        prop_assert!(p.contains_generated(&q.compute_vrep().unwrap()));
        prop_assert!(q.contains_generated(&v));
        for u in grid2() {
            prop_assert_eq!(p.contains(&u), q.contains(&u), "at {:?}", u);
        }
    }

    #[test]
    fn worst_case_is_cash_additive(x in position(2, 2), c in half()) {
        let market = fixtures::mkt_a();
        let u = vec![c.clone(), int(0)];
        let shifted = worst_case(&market, &x.shift(&u).unwrap()).unwrap();
        let moved = worst_case(&market, &x).unwrap().translate(&[-c]);
        prop_assert!(shifted.set_eq(&moved).unwrap());
    }

    #[test]
    fn dominance_is_a_preorder(z in position(2, 2), k1 in (0i64..=4, 0i64..=4), k2 in (0i64..=4, 0i64..=4)) {
        let market = fixtures::mkt_a();
        // generators of K on MKT-A are (1,0) and (-1,1)
        let gen = |k: (i64, i64)| vec![frac(k.0 - k.1, 2), frac(k.1, 2)];
        let y = z.shift(&gen(k1)).unwrap();
        let x = y.shift(&gen(k2)).unwrap();
        prop_assert!(dominates(&market, &z, &z).unwrap());
        prop_assert!(dominates(&market, &y, &z).unwrap());
        prop_assert!(dominates(&market, &x, &y).unwrap());
        prop_assert!(dominates(&market, &x, &z).unwrap());
    }

    #[test]
    fn translate_and_scale_inverts(x in position(3, 2), u in vector(2)) {
        let one = int(1);
        let there = translate_and_scale(&x, &one, &PortfolioVector::new(u.clone())).unwrap();
        let minus: Vec<Q> = u.iter().map(|v| -v).collect();
        let back = translate_and_scale(&there, &one, &PortfolioVector::new(minus)).unwrap();
        prop_assert_eq!(back, x);
    }

    #[test]
    fn sup_dominates(x in position(2, 2)) {
        let market = fixtures::mkt_a();
        let w = componentwise_sup(&x).as_constant(2);
        prop_assert!(dominates(&market, &w, &x).unwrap());
        let b = fixtures::mkt_b();
        let y = RandomVector::new(vec![x.row(0).to_vec(), x.row(1).to_vec(), x.row(0).to_vec()]).unwrap();
        prop_assert!(dominates(&b, &componentwise_sup(&y).as_constant(3), &y).unwrap());
    }
}
