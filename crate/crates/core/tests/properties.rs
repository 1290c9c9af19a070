// SPDX-License-Identifier: Apache-2.0

mod common;

use std::collections::BTreeMap;

use proptest::prelude::*;

use effcone::arith::{make_ext_field, rat, ExtField, Rational};
use effcone::curves::{EllipticCurve, HyperellipticCurve, Point};
use effcone::enumerative::{fiber_count, image_of, theta_degree};
use effcone::strata::{count_x, in_stratum, Signature, StrataQuery, DEFAULT_STRATA_BOUND};
use effcone::twisted::{
    check_grc, check_twist_axioms, find_level_order, scale_residues, Edge, HalfEdge, LevelOutcome, Side,
    TwistedDualGraph,
};

use common::*;

const SMALL_FIELDS: [(u32, u32); 8] = [(2, 3), (2, 4), (3, 1), (3, 3), (5, 2), (7, 1), (7, 2), (11, 2)];

fn field_strategy() -> impl Strategy<Value = (u32, u32)> {
    prop::sample::select(&SMALL_FIELDS[..])
}

fn oracle_for(k: &ExtField) -> PolyField {
    let m = k.modulus();
    PolyField::with_modulus(u64::from(k.characteristic()), m[..m.len() - 1].iter().map(|&c| u64::from(c)).collect())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn field_ops_match_polynomial_basis((p, d) in field_strategy(), a in any::<u32>(), b in any::<u32>(), c in any::<u32>()) {
        let k = make_ext_field(p, d).unwrap();
        let o = oracle_for(&k);
        let n = k.order();
        let (x, y, z) = (k.from_encoded(a % n), k.from_encoded(b % n), k.from_encoded(c % n));
        let code = |e| u64::from(k.encode(e));
        prop_assert_eq!(code(k.mul(x, y)), o.mul(code(x), code(y)));
        prop_assert_eq!(code(k.add(x, y)), o.add(code(x), code(y)));
        prop_assert_eq!(k.mul(k.mul(x, y), z), k.mul(x, k.mul(y, z)));
        prop_assert_eq!(k.mul(x, k.add(y, z)), k.add(k.mul(x, y), k.mul(x, z)));
        if !x.is_zero() {
            prop_assert_eq!(k.mul(x, k.inv(x).unwrap()), k.one());
        }
    }

    #[test]
    fn point_counts_match_oracle((p, d) in field_strategy(), a in -5i64..5, b in -5i64..5) {
        prop_assume!(p > 3);
        let k = make_ext_field(p, d).unwrap();
        let o = OracleCurve::new(PolyField::new(u64::from(p), d as usize), a, b);
        if let Ok(e) = EllipticCurve::from_ints(&k, a, b) {
            prop_assert_eq!(e.enumerate().unwrap().len(), o.points().len());
        }
    }

    #[test]
    fn genus_two_counts_match_oracle(p in prop::sample::select(vec![3u32, 5, 7]), cs in prop::collection::vec(-3i64..=3, 5)) {
        let mut f = cs.clone();
        f.push(1);
        let k = make_ext_field(p, 1).unwrap();
        if let Ok(c) = HyperellipticCurve::from_ints(&k, &f) {
            let oracle = odd_hyperelliptic_count(&PolyField::new(u64::from(p), 1), &f);
            prop_assert_eq!(c.points().unwrap().len() as u64, oracle);
        }
    }

    #[test]
    fn theta_symmetric_under_permutation_and_sign(ms in prop::collection::vec(1i64..30, 1..5), seed in any::<u64>()) {
        use rand::seq::SliceRandom;
        use rand::Rng;
        let g = ms.len() as u32;
        let mut r = rng(seed);
        let mut other = ms.clone();
        other.shuffle(&mut r);
        for m in &mut other {
            if r.gen_bool(0.5) {
                *m = -*m;
            }
        }
        prop_assert_eq!(theta_degree(g, &ms).unwrap(), theta_degree(g, &other).unwrap());
    }

    #[test]
    fn division_count_divides_d_squared((p, d) in field_strategy(), a in -3i64..3, b in -3i64..3, n in 2i64..6) {
        let k = make_ext_field(p, d).unwrap();
        if let Ok(e) = EllipticCurve::from_ints(&k, a, b) {
            let c = e.division_count(n, &Point::Infinity).unwrap() as i64;
            prop_assert_eq!((n * n) % c, 0);
        }
    }

    #[test]
    fn stratum_translation_invariant(seed in any::<u64>(), ks in prop::collection::vec(-3i64..=3, 2..5)) {
        use rand::seq::SliceRandom;
        prop_assume!(ks.iter().all(|&k| k != 0));
        let mut ks = ks;
        let s: i64 = ks.iter().sum();
        ks.push(-s);
        prop_assume!(*ks.last().unwrap() != 0);
        let kappa = Signature::new(ks.clone()).unwrap();
        let e = EllipticCurve::from_ints(&make_ext_field(13, 1).unwrap(), 2, 1).unwrap();
        let pts = e.enumerate().unwrap();
        let mut r = rng(seed);
        let chosen: Vec<Point> = pts.choose_multiple(&mut r, ks.len()).copied().collect();
        let t = *pts.choose(&mut r).unwrap();
        let moved: Vec<Point> = chosen.iter().map(|q| e.add(q, &t).unwrap()).collect();
        prop_assert_eq!(in_stratum(&e, &chosen, &kappa).unwrap(), in_stratum(&e, &moved, &kappa).unwrap());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn fiber_count_grows_along_extensions(seed in any::<u64>()) {
        use rand::seq::SliceRandom;
        let c = HyperellipticCurve::parse(&make_ext_field(7, 1).unwrap(), "x^5+x+3").unwrap();
        let pts = c.points().unwrap();
        let mut r = rng(seed);
        let (a, b) = (pts.choose(&mut r).unwrap(), pts.choose(&mut r).unwrap());
        let t = image_of(&c, 2, -1, a, b);
        let n: Vec<u64> = [1, 2, 4].iter().map(|&k| fiber_count(&c, 2, -1, &t, k).unwrap()).collect();
        prop_assert!(n[0] <= n[1] && n[1] <= n[2], "{:?}", n);
        prop_assert!(n[0] >= 1);
    }

    #[test]
    fn count_x_matches_brute_force_two_conditions(a in 0i64..7, b in 1i64..7, which in 0usize..3) {
        let sigs = [
            vec![vec![1, 1, -2], vec![1, -2, 1]],
            vec![vec![2, -1, -1], vec![1, 1, -2]],
            vec![vec![1, 2, -3], vec![1, -2, 1]],
        ];
        let s = &sigs[which];
        if let Ok(e) = EllipticCurve::from_ints(&make_ext_field(7, 1).unwrap(), a, b) {
            let q = StrataQuery::from_json(&serde_json::to_string(s).unwrap()).unwrap();
            let fast = count_x(&q, &e, DEFAULT_STRATA_BOUND).unwrap();
            prop_assert_eq!(fast, brute_force_count_x(&OracleCurve::new(PolyField::new(7, 1), a, b), s));
            // the two conditions with their designated points swapped
            let swapped = StrataQuery::from_json(&serde_json::to_string(&[&s[1], &s[0]]).unwrap()).unwrap();
            prop_assert_eq!(fast, count_x(&swapped, &e, DEFAULT_STRATA_BOUND).unwrap());
        }
    }
}

fn failure_kinds(g: &TwistedDualGraph) -> (bool, Vec<String>) {
    let r = check_twist_axioms(g);
    let mut kinds: Vec<String> = r
        .failures
        .iter()
        .map(|f| serde_json::to_value(f).unwrap()["condition"].as_str().unwrap().to_owned())
        .collect();
    kinds.sort();
    (r.passed, kinds)
}

/// Relabels vertices by `perm`, reverses the edge list, and flips the
/// orientation of every other edge.
fn relabel(g: &TwistedDualGraph, perm: &[usize]) -> TwistedDualGraph {
    let mut vertices = g.vertices.clone();
    for (i, v) in g.vertices.iter().enumerate() {
        vertices[perm[i]] = v.clone();
    }
    let edges = g
        .edges
        .iter()
        .rev()
        .enumerate()
        .map(|(i, e)| {
            let (u, v) = (perm[e.u], perm[e.v]);
            if i % 2 == 0 {
                Edge { u, v, ord_u: e.ord_u, ord_v: e.ord_v }
            } else {
                Edge { u: v, v: u, ord_u: e.ord_v, ord_v: e.ord_u }
            }
        })
        .collect();
    TwistedDualGraph { vertices, edges }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn twist_axioms_invariant_under_relabeling(seed in any::<u64>()) {
        use rand::seq::SliceRandom;
        let mut r = rng(seed);
        let g = random_graph(&mut r);
        let mut perm: Vec<usize> = (0..g.vertices.len()).collect();
        perm.shuffle(&mut r);
        let h = relabel(&g, &perm);
        prop_assert_eq!(failure_kinds(&g), failure_kinds(&h));
        prop_assert_eq!(oracle_has_strict_cycle(&g), oracle_has_strict_cycle(&h));
        if let (Ok(LevelOutcome::Levels { levels: a }), Ok(LevelOutcome::Levels { levels: b })) =
            (find_level_order(&g), find_level_order(&h))
        {
            prop_assert!(levels_respect(&g, &a));
            for (i, &l) in a.iter().enumerate() {
                prop_assert_eq!(l, b[perm[i]]);
            }
        }
    }

    #[test]
    fn grc_verdict_invariant_under_scaling(seed in any::<u64>(), num in 1i64..9, den in 1i64..9, neg in any::<bool>()) {
        use rand::Rng;
        let mut r = rng(seed);
        let g = random_graph(&mut r);
        prop_assume!(check_twist_axioms(&g).passed);
        let Ok(LevelOutcome::Levels { levels }) = find_level_order(&g) else { return Ok(()) };
        let mut residues: BTreeMap<HalfEdge, Rational> = BTreeMap::new();
        for (i, e) in g.edges.iter().enumerate() {
            let x = r.gen_range(-3i64..=3);
            for (side, ord) in [(Side::U, e.ord_u), (Side::V, e.ord_v)] {
                if ord < 0 {
                    // mostly opposite residues on the two sides of a node
                    let y = if ord == -1 && side == Side::V && r.gen_bool(0.8) { -x } else { r.gen_range(-3i64..=3) };
                    residues.insert(HalfEdge { edge: i, side }, rat(if side == Side::U { x } else { y }));
                }
            }
        }
        let c = rat(if neg { -num } else { num }) / rat(den);
        let before = check_grc(&g, &levels, &residues, None).unwrap().passed;
        let after = check_grc(&g, &levels, &scale_residues(&residues, &c), None).unwrap().passed;
        prop_assert_eq!(before, after);
    }
}
