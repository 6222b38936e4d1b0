use proptest::prelude::*;

use pointfree::exact_reals::UpperReal;
use pointfree::finite_frames::FiniteFrame;
use pointfree::locale::{IntervalSet, NatSet};
use pointfree::rational::{pow2_neg, q, ComplexQ, Q};

const HORIZON: u64 = 96;

fn natset() -> impl Strategy<Value = NatSet> {
    let pts = || proptest::collection::vec(0u64..40, 0..5);
    prop_oneof![
        pts().prop_map(NatSet::finite),
        pts().prop_map(NatSet::cofinite),
        (2u64..6, proptest::collection::vec(any::<bool>(), 6), pts()).prop_map(|(p, bits, extra)| {
            let residues: Vec<u64> = (0..p).filter(|&r| bits[r as usize]).collect();
            NatSet::periodic(p, residues).union(&NatSet::finite(extra))
        }),
    ]
}

fn members(s: &NatSet) -> Vec<bool> {
    (0..HORIZON).map(|n| s.contains(n)).collect()
}

fn intervals() -> impl Strategy<Value = IntervalSet> {
    proptest::collection::vec((0i64..16, 1i64..8), 0..4).prop_map(|parts| {
        IntervalSet::from_intervals(
            parts
                .into_iter()
                .map(|(a, len)| (q(a, 16), q((a + len).min(16), 16)))
                .filter(|(a, b)| a < b),
        )
    })
}

proptest! {
    #[test]
    fn natset_ops_are_pointwise(a in natset(), b in natset()) {
        let (ma, mb) = (members(&a), members(&b));
        let check = |s: NatSet, f: &dyn Fn(bool, bool) -> bool| {
            members(&s) == (0..HORIZON as usize).map(|i| f(ma[i], mb[i])).collect::<Vec<_>>()
        };
        prop_assert!(check(a.union(&b), &|x, y| x || y));
        prop_assert!(check(a.intersection(&b), &|x, y| x && y));
        prop_assert!(check(a.difference(&b), &|x, y| x && !y));
        prop_assert!(check(a.complement(), &|x, _| !x));
        prop_assert_eq!(a.is_subset(&b), a.union(&b) == b);
    }

    #[test]
    fn natset_text_round_trip(a in natset()) {
        let back: NatSet = a.to_string().parse().unwrap();
        prop_assert_eq!(back, a);
    }

    #[test]
    fn interval_ops_match_points(a in intervals(), b in intervals()) {
        for k in 0..=64 {
            let t = q(k, 64);
            prop_assert_eq!(a.union(&b).contains_point(&t), a.contains_point(&t) || b.contains_point(&t));
            prop_assert_eq!(a.intersection(&b).contains_point(&t), a.contains_point(&t) && b.contains_point(&t));
        }
        let back: IntervalSet = a.to_string().parse().unwrap();
        prop_assert_eq!(back, a);
    }

    #[test]
    fn complex_text_round_trip(re in -40i64..40, im in -40i64..40, d in 1i64..9) {
        let z = ComplexQ::new(q(re, d), q(im, d));
        let back: ComplexQ = z.to_string().parse().unwrap();
        prop_assert_eq!(back, z);
    }

    #[test]
    fn sqrt_brackets_are_sound(n in 0i64..10_000, d in 1i64..100, bits in 1u32..40) {
        let s = q(n, d);
        let prec = pow2_neg(bits);
        let (lo, hi) = UpperReal::sqrt(s.clone()).bracket(&prec);
        prop_assert!(&hi - &lo <= prec);
        prop_assert!(lo <= Q::from_integer(0.into()) || &lo * &lo <= s);
        prop_assert!(s < &hi * &hi);
    }

    #[test]
    fn random_downsets_are_heyting(points in 1usize..5, edges in proptest::collection::vec((0usize..4, 0usize..4), 0..5)) {
        let order: Vec<(usize, usize)> = edges.into_iter().filter(|(i, j)| i < j && *j < points).collect();
        let f = FiniteFrame::downsets("p", points, &order).unwrap();
        for a in 0..f.len() {
            prop_assert_eq!(f.meet(a, f.negation(a)), f.bottom());
            for b in 0..f.len() {
                let i = f.implies(a, b);
                prop_assert!(f.leq(f.meet(a, i), b));
                prop_assert_eq!(f.implies(a, a), f.top());
                prop_assert_eq!(f.rather_below(a, b).is_some(), f.join(f.negation(a), b) == f.top());
            }
        }
    }
}
