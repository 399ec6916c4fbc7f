use invariant_means::rational::{int, rat};
use invariant_means::repr::PeriodicRep;
use invariant_means::{
    density_pair, difference_set_bound, expansion_ratio, is_perturbation, linear_combine, lowest_mean, uppermost_mean,
    FiniteSubset, FunctionRep, GroupSpec, Rational,
};
use proptest::prelude::*;

fn values() -> impl Strategy<Value = Vec<Rational>> {
    prop::collection::vec((-6i64..=6, 1i64..=4), 1..=8)
        .prop_map(|v| v.into_iter().map(|(n, d)| rat(n, d)).collect())
}

fn function() -> impl Strategy<Value = FunctionRep> {
    values().prop_map(|v| PeriodicRep::integer_function(v).into())
}

fn set() -> impl Strategy<Value = (i64, Vec<i64>)> {
    (1i64..=10).prop_flat_map(|p| {
        prop::collection::btree_set(0..p, 1..=p as usize).prop_map(move |s| (p, s.into_iter().collect()))
    })
}

fn upper(f: &FunctionRep) -> Rational {
    uppermost_mean(f).unwrap().value
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn conjugacy(f in function()) {
        prop_assert_eq!(lowest_mean(&f).unwrap().value, -upper(&f.neg()));
        prop_assert!(lowest_mean(&f).unwrap().value <= upper(&f));
    }

    #[test]
    fn constants_shift_means(f in function(), c in -5i64..=5) {
        prop_assert_eq!(upper(&f.add_constant(&int(c))), upper(&f) + int(c));
    }

    #[test]
    fn positive_homogeneity(f in function(), c in 0i64..=5) {
        prop_assert_eq!(upper(&f.scale(&int(c))), int(c) * upper(&f));
    }

    #[test]
    fn translation_invariance(f in function(), t in -20i64..=20) {
        let g = GroupSpec::integers();
        prop_assert_eq!(upper(&f.translate(&g.int(t)).unwrap()), upper(&f));
    }

    #[test]
    fn subadditivity(f in function(), h in function(), t in -5i64..=5) {
        let g = GroupSpec::integers();
        let sum = linear_combine(&[(int(1), g.int(0), &f), (int(1), g.int(t), &h)]).unwrap();
        prop_assert!(upper(&sum) <= upper(&f) + upper(&h));
    }

    #[test]
    fn density_pair_is_ordered((p, res) in set()) {
        let a: FunctionRep = PeriodicRep::integer_set(p, &res).into();
        let d = density_pair(&a).unwrap();
        prop_assert!(d.certified());
        prop_assert!(d.lower.value <= d.upper.value);
        prop_assert_eq!(d.upper.value, rat(res.len() as i64, p));
    }

    #[test]
    fn difference_set_dominates((p, res) in set()) {
        let a: FunctionRep = PeriodicRep::integer_set(p, &res).into();
        let rep = difference_set_bound(&a).unwrap();
        prop_assert!(rep.density_ok && rep.ceil_floor_ok);
    }

    #[test]
    fn perturbation_is_symmetric((p, res) in set(), (q, res2) in set()) {
        let a: FunctionRep = PeriodicRep::integer_set(p, &res).into();
        let b: FunctionRep = PeriodicRep::integer_set(q, &res2).into();
        let ab = is_perturbation(&a, &b).unwrap();
        let ba = is_perturbation(&b, &a).unwrap();
        prop_assert_eq!(ab.is_perturbation(), ba.is_perturbation());
        prop_assert_eq!(ab.is_perturbation(), rat(res.len() as i64, p) == rat(res2.len() as i64, q));
        if let (
            invariant_means::PerturbationVerdict::Perturbation { bound: x, .. },
            invariant_means::PerturbationVerdict::Perturbation { bound: y, .. },
        ) = (&ab, &ba) {
            prop_assert_eq!(x, y);
        }
    }

    #[test]
    fn expansion_at_least_one(b in prop::collection::btree_set(-8i64..8, 1..6), t in prop::collection::btree_set(-4i64..4, 1..4)) {
        let b = FiniteSubset::integers(b);
        let t = FiniteSubset::integers(t);
        let r = expansion_ratio(&b, &t).unwrap();
        prop_assert!(r >= int(1));
        prop_assert!(r <= int(t.len() as i64));
    }
}
