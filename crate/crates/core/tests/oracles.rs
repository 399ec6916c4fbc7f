//! Library results against brute-force references.

mod common;

use std::collections::BTreeMap;

use invariant_means::commarginal::counting_discrepancy;
use invariant_means::rational::{int, rat};
use invariant_means::repr::{parse_description, serialize_description, FiniteModRep, PeriodicRep};
use invariant_means::{
    absolute_mediality, b_average, covering_number, density_pair, expansion_pseudomean, lowest_mean,
    packing_number, uppermost_mean, FiniteSubset, FunctionRep, GroupSpec, Rational, SearchMode,
};
use rand::Rng;

use common::*;

#[test]
fn covering_matches_enumeration() {
    let mut r = rng(21);
    for _ in 0..25 {
        let (p, res) = random_residues(&mut r, 8);
        let a = periodic_set(p, &res);
        for k in 1..=p as usize {
            let got = covering_number(&a, k, SearchMode::Exact).unwrap();
            assert_eq!(got.value, brute_covering(p, &res, k), "c({k}) for {res:?} mod {p}");
        }
    }
}

#[test]
fn greedy_bounds_bracket_exact() {
    let mut r = rng(22);
    for _ in 0..25 {
        let (p, res) = random_residues(&mut r, 9);
        let a = periodic_set(p, &res);
        for k in 1..=p as usize {
            let exact = packing_number(&a, k, SearchMode::Exact).unwrap();
            let greedy = packing_number(&a, k, SearchMode::Greedy).unwrap();
            assert!(greedy.value >= exact.value);
            let exact = covering_number(&a, k, SearchMode::Exact).unwrap();
            let greedy = covering_number(&a, k, SearchMode::Greedy).unwrap();
            assert!(greedy.value <= exact.value);
        }
    }
}

#[test]
fn packing_witness_attains_value() {
    let mut r = rng(23);
    for _ in 0..20 {
        let (p, res) = random_residues(&mut r, 9);
        let a = periodic_set(p, &res);
        let k = r.gen_range(1..=p as usize);
        let got = packing_number(&a, k, SearchMode::Exact).unwrap();
        assert_eq!(got.witness.len(), k);
        let worst = (0..p)
            .map(|x| got.witness.iter().filter(|t| member(p, &res, x - t.free[0])).count() as i64)
            .max()
            .unwrap();
        assert_eq!(worst, got.value);
    }
}

#[test]
fn finite_modifications_keep_the_density() {
    let mut r = rng(24);
    for _ in 0..20 {
        let (p, res) = random_residues(&mut r, 10);
        let base = PeriodicRep::integer_set(p, &res);
        let mut overrides = BTreeMap::new();
        for _ in 0..4 {
            overrides.insert(GroupSpec::integers().int(r.gen_range(-30..30)), int(r.gen_range(0..2)));
        }
        let modified: FunctionRep = FiniteModRep::new(base.clone(), overrides).unwrap().into();
        let d = density_pair(&modified).unwrap();
        assert_eq!(d.upper.value, rat(res.len() as i64, p));
        assert_eq!(d.lower.value, d.upper.value);
    }
}

#[test]
fn periodic_means_are_window_extremes() {
    let mut r = rng(25);
    for _ in 0..20 {
        let values = random_unit_values(&mut r, 7, 4);
        let p = values.len() as i64;
        let f: FunctionRep = PeriodicRep::integer_function(values.clone()).into();
        let avg: Rational = values.iter().sum::<Rational>() / int(p);
        assert_eq!(uppermost_mean(&f).unwrap().value, avg);
        assert_eq!(lowest_mean(&f).unwrap().value, avg);
        // averaging over one period gives the constant function
        let averaged = b_average(&f, &FiniteSubset::interval(0, p - 1)).unwrap();
        assert_eq!(averaged.constant_value(), Some(&avg));
        assert!(absolute_mediality(&f, 8).unwrap().is_medial());
    }
}

#[test]
fn pseudomean_of_sign_changing_functions() {
    // positive on a sparse set, negative elsewhere
    let values = vec![int(3), int(-1), int(-1), int(-1)];
    let f: FunctionRep = PeriodicRep::integer_function(values).into();
    assert_eq!(expansion_pseudomean(&f).unwrap().value, rat(3, 4));
    let mut overrides = BTreeMap::new();
    overrides.insert(GroupSpec::integers().int(0), int(5));
    let spike: FunctionRep =
        FiniteModRep::new(PeriodicRep::integer_function(vec![int(-1)]), overrides).unwrap().into();
    assert_eq!(expansion_pseudomean(&spike).unwrap().value, int(0));
}

#[test]
fn discrepancy_counts_directly() {
    let mut r = rng(26);
    for _ in 0..20 {
        let (p, res) = random_residues(&mut r, 8);
        let (q, res2) = random_residues(&mut r, 8);
        let h = r.gen_range(1..60);
        let got = counting_discrepancy(&periodic_set(p, &res), &periodic_set(q, &res2), h).unwrap();
        let want = (0..=h)
            .map(|n| {
                let c1 = members_in(p, &res, -n, n).len() as i64;
                let c2 = members_in(q, &res2, -n, n).len() as i64;
                (c1 - c2).abs()
            })
            .max()
            .unwrap();
        assert_eq!(got, want);
    }
}

#[test]
fn descriptions_round_trip() {
    let mut r = rng(27);
    for _ in 0..20 {
        let values = random_unit_values(&mut r, 6, 3);
        let f: FunctionRep = PeriodicRep::integer_function(values).into();
        assert_eq!(parse_description(&serialize_description(&f)).unwrap(), f);
    }
    let g = GroupSpec::new(1, vec![2]).unwrap();
    let cell = [g.element(vec![0], vec![1]).unwrap(), g.element(vec![1], vec![0]).unwrap()];
    let f: FunctionRep = PeriodicRep::indicator(&g, vec![2], &cell).unwrap().into();
    assert_eq!(parse_description(&serialize_description(&f)).unwrap(), f);
    assert_eq!(density_pair(&f).unwrap().upper.value, rat(1, 2));
}
