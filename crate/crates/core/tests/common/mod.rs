//! Brute-force reference computations, written without the library's
//! algorithms, plus seeded generators for test inputs.
#![allow(dead_code)]

use invariant_means::rational::{int, rat};
use invariant_means::repr::PeriodicRep;
use invariant_means::{FunctionRep, Rational};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A random periodic subset of `Z`: `(period, sorted residues)`, never empty.
pub fn random_residues(rng: &mut ChaCha8Rng, max_period: i64) -> (i64, Vec<i64>) {
    let p = rng.gen_range(1..=max_period);
    let mut residues: Vec<i64> = (0..p).filter(|_| rng.gen_bool(0.45)).collect();
    if residues.is_empty() {
        residues.push(rng.gen_range(0..p));
    }
    (p, residues)
}

pub fn periodic_set(p: i64, residues: &[i64]) -> FunctionRep {
    PeriodicRep::integer_set(p, residues).into()
}

/// A random periodic function on `Z` with values `j/q`, `0 <= j <= q`.
pub fn random_unit_values(rng: &mut ChaCha8Rng, max_period: i64, q: i64) -> Vec<Rational> {
    let p = rng.gen_range(1..=max_period);
    (0..p).map(|_| rat(rng.gen_range(0..=q), q)).collect()
}

pub fn member(p: i64, residues: &[i64], x: i64) -> bool {
    residues.contains(&x.rem_euclid(p))
}

/// Largest and smallest count of a periodic set in windows of length `len`,
/// over every window start, divided by `len`.
pub fn window_density_extremes(p: i64, residues: &[i64], len: i64) -> (Rational, Rational) {
    let counts: Vec<i64> = (0..p)
        .map(|s| (s..s + len).filter(|&x| member(p, residues, x)).count() as i64)
        .collect();
    let hi = *counts.iter().max().unwrap();
    let lo = *counts.iter().min().unwrap();
    (rat(hi, len), rat(lo, len))
}

/// All multisets of size `k` drawn from `0..n`, in lexicographic order.
pub fn multisets(n: i64, k: usize) -> Vec<Vec<i64>> {
    fn go(start: i64, n: i64, k: usize, cur: &mut Vec<i64>, out: &mut Vec<Vec<i64>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for t in start..n {
            cur.push(t);
            go(t, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, k, &mut Vec::new(), &mut out);
    out
}

/// Per-point multiplicities of `sum_t 1_A(x - t)` over one period.
fn multiplicities(p: i64, residues: &[i64], translates: &[i64]) -> Vec<i64> {
    (0..p)
        .map(|x| translates.iter().filter(|&&t| member(p, residues, x - t)).count() as i64)
        .collect()
}

/// `p(k)` by enumerating every multiset of residues.
pub fn brute_packing(p: i64, residues: &[i64], k: usize) -> i64 {
    multisets(p, k)
        .iter()
        .map(|ts| *multiplicities(p, residues, ts).iter().max().unwrap())
        .min()
        .unwrap()
}

/// `c(k)` by enumerating every multiset of residues.
pub fn brute_covering(p: i64, residues: &[i64], k: usize) -> i64 {
    multisets(p, k)
        .iter()
        .map(|ts| *multiplicities(p, residues, ts).iter().min().unwrap())
        .max()
        .unwrap()
}

/// Density of `A - A` for a periodic `A`, from all pairwise differences.
pub fn brute_difference_density(p: i64, residues: &[i64]) -> Rational {
    let mut diffs = vec![false; p as usize];
    for &a in residues {
        for &b in residues {
            diffs[(a - b).rem_euclid(p) as usize] = true;
        }
    }
    rat(diffs.iter().filter(|&&d| d).count() as i64, p)
}

/// Members of a periodic set in `[lo, hi]`.
pub fn members_in(p: i64, residues: &[i64], lo: i64, hi: i64) -> Vec<i64> {
    (lo..=hi).filter(|&x| member(p, residues, x)).collect()
}

/// Least displacement of an order-preserving bijection between two periodic
/// sets of equal density, by trying every index shift against a long window.
pub fn brute_perturbation_bound(p1: i64, r1: &[i64], p2: i64, r2: &[i64]) -> Option<i64> {
    if rat(r1.len() as i64, p1) != rat(r2.len() as i64, p2) {
        return None;
    }
    let span = 4 * p1 * p2;
    let a = members_in(p1, r1, -3 * span, 3 * span);
    let b = members_in(p2, r2, -3 * span, 3 * span);
    let a0 = a.iter().position(|&x| x >= 0).unwrap() as i64;
    let b0 = b.iter().position(|&x| x >= 0).unwrap() as i64;
    let per = r1.len() as i64 * (span / p1);
    let mut best: Option<i64> = None;
    for shift in -per..=per {
        let mut worst = 0;
        for i in -per..per {
            let x = a[(a0 + i) as usize];
            let y = b[(b0 + i + shift) as usize];
            worst = worst.max((x - y).abs());
        }
        best = Some(best.map_or(worst, |b| b.min(worst)));
    }
    best
}

/// The dyadic block function on the positive integers.
pub fn dyadic(x: i64) -> i64 {
    let mut i = 1;
    loop {
        let lo = 1i64 << (2 * i - 1);
        let hi = 1i64 << (2 * i);
        if x <= lo {
            return 0;
        }
        if x <= hi {
            return -1;
        }
        i += 1;
    }
}

/// `(2 S_{2n} - 3 S_n) / n` with `S_n = f(1) + ... + f(n)`.
pub fn polya_value(n: i64) -> Rational {
    let s = |m: i64| -> i64 { (1..=m).map(dyadic).sum() };
    (int(2 * s(2 * n)) - int(3 * s(n))) / int(n)
}

pub fn pass_line(index: usize, name: &str, ok: bool, detail: &str) -> String {
    format!("criterion {index:>2} {}: {name} ({detail})", if ok { "PASS" } else { "FAIL" })
}
