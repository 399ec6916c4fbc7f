use std::sync::atomic::{AtomicU32, AtomicUsize, Ordering};

use num_traits::One;
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::group::GroupElement;
use crate::means::render_number;
use crate::rational::{ceil_to_i64, floor_to_i64, int, Rational};
use crate::repr::{FunctionRep, PeriodicRep};

/// Exact search is refused above this many `k`-subsets.
pub const EXACT_SUBSET_LIMIT: u128 = 10_000_000;

const LOCAL_SEARCH_PASSES: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SearchMode {
    Exact,
    Greedy,
}

impl SearchMode {
    pub fn name(self) -> &'static str {
        match self {
            SearchMode::Exact => "exact",
            SearchMode::Greedy => "greedy",
        }
    }
}

impl std::str::FromStr for SearchMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "exact" => Ok(SearchMode::Exact),
            "greedy" => Ok(SearchMode::Greedy),
            _ => Err(Error::Domain(format!("unknown mode `{s}` (expected exact or greedy)"))),
        }
    }
}

/// `p(k)` or `c(k)` with the translates realizing it. Exact results are the
/// optimum with the lexicographically smallest witness; greedy results are
/// bounds (upper for packing, lower for covering).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PackingResult {
    pub k: usize,
    pub value: i64,
    pub witness: Vec<GroupElement>,
    pub mode: SearchMode,
}

impl PackingResult {
    pub fn ratio(&self) -> Rational {
        int(self.value) / int(self.k as i64)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "k": self.k,
            "value": self.value,
            "ratio": render_number(&self.ratio(), true),
            "mode": self.mode.name(),
            "witness": self.witness.iter().map(GroupElement::flat).collect::<Vec<_>>(),
        })
    }
}

/// Cell translates of a periodic set: `hits[t]` lists the cell indices `x`
/// with `x - t` in `A`.
struct Translates {
    cell: Vec<GroupElement>,
    hits: Vec<Vec<usize>>,
}

impl Translates {
    fn new(a: &PeriodicRep) -> Self {
        let group = a.group();
        let cell = a.cell_points();
        let members = a.support_points();
        let hits = cell
            .iter()
            .map(|t| {
                let mut h: Vec<usize> = members.iter().map(|m| a.cell_index(&group.add(m, t))).collect();
                h.sort_unstable();
                h
            })
            .collect();
        Translates { cell, hits }
    }

    fn size(&self) -> usize {
        self.cell.len()
    }

    fn counts(&self, chosen: &[usize]) -> Vec<u32> {
        let mut counts = vec![0u32; self.size()];
        for &t in chosen {
            for &x in &self.hits[t] {
                counts[x] += 1;
            }
        }
        counts
    }

    /// Distinct group elements for the chosen residues; repeated residues
    /// are moved by whole periods along the first free axis.
    fn witness(&self, a: &PeriodicRep, chosen: &[usize]) -> Vec<GroupElement> {
        let mut seen = vec![0i64; self.size()];
        let mut out: Vec<GroupElement> = chosen
            .iter()
            .map(|&t| {
                let mut x = self.cell[t].clone();
                if seen[t] > 0 {
                    x.free[0] += seen[t] * a.period()[0];
                }
                seen[t] += 1;
                x
            })
            .collect();
        out.sort();
        out
    }
}

fn binomial(n: usize, k: usize) -> u128 {
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
        if acc > EXACT_SUBSET_LIMIT * 1000 {
            return acc;
        }
    }
    acc
}

fn require_periodic_set(a: &FunctionRep) -> Result<&PeriodicRep> {
    a.require_set()?;
    a.group().require_infinite()?;
    match a {
        FunctionRep::Periodic(p) => Ok(p),
        _ => Err(Error::Kind("packing and covering need a periodic set".into())),
    }
}

fn check_exact_capacity(p: usize, k: usize) -> Result<()> {
    if k > p {
        return Err(Error::Range(format!(
            "k = {k} exceeds the cell size {p}; use greedy mode for larger k"
        )));
    }
    let subsets = binomial(p, k);
    if subsets > EXACT_SUBSET_LIMIT {
        return Err(Error::Range(format!(
            "{subsets} subsets exceed the exact-search limit; use greedy mode"
        )));
    }
    Ok(())
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Goal {
    /// Minimize the largest multiplicity.
    Pack,
    /// Maximize the smallest multiplicity.
    Cover,
}

impl Goal {
    fn score(self, counts: &[u32]) -> u32 {
        match self {
            Goal::Pack => counts.iter().copied().max().unwrap_or(0),
            Goal::Cover => counts.iter().copied().min().unwrap_or(0),
        }
    }

    /// Lexicographic key where smaller is better: the objective, then how
    /// many points attain it.
    fn key(self, counts: &[u32]) -> (i64, usize) {
        let s = self.score(counts);
        let ties = counts.iter().filter(|&&c| c == s).count();
        match self {
            Goal::Pack => (s as i64, ties),
            Goal::Cover => (-(s as i64), ties),
        }
    }
}

struct Search<'a> {
    tr: &'a Translates,
    goal: Goal,
    k: usize,
    /// Best attainable objective; reaching it ends the search.
    target: u32,
}

struct Branch {
    score: u32,
    chosen: Vec<usize>,
}

impl Search<'_> {
    fn better(&self, a: u32, b: u32) -> bool {
        match self.goal {
            Goal::Pack => a < b,
            Goal::Cover => a > b,
        }
    }

    fn worst(&self) -> u32 {
        match self.goal {
            Goal::Pack => u32::MAX,
            Goal::Cover => 0,
        }
    }

    /// Whether the partial choice can still strictly beat `bound`, or tie it
    /// when `allow_tie`.
    fn promising(&self, counts: &[u32], left: usize, bound: u32, allow_tie: bool) -> bool {
        match self.goal {
            Goal::Pack => {
                let m = self.goal.score(counts);
                m < bound || (allow_tie && m == bound)
            }
            Goal::Cover => {
                let m = self.goal.score(counts) + left as u32;
                m > bound || (allow_tie && m == bound)
            }
        }
    }

    #[allow(clippy::too_many_arguments)]
    fn dfs(
        &self,
        start: usize,
        counts: &mut [u32],
        chosen: &mut Vec<usize>,
        best: &mut Option<Branch>,
        global: &AtomicU32,
    ) {
        let left = self.k - chosen.len();
        if left == 0 {
            let s = self.goal.score(counts);
            if best.as_ref().is_none_or(|b| self.better(s, b.score)) {
                *best = Some(Branch {
                    score: s,
                    chosen: chosen.clone(),
                });
                match self.goal {
                    Goal::Pack => global.fetch_min(s, Ordering::Relaxed),
                    Goal::Cover => global.fetch_max(s, Ordering::Relaxed),
                };
            }
            return;
        }
        let p = self.tr.size();
        for t in start..=(p - left) {
            for &x in &self.tr.hits[t] {
                counts[x] += 1;
            }
            chosen.push(t);
            let local = best.as_ref().map_or(self.worst(), |b| b.score);
            let alive = (best.is_none() || self.promising(counts, left - 1, local, false))
                && self.promising(counts, left - 1, global.load(Ordering::Relaxed), true);
            if alive {
                self.dfs(t + 1, counts, chosen, best, global);
            }
            chosen.pop();
            for &x in &self.tr.hits[t] {
                counts[x] -= 1;
            }
            if best.as_ref().is_some_and(|b| b.score == self.target) {
                return;
            }
        }
    }

    /// Subsets containing residue 0 suffice: translating a witness so that
    /// its first element becomes 0 keeps the profile and lowers it in
    /// lexicographic order. Branches on the second element run in parallel.
    fn run(&self) -> Branch {
        let p = self.tr.size();
        let mut counts = vec![0u32; p];
        for &x in &self.tr.hits[0] {
            counts[x] += 1;
        }
        if self.k == 1 {
            return Branch {
                score: self.goal.score(&counts),
                chosen: vec![0],
            };
        }
        let global = AtomicU32::new(self.worst());
        let settled = AtomicUsize::new(usize::MAX);
        let branches: Vec<(usize, Branch)> = (1..=(p - self.k + 1))
            .into_par_iter()
            .filter_map(|s| {
                if s > settled.load(Ordering::Relaxed) {
                    return None;
                }
                let mut counts = counts.clone();
                for &x in &self.tr.hits[s] {
                    counts[x] += 1;
                }
                let mut chosen = vec![0, s];
                let mut best = None;
                if self.promising(&counts, self.k - 2, global.load(Ordering::Relaxed), true) {
                    self.dfs(s + 1, &mut counts, &mut chosen, &mut best, &global);
                }
                let b = best?;
                if b.score == self.target {
                    settled.fetch_min(s, Ordering::Relaxed);
                }
                Some((s, b))
            })
            .collect();
        branches
            .into_iter()
            .reduce(|a, b| if self.better(b.1.score, a.1.score) { b } else { a })
            .map(|(_, b)| b)
            .expect("some branch completes")
    }
}

fn greedy(tr: &Translates, goal: Goal, k: usize) -> Vec<usize> {
    let p = tr.size();
    let mut chosen: Vec<usize> = Vec::with_capacity(k);
    let mut counts = vec![0u32; p];
    for _ in 0..k {
        let pick = (0..p)
            .min_by_key(|&t| {
                let mut c = counts.clone();
                for &x in &tr.hits[t] {
                    c[x] += 1;
                }
                goal.key(&c)
            })
            .unwrap();
        for &x in &tr.hits[pick] {
            counts[x] += 1;
        }
        chosen.push(pick);
    }
    for _ in 0..LOCAL_SEARCH_PASSES {
        let current = goal.key(&counts);
        let mut improved = None;
        'scan: for i in 0..k {
            for r in 0..p {
                if r == chosen[i] {
                    continue;
                }
                let mut c = counts.clone();
                for &x in &tr.hits[chosen[i]] {
                    c[x] -= 1;
                }
                for &x in &tr.hits[r] {
                    c[x] += 1;
                }
                if goal.key(&c) < current {
                    improved = Some((i, r, c));
                    break 'scan;
                }
            }
        }
        match improved {
            Some((i, r, c)) => {
                chosen[i] = r;
                counts = c;
            }
            None => break,
        }
    }
    chosen.sort_unstable();
    chosen
}

fn solve(a: &PeriodicRep, k: usize, mode: SearchMode, goal: Goal) -> Result<PackingResult> {
    if k == 0 {
        return Err(Error::Domain("k must be positive".into()));
    }
    let tr = Translates::new(a);
    let density = a.average();
    let kd = int(k as i64) * &density;
    let chosen = match mode {
        SearchMode::Exact => {
            check_exact_capacity(tr.size(), k)?;
            let target = match goal {
                Goal::Pack => ceil_to_i64(&kd) as u32,
                Goal::Cover => floor_to_i64(&kd) as u32,
            };
            Search {
                tr: &tr,
                goal,
                k,
                target,
            }
            .run()
            .chosen
        }
        SearchMode::Greedy => greedy(&tr, goal, k),
    };
    let value = goal.score(&tr.counts(&chosen)) as i64;
    let ok = match goal {
        Goal::Pack => int(value) >= kd,
        Goal::Cover => int(value) <= kd,
    };
    if !ok {
        return Err(Error::Invariant(format!(
            "multiplicity {value} of {k} translates contradicts density {density}"
        )));
    }
    Ok(PackingResult {
        k,
        value,
        witness: tr.witness(a, &chosen),
        mode,
    })
}

/// Least `m` such that some `k` translates of `A` cover every point at most
/// `m` times.
pub fn packing_number(a: &FunctionRep, k: usize, mode: SearchMode) -> Result<PackingResult> {
    solve(require_periodic_set(a)?, k, mode, Goal::Pack)
}

/// Greatest `m` such that some `k` translates of `A` cover every point at
/// least `m` times. Exact results are checked against `k - p_{G\A}(k)`.
pub fn covering_number(a: &FunctionRep, k: usize, mode: SearchMode) -> Result<PackingResult> {
    let p = require_periodic_set(a)?;
    let result = solve(p, k, mode, Goal::Cover)?;
    if mode == SearchMode::Exact {
        let complement = p.map(|v| Rational::one() - v);
        let dual = solve(&complement, k, mode, Goal::Pack)?;
        if result.value != k as i64 - dual.value {
            return Err(Error::Invariant(format!(
                "c({k}) = {} but k - p_complement({k}) = {}",
                result.value,
                k as i64 - dual.value
            )));
        }
    }
    Ok(result)
}

#[derive(Debug, Clone)]
pub struct CurveEntry {
    pub result: PackingResult,
    pub ratio: Rational,
}

/// `p(k)/k` for `k = 1..k_max` next to `d*(A)`.
#[derive(Debug, Clone)]
pub struct PackingCurve {
    pub density: Rational,
    pub period_cell: usize,
    pub entries: Vec<CurveEntry>,
}

impl PackingCurve {
    pub fn to_csv(&self) -> String {
        let mut out = String::from("k,p,ratio,mode\n");
        for e in &self.entries {
            out.push_str(&format!(
                "{},{},{},{}\n",
                e.result.k,
                e.result.value,
                render_number(&e.ratio, true),
                e.result.mode.name()
            ));
        }
        out
    }

    pub fn to_json(&self) -> Value {
        json!({
            "density": render_number(&self.density, true),
            "cell_size": self.period_cell,
            "entries": self.entries.iter().map(|e| e.result.to_json()).collect::<Vec<_>>(),
        })
    }
}

/// Computes the packing curve and checks `p(k)/k >= d*`, `p(P)/P = d*` at
/// the cell size `P`, and subadditivity of the exact entries.
pub fn packing_limit_check(a: &FunctionRep, k_max: usize) -> Result<PackingCurve> {
    let p = require_periodic_set(a)?;
    let size = p.cell_size();
    let density = p.average();
    let mut entries = Vec::with_capacity(k_max);
    for k in 1..=k_max {
        let mode = if k <= size && binomial(size, k) <= EXACT_SUBSET_LIMIT {
            SearchMode::Exact
        } else {
            SearchMode::Greedy
        };
        let result = solve(p, k, mode, Goal::Pack)?;
        let ratio = result.ratio();
        if ratio < density {
            return Err(Error::Invariant(format!("p({k})/{k} = {ratio} is below d* = {density}")));
        }
        if k == size && mode == SearchMode::Exact && ratio != density {
            return Err(Error::Invariant(format!(
                "p({k})/{k} = {ratio} differs from d* = {density} at the full cell"
            )));
        }
        entries.push(CurveEntry { result, ratio });
    }
    let exact: Vec<(usize, i64)> = entries
        .iter()
        .filter(|e| e.result.mode == SearchMode::Exact)
        .map(|e| (e.result.k, e.result.value))
        .collect();
    let value = |k: usize| exact.iter().find(|e| e.0 == k).map(|e| e.1);
    for &(k, pk) in &exact {
        for &(l, pl) in &exact {
            if let Some(pkl) = value(k + l) {
                if pkl > pk + pl {
                    return Err(Error::Invariant(format!("p({}) > p({k}) + p({l})", k + l)));
                }
            }
        }
    }
    Ok(PackingCurve {
        density,
        period_cell: size,
        entries,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    fn a236() -> FunctionRep {
        PeriodicRep::integer_set(6, &[0, 2, 3]).into()
    }

    fn ints(w: &[GroupElement]) -> Vec<i64> {
        w.iter().map(|x| x.free[0]).collect()
    }

    #[test]
    fn packing_examples() {
        assert_eq!(packing_number(&a236(), 1, SearchMode::Exact).unwrap().value, 1);
        assert_eq!(packing_number(&a236(), 2, SearchMode::Exact).unwrap().value, 2);
        let r = packing_number(&a236(), 6, SearchMode::Exact).unwrap();
        assert_eq!(r.value, 3);
        assert_eq!(r.ratio(), rat(1, 2));
        assert_eq!(ints(&r.witness), vec![0, 1, 2, 3, 4, 5]);
    }

    #[test]
    fn covering_examples() {
        assert_eq!(covering_number(&a236(), 2, SearchMode::Exact).unwrap().value, 0);
        assert_eq!(covering_number(&a236(), 6, SearchMode::Exact).unwrap().value, 3);
        let all: FunctionRep = PeriodicRep::integer_set(1, &[0]).into();
        assert_eq!(covering_number(&all, 3, SearchMode::Greedy).unwrap().value, 3);
    }

    #[test]
    fn exact_range_errors() {
        assert!(matches!(packing_number(&a236(), 7, SearchMode::Exact), Err(Error::Range(_))));
        let r = packing_number(&a236(), 7, SearchMode::Greedy).unwrap();
        assert!(r.value >= 4);
        assert_eq!(r.witness.len(), 7);
    }

    #[test]
    fn witness_is_lexicographically_smallest() {
        let fives: FunctionRep = PeriodicRep::integer_set(10, &[0, 5]).into();
        let r = packing_number(&fives, 2, SearchMode::Exact).unwrap();
        assert_eq!((r.value, ints(&r.witness)), (1, vec![0, 1]));
    }

    #[test]
    fn limit_curve() {
        let curve = packing_limit_check(&a236(), 6).unwrap();
        assert_eq!(curve.entries.last().unwrap().ratio, rat(1, 2));
        assert!(curve.to_csv().starts_with("k,p,ratio,mode\n1,1,1,exact\n"));

        let fives: FunctionRep = PeriodicRep::integer_set(5, &[0]).into();
        let curve = packing_limit_check(&fives, 5).unwrap();
        assert_eq!(curve.entries[4].result.value, 1);

        let all: FunctionRep = PeriodicRep::integer_set(1, &[0]).into();
        let curve = packing_limit_check(&all, 4).unwrap();
        assert!(curve.entries.iter().all(|e| e.ratio == int(1)));
    }

    #[test]
    fn torsion_group_cells() {
        let g = crate::group::GroupSpec::new(1, vec![2]).unwrap();
        let members = [g.element(vec![0], vec![0]).unwrap()];
        let a: FunctionRep = PeriodicRep::indicator(&g, vec![2], &members).unwrap().into();
        let r = packing_number(&a, 4, SearchMode::Exact).unwrap();
        assert_eq!(r.value, 1);
    }
}
