use serde_json::{json, Value};

use super::sets::IntSet;
use crate::error::{Error, Result};
use crate::rational::lcm;
use crate::repr::FunctionRep;

/// `(a, phi(a))` for the members `a` of a window.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Matching {
    pub window: (i64, i64),
    pub pairs: Vec<(i64, i64)>,
}

/// `phi(a_i) = b_{i + shift}`, where `a_0`, `b_0` are the least nonnegative
/// members and indices run in increasing order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MatchingRule {
    pub shift: i64,
    pub period: i64,
    pub per_period: i64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PerturbationVerdict {
    Perturbation {
        /// Least `b` with a bijection moving every point by at most `b`.
        bound: i64,
        matching: Matching,
        /// `None` for finite sets.
        rule: Option<MatchingRule>,
        /// Set when no matching with displacement `bound - 1` exists on the
        /// window alone.
        window_certified: bool,
    },
    NotPerturbation {
        reason: String,
    },
}

impl PerturbationVerdict {
    pub fn is_perturbation(&self) -> bool {
        matches!(self, PerturbationVerdict::Perturbation { .. })
    }

    pub fn to_json(&self) -> Value {
        match self {
            PerturbationVerdict::Perturbation {
                bound,
                matching,
                rule,
                window_certified,
            } => json!({
                "perturbation": true,
                "bound": bound,
                "window": [matching.window.0, matching.window.1],
                "pairs": matching.pairs.iter().map(|(a, b)| json!([a, b])).collect::<Vec<_>>(),
                "rule": rule.as_ref().map(|r| json!({
                    "shift": r.shift,
                    "period": r.period,
                    "per_period": r.per_period,
                })),
                "window_certified": window_certified,
            }),
            PerturbationVerdict::NotPerturbation { reason } => json!({
                "perturbation": false,
                "reason": reason,
            }),
        }
    }
}

/// Decides whether a bijection `phi: A -> A2` with bounded `phi(x) - x`
/// exists, for periodic or finitely modified subsets of `Z`.
///
/// Crossing pairs can always be uncrossed without raising the displacement,
/// so an optimal bijection is order preserving, that is an index shift. The
/// least bound is the minimum over shifts; the displacement range moves
/// monotonically with the shift, which bounds the search.
pub fn is_perturbation(a: &FunctionRep, a2: &FunctionRep) -> Result<PerturbationVerdict> {
    let sa = IntSet::from_rep(a)?;
    let sb = IntSet::from_rep(a2)?;
    match (sa.is_finite(), sb.is_finite()) {
        (true, true) => Ok(finite_case(&sa, &sb)),
        (false, false) => infinite_case(&sa, &sb),
        _ => Ok(PerturbationVerdict::NotPerturbation {
            reason: "density mismatch".into(),
        }),
    }
}

fn finite_case(sa: &IntSet, sb: &IntSet) -> PerturbationVerdict {
    let xs = sa.finite_members();
    let ys = sb.finite_members();
    if xs.len() != ys.len() {
        return PerturbationVerdict::NotPerturbation {
            reason: format!("cardinality mismatch ({} vs {})", xs.len(), ys.len()),
        };
    }
    let pairs: Vec<(i64, i64)> = xs.iter().copied().zip(ys.iter().copied()).collect();
    let bound = pairs.iter().map(|(x, y)| (y - x).abs()).max().unwrap_or(0);
    let window = match (xs.first(), xs.last()) {
        (Some(&lo), Some(&hi)) => (lo, hi),
        _ => (0, 0),
    };
    let window_certified = bound == 0 || !saturates(&xs, &ys, bound - 1);
    PerturbationVerdict::Perturbation {
        bound,
        matching: Matching { window, pairs },
        rule: None,
        window_certified,
    }
}

fn infinite_case(sa: &IntSet, sb: &IntSet) -> Result<PerturbationVerdict> {
    let p = lcm(sa.period, sb.period);
    let ca = sa.base_count() * (p / sa.period);
    let cb = sb.base_count() * (p / sb.period);
    if ca != cb {
        return Ok(PerturbationVerdict::NotPerturbation {
            reason: format!("density mismatch ({ca}/{p} vs {cb}/{p})"),
        });
    }
    let r = sa.core_radius().max(sb.core_radius());
    let mut s_max = 2 * ca + (sa.override_count() + sb.override_count()) as i64 + 2;
    let (shift, bound) = loop {
        // both periodic regimes show a full period inside the windows
        let margin = (s_max + r + 2 * ca + 4) * p;
        let xs = sa.members(-(r + margin), r + margin);
        let ys = sb.members(-(r + 2 * margin), r + 2 * margin);
        let x0 = xs.partition_point(|&x| x < 0) as i64;
        let y0 = ys.partition_point(|&y| y < 0) as i64;
        let range = |s: i64| -> (i64, i64) {
            let mut lo = i64::MAX;
            let mut hi = i64::MIN;
            for (idx, &x) in xs.iter().enumerate() {
                let j = idx as i64 - x0 + s + y0;
                let d = ys[j as usize] - x;
                lo = lo.min(d);
                hi = hi.max(d);
            }
            (lo, hi)
        };
        let mut best: Option<(i64, i64)> = None;
        for s in -s_max..=s_max {
            let (lo, hi) = range(s);
            let b = hi.max(-lo);
            let better = match best {
                None => true,
                Some((bs, bb)) => b < bb || (b == bb && (s.abs(), s) < (bs.abs(), bs)),
            };
            if better {
                best = Some((s, b));
            }
        }
        let (s, b) = best.unwrap();
        if range(s_max).1 >= b && -range(-s_max).0 >= b {
            break (s, b);
        }
        s_max *= 2;
    };

    let window = (-(r + 3 * p), r + 3 * p);
    let reach = window.1 + (shift.abs() + 2 * ca + 2 * r + 4) * p + bound;
    let xs_all = sa.members(-reach, reach);
    let ys_all = sb.members(-2 * reach, 2 * reach);
    let x0 = xs_all.partition_point(|&x| x < 0) as i64;
    let y0 = ys_all.partition_point(|&y| y < 0) as i64;
    let pairs: Vec<(i64, i64)> = xs_all
        .iter()
        .enumerate()
        .filter(|(_, &x)| x >= window.0 && x <= window.1)
        .map(|(idx, &x)| (x, ys_all[(idx as i64 - x0 + shift + y0) as usize]))
        .collect();
    if pairs.iter().any(|(x, y)| (y - x).abs() > bound) {
        return Err(Error::Invariant("shift matching exceeds its bound".into()));
    }
    let left: Vec<i64> = pairs.iter().map(|p| p.0).collect();
    let right = sb.members(window.0 - bound, window.1 + bound);
    if !saturates(&left, &right, bound) {
        return Err(Error::Invariant(format!("no window matching with displacement {bound}")));
    }
    let window_certified = bound == 0 || !saturates(&left, &right, bound - 1);
    Ok(PerturbationVerdict::Perturbation {
        bound,
        matching: Matching { window, pairs },
        rule: Some(MatchingRule {
            shift,
            period: p,
            per_period: ca,
        }),
        window_certified,
    })
}

/// Whether every point of `left` can be matched to a distinct point of
/// `right` within distance `d` (augmenting paths).
fn saturates(left: &[i64], right: &[i64], d: i64) -> bool {
    let adj: Vec<Vec<usize>> = left
        .iter()
        .map(|&x| {
            let lo = right.partition_point(|&y| y < x - d);
            let hi = right.partition_point(|&y| y <= x + d);
            (lo..hi).collect()
        })
        .collect();
    let mut owner: Vec<Option<usize>> = vec![None; right.len()];
    fn augment(u: usize, adj: &[Vec<usize>], owner: &mut [Option<usize>], seen: &mut [bool]) -> bool {
        for &v in &adj[u] {
            if !seen[v] {
                seen[v] = true;
                if owner[v].is_none_or(|w| augment(w, adj, owner, seen)) {
                    owner[v] = Some(u);
                    return true;
                }
            }
        }
        false
    }
    (0..left.len()).all(|u| {
        let mut seen = vec![false; right.len()];
        augment(u, &adj, &mut owner, &mut seen)
    })
}
