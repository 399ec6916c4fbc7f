//! Semi-decision for the witness (Følner) criterion `inf_B |B+T|/|B| = 1`
//! on a finitely described family of sets.

use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::group::{difference_set, expansion_ratio, FiniteSubset, GroupElement, GroupSpec};
use crate::rational::Rational;

/// A sequence `B_1, B_2, ...` of finite sets.
#[derive(Debug, Clone, PartialEq)]
pub enum WitnessFamilySpec {
    /// `B_i = {0..i-1}^d x torsion`.
    Boxes,
    /// `B_i = {0, i*stride}`.
    Pair { stride: GroupElement },
    /// An explicit finite list. `nonimproving` declares that ratios past the
    /// listed sets never drop below the best listed one.
    List {
        sets: Vec<FiniteSubset>,
        nonimproving: bool,
    },
}

impl WitnessFamilySpec {
    /// The `i`-th member (1-based), if the family has one.
    pub fn member(&self, group: &GroupSpec, i: usize) -> Option<FiniteSubset> {
        match self {
            WitnessFamilySpec::Boxes => Some(FiniteSubset::box_set(group, i as i64)),
            WitnessFamilySpec::Pair { stride } => {
                let far = group.scale(stride, i as i64);
                Some(FiniteSubset::new(group, [group.zero(), far]).expect("same group"))
            }
            WitnessFamilySpec::List { sets, .. } => sets.get(i - 1).cloned(),
        }
    }

    /// Index past which the ratio against `t` can no longer improve, when the
    /// family is known to settle.
    fn settles_by(&self, group: &GroupSpec, t: &FiniteSubset) -> Option<usize> {
        match self {
            WitnessFamilySpec::Boxes => None,
            WitnessFamilySpec::Pair { stride } => {
                let step = stride.free_norm();
                if step > 0 {
                    // once i*stride leaves T - T the two translates of T are disjoint
                    let diff = difference_set(t, t).ok()?;
                    Some((diff.free_radius() / step) as usize + 1)
                } else {
                    // a pure torsion stride cycles with the torsion order
                    Some(group.torsion_order().max(1) as usize)
                }
            }
            WitnessFamilySpec::List { sets, nonimproving } => {
                if *nonimproving {
                    Some(0)
                } else {
                    Some(sets.len())
                }
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum WitnessOutcome {
    Pass,
    Fail,
    Inconclusive,
}

#[derive(Debug, Clone, Serialize)]
pub struct WitnessVerdict {
    pub outcome: WitnessOutcome,
    #[serde(with = "crate::rational::serde_rational")]
    pub best_ratio: Rational,
    pub best_index: usize,
    pub checked: usize,
}

/// Checks `B_1..B_depth` against `T`: pass as soon as some ratio is within
/// `tol` of 1; fail only when the family has provably settled above `1 + tol`.
pub fn check_witness(
    group: &GroupSpec,
    family: &WitnessFamilySpec,
    t: &FiniteSubset,
    tol: &Rational,
    depth: i64,
) -> Result<WitnessVerdict> {
    if depth <= 0 {
        return Err(Error::Domain(format!("depth {depth} must be positive")));
    }
    if *tol <= Rational::zero() {
        return Err(Error::Domain("tolerance must be positive".into()));
    }
    group.check_same(t.group())?;
    t.require_nonempty("T")?;
    let one = Rational::one();
    let mut best: Option<(Rational, usize)> = None;
    let mut checked = 0;
    for i in 1..=depth as usize {
        let Some(b) = family.member(group, i) else { break };
        checked = i;
        let ratio = expansion_ratio(&b, t)?;
        if best.as_ref().is_none_or(|(r, _)| ratio < *r) {
            best = Some((ratio.clone(), i));
        }
        if &ratio - &one < *tol {
            return Ok(WitnessVerdict {
                outcome: WitnessOutcome::Pass,
                best_ratio: ratio,
                best_index: i,
                checked,
            });
        }
    }
    let Some((best_ratio, best_index)) = best else {
        return Err(Error::Domain("the family has no members".into()));
    };
    let settled = family
        .settles_by(group, t)
        .is_some_and(|limit| checked >= limit);
    let outcome = if settled && &best_ratio - &one >= *tol {
        WitnessOutcome::Fail
    } else {
        WitnessOutcome::Inconclusive
    };
    Ok(WitnessVerdict {
        outcome,
        best_ratio,
        best_index,
        checked,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    #[test]
    fn boxes_pass_in_z() {
        let g = GroupSpec::integers();
        let t = FiniteSubset::integers([0, 1]);
        let v = check_witness(&g, &WitnessFamilySpec::Boxes, &t, &rat(1, 100), 200).unwrap();
        assert_eq!(v.outcome, WitnessOutcome::Pass);
        assert_eq!(v.best_index, 101);
        assert_eq!(v.best_ratio, rat(102, 101));
    }

    #[test]
    fn pairs_fail() {
        let g = GroupSpec::integers();
        let t = FiniteSubset::integers([0, 1]);
        let fam = WitnessFamilySpec::Pair { stride: g.int(1) };
        let v = check_witness(&g, &fam, &t, &rat(1, 100), 50).unwrap();
        assert_eq!(v.outcome, WitnessOutcome::Fail);
        assert_eq!(v.best_ratio, rat(3, 2));
        assert_eq!(expansion_ratio(&fam.member(&g, 50).unwrap(), &t).unwrap(), rat(2, 1));
    }

    #[test]
    fn boxes_pass_in_z2() {
        let g = GroupSpec::lattice(2);
        let t = FiniteSubset::from_flat(&g, &[vec![0, 0], vec![1, 0], vec![-1, 0], vec![0, 1], vec![0, -1]])
            .unwrap();
        let v = check_witness(&g, &WitnessFamilySpec::Boxes, &t, &rat(1, 10), 100).unwrap();
        assert_eq!(v.outcome, WitnessOutcome::Pass);
    }

    #[test]
    fn short_box_prefix_is_inconclusive() {
        let g = GroupSpec::integers();
        let t = FiniteSubset::integers([0, 1]);
        let v = check_witness(&g, &WitnessFamilySpec::Boxes, &t, &rat(1, 100), 10).unwrap();
        assert_eq!(v.outcome, WitnessOutcome::Inconclusive);
    }

    #[test]
    fn zero_depth_rejected() {
        let g = GroupSpec::integers();
        let t = FiniteSubset::integers([0]);
        assert!(matches!(
            check_witness(&g, &WitnessFamilySpec::Boxes, &t, &rat(1, 10), 0),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn short_pair_prefix_does_not_fail() {
        let g = GroupSpec::integers();
        let t = FiniteSubset::interval(0, 9);
        let fam = WitnessFamilySpec::Pair { stride: g.int(1) };
        let v = check_witness(&g, &fam, &t, &rat(1, 100), 3).unwrap();
        assert_eq!(v.outcome, WitnessOutcome::Inconclusive);
    }

    #[test]
    fn explicit_list_checked_fully() {
        let g = GroupSpec::integers();
        let t = FiniteSubset::integers([0, 1]);
        let fam = WitnessFamilySpec::List {
            sets: vec![FiniteSubset::interval(0, 3), FiniteSubset::interval(0, 7)],
            nonimproving: false,
        };
        let v = check_witness(&g, &fam, &t, &rat(1, 100), 10).unwrap();
        assert_eq!(v.outcome, WitnessOutcome::Fail);
        assert_eq!(v.best_ratio, rat(9, 8));
    }
}
