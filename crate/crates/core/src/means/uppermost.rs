use super::estimate::{MeanEstimate, MeanWitness};
use crate::error::{Error, Result};
use crate::group::FiniteSubset;
use crate::rational::{int, Rational};
use crate::repr::{linear_combine, FunctionRep, OracleWindowRep, PeriodicRep};

/// The `B`-average `(f|B)(t) = |B|^-1 sum_{b in B} f(b + t)`.
///
/// Periodic input gives periodic output on the same period; oracle windows
/// shrink by the largest `|b|`.
pub fn b_average(f: &FunctionRep, b: &FiniteSubset) -> Result<FunctionRep> {
    b.require_nonempty("B")?;
    f.group().check_same(b.group())?;
    let c = Rational::from_integer(1.into()) / int(b.len() as i64);
    let terms: Vec<_> = b.iter().map(|x| (c.clone(), x.clone(), f)).collect();
    linear_combine(&terms)
}

/// The fundamental cell of a periodic function as a set of group elements.
pub fn fundamental_cell(p: &PeriodicRep) -> FiniteSubset {
    FiniteSubset::new(p.group(), p.cell_points()).expect("cell points belong to the group")
}

/// `M*(f) = inf over convex combinations g of translates of sup g`.
///
/// Exact for periodic functions and finite modifications (the cell average,
/// realized by uniform weights on one period). For oracle windows this is
/// the box-ladder estimate `min_L max_t (f|{0..L-1})(t)`, bracketed by the
/// window's `inf f` and `sup f`.
pub fn uppermost_mean(f: &FunctionRep) -> Result<MeanEstimate> {
    f.group().require_infinite()?;
    match f {
        FunctionRep::Periodic(_) | FunctionRep::Modified(_) => {
            let base = f.periodic_base().unwrap();
            Ok(MeanEstimate::exact(
                base.average(),
                Some(MeanWitness::AveragingSet(fundamental_cell(base))),
            ))
        }
        FunctionRep::Oracle(o) => {
            let ladder = box_ladder(o)?;
            Ok(MeanEstimate::estimate(
                ladder.value,
                f.inf(),
                f.sup(),
                Some(MeanWitness::AveragingSet(FiniteSubset::interval(0, ladder.side - 1))),
            ))
        }
    }
}

/// `M_*(f) = -M*(-f)`.
pub fn lowest_mean(f: &FunctionRep) -> Result<MeanEstimate> {
    Ok(uppermost_mean(&f.neg())?.negated())
}

pub(crate) struct LadderResult {
    pub value: Rational,
    pub side: i64,
}

/// Box sides `L = 2^j` with `4L <= horizon`.
pub(crate) fn ladder_sides(horizon: i64) -> Vec<i64> {
    let mut sides = Vec::new();
    let mut l = 1i64;
    while 4 * l <= horizon {
        sides.push(l);
        l *= 2;
    }
    sides
}

/// For each rung `L`, the largest average of `f` over `[t, t+L-1]` with
/// `t in [-N+L, N-L]`; then the smallest over rungs.
pub(crate) fn box_ladder(o: &OracleWindowRep) -> Result<LadderResult> {
    let n = o.horizon();
    let sides = ladder_sides(n);
    if sides.is_empty() {
        return Err(Error::Horizon(format!("horizon {n} is too short for a box ladder")));
    }
    let w = o.window_sums();
    let sum = |a: i64, b: i64| -> Rational { &w[(b + n + 1) as usize] - &w[(a + n) as usize] };
    let mut pick: Option<LadderResult> = None;
    for &l in &sides {
        let best = ((-n + l)..=(n - l)).map(|t| sum(t, t + l - 1)).max().unwrap();
        let value = best / int(l);
        if pick.as_ref().is_none_or(|p| value < p.value) {
            pick = Some(LadderResult { value, side: l });
        }
    }
    Ok(pick.unwrap())
}

/// `sup_t (f|B)(t)` and `inf_t (f|B)(t)` over the whole group for periodic
/// input (the cell), or over the remaining window for oracles.
pub fn average_extremes(f: &FunctionRep, b: &FiniteSubset) -> Result<(Rational, Rational)> {
    let avg = b_average(f, b)?;
    Ok((avg.inf(), avg.sup()))
}

pub(crate) fn require_not_oracle(f: &FunctionRep, what: &str) -> Result<()> {
    if matches!(f, FunctionRep::Oracle(_)) {
        Err(Error::Kind(format!("{what} needs a periodic or finitely modified function")))
    } else {
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::GroupSpec;
    use crate::rational::rat;
    use crate::repr::FiniteModRep;
    use std::collections::BTreeMap;

    fn cell_101100() -> FunctionRep {
        PeriodicRep::integer_set(6, &[0, 2, 3]).into()
    }

    #[test]
    fn b_average_examples() {
        let evens: FunctionRep = PeriodicRep::integer_set(2, &[0]).into();
        let avg = b_average(&evens, &FiniteSubset::integers([0, 1])).unwrap();
        assert_eq!(avg.constant_value(), Some(&rat(1, 2)));

        let avg = b_average(&cell_101100(), &FiniteSubset::integers([0, 1, 2])).unwrap();
        let base = avg.periodic_base().unwrap();
        assert_eq!(base.period(), &[6]);
        let expected = [rat(2, 3), rat(2, 3), rat(2, 3), rat(1, 3), rat(1, 3), rat(1, 3)];
        assert_eq!(base.values(), &expected);

        let c = FunctionRep::constant(&GroupSpec::integers(), rat(5, 7));
        let avg = b_average(&c, &FiniteSubset::integers([-3, 4, 10])).unwrap();
        assert_eq!(avg.constant_value(), Some(&rat(5, 7)));
    }

    #[test]
    fn b_average_shrinks_oracle_window() {
        let d: FunctionRep = OracleWindowRep::dyadic_blocks(8).unwrap().into();
        let avg = b_average(&d, &FiniteSubset::integers([0, 3])).unwrap();
        assert_eq!(avg.as_oracle().unwrap().horizon(), 5);
        assert!(matches!(
            b_average(&d, &FiniteSubset::integers([0, 9])),
            Err(Error::Horizon(_))
        ));
    }

    #[test]
    fn periodic_means_are_cell_averages() {
        let m = uppermost_mean(&cell_101100()).unwrap();
        assert!(m.certified);
        assert_eq!(m.value, rat(1, 2));
        assert_eq!(lowest_mean(&cell_101100()).unwrap().value, rat(1, 2));
        let c = FunctionRep::constant(&GroupSpec::integers(), rat(-3, 2));
        assert_eq!(uppermost_mean(&c).unwrap().value, rat(-3, 2));
    }

    #[test]
    fn modification_does_not_move_the_mean() {
        let mut ov = BTreeMap::new();
        ov.insert(GroupSpec::integers().int(0), int(0));
        let m: FunctionRep = FiniteModRep::new(PeriodicRep::integer_set(2, &[0]), ov).unwrap().into();
        assert_eq!(uppermost_mean(&m).unwrap().value, rat(1, 2));
    }

    #[test]
    fn dyadic_estimates() {
        let d: FunctionRep = OracleWindowRep::dyadic_blocks(4096).unwrap().into();
        let up = uppermost_mean(&d).unwrap();
        assert!(!up.certified);
        assert_eq!(up.value, int(0));
        assert_eq!((up.lower.clone(), up.upper.clone()), (int(-1), int(0)));
        let low = lowest_mean(&d).unwrap();
        assert_eq!(low.value, int(-1));
    }

    #[test]
    fn rank_zero_rejected() {
        let g = GroupSpec::new(0, vec![3]).unwrap();
        let f = FunctionRep::constant(&g, int(1));
        assert!(matches!(uppermost_mean(&f), Err(Error::Spec(_))));
    }
}
