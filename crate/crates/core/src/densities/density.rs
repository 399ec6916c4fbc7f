use std::collections::BTreeSet;

use num_traits::{One, Zero};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::means::{lowest_mean, render_number, uppermost_mean, MeanEstimate};
use crate::rational::{ceil_to_i64, floor_to_i64, Rational};
use crate::repr::{FunctionRep, PeriodicRep};

/// Uppermost and lowest density of a set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DensityPair {
    pub upper: MeanEstimate,
    pub lower: MeanEstimate,
}

impl DensityPair {
    pub fn certified(&self) -> bool {
        self.upper.certified && self.lower.certified
    }

    pub fn to_json(&self) -> Value {
        json!({
            "upper": self.upper.render(&self.upper.value),
            "lower": self.lower.render(&self.lower.value),
            "certified": self.certified(),
        })
    }
}

/// `d*(A) = M*(1_A)` and `d_*(A) = M_*(1_A)`.
pub fn density_pair(a: &FunctionRep) -> Result<DensityPair> {
    a.require_set()?;
    let upper = uppermost_mean(a)?;
    let lower = lowest_mean(a)?;
    if upper.certified && lower.value > upper.value {
        return Err(Error::Invariant(format!(
            "lower density {} exceeds upper density {}",
            lower.value, upper.value
        )));
    }
    Ok(DensityPair { upper, lower })
}

/// `A - A` for a periodic set, as a periodic set on the same period.
pub fn periodic_difference_set(a: &PeriodicRep) -> PeriodicRep {
    let group = a.group();
    let members = a.support_points();
    let diffs: BTreeSet<_> = members
        .iter()
        .flat_map(|x| members.iter().map(move |y| group.sub(x, y)))
        .collect();
    let diffs: Vec<_> = diffs.into_iter().collect();
    PeriodicRep::indicator(group, a.period().to_vec(), &diffs).expect("differences lie in the group")
}

#[derive(Debug, Clone)]
pub struct DifferenceSetReport {
    pub difference_set: PeriodicRep,
    pub d_star_a: Rational,
    pub d_lower_diff: Rational,
    /// `d_*(A - A) >= d*(A)`.
    pub density_ok: bool,
    /// `ceil(1 / d_*(A - A)) <= floor(1 / d*(A))`.
    pub ceil_floor_ok: bool,
    /// Set when `d*(A) = 0` and both inequalities hold trivially.
    pub vacuous: bool,
}

impl DifferenceSetReport {
    pub fn to_json(&self) -> Value {
        json!({
            "d_star_A": render_number(&self.d_star_a, true),
            "d_lower_diff": render_number(&self.d_lower_diff, true),
            "density_ok": self.density_ok,
            "ceil_floor_ok": self.ceil_floor_ok,
            "vacuous": self.vacuous,
        })
    }
}

/// Checks `d_*(A - A) >= d*(A)` and its integer form for a periodic set.
/// A violation is reported as an invariant error.
pub fn difference_set_bound(a: &FunctionRep) -> Result<DifferenceSetReport> {
    a.require_set()?;
    let FunctionRep::Periodic(p) = a else {
        return Err(Error::Kind("difference_set_bound needs a periodic set".into()));
    };
    a.group().require_infinite()?;
    let diff = periodic_difference_set(p);
    let d_star_a = p.average();
    let d_lower_diff = diff.average();
    if d_star_a.is_zero() {
        return Ok(DifferenceSetReport {
            difference_set: diff,
            d_star_a,
            d_lower_diff,
            density_ok: true,
            ceil_floor_ok: true,
            vacuous: true,
        });
    }
    let density_ok = d_lower_diff >= d_star_a;
    let ceil_floor_ok =
        ceil_to_i64(&(Rational::one() / &d_lower_diff)) <= floor_to_i64(&(Rational::one() / &d_star_a));
    if !density_ok || !ceil_floor_ok {
        return Err(Error::Invariant(format!(
            "difference-set inequality violated: d_*(A-A) = {d_lower_diff}, d*(A) = {d_star_a}"
        )));
    }
    Ok(DifferenceSetReport {
        difference_set: diff,
        d_star_a,
        d_lower_diff,
        density_ok,
        ceil_floor_ok,
        vacuous: false,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::GroupSpec;
    use crate::rational::{int, rat};
    use crate::repr::{FiniteModRep, OracleWindowRep};
    use std::collections::BTreeMap;

    #[test]
    fn density_examples() {
        let a: FunctionRep = PeriodicRep::integer_set(6, &[0, 2, 3]).into();
        let d = density_pair(&a).unwrap();
        assert_eq!((d.upper.value.clone(), d.lower.value.clone()), (rat(1, 2), rat(1, 2)));
        assert_eq!(d.to_json().to_string(), r#"{"upper":"1/2","lower":"1/2","certified":true}"#);

        let mut ov = BTreeMap::new();
        ov.insert(GroupSpec::integers().int(0), int(0));
        let m: FunctionRep = FiniteModRep::new(PeriodicRep::integer_set(2, &[0]), ov).unwrap().into();
        assert_eq!(density_pair(&m).unwrap().upper.value, rat(1, 2));

        let blocks = OracleWindowRep::dyadic_blocks(4096).unwrap().map(|v| int(!v.is_zero() as i64));
        let d = density_pair(&blocks.into()).unwrap();
        assert!(!d.certified());
        assert_eq!((d.upper.value, d.lower.value), (int(1), int(0)));
    }

    #[test]
    fn non_sets_rejected() {
        let f = FunctionRep::constant(&GroupSpec::integers(), rat(1, 2));
        assert!(matches!(density_pair(&f), Err(Error::Kind(_))));
    }

    #[test]
    fn difference_set_examples() {
        let a: FunctionRep = PeriodicRep::integer_set(5, &[0, 1]).into();
        let r = difference_set_bound(&a).unwrap();
        assert_eq!(r.difference_set.support_points().len(), 3);
        assert_eq!((r.d_lower_diff.clone(), r.d_star_a.clone()), (rat(3, 5), rat(2, 5)));
        assert!(r.ceil_floor_ok);

        let a: FunctionRep = PeriodicRep::integer_set(5, &[0]).into();
        let r = difference_set_bound(&a).unwrap();
        assert_eq!(r.d_lower_diff, rat(1, 5));

        let a: FunctionRep = PeriodicRep::integer_set(6, &[0, 2, 3]).into();
        assert_eq!(difference_set_bound(&a).unwrap().d_lower_diff, int(1));

        let empty: FunctionRep = PeriodicRep::integer_set(4, &[]).into();
        assert!(difference_set_bound(&empty).unwrap().vacuous);
    }
}
