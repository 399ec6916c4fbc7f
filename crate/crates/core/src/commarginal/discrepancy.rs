use super::sets::indicator;
use crate::error::{Error, Result};
use crate::repr::FunctionRep;

/// `max over 0 <= n <= horizon of | |A cap [-n,n]| - |A2 cap [-n,n]| |`.
pub fn counting_discrepancy(a: &FunctionRep, a2: &FunctionRep, horizon: i64) -> Result<i64> {
    if horizon < 0 {
        return Err(Error::Domain("horizon must be nonnegative".into()));
    }
    let ma = membership(a, horizon)?;
    let mb = membership(a2, horizon)?;
    let at = |m: &[i64], x: i64| m[(x + horizon) as usize];
    let mut diff = at(&ma, 0) - at(&mb, 0);
    let mut worst = diff.abs();
    for n in 1..=horizon {
        diff += at(&ma, n) + at(&ma, -n) - at(&mb, n) - at(&mb, -n);
        worst = worst.max(diff.abs());
    }
    Ok(worst)
}

/// Membership bits on `[-horizon, horizon]`.
fn membership(f: &FunctionRep, horizon: i64) -> Result<Vec<i64>> {
    f.group().require_integers()?;
    f.require_set()?;
    match f {
        FunctionRep::Oracle(o) => {
            if horizon > o.horizon() {
                return Err(Error::Horizon(format!(
                    "horizon {horizon} exceeds the oracle window {}",
                    o.horizon()
                )));
            }
            Ok((-horizon..=horizon)
                .map(|x| o.value(x).map(|v| (*v == num_traits::One::one()) as i64))
                .collect::<Result<_>>()?)
        }
        _ => {
            let set = super::sets::IntSet::from_rep(f)?;
            Ok((-horizon..=horizon).map(|x| indicator(&set, x)).collect())
        }
    }
}
