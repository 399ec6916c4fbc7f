use num_traits::{One, Signed, Zero};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::group::mixed_radix;
use crate::means::render_number;
use crate::rational::{ceil_to_i64, int, lcm, Rational};
use crate::repr::{FunctionRep, PeriodicRep};

/// A set `A` whose density is within `eps` above `M*(f)`, and the raised
/// function `g` whose tile sums are the integer counts of `A`.
#[derive(Debug, Clone)]
pub struct RoundingReport {
    pub set: PeriodicRep,
    pub adjusted: PeriodicRep,
    pub box_side: i64,
    pub tile_size: i64,
    /// Points of `A` per tile, `ceil(sum of f over a tile)`.
    pub count: i64,
    pub density: Rational,
    pub mean: Rational,
}

impl RoundingReport {
    pub fn to_json(&self) -> Value {
        json!({
            "box_side": self.box_side,
            "tile_size": self.tile_size,
            "count": self.count,
            "density": render_number(&self.density, true),
            "mean": render_number(&self.mean, true),
        })
    }
}

/// Rounds a periodic `f` with values in `[0, 1]` to a periodic set.
///
/// The tile `Y = {1..n}^d x F` has `n` the least multiple of the common
/// period with `|Y| > 1/eps`, so every tile translate carries the same sum
/// `S` of `f`. `A` takes the first `ceil(S)` points of each tile in
/// lexicographic order and `g = f + (ceil(S) - S)/|Y|`.
pub fn round_to_set(f: &FunctionRep, eps: &Rational) -> Result<RoundingReport> {
    if !eps.is_positive() {
        return Err(Error::Domain("eps must be positive".into()));
    }
    let FunctionRep::Periodic(p) = f else {
        return Err(Error::Kind("round_to_set needs a periodic function".into()));
    };
    let group = p.group();
    group.require_infinite()?;
    if p.min().is_negative() || p.max() > Rational::one() {
        return Err(Error::Domain("values must lie in [0, 1]".into()));
    }
    let d = group.free_rank;
    let step = p.period().iter().fold(1, |acc, &q| lcm(acc, q));
    let torsion = group.torsion_order();
    let mut n = step;
    while int(n.pow(d as u32) * torsion) * eps <= Rational::one() {
        n += step;
    }
    let tile_size = n.pow(d as u32) * torsion;
    let refined = p.refine(&vec![n; d])?;
    let sum = refined.sum();
    let count = ceil_to_i64(&sum);

    // tile points in lexicographic order of Y = {1..n}^d x F
    let mut radix = vec![n; d];
    radix.extend(&group.torsion);
    let mut values = vec![Rational::zero(); refined.cell_size()];
    for digits in mixed_radix(&radix).into_iter().take(count as usize) {
        let mut x = group.zero();
        for (i, c) in digits[..d].iter().enumerate() {
            x.free[i] = c + 1;
        }
        x.tors = digits[d..].to_vec();
        values[refined.cell_index(&x)] = int(1);
    }
    let set = PeriodicRep::new(group, vec![n; d], values)?;
    let lift = (int(count) - &sum) / int(tile_size);
    let adjusted = refined.map(|v| v + &lift);
    let density = set.average();
    let mean = p.average();
    if density < mean || density >= &mean + eps {
        return Err(Error::Invariant(format!(
            "rounded density {density} is outside [{mean}, {mean} + {eps})"
        )));
    }
    Ok(RoundingReport {
        set,
        adjusted,
        box_side: n,
        tile_size,
        count,
        density,
        mean,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::GroupSpec;
    use crate::rational::rat;

    #[test]
    fn constant_half() {
        let f = FunctionRep::constant(&GroupSpec::integers(), rat(1, 2));
        let r = round_to_set(&f, &rat(1, 10)).unwrap();
        assert_eq!((r.box_side, r.count), (11, 6));
        assert_eq!(r.density, rat(6, 11));
        // points 1..6 of {1..11}
        let ones: Vec<i64> = r.set.support_points().iter().map(|x| x.free[0]).collect();
        assert_eq!(ones, vec![1, 2, 3, 4, 5, 6]);
    }

    #[test]
    fn exact_cell_sum() {
        let f: FunctionRep = PeriodicRep::integer_function(vec![rat(3, 4), rat(1, 4)]).into();
        let r = round_to_set(&f, &rat(1, 5)).unwrap();
        assert_eq!((r.box_side, r.count, r.density.clone()), (6, 3, rat(1, 2)));
        assert_eq!(r.adjusted.values()[0], rat(3, 4));
    }

    #[test]
    fn zero_gives_empty_set() {
        let f = FunctionRep::constant(&GroupSpec::integers(), int(0));
        let r = round_to_set(&f, &rat(1, 4)).unwrap();
        assert_eq!(r.count, 0);
        assert!(r.set.support_points().is_empty());
    }

    #[test]
    fn wrap_point_is_residue_zero() {
        // n = 5: every point, including coordinate n = 0 mod n
        let f = FunctionRep::constant(&GroupSpec::integers(), int(1));
        let r = round_to_set(&f, &rat(1, 4)).unwrap();
        assert_eq!(r.set.values().iter().filter(|v| v.is_one()).count(), 5);
    }

    #[test]
    fn values_checked() {
        let f = FunctionRep::constant(&GroupSpec::integers(), int(2));
        assert!(matches!(round_to_set(&f, &rat(1, 4)), Err(Error::Domain(_))));
    }
}
