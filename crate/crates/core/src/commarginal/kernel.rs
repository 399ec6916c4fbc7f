use std::collections::BTreeSet;

use serde_json::{json, Value};

use super::sets::IntSet;
use crate::error::{Error, Result};
use crate::group::FiniteSubset;
use crate::repr::FunctionRep;

/// A banded integer kernel `F` on `Z x Z` whose row sums are `1_A` and
/// column sums are `1_A2`.
///
/// Matched pairs `(a, b)` contribute `F(a, b) = 1`. An unmatched `a` gets a
/// telescoping row ray: `F(x, x) = 1` and `F(x + 1, x) = -1` for `x >= a`,
/// whose row sums are `1` at `a` and `0` elsewhere and whose column sums
/// vanish. Unmatched points of `A2` get the transposed column ray.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CommarginalWitness {
    first: Vec<i64>,
    second: Vec<i64>,
    pub pairs: Vec<(i64, i64)>,
    pub row_rays: Vec<i64>,
    pub column_rays: Vec<i64>,
    /// All differences `x - y` with `F(x, y) != 0`.
    pub band: Vec<i64>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MarginalCheck {
    pub window: (i64, i64),
    pub rows_ok: bool,
    pub columns_ok: bool,
    pub band_ok: bool,
}

impl MarginalCheck {
    pub fn passed(&self) -> bool {
        self.rows_ok && self.columns_ok && self.band_ok
    }
}

/// Sorted members of a finite set given as a function on `Z`.
pub(crate) fn finite_members(f: &FunctionRep) -> Result<Vec<i64>> {
    let s = IntSet::from_rep(f)?;
    if !s.is_finite() {
        return Err(Error::Kind("expected a finite set".into()));
    }
    Ok(s.finite_members())
}

/// Builds the telescoping witness for two finite subsets of `Z`.
pub fn finite_commarginal_witness(a: &FiniteSubset, a2: &FiniteSubset) -> Result<CommarginalWitness> {
    a.group().require_integers()?;
    a2.group().require_integers()?;
    let first: Vec<i64> = a.iter().map(|x| x.free[0]).collect();
    let second: Vec<i64> = a2.iter().map(|x| x.free[0]).collect();
    let m = first.len().min(second.len());
    let pairs: Vec<(i64, i64)> = first[..m].iter().copied().zip(second[..m].iter().copied()).collect();
    let row_rays = first[m..].to_vec();
    let column_rays = second[m..].to_vec();
    let mut band: BTreeSet<i64> = pairs.iter().map(|(x, y)| x - y).collect();
    if !row_rays.is_empty() {
        band.extend([0, 1]);
    }
    if !column_rays.is_empty() {
        band.extend([0, -1]);
    }
    Ok(CommarginalWitness {
        first,
        second,
        pairs,
        row_rays,
        column_rays,
        band: band.into_iter().collect(),
    })
}

/// Convenience wrapper taking finite sets as function descriptions.
pub fn finite_witness_from_reps(a: &FunctionRep, a2: &FunctionRep) -> Result<CommarginalWitness> {
    let z = crate::group::GroupSpec::integers();
    finite_commarginal_witness(
        &FiniteSubset::new(&z, finite_members(a)?.into_iter().map(|x| z.int(x)))?,
        &FiniteSubset::new(&z, finite_members(a2)?.into_iter().map(|x| z.int(x)))?,
    )
}

impl CommarginalWitness {
    pub fn entry(&self, x: i64, y: i64) -> i64 {
        let mut v = self.pairs.iter().filter(|&&p| p == (x, y)).count() as i64;
        for &r in &self.row_rays {
            v += (x == y && x >= r) as i64 - (x == y + 1 && y >= r) as i64;
        }
        for &c in &self.column_rays {
            v += (x == y && y >= c) as i64 - (y == x + 1 && x >= c) as i64;
        }
        v
    }

    fn band_radius(&self) -> i64 {
        self.band.iter().map(|d| d.abs()).max().unwrap_or(0)
    }

    /// Checks the row and column sums on `[lo, hi]` and that entries in a
    /// strip around the band vanish off the band.
    pub fn verify(&self, lo: i64, hi: i64) -> MarginalCheck {
        let r = self.band_radius() + 2;
        let rows_ok = (lo..=hi).all(|x| {
            let s: i64 = self.band.iter().map(|d| self.entry(x, x - d)).sum();
            s == self.first.contains(&x) as i64
        });
        let columns_ok = (lo..=hi).all(|y| {
            let s: i64 = self.band.iter().map(|d| self.entry(y + d, y)).sum();
            s == self.second.contains(&y) as i64
        });
        let band_ok = (lo..=hi).all(|x| {
            ((x - r)..=(x + r)).all(|y| self.entry(x, y) == 0 || self.band.contains(&(x - y)))
        });
        MarginalCheck {
            window: (lo, hi),
            rows_ok,
            columns_ok,
            band_ok,
        }
    }

    pub fn to_json(&self) -> Value {
        json!({
            "band": self.band,
            "pairs": self.pairs.iter().map(|(x, y)| json!([x, y])).collect::<Vec<_>>(),
            "row_rays": self.row_rays,
            "column_rays": self.column_rays,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn point_versus_empty_is_the_telescoping_kernel() {
        let w = finite_commarginal_witness(&FiniteSubset::integers([0]), &FiniteSubset::integers([])).unwrap();
        for x in -5..20 {
            for y in -5..20 {
                let expected = if x == y && x >= 0 {
                    1
                } else if x == y + 1 && x >= 1 {
                    -1
                } else {
                    0
                };
                assert_eq!(w.entry(x, y), expected, "F({x},{y})");
            }
        }
        assert!(w.verify(-50, 50).passed());
    }

    #[test]
    fn empty_pair_is_zero() {
        let e = FiniteSubset::integers([]);
        let w = finite_commarginal_witness(&e, &e).unwrap();
        assert!(w.band.is_empty());
        assert_eq!(w.entry(0, 0), 0);
        assert!(w.verify(-5, 5).passed());
    }

    #[test]
    fn composite_witness() {
        let w = finite_commarginal_witness(&FiniteSubset::integers([0, 1]), &FiniteSubset::integers([5])).unwrap();
        assert_eq!(w.pairs, vec![(0, 5)]);
        assert_eq!(w.row_rays, vec![1]);
        assert!(w.verify(-10, 20).passed());
        let w = finite_commarginal_witness(&FiniteSubset::integers([5]), &FiniteSubset::integers([0, 1, 9])).unwrap();
        assert!(w.verify(-10, 30).passed());
    }

    #[test]
    fn broken_marginal_detected() {
        let mut w = finite_commarginal_witness(&FiniteSubset::integers([0]), &FiniteSubset::integers([])).unwrap();
        w.row_rays.clear();
        assert!(!w.verify(-3, 3).rows_ok);
    }
}
