use std::collections::BTreeMap;

use num_traits::One;

use crate::error::{Error, Result};
use crate::repr::FunctionRep;

/// A periodic-plus-finite subset of `Z` as membership bits.
#[derive(Debug, Clone)]
pub(crate) struct IntSet {
    pub period: i64,
    residues: Vec<bool>,
    overrides: BTreeMap<i64, bool>,
}

impl IntSet {
    pub fn from_rep(f: &FunctionRep) -> Result<Self> {
        f.group().require_integers()?;
        f.require_set()?;
        let base = f
            .periodic_base()
            .ok_or_else(|| Error::Kind("expected a periodic or finitely modified set".into()))?;
        let period = base.period()[0];
        let residues = base.values().iter().map(|v| v.is_one()).collect();
        let overrides = match f {
            FunctionRep::Modified(m) => m.overrides().iter().map(|(x, v)| (x.free[0], v.is_one())).collect(),
            _ => BTreeMap::new(),
        };
        Ok(IntSet {
            period,
            residues,
            overrides,
        })
    }

    pub fn contains(&self, x: i64) -> bool {
        match self.overrides.get(&x) {
            Some(&v) => v,
            None => self.residues[x.rem_euclid(self.period) as usize],
        }
    }

    pub fn members(&self, lo: i64, hi: i64) -> Vec<i64> {
        (lo..=hi).filter(|&x| self.contains(x)).collect()
    }

    /// Largest `|x|` over overridden points.
    pub fn core_radius(&self) -> i64 {
        self.overrides.keys().map(|x| x.abs()).max().unwrap_or(0)
    }

    pub fn override_count(&self) -> usize {
        self.overrides.len()
    }

    /// Members per period of the base.
    pub fn base_count(&self) -> i64 {
        self.residues.iter().filter(|&&b| b).count() as i64
    }

    pub fn is_finite(&self) -> bool {
        self.base_count() == 0
    }

    /// All members of a finite set.
    pub fn finite_members(&self) -> Vec<i64> {
        debug_assert!(self.is_finite());
        self.overrides.iter().filter(|(_, &v)| v).map(|(&x, _)| x).collect()
    }
}

pub(crate) fn indicator(set: &IntSet, x: i64) -> i64 {
    set.contains(x) as i64
}

