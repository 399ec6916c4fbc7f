use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::group::{mixed_radix, GroupElement, GroupSpec};
use crate::rational::{int, lcm, Rational};

/// A function constant on the cosets of `p_1 Z x ... x p_d Z x {0}`.
///
/// `values` lists the fundamental cell in lexicographic order: free residues
/// in `[0, p_i)` first, then torsion residues.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PeriodicRep {
    group: GroupSpec,
    period: Vec<i64>,
    values: Vec<Rational>,
}

impl PeriodicRep {
    pub fn new(group: &GroupSpec, period: Vec<i64>, values: Vec<Rational>) -> Result<Self> {
        if period.len() != group.free_rank {
            return Err(Error::Spec(format!(
                "period has {} entries, the group has free rank {}",
                period.len(),
                group.free_rank
            )));
        }
        if let Some(p) = period.iter().find(|&&p| p < 1) {
            return Err(Error::Domain(format!("period entry {p} must be positive")));
        }
        let size = cell_size(group, &period);
        if values.len() != size {
            return Err(Error::Domain(format!(
                "cell needs {size} values, got {}",
                values.len()
            )));
        }
        Ok(PeriodicRep {
            group: group.clone(),
            period,
            values,
        })
    }

    pub fn constant(group: &GroupSpec, c: Rational) -> Self {
        let period = vec![1; group.free_rank];
        let values = vec![c; cell_size(group, &period)];
        PeriodicRep {
            group: group.clone(),
            period,
            values,
        }
    }

    /// Indicator of the union of the residue classes of `members`.
    pub fn indicator(group: &GroupSpec, period: Vec<i64>, members: &[GroupElement]) -> Result<Self> {
        let zero = PeriodicRep::new(group, period.clone(), vec![Rational::zero(); cell_size(group, &period)])?;
        let mut values = zero.values;
        for m in members {
            let m = group.element(m.free.clone(), m.tors.clone())?;
            let idx = cell_index_of(group, &period, &m);
            values[idx] = int(1);
        }
        PeriodicRep::new(group, period, values)
    }

    /// Indicator of `residues + p Z` in `Z`.
    pub fn integer_set(period: i64, residues: &[i64]) -> Self {
        let g = GroupSpec::integers();
        let members: Vec<_> = residues.iter().map(|&r| g.int(r)).collect();
        Self::indicator(&g, vec![period], &members).expect("valid integer period")
    }

    /// A function on `Z` from one period of values starting at 0.
    pub fn integer_function(values: Vec<Rational>) -> Self {
        let p = values.len() as i64;
        Self::new(&GroupSpec::integers(), vec![p], values).expect("valid integer period")
    }

    pub fn group(&self) -> &GroupSpec {
        &self.group
    }

    pub fn period(&self) -> &[i64] {
        &self.period
    }

    pub fn values(&self) -> &[Rational] {
        &self.values
    }

    pub fn cell_size(&self) -> usize {
        self.values.len()
    }

    pub fn cell_index(&self, x: &GroupElement) -> usize {
        cell_index_of(&self.group, &self.period, x)
    }

    /// The canonical representative with free coordinates in `[0, p_i)`.
    pub fn cell_point(&self, index: usize) -> GroupElement {
        let mut radix = self.period.clone();
        radix.extend(&self.group.torsion);
        let mut digits = vec![0i64; radix.len()];
        let mut rest = index as i64;
        for i in (0..radix.len()).rev() {
            digits[i] = rest % radix[i];
            rest /= radix[i];
        }
        let tors = digits.split_off(self.period.len());
        GroupElement { free: digits, tors }
    }

    pub fn cell_points(&self) -> Vec<GroupElement> {
        let mut radix = self.period.clone();
        radix.extend(&self.group.torsion);
        mixed_radix(&radix)
            .into_iter()
            .map(|mut digits| {
                let tors = digits.split_off(self.period.len());
                GroupElement { free: digits, tors }
            })
            .collect()
    }

    pub fn value_at(&self, x: &GroupElement) -> &Rational {
        &self.values[self.cell_index(x)]
    }

    pub fn average(&self) -> Rational {
        let total: Rational = self.values.iter().sum();
        total / int(self.values.len() as i64)
    }

    pub fn sum(&self) -> Rational {
        self.values.iter().sum()
    }

    pub fn max(&self) -> Rational {
        self.values.iter().max().cloned().expect("nonempty cell")
    }

    pub fn min(&self) -> Rational {
        self.values.iter().min().cloned().expect("nonempty cell")
    }

    pub fn bound(&self) -> Rational {
        self.values.iter().map(|v| v.abs()).max().expect("nonempty cell")
    }

    pub fn is_constant(&self) -> bool {
        self.values.iter().all(|v| *v == self.values[0])
    }

    pub fn is_set(&self) -> bool {
        self.values.iter().all(is_indicator_value)
    }

    /// Members of the cell where the value is 1.
    pub fn support_points(&self) -> Vec<GroupElement> {
        self.cell_points()
            .into_iter()
            .zip(&self.values)
            .filter(|(_, v)| !v.is_zero())
            .map(|(p, _)| p)
            .collect()
    }

    /// The same function described on a coarser lattice `period`, which must
    /// be a multiple of the current one coordinatewise.
    pub fn refine(&self, period: &[i64]) -> Result<PeriodicRep> {
        if period.len() != self.period.len()
            || period.iter().zip(&self.period).any(|(p, q)| *p < 1 || p % q != 0)
        {
            return Err(Error::Domain(format!(
                "period {period:?} is not a multiple of {:?}",
                self.period
            )));
        }
        let mut radix = period.to_vec();
        radix.extend(&self.group.torsion);
        let values = mixed_radix(&radix)
            .into_iter()
            .map(|mut digits| {
                let tors = digits.split_off(period.len());
                self.value_at(&GroupElement { free: digits, tors }).clone()
            })
            .collect();
        PeriodicRep::new(&self.group, period.to_vec(), values)
    }

    pub fn map(&self, op: impl Fn(&Rational) -> Rational) -> PeriodicRep {
        PeriodicRep {
            group: self.group.clone(),
            period: self.period.clone(),
            values: self.values.iter().map(op).collect(),
        }
    }
}

pub(crate) fn is_indicator_value(v: &Rational) -> bool {
    v.is_zero() || *v == int(1)
}

pub(crate) fn cell_size(group: &GroupSpec, period: &[i64]) -> usize {
    (period.iter().product::<i64>() * group.torsion_order()) as usize
}

fn cell_index_of(group: &GroupSpec, period: &[i64], x: &GroupElement) -> usize {
    let mut idx = 0i64;
    for (c, p) in x.free.iter().zip(period) {
        idx = idx * p + c.rem_euclid(*p);
    }
    for (r, m) in x.tors.iter().zip(&group.torsion) {
        idx = idx * m + r.rem_euclid(*m);
    }
    idx as usize
}

/// Coordinatewise least common multiple of periods.
pub fn common_period<'a>(periods: impl IntoIterator<Item = &'a [i64]>, rank: usize) -> Vec<i64> {
    let mut out = vec![1i64; rank];
    for p in periods {
        for (o, q) in out.iter_mut().zip(p) {
            *o = lcm(*o, *q);
        }
    }
    out
}
