//! Bounded rational-valued functions on a group: periodic, periodic with a
//! finite modification, and oracle windows on `Z`. Sets are functions with
//! values in `{0, 1}`.

mod description;
mod oracle;
mod periodic;

use std::collections::BTreeMap;

use num_traits::{Signed, Zero};

pub use description::{parse_description, parse_elements, parse_group, serialize_description, to_description};
pub use oracle::{dyadic_block_value, OracleGenerator, OracleWindowRep};
pub use periodic::{common_period, PeriodicRep};

use crate::error::{Error, Result};
use crate::group::{GroupElement, GroupSpec};
use crate::rational::Rational;
use periodic::is_indicator_value;

/// A periodic function with finitely many points overridden.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteModRep {
    base: PeriodicRep,
    overrides: BTreeMap<GroupElement, Rational>,
}

impl FiniteModRep {
    pub fn new(base: PeriodicRep, overrides: BTreeMap<GroupElement, Rational>) -> Result<Self> {
        let group = base.group().clone();
        let overrides = overrides
            .into_iter()
            .map(|(x, v)| Ok((group.element(x.free, x.tors)?, v)))
            .collect::<Result<_>>()?;
        Ok(FiniteModRep { base, overrides })
    }

    pub fn base(&self) -> &PeriodicRep {
        &self.base
    }

    pub fn overrides(&self) -> &BTreeMap<GroupElement, Rational> {
        &self.overrides
    }

    pub fn value_at(&self, x: &GroupElement) -> &Rational {
        self.overrides.get(x).unwrap_or_else(|| self.base.value_at(x))
    }

    pub fn bound(&self) -> Rational {
        self.overrides
            .values()
            .map(|v| v.abs())
            .chain(std::iter::once(self.base.bound()))
            .max()
            .expect("base bound")
    }

    /// `sup f`: every base cell value is still attained infinitely often.
    pub fn max(&self) -> Rational {
        self.overrides.values().cloned().chain(std::iter::once(self.base.max())).max().unwrap()
    }

    pub fn min(&self) -> Rational {
        self.overrides.values().cloned().chain(std::iter::once(self.base.min())).min().unwrap()
    }
}

/// A bounded function in one of the supported representations.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FunctionRep {
    Periodic(PeriodicRep),
    Modified(FiniteModRep),
    Oracle(OracleWindowRep),
}

impl From<PeriodicRep> for FunctionRep {
    fn from(p: PeriodicRep) -> Self {
        FunctionRep::Periodic(p)
    }
}

impl From<FiniteModRep> for FunctionRep {
    fn from(m: FiniteModRep) -> Self {
        FunctionRep::Modified(m)
    }
}

impl From<OracleWindowRep> for FunctionRep {
    fn from(o: OracleWindowRep) -> Self {
        FunctionRep::Oracle(o)
    }
}

static INTEGERS: std::sync::OnceLock<GroupSpec> = std::sync::OnceLock::new();

impl FunctionRep {
    pub fn constant(group: &GroupSpec, c: Rational) -> Self {
        PeriodicRep::constant(group, c).into()
    }

    pub fn group(&self) -> &GroupSpec {
        match self {
            FunctionRep::Periodic(p) => p.group(),
            FunctionRep::Modified(m) => m.base.group(),
            FunctionRep::Oracle(_) => INTEGERS.get_or_init(GroupSpec::integers),
        }
    }

    pub fn kind_name(&self) -> &'static str {
        match self {
            FunctionRep::Periodic(_) => "periodic",
            FunctionRep::Modified(_) => "modified",
            FunctionRep::Oracle(_) => "oracle",
        }
    }

    /// Exact value at `x`.
    pub fn evaluate(&self, x: &GroupElement) -> Result<Rational> {
        match self {
            FunctionRep::Periodic(p) => Ok(p.value_at(x).clone()),
            FunctionRep::Modified(m) => Ok(m.value_at(x).clone()),
            FunctionRep::Oracle(o) => o.value(x.free[0]).cloned(),
        }
    }

    /// Periodic part: the function itself or the base of a modification.
    pub fn periodic_base(&self) -> Option<&PeriodicRep> {
        match self {
            FunctionRep::Periodic(p) => Some(p),
            FunctionRep::Modified(m) => Some(&m.base),
            FunctionRep::Oracle(_) => None,
        }
    }

    pub fn as_oracle(&self) -> Option<&OracleWindowRep> {
        match self {
            FunctionRep::Oracle(o) => Some(o),
            _ => None,
        }
    }

    /// Constant value, if the function is a (periodic) constant.
    pub fn constant_value(&self) -> Option<&Rational> {
        match self {
            FunctionRep::Periodic(p) if p.is_constant() => Some(&p.values()[0]),
            _ => None,
        }
    }

    pub fn bound(&self) -> Rational {
        match self {
            FunctionRep::Periodic(p) => p.bound(),
            FunctionRep::Modified(m) => m.bound(),
            FunctionRep::Oracle(o) => o.bound(),
        }
    }

    /// `sup f` (on the window for oracles).
    pub fn sup(&self) -> Rational {
        match self {
            FunctionRep::Periodic(p) => p.max(),
            FunctionRep::Modified(m) => m.max(),
            FunctionRep::Oracle(o) => o.table().iter().max().cloned().unwrap(),
        }
    }

    /// `inf f` (on the window for oracles).
    pub fn inf(&self) -> Rational {
        match self {
            FunctionRep::Periodic(p) => p.min(),
            FunctionRep::Modified(m) => m.min(),
            FunctionRep::Oracle(o) => o.table().iter().min().cloned().unwrap(),
        }
    }

    /// True when every value is 0 or 1.
    pub fn is_set(&self) -> bool {
        match self {
            FunctionRep::Periodic(p) => p.is_set(),
            FunctionRep::Modified(m) => m.base.is_set() && m.overrides.values().all(is_indicator_value),
            FunctionRep::Oracle(o) => o.table().iter().all(is_indicator_value),
        }
    }

    pub fn require_set(&self) -> Result<()> {
        if self.is_set() {
            Ok(())
        } else {
            Err(Error::Kind("expected a set: values must lie in {0, 1}".into()))
        }
    }

    pub fn map(&self, op: impl Fn(&Rational) -> Rational) -> FunctionRep {
        match self {
            FunctionRep::Periodic(p) => p.map(op).into(),
            FunctionRep::Modified(m) => FiniteModRep {
                base: m.base.map(&op),
                overrides: m.overrides.iter().map(|(k, v)| (k.clone(), op(v))).collect(),
            }
            .into(),
            FunctionRep::Oracle(o) => o.map(op).into(),
        }
    }

    pub fn neg(&self) -> FunctionRep {
        self.map(|v| -v)
    }

    pub fn scale(&self, c: &Rational) -> FunctionRep {
        self.map(|v| v * c)
    }

    pub fn add_constant(&self, c: &Rational) -> FunctionRep {
        self.map(|v| v + c)
    }

    /// `x -> f(x + t)`.
    pub fn translate(&self, t: &GroupElement) -> Result<FunctionRep> {
        linear_combine(&[(Rational::from_integer(1.into()), t.clone(), self)])
    }
}

/// `f^+ = max(f, 0)`, preserving the representation kind.
pub fn positive_part(f: &FunctionRep) -> FunctionRep {
    f.map(|v| if v.is_positive() { v.clone() } else { Rational::zero() })
}

/// `x -> sum_i c_i f_i(x + t_i)`.
///
/// Periodic inputs combine on the coordinatewise lcm of their periods,
/// modifications combine pointwise, and oracle windows combine only with
/// oracles or constants, the window shrinking by the largest shift.
pub fn linear_combine(terms: &[(Rational, GroupElement, &FunctionRep)]) -> Result<FunctionRep> {
    let Some((_, _, first)) = terms.first() else {
        return Err(Error::Domain("linear combination needs at least one term".into()));
    };
    let group = first.group().clone();
    for (_, t, f) in terms {
        group.check_same(f.group())?;
        group.element(t.free.clone(), t.tors.clone())?;
    }
    if terms.iter().any(|(_, _, f)| matches!(f, FunctionRep::Oracle(_))) {
        return combine_oracles(terms);
    }

    let bases: Vec<&PeriodicRep> = terms.iter().map(|(_, _, f)| f.periodic_base().unwrap()).collect();
    let period = common_period(bases.iter().map(|b| b.period()), group.free_rank);
    let template = PeriodicRep::constant(&group, Rational::zero()).refine(&period)?;
    let values = template
        .cell_points()
        .iter()
        .map(|x| {
            terms
                .iter()
                .zip(&bases)
                .map(|((c, t, _), b)| c * b.value_at(&group.add(x, t)))
                .sum()
        })
        .collect();
    let base = PeriodicRep::new(&group, period, values)?;

    let mut special: Vec<GroupElement> = Vec::new();
    for (_, t, f) in terms {
        if let FunctionRep::Modified(m) = f {
            special.extend(m.overrides.keys().map(|o| group.sub(o, t)));
        }
    }
    if special.is_empty() {
        return Ok(base.into());
    }
    let mut overrides = BTreeMap::new();
    for x in special {
        let mut v = Rational::zero();
        for (c, t, f) in terms {
            v += c * f.evaluate(&group.add(&x, t))?;
        }
        if v != *base.value_at(&x) {
            overrides.insert(x, v);
        }
    }
    if overrides.is_empty() {
        Ok(base.into())
    } else {
        Ok(FiniteModRep { base, overrides }.into())
    }
}

fn combine_oracles(terms: &[(Rational, GroupElement, &FunctionRep)]) -> Result<FunctionRep> {
    let mut horizon = i64::MAX;
    for (_, t, f) in terms {
        match f {
            FunctionRep::Oracle(o) => horizon = horizon.min(o.horizon() - t.free[0].abs()),
            other if other.constant_value().is_some() => {}
            other => {
                return Err(Error::Kind(format!(
                    "cannot combine an oracle window with a {} function",
                    other.kind_name()
                )))
            }
        }
    }
    if horizon < 1 {
        return Err(Error::Horizon("shifts exhaust the oracle window".into()));
    }
    let table = (-horizon..=horizon)
        .map(|x| {
            let mut v = Rational::zero();
            for (c, t, f) in terms {
                let y = match f {
                    FunctionRep::Oracle(o) => o.value(x + t.free[0])?,
                    other => other.constant_value().unwrap(),
                };
                v += c * y;
            }
            Ok(v)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(OracleWindowRep::from_table(horizon, table)?.into())
}
