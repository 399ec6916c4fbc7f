use num_traits::{One, Signed, Zero};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::group::{FiniteSubset, GroupElement, GroupSpec};
use crate::rational::{format_decimal, format_rational, Rational};
use crate::repr::{linear_combine, FunctionRep};

/// Convex weights `c_i >= 0`, `sum c_i = 1`, on translates `t_i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConvexWeights {
    group: GroupSpec,
    entries: Vec<(GroupElement, Rational)>,
}

impl ConvexWeights {
    pub fn new(group: &GroupSpec, entries: Vec<(GroupElement, Rational)>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::Domain("convex weights need at least one translate".into()));
        }
        if entries.iter().any(|(_, c)| c.is_negative()) {
            return Err(Error::Domain("convex weights must be nonnegative".into()));
        }
        let total: Rational = entries.iter().map(|(_, c)| c).sum();
        if !total.is_one() {
            return Err(Error::Domain(format!(
                "convex weights sum to {}, not 1",
                format_rational(&total)
            )));
        }
        let entries = entries
            .into_iter()
            .map(|(t, c)| Ok((group.element(t.free, t.tors)?, c)))
            .collect::<Result<_>>()?;
        Ok(ConvexWeights {
            group: group.clone(),
            entries,
        })
    }

    /// Equal weights on every element of `set`.
    pub fn uniform(set: &FiniteSubset) -> Result<Self> {
        set.require_nonempty("support")?;
        let c = Rational::one() / Rational::from_integer((set.len() as i64).into());
        Self::new(set.group(), set.iter().map(|t| (t.clone(), c.clone())).collect())
    }

    pub fn entries(&self) -> &[(GroupElement, Rational)] {
        &self.entries
    }

    pub fn group(&self) -> &GroupSpec {
        &self.group
    }

    /// `x -> sum_i c_i f(x + t_i)`.
    pub fn apply(&self, f: &FunctionRep) -> Result<FunctionRep> {
        let terms: Vec<_> = self
            .entries
            .iter()
            .filter(|(_, c)| !c.is_zero())
            .map(|(t, c)| (c.clone(), t.clone(), f))
            .collect();
        linear_combine(&terms)
    }

    /// Weights of the composed combination `sum_j sum_i c_j c'_i f(x + t_j + t'_i)`.
    pub fn compose(&self, other: &ConvexWeights) -> Result<ConvexWeights> {
        self.group.check_same(&other.group)?;
        let mut merged: std::collections::BTreeMap<GroupElement, Rational> = Default::default();
        for (t, c) in &self.entries {
            for (s, d) in &other.entries {
                *merged.entry(self.group.add(t, s)).or_insert_with(Rational::zero) += c * d;
            }
        }
        ConvexWeights::new(&self.group, merged.into_iter().collect())
    }

    pub fn to_json(&self) -> Value {
        Value::from(
            self.entries
                .iter()
                .map(|(t, c)| json!([t.flat(), format_rational(c)]))
                .collect::<Vec<_>>(),
        )
    }
}

/// What a mean estimate was computed from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MeanWitness {
    /// The set `B` whose averages realize the value.
    AveragingSet(FiniteSubset),
    Weights(ConvexWeights),
}

impl MeanWitness {
    pub fn to_json(&self) -> Value {
        match self {
            MeanWitness::AveragingSet(b) => json!({"kind": "averaging_set", "set": b.to_flat()}),
            MeanWitness::Weights(w) => json!({"kind": "weights", "weights": w.to_json()}),
        }
    }
}

/// A mean value with bracketing bounds. Certified values are exact and
/// `lower == value == upper`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MeanEstimate {
    pub value: Rational,
    pub lower: Rational,
    pub upper: Rational,
    pub certified: bool,
    pub witness: Option<MeanWitness>,
}

impl MeanEstimate {
    pub fn exact(value: Rational, witness: Option<MeanWitness>) -> Self {
        MeanEstimate {
            lower: value.clone(),
            upper: value.clone(),
            value,
            certified: true,
            witness,
        }
    }

    pub fn estimate(value: Rational, lower: Rational, upper: Rational, witness: Option<MeanWitness>) -> Self {
        debug_assert!(lower <= value && value <= upper);
        MeanEstimate {
            value,
            lower,
            upper,
            certified: false,
            witness,
        }
    }

    /// The estimate of `-f` given the estimate of `f`.
    pub fn negated(self) -> Self {
        MeanEstimate {
            value: -self.value,
            lower: -self.upper,
            upper: -self.lower,
            certified: self.certified,
            witness: self.witness,
        }
    }

    /// Exact `"num/den"` when certified, a tagged decimal otherwise.
    pub fn render(&self, q: &Rational) -> String {
        render_number(q, self.certified)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "value": self.render(&self.value),
            "lower": self.render(&self.lower),
            "upper": self.render(&self.upper),
            "certified": self.certified,
            "witness": self.witness.as_ref().map_or(Value::Null, MeanWitness::to_json),
        })
    }
}

/// Numeric field rendering shared by all reports.
pub fn render_number(q: &Rational, certified: bool) -> String {
    if certified {
        format_rational(q)
    } else {
        format!("estimate:{}", format_decimal(q))
    }
}
