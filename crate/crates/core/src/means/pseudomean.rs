use num_traits::{Signed, Zero};
use serde_json::{json, Value};

use super::estimate::{render_number, MeanEstimate};
use super::uppermost::{require_not_oracle, uppermost_mean};
use crate::error::Result;
use crate::rational::Rational;
use crate::repr::{positive_part, FunctionRep};

/// Expansion pseudomean with the pieces of `min{sup f, M*(f+)}`.
#[derive(Debug, Clone)]
pub struct PseudomeanReport {
    pub estimate: MeanEstimate,
    pub sup: Rational,
    pub positive_part_mean: Rational,
    /// `M*(f+) = 0 < sup f`: the pseudomean vanishes although `f` takes
    /// positive values.
    pub dichotomy: bool,
}

impl PseudomeanReport {
    pub fn to_json(&self) -> Value {
        json!({
            "value": render_number(&self.estimate.value, true),
            "sup": render_number(&self.sup, true),
            "positive_part_mean": render_number(&self.positive_part_mean, true),
            "dichotomy": self.dichotomy,
            "certified": true,
        })
    }
}

/// `E(f) = min{sup f, M*(f+)}`, exact for periodic and finitely modified `f`.
pub fn expansion_pseudomean(f: &FunctionRep) -> Result<MeanEstimate> {
    Ok(expansion_pseudomean_report(f)?.estimate)
}

pub fn expansion_pseudomean_report(f: &FunctionRep) -> Result<PseudomeanReport> {
    require_not_oracle(f, "expansion_pseudomean")?;
    f.group().require_infinite()?;
    let sup = f.sup();
    let positive_part_mean = uppermost_mean(&positive_part(f))?.value;
    let value = if sup < positive_part_mean {
        sup.clone()
    } else {
        positive_part_mean.clone()
    };
    Ok(PseudomeanReport {
        estimate: MeanEstimate::exact(value, None),
        dichotomy: positive_part_mean.is_zero() && sup.is_positive(),
        sup,
        positive_part_mean,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Error;
    use crate::group::GroupSpec;
    use crate::rational::{int, rat};
    use crate::repr::{FiniteModRep, OracleWindowRep, PeriodicRep};
    use std::collections::BTreeMap;

    #[test]
    fn examples() {
        let g = GroupSpec::integers();
        let minus_one = FunctionRep::constant(&g, int(-1));
        assert_eq!(expansion_pseudomean(&minus_one).unwrap().value, int(-1));

        let f: FunctionRep = PeriodicRep::integer_function(vec![int(1), int(-1)]).into();
        assert_eq!(expansion_pseudomean(&f).unwrap().value, rat(1, 2));

        let f: FunctionRep = PeriodicRep::integer_set(6, &[0]).into();
        let r = expansion_pseudomean_report(&f).unwrap();
        assert_eq!(r.estimate.value, rat(1, 6));
        assert!(!r.dichotomy);
    }

    #[test]
    fn isolated_spike_is_the_dichotomy() {
        let mut ov = BTreeMap::new();
        ov.insert(GroupSpec::integers().int(0), int(1));
        let f: FunctionRep = FiniteModRep::new(PeriodicRep::integer_function(vec![int(0)]), ov)
            .unwrap()
            .into();
        let r = expansion_pseudomean_report(&f).unwrap();
        assert_eq!(r.estimate.value, int(0));
        assert_eq!(r.sup, int(1));
        assert!(r.dichotomy);
    }

    #[test]
    fn oracle_rejected() {
        let d: FunctionRep = OracleWindowRep::dyadic_blocks(16).unwrap().into();
        assert!(matches!(expansion_pseudomean(&d), Err(Error::Kind(_))));
    }
}
