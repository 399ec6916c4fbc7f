use crate::densities::{asymptotic_profile, polya_checkpoints};
use crate::error::{Error, Result};
use crate::means::{lowest_mean, uppermost_mean, MeanEstimate};
use crate::repr::FunctionRep;

/// Smallest checkpoint `n` used by `polya_counterexample` on oracle windows.
pub const POLYA_MIN_CHECKPOINT: i64 = 16;

/// Whether a functional is meant as an upper (subadditive) or lower
/// (superadditive) mean.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    Upper,
    Lower,
}

pub struct FunctionalPlugin {
    pub name: &'static str,
    pub aliases: &'static [&'static str],
    pub direction: Direction,
    /// Defined only on `Z`.
    pub integers_only: bool,
    /// Oracle values come from finitely many checkpoints of a limit.
    pub checkpoint_based: bool,
    evaluator: fn(&FunctionRep) -> Result<MeanEstimate>,
}

impl FunctionalPlugin {
    pub fn evaluate(&self, f: &FunctionRep) -> Result<MeanEstimate> {
        if self.integers_only {
            f.group().require_integers()?;
        }
        (self.evaluator)(f)
    }

    /// Exact on periodic and finitely modified input.
    pub fn exact_on(&self, f: &FunctionRep) -> bool {
        !matches!(f, FunctionRep::Oracle(_))
    }

    fn matches(&self, name: &str) -> bool {
        self.name == name || self.aliases.contains(&name)
    }
}

impl std::fmt::Debug for FunctionalPlugin {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("FunctionalPlugin").field("name", &self.name).finish()
    }
}

static REGISTRY: [FunctionalPlugin; 4] = [
    FunctionalPlugin {
        name: "uppermost",
        aliases: &["upper"],
        direction: Direction::Upper,
        integers_only: false,
        checkpoint_based: false,
        evaluator: uppermost_mean,
    },
    FunctionalPlugin {
        name: "lowest",
        aliases: &["lower"],
        direction: Direction::Lower,
        integers_only: false,
        checkpoint_based: false,
        evaluator: lowest_mean,
    },
    FunctionalPlugin {
        name: "polya_counterexample",
        aliases: &["polya"],
        direction: Direction::Upper,
        integers_only: true,
        checkpoint_based: true,
        evaluator: polya,
    },
    FunctionalPlugin {
        name: "asymptotic_upper",
        aliases: &["asymptotic"],
        direction: Direction::Upper,
        integers_only: true,
        checkpoint_based: true,
        evaluator: asymptotic_upper,
    },
];

pub fn registry() -> &'static [FunctionalPlugin] {
    &REGISTRY
}

pub fn lookup(name: &str) -> Result<&'static FunctionalPlugin> {
    REGISTRY.iter().find(|p| p.matches(name)).ok_or_else(|| {
        let known: Vec<_> = REGISTRY.iter().map(|p| p.name).collect();
        Error::Domain(format!("unknown functional `{name}` (known: {})", known.join(", ")))
    })
}

pub fn eval_functional(name: &str, f: &FunctionRep) -> Result<MeanEstimate> {
    lookup(name)?.evaluate(f)
}

/// `(1/n)(2 S_{2n} - 3 S_n)`: the cell average on periodic input, the
/// largest checkpoint value `n = 2^j >= 16` on oracle windows.
fn polya(f: &FunctionRep) -> Result<MeanEstimate> {
    match f.as_oracle() {
        None => Ok(MeanEstimate::exact(f.periodic_base().unwrap().average(), None)),
        Some(o) => {
            let values: Vec<_> = polya_checkpoints(o)
                .into_iter()
                .filter(|(n, _)| *n >= POLYA_MIN_CHECKPOINT)
                .map(|(_, v)| v)
                .collect();
            let hi = values
                .iter()
                .max()
                .cloned()
                .ok_or_else(|| Error::Horizon(format!("horizon {} has no checkpoints", o.horizon())))?;
            let lo = values.iter().min().cloned().unwrap();
            Ok(MeanEstimate::estimate(hi.clone(), lo, hi, None))
        }
    }
}

fn asymptotic_upper(f: &FunctionRep) -> Result<MeanEstimate> {
    Ok(asymptotic_profile(f)?.prefix_limsup)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::GroupSpec;
    use crate::rational::{int, rat};
    use crate::repr::{OracleWindowRep, PeriodicRep};

    #[test]
    fn polya_values() {
        let one = FunctionRep::constant(&GroupSpec::integers(), int(1));
        assert_eq!(eval_functional("polya_counterexample", &one).unwrap().value, int(1));
        let d: FunctionRep = OracleWindowRep::dyadic_blocks(4096).unwrap().into();
        let v = eval_functional("polya", &d).unwrap();
        assert!(!v.certified);
        assert_eq!(v.value, rat(682, 1024));
    }

    #[test]
    fn asymptotic_upper_on_periodic() {
        let f: FunctionRep = PeriodicRep::integer_set(6, &[0, 2, 3]).into();
        assert_eq!(eval_functional("asymptotic_upper", &f).unwrap().value, rat(1, 2));
    }

    #[test]
    fn lookup_errors() {
        assert!(matches!(lookup("nope"), Err(Error::Domain(_))));
        let f = FunctionRep::constant(&GroupSpec::lattice(2), int(1));
        assert!(matches!(eval_functional("polya", &f), Err(Error::Spec(_))));
        assert_eq!(eval_functional("uppermost", &f).unwrap().value, int(1));
    }
}
