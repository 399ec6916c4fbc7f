use num_traits::{One, Signed, Zero};
use serde_json::{json, Value};

use super::estimate::{render_number, ConvexWeights, MeanEstimate};
use super::uppermost::{lowest_mean, require_not_oracle, uppermost_mean};
use crate::error::{Error, Result};
use crate::group::{mixed_radix, FiniteSubset, GroupElement};
use crate::rational::{int, Rational};
use crate::repr::{linear_combine, FunctionRep};

/// A convex combination `h_k` of translates within `1/k` of the constant.
#[derive(Debug, Clone)]
pub struct MedialWitness {
    pub k: u64,
    pub weights: ConvexWeights,
    pub h: FunctionRep,
    /// `sup |h - Mabs|`.
    pub deviation: Rational,
}

#[derive(Debug, Clone)]
pub enum MedialityVerdict {
    Medial {
        mabs: Rational,
        certified: bool,
        witness: Option<MedialWitness>,
    },
    NotMedial {
        lower: MeanEstimate,
        upper: MeanEstimate,
    },
}

impl MedialityVerdict {
    pub fn is_medial(&self) -> bool {
        matches!(self, MedialityVerdict::Medial { .. })
    }

    pub fn to_json(&self) -> Value {
        match self {
            MedialityVerdict::Medial {
                mabs,
                certified,
                witness,
            } => json!({
                "medial": true,
                "mabs": render_number(mabs, *certified),
                "certified": certified,
                "witness": witness.as_ref().map(|w| json!({
                    "k": w.k,
                    "support_size": w.weights.entries().len(),
                    "deviation": render_number(&w.deviation, true),
                })),
            }),
            MedialityVerdict::NotMedial { lower, upper } => json!({
                "medial": false,
                "lower": lower.to_json(),
                "upper": upper.to_json(),
            }),
        }
    }
}

/// Decides `M_*(f) = M*(f)`. Periodic and finitely modified input gets a
/// certified verdict and a witness: uniform weights over `L` periods per
/// free axis, with `L` large enough that the overrides move `h` by less
/// than `1/k`. Oracle input gets a heuristic verdict from the estimates.
pub fn absolute_mediality(f: &FunctionRep, k: u64) -> Result<MedialityVerdict> {
    if k == 0 {
        return Err(Error::Domain("k must be positive".into()));
    }
    let upper = uppermost_mean(f)?;
    let lower = lowest_mean(f)?;
    if matches!(f, FunctionRep::Oracle(_)) {
        return Ok(if upper.value == lower.value {
            MedialityVerdict::Medial {
                mabs: upper.value,
                certified: false,
                witness: None,
            }
        } else {
            MedialityVerdict::NotMedial { lower, upper }
        });
    }
    let alpha = upper.value.clone();
    let base = f.periodic_base().unwrap();
    let group = f.group();
    let d = group.free_rank;
    let cell = int(base.cell_size() as i64);
    let spread = match f {
        FunctionRep::Modified(m) => {
            let worst = m
                .overrides()
                .iter()
                .map(|(x, v)| (v - base.value_at(x)).abs())
                .max()
                .unwrap_or_else(Rational::zero);
            int(m.overrides().len() as i64) * worst * int(k as i64)
        }
        _ => Rational::zero(),
    };
    let mut l = 1i64;
    while int(l).pow(d as i32) * &cell <= spread {
        l *= 2;
    }
    let mut radix: Vec<i64> = base.period().iter().map(|p| p * l).collect();
    radix.extend(&group.torsion);
    let support = FiniteSubset::new(
        group,
        mixed_radix(&radix).into_iter().map(|mut digits| {
            let tors = digits.split_off(d);
            GroupElement { free: digits, tors }
        }),
    )?;
    let weights = ConvexWeights::uniform(&support)?;
    let h = weights.apply(f)?;
    let deviation = (h.sup() - &alpha).abs().max((h.inf() - &alpha).abs());
    if &deviation * int(k as i64) >= Rational::one() {
        return Err(Error::Invariant(format!(
            "medial witness misses the constant by at least 1/{k}"
        )));
    }
    Ok(MedialityVerdict::Medial {
        mabs: alpha,
        certified: true,
        witness: Some(MedialWitness {
            k,
            weights,
            h,
            deviation,
        }),
    })
}

/// `g = sum c_i f(. + t_i)` with the predicted `M*(g) = (sum c_i) M*(f)`,
/// checked against the computed mean of `g`.
pub fn genrest_transform(f: &FunctionRep, coeffs: &[(Rational, GroupElement)]) -> Result<(FunctionRep, Rational)> {
    require_not_oracle(f, "genrest_transform")?;
    if coeffs.is_empty() {
        return Err(Error::Domain("at least one coefficient is needed".into()));
    }
    let total: Rational = coeffs.iter().map(|(c, _)| c).sum();
    if total.is_negative() {
        return Err(Error::Domain("coefficients must have a nonnegative sum".into()));
    }
    let terms: Vec<_> = coeffs.iter().map(|(c, t)| (c.clone(), t.clone(), f)).collect();
    let g = linear_combine(&terms)?;
    let predicted = if total.is_zero() {
        Rational::zero()
    } else {
        total * uppermost_mean(f)?.value
    };
    let actual = uppermost_mean(&g)?.value;
    if actual != predicted {
        return Err(Error::Invariant(format!("M*(g) = {actual}, predicted {predicted}")));
    }
    Ok((g, predicted))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::GroupSpec;
    use crate::rational::rat;
    use crate::repr::{FiniteModRep, OracleWindowRep, PeriodicRep};
    use std::collections::BTreeMap;

    #[test]
    fn periodic_is_medial_with_constant_witness() {
        let f: FunctionRep = PeriodicRep::integer_set(6, &[0, 2, 3]).into();
        match absolute_mediality(&f, 5).unwrap() {
            MedialityVerdict::Medial { mabs, certified, witness } => {
                assert_eq!(mabs, rat(1, 2));
                assert!(certified);
                let w = witness.unwrap();
                assert_eq!(w.h.constant_value(), Some(&rat(1, 2)));
                assert_eq!(w.deviation, int(0));
            }
            v => panic!("{v:?}"),
        }
        let c = FunctionRep::constant(&GroupSpec::integers(), int(3));
        assert!(matches!(
            absolute_mediality(&c, 1).unwrap(),
            MedialityVerdict::Medial { mabs, .. } if mabs == int(3)
        ));
    }

    #[test]
    fn overrides_are_diluted_below_one_over_k() {
        let mut ov = BTreeMap::new();
        ov.insert(GroupSpec::integers().int(0), int(7));
        ov.insert(GroupSpec::integers().int(5), int(-3));
        let f: FunctionRep = FiniteModRep::new(PeriodicRep::integer_set(2, &[0]), ov).unwrap().into();
        for k in [1, 10, 100] {
            match absolute_mediality(&f, k).unwrap() {
                MedialityVerdict::Medial { witness: Some(w), mabs, .. } => {
                    assert_eq!(mabs, rat(1, 2));
                    assert!(&w.deviation * int(k as i64) < int(1));
                    assert!(w.deviation > int(0));
                }
                v => panic!("{v:?}"),
            }
        }
    }

    #[test]
    fn dyadic_blocks_not_medial() {
        let d: FunctionRep = OracleWindowRep::dyadic_blocks(4096).unwrap().into();
        match absolute_mediality(&d, 3).unwrap() {
            MedialityVerdict::NotMedial { lower, upper } => {
                assert_eq!((lower.value, upper.value), (int(-1), int(0)));
            }
            v => panic!("{v:?}"),
        }
    }

    #[test]
    fn genrest_examples() {
        let g = GroupSpec::integers();
        let f: FunctionRep = PeriodicRep::integer_set(6, &[0, 2, 3]).into();
        let (_, p) = genrest_transform(&f, &[(int(1), g.int(0)), (int(1), g.int(3))]).unwrap();
        assert_eq!(p, int(1));
        let (_, p) = genrest_transform(&f, &[(int(1), g.int(0)), (int(-1), g.int(4))]).unwrap();
        assert_eq!(p, int(0));
        let evens: FunctionRep = PeriodicRep::integer_set(2, &[0]).into();
        let (h, p) = genrest_transform(&evens, &[(int(2), g.int(0)), (int(-1), g.int(1))]).unwrap();
        assert_eq!(p, rat(1, 2));
        assert_eq!(h.periodic_base().unwrap().values(), &[int(2), int(-1)]);
        assert!(matches!(
            genrest_transform(&evens, &[(int(-1), g.int(0))]),
            Err(Error::Domain(_))
        ));
    }
}
