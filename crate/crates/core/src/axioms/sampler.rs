use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::group::{GroupElement, GroupSpec};
use crate::rational::{int, Rational};
use crate::repr::{FiniteModRep, FunctionRep, OracleWindowRep, PeriodicRep};

/// Horizon of sampled oracle windows.
const ORACLE_HORIZON: i64 = 256;

#[derive(Debug, Clone)]
pub struct SamplerConfig {
    /// Only sample functions on `Z`.
    pub integers_only: bool,
    /// Percent of finitely modified samples.
    pub modified_percent: u32,
    /// Percent of oracle samples (on `Z` only).
    pub oracle_percent: u32,
    /// Percent of samples on `Z^2` or `Z x Z_2`.
    pub other_group_percent: u32,
}

impl Default for SamplerConfig {
    fn default() -> Self {
        SamplerConfig {
            integers_only: false,
            modified_percent: 10,
            oracle_percent: 10,
            other_group_percent: 15,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SampleKind {
    Periodic,
    Modified,
    Oracle,
}

/// Group and representation kind shared by the functions of one case, so
/// that they can be combined.
#[derive(Debug, Clone)]
pub struct Shape {
    pub group: GroupSpec,
    pub kind: SampleKind,
}

/// Random bounded functions with small exact values: periods up to 12,
/// denominators up to 16, `|f| <= 4`. Oracle samples repeat a pattern of
/// power-of-two period, so every checkpoint and box estimate is exact.
pub struct Sampler {
    rng: ChaCha8Rng,
    config: SamplerConfig,
}

impl Sampler {
    /// Independent stream `case` of the generator seeded with `seed`.
    pub fn for_case(seed: u64, case: u64, config: SamplerConfig) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(case);
        Sampler { rng, config }
    }

    pub fn percent(&mut self, p: u32) -> bool {
        self.rng.gen_range(0..100) < p
    }

    pub fn index(&mut self, lo: usize, hi: usize) -> usize {
        self.rng.gen_range(lo..=hi)
    }

    pub fn rational(&mut self) -> Rational {
        let den = self.rng.gen_range(1..=16i64);
        let num = self.rng.gen_range(-4 * den..=4 * den);
        int(num) / int(den)
    }

    /// A value in `[0, bound]` with denominator at most 16.
    pub fn nonnegative(&mut self, bound: i64) -> Rational {
        let den = self.rng.gen_range(1..=16i64);
        int(self.rng.gen_range(0..=bound * den)) / int(den)
    }

    pub fn shape(&mut self) -> Shape {
        let c = self.config.clone();
        if !c.integers_only && self.percent(c.other_group_percent) {
            let group = if self.rng.gen_bool(0.5) {
                GroupSpec::lattice(2)
            } else {
                GroupSpec::new(1, vec![2]).expect("valid group")
            };
            let kind = if self.percent(c.modified_percent) {
                SampleKind::Modified
            } else {
                SampleKind::Periodic
            };
            return Shape { group, kind };
        }
        let roll = self.rng.gen_range(0..100);
        let kind = if roll < c.oracle_percent {
            SampleKind::Oracle
        } else if roll < c.oracle_percent + c.modified_percent {
            SampleKind::Modified
        } else {
            SampleKind::Periodic
        };
        Shape {
            group: GroupSpec::integers(),
            kind,
        }
    }

    pub fn function(&mut self, shape: &Shape) -> FunctionRep {
        self.function_with(shape, |s| s.rational())
    }

    /// A sample whose values come from `value`.
    pub fn function_with(&mut self, shape: &Shape, value: impl Fn(&mut Self) -> Rational) -> FunctionRep {
        match shape.kind {
            SampleKind::Periodic => self.periodic(&shape.group, &value).into(),
            SampleKind::Modified => {
                let base = self.periodic(&shape.group, &value);
                let count = self.rng.gen_range(1..=3);
                let mut overrides = BTreeMap::new();
                for _ in 0..count {
                    let x = self.element_within(&shape.group, 10);
                    overrides.insert(x, value(self));
                }
                FiniteModRep::new(base, overrides).expect("valid modification").into()
            }
            SampleKind::Oracle => {
                let q = 1i64 << self.rng.gen_range(1..=4);
                let pattern: Vec<Rational> = (0..q).map(|_| value(self)).collect();
                let table = (-ORACLE_HORIZON..=ORACLE_HORIZON)
                    .map(|x| pattern[x.rem_euclid(q) as usize].clone())
                    .collect();
                OracleWindowRep::from_table(ORACLE_HORIZON, table).expect("table fits").into()
            }
        }
    }

    fn periodic(&mut self, group: &GroupSpec, value: &impl Fn(&mut Self) -> Rational) -> PeriodicRep {
        let period: Vec<i64> = match group.free_rank {
            1 if group.torsion.is_empty() => vec![self.rng.gen_range(2..=12)],
            1 => vec![self.rng.gen_range(2..=6)],
            d => (0..d).map(|_| self.rng.gen_range(2..=4)).collect(),
        };
        let size = period.iter().product::<i64>() * group.torsion_order();
        let values = (0..size).map(|_| value(self)).collect();
        PeriodicRep::new(group, period, values).expect("valid periodic sample")
    }

    /// An element with free coordinates in `[-r, r]`.
    pub fn element_within(&mut self, group: &GroupSpec, r: i64) -> GroupElement {
        let free = (0..group.free_rank).map(|_| self.rng.gen_range(-r..=r)).collect();
        let tors = group.torsion.iter().map(|&m| self.rng.gen_range(0..m)).collect();
        group.element(free, tors).expect("in range")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::repr::serialize_description;

    #[test]
    fn streams_are_reproducible() {
        let draw = |case| {
            let mut s = Sampler::for_case(7, case, SamplerConfig::default());
            let shape = s.shape();
            serialize_description(&s.function(&shape))
        };
        assert_eq!(draw(3), draw(3));
        assert_ne!(draw(3), draw(4));
    }

    #[test]
    fn values_are_bounded() {
        for case in 0..50 {
            let mut s = Sampler::for_case(1, case, SamplerConfig::default());
            let shape = s.shape();
            let f = s.function(&shape);
            assert!(f.bound() <= int(4));
        }
    }
}
