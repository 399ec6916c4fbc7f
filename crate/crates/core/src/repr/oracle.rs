use std::sync::Arc;

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::rational::{int, Rational};

/// Where the values of an oracle window came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OracleGenerator {
    /// `-1` on `(2^(2i-1), 2^(2i)]` for `i >= 1`, `0` elsewhere.
    DyadicBlocks,
    ExplicitTable,
}

impl OracleGenerator {
    pub fn name(self) -> &'static str {
        match self {
            OracleGenerator::DyadicBlocks => "dyadic_blocks",
            OracleGenerator::ExplicitTable => "explicit_table",
        }
    }
}

/// A function on `Z` known only on `[-horizon, horizon]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OracleWindowRep {
    generator: OracleGenerator,
    horizon: i64,
    values: Arc<Vec<Rational>>,
}

impl OracleWindowRep {
    pub fn dyadic_blocks(horizon: i64) -> Result<Self> {
        check_horizon(horizon)?;
        let values = (-horizon..=horizon).map(|x| int(dyadic_block_value(x))).collect();
        Ok(OracleWindowRep {
            generator: OracleGenerator::DyadicBlocks,
            horizon,
            values: Arc::new(values),
        })
    }

    /// `table[i]` is the value at `x = i - horizon`.
    pub fn from_table(horizon: i64, table: Vec<Rational>) -> Result<Self> {
        check_horizon(horizon)?;
        if table.len() as i64 != 2 * horizon + 1 {
            return Err(Error::Domain(format!(
                "table for horizon {horizon} needs {} values, got {}",
                2 * horizon + 1,
                table.len()
            )));
        }
        Ok(OracleWindowRep {
            generator: OracleGenerator::ExplicitTable,
            horizon,
            values: Arc::new(table),
        })
    }

    pub fn generator(&self) -> OracleGenerator {
        self.generator
    }

    pub fn horizon(&self) -> i64 {
        self.horizon
    }

    pub fn table(&self) -> &[Rational] {
        &self.values
    }

    pub fn value(&self, x: i64) -> Result<&Rational> {
        if x.abs() > self.horizon {
            return Err(Error::Horizon(format!(
                "x = {x} lies outside the window [-{0}, {0}]",
                self.horizon
            )));
        }
        Ok(&self.values[(x + self.horizon) as usize])
    }

    pub fn bound(&self) -> Rational {
        self.values.iter().map(|v| v.abs()).max().unwrap_or_else(Rational::zero)
    }

    pub fn map(&self, op: impl Fn(&Rational) -> Rational) -> OracleWindowRep {
        OracleWindowRep {
            generator: OracleGenerator::ExplicitTable,
            horizon: self.horizon,
            values: Arc::new(self.values.iter().map(op).collect()),
        }
    }

    /// Prefix sums `S_n = f(1) + ... + f(n)` for `0 <= n <= horizon`.
    pub fn positive_prefix_sums(&self) -> Vec<Rational> {
        let mut out = Vec::with_capacity(self.horizon as usize + 1);
        let mut acc = Rational::zero();
        out.push(acc.clone());
        for n in 1..=self.horizon {
            acc += &self.values[(n + self.horizon) as usize];
            out.push(acc.clone());
        }
        out
    }

    /// `W[i] = f(-h) + ... + f(i - 1 - h)`, so the sum over `[a, b]` is
    /// `W[b + h + 1] - W[a + h]`.
    pub fn window_sums(&self) -> Vec<Rational> {
        let mut out = Vec::with_capacity(self.values.len() + 1);
        let mut acc = Rational::zero();
        out.push(acc.clone());
        for v in self.values.iter() {
            acc += v;
            out.push(acc.clone());
        }
        out
    }
}

fn check_horizon(horizon: i64) -> Result<()> {
    if horizon < 1 {
        Err(Error::Domain(format!("horizon {horizon} must be positive")))
    } else {
        Ok(())
    }
}

/// The dyadic block function: `-1` when `2^(2i-1) < x <= 2^(2i)`, `i >= 1`.
pub fn dyadic_block_value(x: i64) -> i64 {
    if x <= 2 {
        return 0;
    }
    // x lies in (2^(k-1), 2^k] with k = ceil(log2 x)
    let k = 64 - (x - 1).leading_zeros();
    if k % 2 == 0 {
        -1
    } else {
        0
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dyadic_blocks_layout() {
        let minus: Vec<i64> = (-3..=70).filter(|&x| dyadic_block_value(x) == -1).collect();
        let expected: Vec<i64> = (3..=4).chain(9..=16).chain(33..=64).collect();
        assert_eq!(minus, expected);
        assert_eq!(dyadic_block_value(10), -1);
    }

    #[test]
    fn out_of_window_is_an_error() {
        let f = OracleWindowRep::dyadic_blocks(16).unwrap();
        assert_eq!(*f.value(16).unwrap(), int(-1));
        assert!(matches!(f.value(17), Err(Error::Horizon(_))));
    }

    #[test]
    fn prefix_sums_count_blocks() {
        let f = OracleWindowRep::dyadic_blocks(128).unwrap();
        let s = f.positive_prefix_sums();
        assert_eq!(s[64], int(-42));
        assert_eq!(s[128], int(-42));
    }
}
