use num_traits::One;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::means::{render_number, uppermost_mean, MeanEstimate};
use crate::rational::{ceil_to_i64, int, Rational};
use crate::repr::{FunctionRep, OracleWindowRep};

/// Smallest window `eps * x` used for the envelope grid.
const MIN_ENVELOPE_WINDOW: i64 = 16;

/// One row of the envelope grid: `max over x of (1/(eps x)) sum_{x<n<(1+eps)x} f(n)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EnvelopeRow {
    pub eps: Rational,
    pub x_min: i64,
    pub x_max: i64,
    pub value: Rational,
}

#[derive(Debug, Clone)]
pub struct AsymptoticProfile {
    pub prefix_limsup: MeanEstimate,
    pub envelope_estimate: MeanEstimate,
    pub uppermost: MeanEstimate,
    /// `(n, S_n / n)` at the checkpoints behind `prefix_limsup`.
    pub checkpoints: Vec<(i64, Rational)>,
    pub grid: Vec<EnvelopeRow>,
}

impl AsymptoticProfile {
    pub fn to_json(&self) -> Value {
        let cert = self.envelope_estimate.certified;
        json!({
            "prefix_limsup": self.prefix_limsup.to_json(),
            "envelope_estimate": self.envelope_estimate.to_json(),
            "uppermost": self.uppermost.to_json(),
            "checkpoints": self.checkpoints.iter()
                .map(|(n, v)| json!({"n": n, "value": render_number(v, cert)}))
                .collect::<Vec<_>>(),
            "grid": self.grid.iter()
                .map(|r| json!({
                    "eps": render_number(&r.eps, true),
                    "x_min": r.x_min,
                    "x_max": r.x_max,
                    "value": render_number(&r.value, cert),
                }))
                .collect::<Vec<_>>(),
        })
    }
}

/// Upper asymptotic density `limsup S_n / n`, the envelope
/// `lim_eps limsup_x (1/(eps x)) sum_{x<n<(1+eps)x} f(n)` and `M*(f)` on `Z`.
///
/// Periodic and finitely modified input gives the cell average for all
/// three. Oracle input uses checkpoints `n in {2^j, 3 2^(j-1)}` in the upper
/// half of the window and an `eps = 2^-j` grid with `x in [N/4, N/(1+eps)]`;
/// the reported envelope is the finest grid row.
pub fn asymptotic_profile(f: &FunctionRep) -> Result<AsymptoticProfile> {
    f.group().require_integers()?;
    let uppermost = uppermost_mean(f)?;
    let Some(o) = f.as_oracle() else {
        return Ok(AsymptoticProfile {
            prefix_limsup: uppermost.clone(),
            envelope_estimate: uppermost.clone(),
            uppermost,
            checkpoints: Vec::new(),
            grid: Vec::new(),
        });
    };
    let n = o.horizon();
    let sums = o.positive_prefix_sums();
    let checkpoints: Vec<(i64, Rational)> = prefix_checkpoints(n)
        .into_iter()
        .map(|c| (c, &sums[c as usize] / int(c)))
        .collect();
    let prefix = checkpoints
        .iter()
        .map(|(_, v)| v.clone())
        .max()
        .ok_or_else(|| Error::Horizon(format!("horizon {n} has no prefix checkpoints")))?;
    let grid = envelope_grid(o);
    let envelope = grid
        .last()
        .map(|r| r.value.clone())
        .ok_or_else(|| Error::Horizon(format!("horizon {n} is too short for the envelope grid")))?;
    let (lo, hi) = (f.inf(), f.sup());
    Ok(AsymptoticProfile {
        prefix_limsup: MeanEstimate::estimate(prefix, lo.clone(), hi.clone(), None),
        envelope_estimate: MeanEstimate::estimate(envelope, lo, hi, None),
        uppermost,
        checkpoints,
        grid,
    })
}

fn prefix_checkpoints(horizon: i64) -> Vec<i64> {
    let mut out = Vec::new();
    let mut p = 1i64;
    while p <= horizon {
        for c in [p, 3 * p / 2] {
            if c >= 1 && 2 * c >= horizon && c <= horizon && !out.contains(&c) {
                out.push(c);
            }
        }
        p *= 2;
    }
    out.sort_unstable();
    out
}

fn envelope_grid(o: &OracleWindowRep) -> Vec<EnvelopeRow> {
    let n = o.horizon();
    let sums = o.positive_prefix_sums();
    let x_min = n / 4;
    let mut rows = Vec::new();
    let mut j = 1u32;
    while x_min >> j >= MIN_ENVELOPE_WINDOW {
        let scale = 1i64 << j;
        let eps = Rational::one() / int(scale);
        // (1 + eps) x <= N
        let x_max = n * scale / (scale + 1);
        let mut best: Option<Rational> = None;
        for x in x_min.max(1)..=x_max {
            // x < m < (1 + eps) x
            let top = ceil_to_i64(&(int(x) * (int(1) + &eps))) - 1;
            let s = &sums[top as usize] - &sums[x as usize];
            let v = s * int(scale) / int(x);
            if best.as_ref().is_none_or(|b| v > *b) {
                best = Some(v);
            }
        }
        if let Some(value) = best {
            rows.push(EnvelopeRow {
                eps,
                x_min,
                x_max,
                value,
            });
        }
        j += 1;
    }
    rows
}

/// `(n, (2 S_{2n} - 3 S_n) / n)` for `n = 2^j` with `2n <= N`.
pub fn polya_checkpoints(o: &OracleWindowRep) -> Vec<(i64, Rational)> {
    let sums = o.positive_prefix_sums();
    let n = o.horizon();
    let mut out = Vec::new();
    let mut c = 1i64;
    while 2 * c <= n {
        let v = (int(2) * &sums[2 * c as usize] - int(3) * &sums[c as usize]) / int(c);
        out.push((c, v));
        c *= 2;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::GroupSpec;
    use crate::rational::rat;
    use crate::repr::PeriodicRep;

    #[test]
    fn periodic_profile_is_the_average() {
        let f: FunctionRep = PeriodicRep::integer_set(6, &[0, 2, 3]).into();
        let p = asymptotic_profile(&f).unwrap();
        assert_eq!(p.prefix_limsup.value, rat(1, 2));
        assert_eq!(p.envelope_estimate.value, rat(1, 2));
        assert!(p.prefix_limsup.certified);
        let c = FunctionRep::constant(&GroupSpec::integers(), rat(-2, 3));
        assert_eq!(asymptotic_profile(&c).unwrap().envelope_estimate.value, rat(-2, 3));
    }

    #[test]
    fn dyadic_profile_is_not_regular() {
        let f: FunctionRep = OracleWindowRep::dyadic_blocks(4096).unwrap().into();
        let p = asymptotic_profile(&f).unwrap();
        assert_eq!(p.checkpoints[0], (2048, rat(-682, 2048)));
        assert_eq!(p.prefix_limsup.value, rat(-1, 3) + rat(1, 3 * 1024));
        assert_eq!(p.envelope_estimate.value, int(0));
        assert_eq!(p.uppermost.value, int(0));
        assert_eq!(p.grid.last().unwrap().eps, rat(1, 64));
    }

    #[test]
    fn polya_values() {
        let o = OracleWindowRep::dyadic_blocks(4096).unwrap();
        let cps = polya_checkpoints(&o);
        assert!(cps.contains(&(64, rat(42, 64))));
        assert!(cps.iter().filter(|(n, _)| [16, 64, 256, 1024].contains(n)).all(|(_, v)| *v >= rat(1, 2)));
    }

    #[test]
    fn higher_rank_rejected() {
        let f = FunctionRep::constant(&GroupSpec::lattice(2), int(1));
        assert!(matches!(asymptotic_profile(&f), Err(Error::Spec(_))));
    }
}
