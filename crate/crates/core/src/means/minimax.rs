//! `min over convex weights on T of max over x of sum_t c_t f(x + t)`, solved
//! as a finite matrix game: rows are translates (the minimizer), columns are
//! evaluation points (the maximizer).
//!
//! Small games go through an exact rational simplex; larger ones run
//! multiplicative weights and report a duality-gap certificate.

use num_traits::{One, Signed, ToPrimitive, Zero};

use super::estimate::ConvexWeights;
use super::uppermost::require_not_oracle;
use crate::error::{Error, Result};
use crate::group::{FiniteSubset, GroupElement};
use crate::rational::{int, Rational};
use crate::repr::FunctionRep;

/// Games with at most this many entries are solved exactly.
pub const EXACT_ENTRY_LIMIT: usize = 4096;

const MWU_MAX_ITERATIONS: usize = 400_000;
const MWU_DENOMINATOR: i64 = 1 << 24;

#[derive(Debug, Clone)]
pub struct MinimaxResult {
    /// `max_x` of the returned combination: an upper bound on the game value,
    /// equal to it in exact mode.
    pub value: Rational,
    /// A lower bound on the game value from the maximizer's mixed strategy.
    pub lower_bound: Rational,
    /// `value - lower_bound`; zero in exact mode.
    pub gap: Rational,
    pub weights: ConvexWeights,
    pub exact: bool,
    pub iterations: usize,
}

/// A solved game `min_rows max_cols`.
#[derive(Debug, Clone)]
pub struct GameSolution {
    pub row_strategy: Vec<Rational>,
    pub col_strategy: Vec<Rational>,
    /// `max_j (c^T A)_j` for the row strategy.
    pub upper: Rational,
    /// `min_i (A q)_i` for the column strategy.
    pub lower: Rational,
    pub iterations: usize,
}

/// Solves the weight optimization for a periodic or finitely modified `f`
/// with weights supported on `t`.
pub fn minimax_weights(f: &FunctionRep, t: &FiniteSubset, tol: &Rational) -> Result<MinimaxResult> {
    require_not_oracle(f, "minimax_weights")?;
    f.group().check_same(t.group())?;
    t.require_nonempty("T")?;
    if !tol.is_positive() {
        return Err(Error::Domain("tolerance must be positive".into()));
    }
    let matrix = game_matrix(f, t)?;
    let entries = matrix.len() * matrix[0].len();
    let (solution, exact) = if entries <= EXACT_ENTRY_LIMIT {
        (solve_exact(&matrix)?, true)
    } else {
        (solve_approximate(&matrix, tol), false)
    };
    let weights = ConvexWeights::new(
        t.group(),
        t.iter().cloned().zip(solution.row_strategy.iter().cloned()).collect(),
    )?;
    Ok(MinimaxResult {
        gap: &solution.upper - &solution.lower,
        value: solution.upper,
        lower_bound: solution.lower,
        weights,
        exact,
        iterations: solution.iterations,
    })
}

/// Rows: translates `t`. Columns: every residue of the base cell (standing
/// for points far from any modification) plus each point `o - t` whose
/// combination touches a modified value `o`.
fn game_matrix(f: &FunctionRep, t: &FiniteSubset) -> Result<Vec<Vec<Rational>>> {
    let group = f.group();
    let base = f.periodic_base().unwrap();
    let mut columns: Vec<Vec<Rational>> = base
        .cell_points()
        .iter()
        .map(|x| t.iter().map(|s| base.value_at(&group.add(x, s)).clone()).collect())
        .collect();
    if let FunctionRep::Modified(m) = f {
        let mut special: Vec<GroupElement> = m
            .overrides()
            .keys()
            .flat_map(|o| t.iter().map(move |s| group.sub(o, s)))
            .collect();
        special.sort();
        special.dedup();
        for x in special {
            let col = t
                .iter()
                .map(|s| f.evaluate(&group.add(&x, s)))
                .collect::<Result<Vec<_>>>()?;
            columns.push(col);
        }
    }
    let rows = t.len();
    Ok((0..rows)
        .map(|i| columns.iter().map(|c| c[i].clone()).collect())
        .collect())
}

fn column_payoffs(matrix: &[Vec<Rational>], row: &[Rational]) -> Vec<Rational> {
    let cols = matrix[0].len();
    (0..cols)
        .map(|j| matrix.iter().zip(row).map(|(r, c)| c * &r[j]).sum())
        .collect()
}

fn row_payoffs(matrix: &[Vec<Rational>], col: &[Rational]) -> Vec<Rational> {
    matrix
        .iter()
        .map(|r| r.iter().zip(col).map(|(a, q)| a * q).sum())
        .collect()
}

/// Exact solution via the simplex method with Bland's rule on
/// `max sum y  s.t.  A'^T y <= 1, y >= 0`, where `A' = A + K > 0`.
pub fn solve_exact(matrix: &[Vec<Rational>]) -> Result<GameSolution> {
    let n = matrix.len();
    let m = matrix[0].len();
    let min = matrix.iter().flatten().min().unwrap().clone();
    let shift = Rational::one() - min;
    let width = n + m;
    let mut tab: Vec<Vec<Rational>> = (0..m)
        .map(|j| {
            let mut row = vec![Rational::zero(); width];
            for i in 0..n {
                row[i] = &matrix[i][j] + &shift;
            }
            row[n + j] = Rational::one();
            row
        })
        .collect();
    let mut rhs = vec![Rational::one(); m];
    let mut obj = vec![Rational::zero(); width];
    for o in obj.iter_mut().take(n) {
        *o = -Rational::one();
    }
    let mut obj_rhs = Rational::zero();
    let mut basis: Vec<usize> = (n..n + m).collect();
    let mut iterations = 0;

    while let Some(enter) = (0..width).find(|&j| obj[j].is_negative()) {
        iterations += 1;
        let mut leave: Option<(usize, Rational)> = None;
        for i in 0..m {
            if tab[i][enter].is_positive() {
                let ratio = &rhs[i] / &tab[i][enter];
                let better = match &leave {
                    None => true,
                    Some((k, r)) => ratio < *r || (ratio == *r && basis[i] < basis[*k]),
                };
                if better {
                    leave = Some((i, ratio));
                }
            }
        }
        let Some((p, _)) = leave else {
            return Err(Error::Invariant("game LP is unbounded".into()));
        };
        let pivot = tab[p][enter].clone();
        for v in tab[p].iter_mut() {
            *v = &*v / &pivot;
        }
        rhs[p] = &rhs[p] / &pivot;
        let prow = tab[p].clone();
        let prhs = rhs[p].clone();
        for i in 0..m {
            if i != p && !tab[i][enter].is_zero() {
                let factor = tab[i][enter].clone();
                for (v, pv) in tab[i].iter_mut().zip(&prow) {
                    if !pv.is_zero() {
                        *v -= &factor * pv;
                    }
                }
                rhs[i] -= &factor * &prhs;
            }
        }
        if !obj[enter].is_zero() {
            let factor = obj[enter].clone();
            for (v, pv) in obj.iter_mut().zip(&prow) {
                if !pv.is_zero() {
                    *v -= &factor * pv;
                }
            }
            obj_rhs -= &factor * &prhs;
        }
        basis[p] = enter;
    }

    let mut y = vec![Rational::zero(); n];
    for (i, &b) in basis.iter().enumerate() {
        if b < n {
            y[b] = rhs[i].clone();
        }
    }
    let total = obj_rhs;
    if !total.is_positive() {
        return Err(Error::Invariant("game LP has a nonpositive optimum".into()));
    }
    let row_strategy: Vec<Rational> = y.iter().map(|v| v / &total).collect();
    let col_strategy: Vec<Rational> = obj[n..].iter().map(|v| v / &total).collect();
    let upper = column_payoffs(matrix, &row_strategy).into_iter().max().unwrap();
    let lower = row_payoffs(matrix, &col_strategy).into_iter().min().unwrap();
    let value = Rational::one() / &total - &shift;
    if upper != value || lower != value {
        return Err(Error::Invariant(format!(
            "simplex certificate mismatch: value {value}, row bound {upper}, column bound {lower}"
        )));
    }
    Ok(GameSolution {
        row_strategy,
        col_strategy,
        upper,
        lower,
        iterations,
    })
}

/// Multiplicative weights in self-play. Averages of both players' strategies
/// are rounded to exact rationals and scored exactly; iteration stops once
/// the exact duality gap is at most `tol`, or at the iteration cap.
pub fn solve_approximate(matrix: &[Vec<Rational>], tol: &Rational) -> GameSolution {
    let n = matrix.len();
    let m = matrix[0].len();
    let lo = matrix.iter().flatten().min().unwrap().to_f64().unwrap();
    let hi = matrix.iter().flatten().max().unwrap().to_f64().unwrap();
    let range = (hi - lo).max(1e-12);
    let a: Vec<Vec<f64>> = matrix
        .iter()
        .map(|r| r.iter().map(|v| (v.to_f64().unwrap() - lo) / range).collect())
        .collect();
    let tol_f = tol.to_f64().unwrap() / range;

    let mut row_log = vec![0.0f64; n];
    let mut col_log = vec![0.0f64; m];
    let mut row_avg = vec![0.0f64; n];
    let mut col_avg = vec![0.0f64; m];
    let mut row = vec![0.0f64; n];
    let mut col = vec![0.0f64; m];
    let eta_scale = ((n.max(m)).max(2) as f64).ln().sqrt();
    let mut best: Option<GameSolution> = None;

    for step in 1..=MWU_MAX_ITERATIONS {
        let iterations = step;
        normalize_exp(&row_log, &mut row);
        normalize_exp(&col_log, &mut col);
        for (s, v) in row_avg.iter_mut().zip(&row) {
            *s += v;
        }
        for (s, v) in col_avg.iter_mut().zip(&col) {
            *s += v;
        }
        let eta = eta_scale / (step as f64).sqrt();
        for i in 0..n {
            let loss: f64 = a[i].iter().zip(&col).map(|(x, q)| x * q).sum();
            row_log[i] -= eta * loss;
        }
        for j in 0..m {
            let gain: f64 = (0..n).map(|i| a[i][j] * row[i]).sum();
            col_log[j] += eta * gain;
        }
        if step % 64 == 0 || step == MWU_MAX_ITERATIONS {
            let up = (0..m)
                .map(|j| (0..n).map(|i| a[i][j] * row_avg[i]).sum::<f64>())
                .fold(f64::MIN, f64::max)
                / step as f64;
            let down = a
                .iter()
                .map(|r| r.iter().zip(&col_avg).map(|(x, q)| x * q).sum::<f64>())
                .fold(f64::MAX, f64::min)
                / step as f64;
            if up - down <= 0.9 * tol_f || step == MWU_MAX_ITERATIONS {
                let candidate = score(matrix, &row_avg, &col_avg, iterations);
                let done = &candidate.upper - &candidate.lower <= *tol;
                best = Some(candidate);
                if done {
                    break;
                }
            }
        }
    }
    best.expect("the last iteration always scores")
}

fn normalize_exp(logs: &[f64], out: &mut [f64]) {
    let top = logs.iter().cloned().fold(f64::MIN, f64::max);
    let mut total = 0.0;
    for (o, l) in out.iter_mut().zip(logs) {
        *o = (l - top).exp();
        total += *o;
    }
    for o in out.iter_mut() {
        *o /= total;
    }
}

fn score(matrix: &[Vec<Rational>], row_avg: &[f64], col_avg: &[f64], iterations: usize) -> GameSolution {
    let row_strategy = rationalize(row_avg);
    let col_strategy = rationalize(col_avg);
    let upper = column_payoffs(matrix, &row_strategy).into_iter().max().unwrap();
    let lower = row_payoffs(matrix, &col_strategy).into_iter().min().unwrap();
    GameSolution {
        row_strategy,
        col_strategy,
        upper,
        lower,
        iterations,
    }
}

/// Rounds a nonnegative vector to a probability vector with denominator
/// `2^24`, putting the rounding remainder on the largest entry.
fn rationalize(v: &[f64]) -> Vec<Rational> {
    let total: f64 = v.iter().sum();
    let mut nums: Vec<i64> = v
        .iter()
        .map(|x| ((x / total) * MWU_DENOMINATOR as f64).floor() as i64)
        .collect();
    let rest = MWU_DENOMINATOR - nums.iter().sum::<i64>();
    let top = (0..nums.len()).max_by_key(|&i| nums[i]).unwrap();
    nums[top] += rest;
    nums.into_iter().map(|k| int(k) / int(MWU_DENOMINATOR)).collect()
}
