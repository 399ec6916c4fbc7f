//! Averages, uppermost and lowest means, and related functionals.

mod estimate;
mod mediality;
mod minimax;
mod pseudomean;
mod uppermost;

pub use estimate::{render_number, ConvexWeights, MeanEstimate, MeanWitness};
pub use mediality::{absolute_mediality, genrest_transform, MedialWitness, MedialityVerdict};
pub use minimax::{minimax_weights, solve_approximate, solve_exact, GameSolution, MinimaxResult, EXACT_ENTRY_LIMIT};
pub use pseudomean::{expansion_pseudomean, expansion_pseudomean_report, PseudomeanReport};
pub use uppermost::{average_extremes, b_average, fundamental_cell, lowest_mean, uppermost_mean};

#[allow(unused_imports)]
pub(crate) use uppermost::{box_ladder, ladder_sides, require_not_oracle, LadderResult};
