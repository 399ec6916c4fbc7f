//! Means and densities of bounded functions and sets on finitely generated
//! abelian groups `Z^d x Z_m1 x ... x Z_mr`.
//!
//! Periodic inputs (and their finite modifications) get exact rational
//! answers; oracle windows on `Z` get labeled estimates. See the guide in
//! `book/` for a walk through the concepts.

pub mod axioms;
pub mod commarginal;
pub mod densities;
pub mod error;
pub mod group;
pub mod means;
pub mod rational;
pub mod repr;
pub mod tile;
pub mod witness;

pub use axioms::{eval_functional, genrest_check, run_axiom_suite, AxiomReport};
pub use commarginal::{counting_discrepancy, finite_commarginal_witness, is_perturbation, PerturbationVerdict};
pub use densities::{
    asymptotic_profile, covering_number, density_pair, difference_set_bound, packing_limit_check, packing_number,
    round_to_set, DensityPair, PackingResult, SearchMode,
};
pub use error::{Error, Result};
pub use group::{difference_set, expansion_ratio, sumset, FiniteSubset, GroupElement, GroupSpec};
pub use means::{
    absolute_mediality, b_average, expansion_pseudomean, genrest_transform, lowest_mean, minimax_weights,
    uppermost_mean, ConvexWeights, MeanEstimate, MedialityVerdict,
};
pub use rational::Rational;
pub use repr::{linear_combine, positive_part, FiniteModRep, FunctionRep, OracleWindowRep, PeriodicRep};
pub use tile::{build_tile, tile_report, Tile, TileReport};
pub use witness::{check_witness, WitnessFamilySpec, WitnessOutcome, WitnessVerdict};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/groups.md")]
    mod groups {}
    #[doc = include_str!("../../../book/src/representations.md")]
    mod representations {}
    #[doc = include_str!("../../../book/src/means.md")]
    mod means {}
    #[doc = include_str!("../../../book/src/densities.md")]
    mod densities {}
    #[doc = include_str!("../../../book/src/witnesses.md")]
    mod witnesses {}
    #[doc = include_str!("../../../book/src/commarginality.md")]
    mod commarginality {}
    #[doc = include_str!("../../../book/src/axioms.md")]
    mod axioms {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
