//! Densities of sets, packing and covering numbers, asymptotic profiles and
//! rounding of functions to sets.

mod density;
mod packing;
mod profile;
mod rounding;

pub use density::{density_pair, difference_set_bound, periodic_difference_set, DensityPair, DifferenceSetReport};
pub use packing::{
    covering_number, packing_limit_check, packing_number, CurveEntry, PackingCurve, PackingResult, SearchMode,
    EXACT_SUBSET_LIMIT,
};
pub use profile::{asymptotic_profile, polya_checkpoints, AsymptoticProfile, EnvelopeRow};
pub use rounding::{round_to_set, RoundingReport};
