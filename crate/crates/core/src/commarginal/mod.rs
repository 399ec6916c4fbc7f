//! Perturbations and commarginality witnesses for sets of integers.

mod discrepancy;
mod kernel;
mod perturbation;
mod sets;

pub use discrepancy::counting_discrepancy;
pub use kernel::{finite_commarginal_witness, finite_witness_from_reps, CommarginalWitness, MarginalCheck};
pub use perturbation::{is_perturbation, Matching, MatchingRule, PerturbationVerdict};
