//! A registry of mean functionals and a seeded property suite for the mean
//! axioms.

mod plugins;
mod sampler;
mod suite;

pub use plugins::{eval_functional, lookup, registry, Direction, FunctionalPlugin, POLYA_MIN_CHECKPOINT};
pub use sampler::{SampleKind, Sampler, SamplerConfig, Shape};
pub use suite::{
    genrest_check, genrest_suite, run_axiom_suite, AxiomReport, AxiomStatus, AxiomVerdict, CaseWitness, GenrestOutcome,
    ESTIMATE_TOLERANCE,
};
