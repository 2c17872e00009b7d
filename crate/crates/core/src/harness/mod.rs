//! Sweeps over corpus × theorem × parameter cell, equivalence brackets,
//! the refinement study, and report output.

pub mod config;
pub mod corpus;
pub mod report;
mod run;

pub use config::{
    EquivalenceSweep, ExperimentConfig, GeneratorSpec, GridSpec, QRule, TheoremSweep,
};
pub use corpus::{build_corpus, Member};
pub use report::{
    emit_report, Bracket, EquivalenceSample, Format, RefinementDelta, Report, SkippedCell, Summary,
};
pub use run::{equivalence_samples, run_experiment, REFINEMENT_TOLERANCE};
