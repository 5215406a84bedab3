//! Divergences applied to prediction: candidate comparison, quantization
//! comparison, greedy forward selection and redundancy detection on
//! categorical datasets with plug-in estimates.

mod compare;
mod dataset;
mod forward;
mod redundancy;

pub use compare::{
    compare_candidates, compare_quantizations, compare_summaries, Choice, ComparisonVerdict, Refinement,
    COMPARISON_TOL,
};
pub use dataset::Dataset;
pub use forward::{forward_select, SelectOptions, SelectionStep, SelectionTrace, StoppingReason};
pub use redundancy::{detect_redundant, divergence_matrix, RedundantPair};
