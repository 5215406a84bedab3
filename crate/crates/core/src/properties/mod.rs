//! Numerical checks of the metric-like properties of the divergences.
//!
//! Holds the constant tables (comparison with `D_I`, relaxed triangle
//! inequalities, redundancy bounds), single-input checks, flat-Dirichlet
//! samplers, explicit counterexample witnesses and the [`verify`] harness
//! that runs all of them.

mod checks;
mod constants;
pub mod harness;
mod report;
mod sampling;

pub use checks::{
    arithmetic_condition_witness, check_complexity_triangle_condition, check_p3bis, check_p3bis_constants,
    check_redundancy_bound, check_triangle, complexity_triangle_margin, divergence_value,
    generalized_condition_margin, generalized_condition_value, geometric_condition_witness,
    harmonic_condition_witness, harmonic_generalized_witness, mutual_information_redundancy_slack,
    redundancy_domain_contains, sandwich_slack, triangle_slack, ConditionWitness, Domain, RedundancySlack,
};
pub use constants::{
    geometric_k1_c_exchanged, p3bis_constants, p6bis_constant, redundancy_constants, BoundConstants,
    RedundancyConstants, Theta, ThetaInterval,
};
pub use harness::{verify, PoolStats, VerifyReport};
pub use report::{derive_seed, trial_rng, CheckReport, CheckStatus, Witness, WitnessData, MAX_WITNESSES};
pub use sampling::{
    binary_entropy, binary_with_entropy, dirichlet_flat, independent_binary_triple, random_joint, random_triple,
    sample_joint, sample_joints, sample_triple, sample_triples,
};

/// Absolute tolerance of every inequality check.
pub const VIOLATION_TOL: f64 = 1e-9;
