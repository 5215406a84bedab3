//! Information-based divergences between categorical random vectors.
//!
//! Exact finite laws live in [`distribution`], the complexity family and the
//! divergences in [`divergence`], numerical checks of their metric-like
//! properties in [`properties`], and variable selection on tabular data in
//! [`selection`]. All entropies are in nats.

pub mod distribution;
pub mod divergence;
pub mod error;
pub mod properties;
pub mod selection;

pub use distribution::{InfoSummary, JointDistribution, SamplePairs, TripleDistribution, TripleSummary};
pub use divergence::{evaluate, ComplexitySpec, DivergenceResult, GMeanKind, Mixing};
pub use error::{Error, Result};
pub use selection::Dataset;
