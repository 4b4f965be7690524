//! One-sided property testing of cycle-freeness in bounded-degree graphs.
//!
//! The tester only touches the input through the metered neighbor oracle of
//! [`BoundedDegreeGraph`]. It always accepts forests, and every rejection
//! carries a [`CycleCertificate`] that can be re-checked against the graph.
//!
//! Alongside the tester live exact and Monte Carlo oracles for lazy-walk
//! reach probabilities and the dominant/recessive edge classification, plus
//! instance generators and an experiment harness.
//!
//! Probability arithmetic that admits an exact form is generic over
//! [`Probability`]; [`Prob`] and [`ExactProb`] are the two scalar types the
//! crate is exercised with.

pub mod error;
pub mod generators;
pub mod graph;
pub mod harness;
pub mod num;
pub mod oracles;
pub mod tester;
pub mod unionfind;
pub mod walks;

pub use error::{Error, Result};
pub use graph::{BoundedDegreeGraph, DirectedEdge, QueryMeter, VertexId, Violation};
pub use num::Probability;
pub use tester::{
    cycle_finder, cycle_finder_observed, cycle_freeness_tester, cycle_freeness_tester_observed, extract_cycle, verify_certificate, CycleCertificate,
    Outcome, TestVerdict, TesterParams,
};
pub use walks::{induce_path, lazy_step, lazy_walk, InducedPath, Walk};

/// Floating-point probability used by samplers and reports.
pub type Prob = f64;

/// Exact rational probability, used to cross-check the floating-point paths.
pub type ExactProb = num_rational::BigRational;

/// Seeded generator used throughout the crate. ChaCha streams let each trial
/// and each start vertex own an independent, reproducible sequence.
pub type SeedRng = rand_chacha::ChaCha8Rng;

/// Builds the generator for `seed` on a given stream.
pub fn seeded_rng(seed: u64, stream: u64) -> SeedRng {
    use rand::SeedableRng;
    let mut rng = SeedRng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}
