//! Restricted k-fold sumsets of integer sets and the double-counting bound
//! `|(k+1)∧A| / |k∧A| ≤ (n−k)/(k+1)`.
//!
//! * [`sumset`]: `k∧A`, capped representation multiplicities, explicit representations.
//! * [`graph`]: the extension graph between `k`- and `(k+1)`-sums and the
//!   inequality chain checked on it.
//! * [`harness`]: exact ratio verdicts, generators, closed-form checks, brute-force oracle.
//! * [`search`]: exhaustive and hill-climbing searches for extremal sets and counterexamples.
//! * [`cli`]: the `sumsets` command-line front end.

mod bits;
pub mod cli;
pub mod error;
pub mod graph;
pub mod harness;
pub mod output;
pub mod search;
pub mod set;
pub mod sumset;

pub use error::{Result, SumsetError};
pub use graph::{
    build_extension_graphs, build_extension_graphs_with, degree_profile, verify_counting_chain,
    BuildStrategy, CheckName, DegreeProfile, ExtensionGraph, VerificationReport,
};
pub use harness::{
    brute_force_oracle, ratio_check, structural_checks, GeneratorSpec, RatioVerdict,
};
pub use search::{
    exhaustive_search, stochastic_search, ExhaustiveParams, SearchReport, StochasticParams,
};
pub use set::IntegerSet;
pub use sumset::{
    enumerate_representations, ksum_count, ksum_multiplicity, ksum_set, RepresentationList,
    SumMultiplicityTable,
};

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");
