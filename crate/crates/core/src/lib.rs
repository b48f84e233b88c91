//! Coverage depth and maximum-likelihood decoding for composite DNA.
//!
//! A composite symbol is a probability vector over the base alphabet
//! `{1, …, q}`; reading it `n` times yields a count vector in `Ω_n^q`. The
//! [`coverage`] module answers how many reads recover a sequence of
//! ω-symbols, [`sim`] estimates the same by simulation, and [`mld`] evaluates
//! and constructs codes under maximum-likelihood decoding.

pub mod combinatorics;
pub mod coverage;
pub mod error;
pub mod mld;
pub mod model;
pub mod sim;

pub use coverage::{
    alpha_count, coverage_bounds, expected_coverage, expected_coverage_closed_w2,
    expected_coverage_partial, gamma, geometric_max_bounds, random_access_expectation, BoundPair,
    CoverageParams,
};
pub use error::{Error, Result};
pub use model::{
    base_symbol, enumerate_omega, uniform_symbol, BaseAlphabet, CompositeSymbol,
    ObservedDistribution, OmegaSequence, OmegaSymbol, TransmissionLog,
};
pub use sim::{run_simulation, SimConfig, SimMode, SimReport};
