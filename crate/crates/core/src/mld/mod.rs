//! Composite codes under maximum-likelihood decoding.
//!
//! Success probabilities are exact sums over the finite set `Ω_n^q` of
//! observed count vectors, either in floating point or, in [`exact`], in
//! rational arithmetic.

pub mod binary;
pub mod code;
pub mod construct;
pub mod decoder;
pub mod eval;
pub mod exact;
pub mod likelihood;

pub use binary::{
    binary_threshold, construct_binary4, optimize_binary4_grid, symmetric_reflect, Binary4Design,
    GridOptimum,
};
pub use code::CompositeCode;
pub use construct::{
    beta_weight, construct_distinct_support, construct_omega_code, construct_qplus1,
};
pub use decoder::{custom_decoder_from_table, Decoder, TableDecoder};
pub use eval::{decoding_region, decoding_regions, enum_cap, evaluate_code, CodeEvaluation};
pub use exact::{evaluate_code_exact, ExactEvaluation, RationalCode};
pub use likelihood::{log_likelihood, mld_decode, mld_decode_index, prob_observed, TIE_TOLERANCE};
