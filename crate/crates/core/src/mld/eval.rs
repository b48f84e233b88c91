use num_traits::ToPrimitive;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::model::{omega_size, CompositeSymbol, CompositionIter, ObservedDistribution};

use super::code::CompositeCode;
use super::decoder::Decoder;
use super::likelihood::{prob_observed, MldScorer};

/// Default bound on `|Ω_n^q|` for exhaustive evaluation.
pub const DEFAULT_ENUM_CAP: u64 = 2_000_000;

/// Environment variable overriding [`DEFAULT_ENUM_CAP`].
pub const ENUM_CAP_VAR: &str = "CDNA_MAX_ENUM";

/// The enumeration cap in force.
pub fn enum_cap() -> u64 {
    std::env::var(ENUM_CAP_VAR)
        .ok()
        .and_then(|v| v.trim().parse().ok())
        .unwrap_or(DEFAULT_ENUM_CAP)
}

/// `|Ω_n^q|`, or `UnsupportedRange` above the cap.
pub fn check_enumerable(n: u32, q: usize) -> Result<u64> {
    if n == 0 {
        return Err(Error::InvalidParameter("sample count n must be at least 1".into()));
    }
    let size = omega_size(n, q);
    let cap = enum_cap();
    match size.to_u64() {
        Some(s) if s <= cap => Ok(s),
        _ => Err(Error::UnsupportedRange(format!(
            "|Ω_n^q| = {size} for n={n}, q={q} exceeds the enumeration cap {cap} \
             (lower n or q, or raise {ENUM_CAP_VAR})"
        ))),
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CodeEvaluation {
    pub n: u32,
    /// Success probability of each codeword, in code order.
    pub per_symbol_success: Vec<(CompositeSymbol, f64)>,
    pub f_min: f64,
    pub f_avg: f64,
}

impl CodeEvaluation {
    fn from_success(code: &CompositeCode, n: u32, success: Vec<f64>) -> Self {
        let f_min = success.iter().copied().fold(f64::INFINITY, f64::min);
        let f_avg = success.iter().sum::<f64>() / success.len() as f64;
        let per_symbol_success = code.symbols().iter().cloned().zip(success).collect();
        CodeEvaluation { n, per_symbol_success, f_min, f_avg }
    }

    pub fn success(&self) -> Vec<f64> {
        self.per_symbol_success.iter().map(|(_, p)| *p).collect()
    }
}

/// Count vectors of `Ω_n^q` whose first entry is `first`, in lexicographic
/// order. Splitting on the first entry gives independent slices that
/// concatenate to the full enumeration.
fn slice(n: u32, q: usize, first: u32) -> impl Iterator<Item = Vec<u32>> {
    let rest = if q > 1 { Some(CompositionIter::new(n - first, q - 1)) } else { None };
    let single = (q == 1 && first == n).then(|| vec![n]);
    rest.into_iter()
        .flatten()
        .map(move |tail| {
            let mut counts = Vec::with_capacity(q);
            counts.push(first);
            counts.extend(tail);
            counts
        })
        .chain(single)
}

/// Exact per-codeword success probabilities of `code` under `decoder` at `n`
/// samples, summing `prob_observed` over each decoding region.
///
/// The slices of `Ω_n^q` are evaluated in parallel and reduced in a fixed
/// order, so the result does not depend on the thread count.
pub fn evaluate_code(code: &CompositeCode, decoder: &Decoder, n: u32) -> Result<CodeEvaluation> {
    check_enumerable(n, code.q())?;
    let scorer = MldScorer::new(code);
    let q = code.q();
    let nf = f64::from(n);
    let partials: Vec<Result<Vec<f64>>> = (0..=n)
        .into_par_iter()
        .map(|first| {
            let mut acc = vec![0.0; code.len()];
            for counts in slice(n, q, first) {
                let theta: Vec<f64> = counts.iter().map(|&c| f64::from(c) / nf).collect();
                let d = decoder.decode_with(&scorer, &counts, &theta);
                let obs = ObservedDistribution::new(counts)?;
                acc[d] += prob_observed(code.symbol(d), &obs)?;
            }
            Ok(acc)
        })
        .collect();
    let mut success = vec![0.0; code.len()];
    for part in partials {
        for (s, p) in success.iter_mut().zip(part?) {
            *s += p;
        }
    }
    Ok(CodeEvaluation::from_success(code, n, success))
}

/// The partition of `Ω_n^q` induced by `decoder`, one region per codeword in
/// code order.
pub fn decoding_regions(
    code: &CompositeCode,
    decoder: &Decoder,
    n: u32,
) -> Result<Vec<Vec<ObservedDistribution>>> {
    check_enumerable(n, code.q())?;
    let scorer = MldScorer::new(code);
    let nf = f64::from(n);
    let mut regions = vec![Vec::new(); code.len()];
    for counts in CompositionIter::new(n, code.q()) {
        let theta: Vec<f64> = counts.iter().map(|&c| f64::from(c) / nf).collect();
        let d = decoder.decode_with(&scorer, &counts, &theta);
        regions[d].push(ObservedDistribution::new(counts)?);
    }
    Ok(regions)
}

/// `DR(c)`: the observations maximum-likelihood decoding maps to `c`.
pub fn decoding_region(
    code: &CompositeCode,
    c: &CompositeSymbol,
    n: u32,
) -> Result<Vec<ObservedDistribution>> {
    let idx = code
        .index_of(c)
        .ok_or_else(|| Error::InvalidCode(format!("{c} is not a codeword")))?;
    let mut regions = decoding_regions(code, &Decoder::Mld, n)?;
    Ok(regions.swap_remove(idx))
}
