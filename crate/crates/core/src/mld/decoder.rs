use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::model::{CompositeSymbol, ObservedDistribution};

use super::code::CompositeCode;
use super::likelihood::{mld_decode_index, MldScorer};

/// A lookup table on `Ω_n^q` for one `n`; anything not listed is decoded by
/// maximum likelihood.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TableDecoder {
    n: u32,
    entries: BTreeMap<Vec<u32>, usize>,
}

impl TableDecoder {
    /// `overrides` maps count vectors to 0-based codeword indices.
    pub fn new(code: &CompositeCode, n: u32, overrides: BTreeMap<ObservedDistribution, usize>) -> Result<Self> {
        let mut entries = BTreeMap::new();
        for (theta, idx) in overrides {
            if theta.q() != code.q() {
                return Err(Error::AlphabetMismatch { expected: code.q(), found: theta.q() });
            }
            if theta.n() != n {
                return Err(Error::InvalidParameter(format!(
                    "table entry {theta} has {} samples, table is for n={n}",
                    theta.n()
                )));
            }
            if idx >= code.len() {
                return Err(Error::InvalidCode(format!(
                    "table entry {theta} points at codeword {} of {}",
                    idx + 1,
                    code.len()
                )));
            }
            entries.insert(theta.counts().to_vec(), idx);
        }
        Ok(TableDecoder { n, entries })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn lookup(&self, counts: &[u32]) -> Option<usize> {
        let n: u32 = counts.iter().sum();
        if n != self.n {
            return None;
        }
        self.entries.get(counts).copied()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub enum Decoder {
    #[default]
    Mld,
    Table(TableDecoder),
}

impl Decoder {
    pub fn kind(&self) -> &'static str {
        match self {
            Decoder::Mld => "mld",
            Decoder::Table(_) => "table",
        }
    }

    pub fn decode_index(&self, code: &CompositeCode, theta: &ObservedDistribution) -> Result<usize> {
        if let Decoder::Table(t) = self {
            if let Some(i) = t.lookup(theta.counts()) {
                return Ok(i);
            }
        }
        mld_decode_index(code, theta)
    }

    pub(crate) fn decode_with(&self, scorer: &MldScorer, counts: &[u32], theta: &[f64]) -> usize {
        match self {
            Decoder::Table(t) => t.lookup(counts).unwrap_or_else(|| scorer.decode(theta)),
            Decoder::Mld => scorer.decode(theta),
        }
    }
}

/// A decoder equal to maximum likelihood except on the listed observations,
/// which go to the given codewords.
pub fn custom_decoder_from_table(
    code: &CompositeCode,
    n: u32,
    overrides: &BTreeMap<ObservedDistribution, CompositeSymbol>,
) -> Result<Decoder> {
    let indexed = overrides
        .iter()
        .map(|(theta, sym)| {
            let idx = code
                .index_of(sym)
                .ok_or_else(|| Error::InvalidCode(format!("{sym} is not a codeword")))?;
            Ok((theta.clone(), idx))
        })
        .collect::<Result<BTreeMap<_, _>>>()?;
    Ok(Decoder::Table(TableDecoder::new(code, n, indexed)?))
}
