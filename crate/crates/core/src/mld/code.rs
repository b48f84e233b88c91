use std::fmt;

use crate::error::{Error, Result};
use crate::model::CompositeSymbol;

/// A set of distinct composite symbols over one alphabet, kept in
/// lexicographic order. For binary codes this is ascending order of the
/// first coordinate.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CompositeCode {
    q: usize,
    symbols: Vec<CompositeSymbol>,
}

impl CompositeCode {
    pub fn new(mut symbols: Vec<CompositeSymbol>) -> Result<Self> {
        let q = symbols
            .first()
            .ok_or_else(|| Error::InvalidCode("a code needs at least one symbol".into()))?
            .q();
        if let Some(bad) = symbols.iter().find(|s| s.q() != q) {
            return Err(Error::AlphabetMismatch { expected: q, found: bad.q() });
        }
        symbols.sort();
        if let Some(w) = symbols.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::InvalidCode(format!("duplicate symbol {}", w[0])));
        }
        Ok(CompositeCode { q, symbols })
    }

    /// A binary code from the shorthand values `x ↦ (x, 1 - x)`.
    pub fn from_binary(values: &[f64]) -> Result<Self> {
        let symbols = values
            .iter()
            .map(|&x| CompositeSymbol::binary(x))
            .collect::<Result<Vec<_>>>()?;
        CompositeCode::new(symbols)
    }

    pub fn q(&self) -> usize {
        self.q
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn symbols(&self) -> &[CompositeSymbol] {
        &self.symbols
    }

    pub fn symbol(&self, index: usize) -> &CompositeSymbol {
        &self.symbols[index]
    }

    pub fn index_of(&self, symbol: &CompositeSymbol) -> Option<usize> {
        self.symbols.binary_search(symbol).ok()
    }

    /// Shorthand values of a binary code.
    pub fn binary_values(&self) -> Option<Vec<f64>> {
        (self.q == 2).then(|| self.symbols.iter().map(|s| s.probs()[0]).collect())
    }

    /// `true` when the code equals its own reflection up to rounding.
    pub fn is_symmetric(&self) -> bool {
        let mut mirrored: Vec<CompositeSymbol> =
            self.symbols.iter().map(CompositeSymbol::reflected).collect();
        mirrored.sort();
        mirrored.iter().zip(&self.symbols).all(|(a, b)| {
            a.probs().iter().zip(b.probs()).all(|(x, y)| (x - y).abs() <= 1e-12)
        })
    }
}

impl fmt::Display for CompositeCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, s) in self.symbols.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{s}")?;
        }
        write!(f, "}}")
    }
}
