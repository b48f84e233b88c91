//! Rational-arithmetic evaluation for codes with rational entries.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::combinatorics::multinomial;
use crate::combinatorics::rational_to_f64;
use crate::error::{Error, Result};
use crate::model::{CompositeSymbol, CompositionIter};

use super::code::CompositeCode;
use super::decoder::Decoder;
use super::eval::check_enumerable;

/// Largest `n` evaluated in rational arithmetic.
pub const EXACT_MAX_N: u32 = 64;

/// A code whose probability vectors are exact rationals, in lexicographic
/// order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RationalCode {
    q: usize,
    symbols: Vec<Vec<BigRational>>,
}

impl RationalCode {
    pub fn new(mut symbols: Vec<Vec<BigRational>>) -> Result<Self> {
        let q = symbols
            .first()
            .ok_or_else(|| Error::InvalidCode("a code needs at least one symbol".into()))?
            .len();
        if q == 0 {
            return Err(Error::InvalidAlphabet("empty probability vector".into()));
        }
        for s in &symbols {
            if s.len() != q {
                return Err(Error::AlphabetMismatch { expected: q, found: s.len() });
            }
            if s.iter().any(Signed::is_negative) {
                return Err(Error::InvalidDistribution("negative entry".into()));
            }
            let total: BigRational = s.iter().sum();
            if !total.is_one() {
                return Err(Error::InvalidDistribution(format!("entries sum to {total}, not 1")));
            }
        }
        symbols.sort();
        if symbols.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::InvalidCode("duplicate symbol".into()));
        }
        Ok(RationalCode { q, symbols })
    }

    /// Binary shorthand `x ↦ (x, 1 - x)`.
    pub fn from_binary(values: Vec<BigRational>) -> Result<Self> {
        let one = BigRational::one();
        if values.iter().any(|x| x.is_negative() || *x > one) {
            return Err(Error::InvalidDistribution("binary value outside [0, 1]".into()));
        }
        RationalCode::new(values.into_iter().map(|x| vec![x.clone(), &one - x]).collect())
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

    pub fn symbols(&self) -> &[Vec<BigRational>] {
        &self.symbols
    }

    /// The nearest floating-point code; fails if rounding merges symbols.
    pub fn to_float(&self) -> Result<CompositeCode> {
        let symbols = self
            .symbols
            .iter()
            .map(|s| CompositeSymbol::new(s.iter().map(rational_to_f64).collect()))
            .collect::<Result<Vec<_>>>()?;
        CompositeCode::new(symbols)
    }
}

/// `Π c_i^{k_i}` with `0^0 = 1`.
fn likelihood(symbol: &[BigRational], counts: &[u32]) -> BigRational {
    let mut acc = BigRational::one();
    for (p, &k) in symbol.iter().zip(counts) {
        if k == 0 {
            continue;
        }
        if p.is_zero() {
            return BigRational::zero();
        }
        acc *= p.pow(k as i32);
    }
    acc
}

/// Exact maximum-likelihood index: strictly larger likelihood wins, ties go
/// to the first codeword.
pub fn mld_decode_exact(code: &RationalCode, counts: &[u32]) -> Result<usize> {
    if counts.len() != code.q {
        return Err(Error::AlphabetMismatch { expected: code.q, found: counts.len() });
    }
    Ok(decode(code, counts).0)
}

fn decode(code: &RationalCode, counts: &[u32]) -> (usize, BigRational) {
    let mut best = 0;
    let mut best_l = likelihood(&code.symbols[0], counts);
    for (i, s) in code.symbols.iter().enumerate().skip(1) {
        let l = likelihood(s, counts);
        if l > best_l {
            best = i;
            best_l = l;
        }
    }
    (best, best_l)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExactEvaluation {
    pub n: u32,
    pub per_symbol_success: Vec<BigRational>,
    pub f_min: BigRational,
    pub f_avg: BigRational,
}

impl ExactEvaluation {
    pub fn f_min_f64(&self) -> f64 {
        rational_to_f64(&self.f_min)
    }

    pub fn f_avg_f64(&self) -> f64 {
        rational_to_f64(&self.f_avg)
    }
}

/// Success probabilities in rational arithmetic. Table entries of a
/// [`Decoder::Table`] take precedence; everything else is decoded by exact
/// maximum likelihood.
pub fn evaluate_code_exact(code: &RationalCode, decoder: &Decoder, n: u32) -> Result<ExactEvaluation> {
    if n > EXACT_MAX_N {
        return Err(Error::UnsupportedRange(format!(
            "rational evaluation supports n ≤ {EXACT_MAX_N}; use floating-point mode"
        )));
    }
    check_enumerable(n, code.q)?;
    let mut success = vec![BigRational::zero(); code.len()];
    for counts in CompositionIter::new(n, code.q) {
        let table = match decoder {
            Decoder::Table(t) => t.lookup(&counts),
            Decoder::Mld => None,
        };
        let (d, l) = match table {
            Some(i) if i < code.len() => (i, likelihood(&code.symbols[i], &counts)),
            Some(i) => {
                return Err(Error::InvalidCode(format!("table points at codeword {}", i + 1)));
            }
            None => decode(code, &counts),
        };
        let coef = BigInt::from(multinomial(&counts));
        success[d] += BigRational::from_integer(coef) * l;
    }
    let f_min = success.iter().min().cloned().expect("nonempty code");
    let total: BigRational = success.iter().sum();
    let f_avg = total / BigRational::from_integer(BigInt::from(code.len()));
    Ok(ExactEvaluation { n, per_symbol_success: success, f_min, f_avg })
}
