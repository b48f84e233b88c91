use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::combinatorics::multinomial;
use crate::error::{Error, Result};
use crate::model::{base_symbol, uniform_symbol, CompositeSymbol, CompositionIter, ObservedDistribution};

use super::code::CompositeCode;
use super::eval::check_enumerable;
use super::exact::RationalCode;
use super::likelihood::prob_observed;

/// Uniform symbols on pairwise disjoint parts of `{1, …, q}`.
pub fn construct_distinct_support(q: usize, parts: &[Vec<usize>]) -> Result<CompositeCode> {
    if q == 0 {
        return Err(Error::InvalidAlphabet("q must be at least 1".into()));
    }
    if parts.is_empty() || parts.len() > q {
        return Err(Error::InvalidParameter(format!(
            "need between 1 and {q} parts, got {}",
            parts.len()
        )));
    }
    let mut used = vec![false; q];
    let mut symbols = Vec::with_capacity(parts.len());
    for part in parts {
        if part.is_empty() {
            return Err(Error::InvalidParameter("empty part".into()));
        }
        let mut probs = vec![0.0; q];
        let w = 1.0 / part.len() as f64;
        for &s in part {
            if s == 0 || s > q {
                return Err(Error::IndexOutOfRange { index: s, q });
            }
            if used[s - 1] {
                return Err(Error::InvalidParameter(format!("symbol {s} appears in two parts")));
            }
            used[s - 1] = true;
            probs[s - 1] = w;
        }
        symbols.push(CompositeSymbol::new(probs)?);
    }
    CompositeCode::new(symbols)
}

/// The base symbols together with the uniform symbol. For `q = 1` the two
/// coincide and the code has a single symbol.
pub fn construct_qplus1(q: usize) -> Result<CompositeCode> {
    let mut symbols = (1..=q).map(|i| base_symbol(q, i)).collect::<Result<Vec<_>>>()?;
    let uniform = uniform_symbol(q)?;
    if !symbols.contains(&uniform) {
        symbols.push(uniform);
    }
    CompositeCode::new(symbols)
}

pub fn construct_qplus1_exact(q: usize) -> Result<RationalCode> {
    if q == 0 {
        return Err(Error::InvalidAlphabet("q must be at least 1".into()));
    }
    let mut symbols: Vec<Vec<BigRational>> = (0..q)
        .map(|i| {
            (0..q)
                .map(|j| if i == j { BigRational::one() } else { BigRational::zero() })
                .collect()
        })
        .collect();
    if q > 1 {
        symbols.push(vec![BigRational::new(BigInt::one(), BigInt::from(q)); q]);
    }
    RationalCode::new(symbols)
}

/// `f_min = 1 - q^{1-n}` and `f_avg = 1 - 1/(q^{n-1}(q+1))` of the `q + 1`
/// code; the one-symbol code at `q = 1` decodes perfectly.
pub fn qplus1_figures(q: usize, n: u32) -> Result<(BigRational, BigRational)> {
    if q == 0 || n == 0 {
        return Err(Error::InvalidParameter("q and n must be at least 1".into()));
    }
    if q == 1 {
        return Ok((BigRational::one(), BigRational::one()));
    }
    let qn1 = BigInt::from(q).pow(n - 1);
    let f_min = BigRational::one() - BigRational::new(BigInt::one(), qn1.clone());
    let f_avg = BigRational::one() - BigRational::new(BigInt::one(), qn1 * BigInt::from(q + 1));
    Ok((f_min, f_avg))
}

/// Every distribution of `Ω_n^q` as a codeword.
pub fn construct_omega_code(n: u32, q: usize) -> Result<CompositeCode> {
    if q == 0 {
        return Err(Error::InvalidAlphabet("q must be at least 1".into()));
    }
    check_enumerable(n, q)?;
    let symbols = CompositionIter::new(n, q)
        .map(|c| ObservedDistribution::new(c).map(|o| o.to_symbol()))
        .collect::<Result<Vec<_>>>()?;
    CompositeCode::new(symbols)
}

pub fn construct_omega_code_exact(n: u32, q: usize) -> Result<RationalCode> {
    if q == 0 {
        return Err(Error::InvalidAlphabet("q must be at least 1".into()));
    }
    check_enumerable(n, q)?;
    let denom = BigInt::from(n);
    let symbols = CompositionIter::new(n, q)
        .map(|c| c.iter().map(|&k| BigRational::new(BigInt::from(k), denom.clone())).collect())
        .collect();
    RationalCode::new(symbols)
}

/// `β_n^ρ = P[Θ(X_n^ρ) = ρ]` for a distribution `ρ` on the `1/n` grid.
pub fn beta_weight(rho: &CompositeSymbol, n: u32) -> Result<f64> {
    if n == 0 {
        return Err(Error::InvalidParameter("sample count n must be at least 1".into()));
    }
    let counts = rho
        .grid_counts(n)
        .ok_or_else(|| Error::InvalidParameter(format!("{rho} is not on the 1/{n} grid")))?;
    prob_observed(rho, &ObservedDistribution::new(counts)?)
}

/// [`beta_weight`] in exact arithmetic, from the counts `ρ·n`.
pub fn beta_weight_exact(rho: &ObservedDistribution) -> BigRational {
    let n = BigInt::from(rho.n());
    let mut acc = BigRational::from_integer(BigInt::from(multinomial(rho.counts())));
    for &k in rho.counts() {
        if k > 0 {
            acc *= BigRational::new(BigInt::from(k), n.clone()).pow(k as i32);
        }
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mld::decoder::Decoder;
    use crate::mld::eval::evaluate_code;
    use crate::mld::exact::evaluate_code_exact;

    #[test]
    fn distinct_support_examples() {
        let code = construct_distinct_support(4, &[vec![1, 2], vec![3, 4]]).unwrap();
        assert_eq!(code.symbol(0).probs(), &[0.0, 0.0, 0.5, 0.5]);
        assert_eq!(code.symbol(1).probs(), &[0.5, 0.5, 0.0, 0.0]);
        for n in 1..=6 {
            let eval = evaluate_code(&code, &Decoder::Mld, n).unwrap();
            assert!(eval.success().iter().all(|&p| (p - 1.0).abs() < 1e-12));
        }
        let singles: Vec<Vec<usize>> = (1..=3).map(|i| vec![i]).collect();
        let e3 = construct_distinct_support(3, &singles).unwrap();
        assert_eq!(e3.symbol(2).probs(), &[1.0, 0.0, 0.0]);
        let one = construct_distinct_support(3, &[vec![1, 2, 3]]).unwrap();
        assert_eq!(evaluate_code(&one, &Decoder::Mld, 4).unwrap().f_min, 1.0);
        assert!(construct_distinct_support(4, &[vec![1, 2], vec![2, 3]]).is_err());
        assert!(construct_distinct_support(4, &[vec![1], vec![]]).is_err());
        assert!(construct_distinct_support(2, &[vec![1], vec![2], vec![]]).is_err());
    }

    #[test]
    fn qplus1_examples() {
        let code = construct_qplus1(2).unwrap();
        assert_eq!(code.len(), 3);
        let eval = evaluate_code(&code, &Decoder::Mld, 3).unwrap();
        assert!((eval.f_min - 0.75).abs() < 1e-12);
        assert!((eval.f_avg - 11.0 / 12.0).abs() < 1e-12);
        assert_eq!(evaluate_code(&code, &Decoder::Mld, 1).unwrap().f_min, 0.0);
        let exact = evaluate_code_exact(&construct_qplus1_exact(3).unwrap(), &Decoder::Mld, 2).unwrap();
        assert_eq!(exact.f_avg, BigRational::new(11.into(), 12.into()));
        assert_eq!(construct_qplus1(1).unwrap().len(), 1);
        assert_eq!(construct_qplus1_exact(1).unwrap().len(), 1);
    }

    #[test]
    fn omega_code_examples() {
        let code = construct_omega_code(2, 2).unwrap();
        assert_eq!(code.binary_values().unwrap(), vec![0.0, 0.5, 1.0]);
        let eval = evaluate_code(&code, &Decoder::Mld, 2).unwrap();
        assert!((eval.f_min - 0.5).abs() < 1e-15);
        assert!((eval.f_avg - 5.0 / 6.0).abs() < 1e-15);
        let e4 = construct_omega_code(1, 4).unwrap();
        assert_eq!(e4.len(), 4);
        assert_eq!(evaluate_code(&e4, &Decoder::Mld, 1).unwrap().f_min, 1.0);
    }

    #[test]
    fn beta_examples() {
        let half = CompositeSymbol::binary(0.5).unwrap();
        assert!((beta_weight(&half, 2).unwrap() - 0.5).abs() < 1e-15);
        assert_eq!(beta_weight(&base_symbol(3, 2).unwrap(), 5).unwrap(), 1.0);
        assert!(beta_weight(&CompositeSymbol::binary(0.3).unwrap(), 2).is_err());
        let b = beta_weight_exact(&ObservedDistribution::new(vec![1, 1]).unwrap());
        assert_eq!(b, BigRational::new(1.into(), 2.into()));
    }
}
