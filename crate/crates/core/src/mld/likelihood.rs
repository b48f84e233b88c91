use crate::combinatorics::{ln_biguint, multinomial, multinomial_u128};
use crate::error::{Error, Result};
use crate::model::{CompositeSymbol, ObservedDistribution};

use super::code::CompositeCode;

/// Per-sample log-likelihoods closer than this are ties.
pub const TIE_TOLERANCE: f64 = 1e-12;

fn check_q(expected: usize, theta: &ObservedDistribution) -> Result<()> {
    if theta.q() != expected {
        return Err(Error::AlphabetMismatch { expected, found: theta.q() });
    }
    Ok(())
}

/// `P[Θ(X_n^c) = θ]`, the multinomial probability of the counts of `θ`
/// under `c`, with `0^0 = 1`.
pub fn prob_observed(c: &CompositeSymbol, theta: &ObservedDistribution) -> Result<f64> {
    check_q(c.q(), theta)?;
    let counts = theta.counts();
    let mut log_p = 0.0;
    let mut direct = 1.0;
    for (&p, &k) in c.probs().iter().zip(counts) {
        if k == 0 {
            continue;
        }
        if p == 0.0 {
            return Ok(0.0);
        }
        log_p += f64::from(k) * p.ln();
        direct *= p.powi(k as i32);
    }
    match multinomial_u128(counts) {
        Some(coef) if coef < (1u128 << 53) && direct.is_normal() => Ok(coef as f64 * direct),
        _ => Ok((ln_biguint(&multinomial(counts)) + log_p).exp()),
    }
}

fn score(logs: &[f64], theta: &[f64]) -> f64 {
    let mut total = 0.0;
    for (&l, &t) in logs.iter().zip(theta) {
        if t > 0.0 {
            total += t * l;
        }
    }
    total
}

/// `Σ θ_i ln c_i`, taking `0 · ln 0 = 0`; `-∞` when `c` misses an observed
/// symbol.
pub fn log_likelihood(c: &CompositeSymbol, theta: &ObservedDistribution) -> Result<f64> {
    check_q(c.q(), theta)?;
    let logs: Vec<f64> = c.probs().iter().map(|p| p.ln()).collect();
    Ok(score(&logs, &theta.theta()))
}

/// Log-probabilities of every codeword, computed once per code.
#[derive(Debug, Clone)]
pub(crate) struct MldScorer {
    logs: Vec<Vec<f64>>,
}

impl MldScorer {
    pub(crate) fn new(code: &CompositeCode) -> Self {
        let logs = code
            .symbols()
            .iter()
            .map(|s| s.probs().iter().map(|p| p.ln()).collect())
            .collect();
        MldScorer { logs }
    }

    /// The first codeword, in code order, beaten by no other by more than
    /// [`TIE_TOLERANCE`].
    pub(crate) fn decode(&self, theta: &[f64]) -> usize {
        let mut best = 0;
        let mut best_score = score(&self.logs[0], theta);
        for (i, logs) in self.logs.iter().enumerate().skip(1) {
            let s = score(logs, theta);
            if s > best_score + TIE_TOLERANCE {
                best = i;
                best_score = s;
            }
        }
        best
    }
}

/// Index of the maximum-likelihood codeword for `θ`; ties go to the
/// lexicographically first codeword. Only `θ = counts / n` enters, so the
/// answer is the same for every `n` on whose grid `θ` lies.
pub fn mld_decode_index(code: &CompositeCode, theta: &ObservedDistribution) -> Result<usize> {
    check_q(code.q(), theta)?;
    Ok(MldScorer::new(code).decode(&theta.theta()))
}

pub fn mld_decode(code: &CompositeCode, theta: &ObservedDistribution) -> Result<CompositeSymbol> {
    mld_decode_index(code, theta).map(|i| code.symbol(i).clone())
}
