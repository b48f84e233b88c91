//! Binary codes in the scalar shorthand `x ↦ (x, 1 - x)`.

use rayon::prelude::*;

use crate::combinatorics::{binomial, ln_biguint};
use crate::error::{Error, Result};
use crate::model::CompositeSymbol;

use super::code::CompositeCode;
use super::decoder::Decoder;
use super::eval::{check_enumerable, evaluate_code};

/// The crossover `θ*` between binary codewords `x < y`: observations with
/// first-symbol frequency below `θ*` are likelier under `x`.
pub fn binary_threshold(x: f64, y: f64) -> Result<f64> {
    if !(0.0 < x && x < y && y < 1.0) {
        return Err(Error::InvalidParameter(format!("need 0 < x < y < 1, got x={x}, y={y}")));
    }
    Ok(((1.0 - y) / (1.0 - x)).ln() / ((x * (1.0 - y)) / ((1.0 - x) * y)).ln())
}

/// Coefficient `β_n` fixing the inner value `α(n) = 1/(1 + β_n)` of the
/// best symmetric size-4 binary code.
///
/// At odd `n = 2m + 1` the balancing condition gives `β^m = C(2m, m)`; at
/// even `n = 2m`, `m ≥ 2`, it gives `β^(m-1) = C(2m-1, m-1)`. At `n = 2`
/// every size-4 code has `f_min = 0` and `β_2 = 2/3` is used.
pub fn beta_n(n: u32) -> Result<f64> {
    if n < 2 {
        return Err(Error::InvalidParameter(format!("n={n} must be at least 2")));
    }
    let m = u64::from(n / 2);
    let (c, root) = match n {
        2 => return Ok(2.0 / 3.0),
        _ if n % 2 == 1 => (binomial(2 * m, m), m),
        _ => (binomial(2 * m - 1, m - 1), m - 1),
    };
    Ok((ln_biguint(&c) / root as f64).exp())
}

#[derive(Debug, Clone, PartialEq)]
pub struct Binary4Design {
    pub n: u32,
    pub beta: f64,
    /// The inner value below 1/2.
    pub alpha: f64,
    pub code: CompositeCode,
}

/// `{0, x, 1 - x, 1}` for `0 < x < 1/2`.
pub fn binary4_code(x: f64) -> Result<CompositeCode> {
    if !(x > 0.0 && x < 0.5) {
        return Err(Error::InvalidParameter(format!("inner value {x} must lie in (0, 1/2)")));
    }
    let inner = CompositeSymbol::binary(x)?;
    CompositeCode::new(vec![
        CompositeSymbol::binary(0.0)?,
        inner.reflected(),
        inner,
        CompositeSymbol::binary(1.0)?,
    ])
}

/// The symmetric size-4 binary code maximizing `f_min` at `n` samples.
pub fn construct_binary4(n: u32) -> Result<Binary4Design> {
    let beta = beta_n(n)?;
    let a = 1.0 / (1.0 + beta);
    let alpha = a.min(1.0 - a);
    Ok(Binary4Design { n, beta, alpha, code: binary4_code(alpha)? })
}

#[derive(Debug, Clone, PartialEq)]
pub struct GridOptimum {
    /// First grid point attaining the maximum.
    pub x_star: f64,
    pub f_min_star: f64,
    /// Smallest and largest grid points within 1e-12 of the maximum.
    pub plateau: (f64, f64),
    pub points: usize,
}

/// Exhaustive search of `f_min({0, x, 1-x, 1})` under maximum-likelihood
/// decoding over `x = step, 2·step, …` below 1/2.
pub fn optimize_binary4_grid(n: u32, step: f64) -> Result<GridOptimum> {
    if !(step > 0.0 && step <= 1e-3) {
        return Err(Error::InvalidParameter(format!("grid step {step} must lie in (0, 1e-3]")));
    }
    check_enumerable(n, 2)?;
    let xs: Vec<f64> = (1u64..)
        .map(|k| k as f64 * step)
        .take_while(|&x| x < 0.5)
        .collect();
    let values = xs
        .par_iter()
        .map(|&x| Ok(evaluate_code(&binary4_code(x)?, &Decoder::Mld, n)?.f_min))
        .collect::<Result<Vec<f64>>>()?;
    let (mut best, mut best_f) = (0, values[0]);
    for (i, &f) in values.iter().enumerate() {
        if f > best_f {
            best = i;
            best_f = f;
        }
    }
    let near: Vec<f64> = xs
        .iter()
        .zip(&values)
        .filter(|(_, &f)| f >= best_f - 1e-12)
        .map(|(&x, _)| x)
        .collect();
    Ok(GridOptimum {
        x_star: xs[best],
        f_min_star: best_f,
        plateau: (near[0], near[near.len() - 1]),
        points: xs.len(),
    })
}

/// The mirror code `{1 - x : x ∈ C}`.
pub fn symmetric_reflect(code: &CompositeCode) -> Result<CompositeCode> {
    if code.q() != 2 {
        return Err(Error::InvalidParameter(format!(
            "reflection is defined for binary codes, got q={}",
            code.q()
        )));
    }
    CompositeCode::new(code.symbols().iter().map(CompositeSymbol::reflected).collect())
}
