//! Exact binomial and multinomial coefficients plus a few float helpers.

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// `C(n, k)` as a `u128`, or `None` on overflow.
pub fn binomial_u128(n: u64, k: u64) -> Option<u128> {
    if k > n {
        return Some(0);
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        // acc * (n - i) / (i + 1) is integral; after removing g, den divides num
        let num = u128::from(n - i);
        let g = num_integer::gcd(acc, u128::from(i + 1));
        let den = u128::from(i + 1) / g;
        acc = (acc / g).checked_mul(num / den)?;
    }
    Some(acc)
}

/// `C(n, k)` exactly.
pub fn binomial(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    if let Some(v) = binomial_u128(n, k) {
        return BigUint::from(v);
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc *= n - i;
        acc /= i + 1;
    }
    acc
}

/// Row `C(n, 0), C(n, 1), …, C(n, upto)` built by the multiplicative recurrence.
pub fn binomial_row(n: &BigUint, upto: usize) -> Vec<BigUint> {
    let mut row = Vec::with_capacity(upto + 1);
    let mut cur = BigUint::one();
    row.push(cur.clone());
    for j in 0..upto {
        let j_big = BigUint::from(j);
        if &j_big >= n {
            cur = BigUint::zero();
        } else {
            cur = cur * (n - &j_big) / BigUint::from(j + 1);
        }
        row.push(cur.clone());
    }
    row
}

/// Multinomial coefficient `n! / (k_1! … k_q!)` with `n = Σ k_i`.
pub fn multinomial(counts: &[u32]) -> BigUint {
    if let Some(v) = multinomial_u128(counts) {
        return BigUint::from(v);
    }
    let mut acc = BigUint::one();
    let mut total: u64 = 0;
    for &c in counts {
        total += u64::from(c);
        acc *= binomial(total, u64::from(c));
    }
    acc
}

/// Multinomial coefficient as `u128`, or `None` on overflow.
pub fn multinomial_u128(counts: &[u32]) -> Option<u128> {
    let mut acc: u128 = 1;
    let mut total: u64 = 0;
    for &c in counts {
        total += u64::from(c);
        acc = acc.checked_mul(binomial_u128(total, u64::from(c))?)?;
    }
    Some(acc)
}

/// Natural log of a big unsigned integer (`-inf` for zero).
pub fn ln_biguint(v: &BigUint) -> f64 {
    if v.is_zero() {
        return f64::NEG_INFINITY;
    }
    let bits = v.bits();
    if bits <= 1000 {
        if let Some(f) = v.to_f64() {
            if f.is_finite() {
                return f.ln();
            }
        }
    }
    let shift = bits - 64;
    let top = (v >> shift).to_f64().unwrap_or(f64::MAX);
    top.ln() + shift as f64 * std::f64::consts::LN_2
}

/// `n`-th harmonic number.
pub fn harmonic(n: u64) -> f64 {
    // summing small terms first
    (1..=n).rev().map(|i| 1.0 / i as f64).sum()
}

/// Nearest float to a big rational, through logarithms when the parts
/// overflow `f64`.
pub fn rational_to_f64(r: &BigRational) -> f64 {
    r.to_f64().unwrap_or_else(|| {
        // ratio of logs for values beyond the direct conversion
        let sign = if r.is_negative() { -1.0 } else { 1.0 };
        let num = r.numer().abs().to_biguint().unwrap_or_default();
        let den = r.denom().abs().to_biguint().unwrap_or_default();
        sign * (ln_biguint(&num) - ln_biguint(&den)).exp()
    })
}
