//! Expected coverage depth of ω-composite sequences.
//!
//! `E(ℓ, ω)` is the expected number of reads until every one of the ℓ indices
//! has shown all ω symbols of its support. It is evaluated through the tail
//! sum `Σ_m P[max_i X_i > m] = Σ_m (1 - (1 - γ_{ω,m})^ℓ)`, where `γ_{ω,m}` is
//! the probability that `m` uniform draws from ω symbols miss at least one.

use num_bigint::{BigInt, BigUint, Sign};
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::combinatorics::{binomial, binomial_row, harmonic, ln_biguint, rational_to_f64};
use crate::error::{Error, Result};

/// Largest ℓ accepted by [`expected_coverage_closed_w2`].
pub const CLOSED_W2_MAX_ELL: u64 = 64;

/// Largest `C(ℓ, r)` accepted by [`expected_coverage_partial`].
pub const PARTIAL_MAX_SUBSETS: u64 = 5000;

/// Bound on big-integer steps spent aggregating the partial-recovery sum.
const PARTIAL_MAX_WORK: f64 = 2.0e7;

/// Largest float rounding error tolerated in the partial-recovery combination.
const PARTIAL_MAX_ROUNDING: f64 = 1e-8;

/// Parameters of a coverage-depth question.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CoverageParams {
    pub ell: u64,
    pub omega: u32,
    pub r: Option<u64>,
    pub k: Option<u64>,
}

impl CoverageParams {
    pub fn new(ell: u64, omega: u32) -> Result<Self> {
        let p = CoverageParams { ell, omega, r: None, k: None };
        p.validate()?;
        Ok(p)
    }

    pub fn with_r(mut self, r: u64) -> Result<Self> {
        self.r = Some(r);
        self.validate()?;
        Ok(self)
    }

    pub fn with_k(mut self, k: u64) -> Result<Self> {
        self.k = Some(k);
        self.validate()?;
        Ok(self)
    }

    pub fn validate(&self) -> Result<()> {
        check_ell_omega(self.ell, self.omega)?;
        if let Some(r) = self.r {
            check_r(self.ell, r)?;
        }
        if self.k == Some(0) {
            return Err(Error::InvalidParameter("strand count k must be at least 1".into()));
        }
        Ok(())
    }
}

/// A lower and an upper bound.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundPair {
    pub lower: f64,
    pub upper: f64,
}

impl BoundPair {
    pub fn contains(&self, v: f64) -> bool {
        self.lower <= v && v <= self.upper
    }
}

fn check_ell_omega(ell: u64, omega: u32) -> Result<()> {
    if ell == 0 {
        return Err(Error::InvalidParameter("sequence length ℓ must be at least 1".into()));
    }
    if omega == 0 {
        return Err(Error::InvalidParameter("combinatorial factor ω must be at least 1".into()));
    }
    Ok(())
}

fn check_r(ell: u64, r: u64) -> Result<()> {
    if r == 0 || r > ell {
        return Err(Error::InvalidParameter(format!(
            "recovery threshold r={r} must lie in 1..={ell}"
        )));
    }
    Ok(())
}

/// Occupancy chain for `m` uniform draws from `w` symbols, tracking only the
/// states where some symbol is still missing so that `γ` keeps full relative
/// precision as it decays.
#[derive(Debug, Clone)]
struct MissProbabilities {
    w: usize,
    // probs[k] = P[exactly k distinct symbols seen], k < w
    probs: Vec<f64>,
}

impl MissProbabilities {
    fn new(w: u32) -> Self {
        let w = w as usize;
        let mut probs = vec![0.0; w];
        probs[0] = 1.0;
        MissProbabilities { w, probs }
    }

    fn gamma(&self) -> f64 {
        self.probs.iter().sum()
    }

    fn draw(&mut self) {
        let w = self.w as f64;
        for k in (0..self.w).rev() {
            let stay = self.probs[k] * k as f64 / w;
            let arrive = if k > 0 {
                self.probs[k - 1] * (self.w - k + 1) as f64 / w
            } else {
                0.0
            };
            self.probs[k] = stay + arrive;
        }
    }
}

/// `γ_{w,m}`: the probability that `m` uniform draws from `w` symbols do not
/// cover all of them. `γ_{w,0} = 1`.
pub fn gamma(w: u32, m: u32) -> f64 {
    if w == 0 {
        return 0.0;
    }
    let mut chain = MissProbabilities::new(w);
    for _ in 0..m {
        chain.draw();
    }
    chain.gamma()
}

/// `1 - (1 - γ)^ℓ` without cancellation when γ is small.
fn not_all_recovered(gamma: f64, ell: u64) -> f64 {
    if gamma >= 1.0 {
        return 1.0;
    }
    -((ell as f64) * (-gamma).ln_1p()).exp_m1()
}

/// The smallest `m` with `ℓ ω ((ω-1)/ω)^m ≤ 1`; past it the series terms
/// are dominated by a geometric sequence of ratio `(ω-1)/ω`.
pub fn geometric_regime_start(ell: u64, omega: u32) -> u64 {
    if omega <= 1 {
        return 0;
    }
    let ratio = (omega as f64 - 1.0) / omega as f64;
    let lead = ell as f64 * omega as f64;
    let mut m = ((1.0 / lead).ln() / ratio.ln()).ceil().max(0.0) as u64;
    // guard the ceiling against rounding in either direction
    while m > 0 && lead * ratio.powf((m - 1) as f64) <= 1.0 {
        m -= 1;
    }
    while lead * ratio.powf(m as f64) > 1.0 {
        m += 1;
    }
    m
}

/// A truncated series value with a rigorous bound on the omitted tail.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesEstimate {
    pub value: f64,
    pub tail_bound: f64,
    pub terms: u64,
}

/// `E(ℓ, ω)` with the truncation bookkeeping.
///
/// Summation stops at the first `m` past the geometric regime start whose
/// term is below `tol`. The omitted tail is at most `ℓ ω² ((ω-1)/ω)^(m+1)`,
/// which is within a factor ω of the last term kept, so the total error is
/// at most about `ω · tol`.
pub fn expected_coverage_series(ell: u64, omega: u32, tol: f64) -> Result<SeriesEstimate> {
    check_ell_omega(ell, omega)?;
    if !tol.is_finite() || tol <= 0.0 {
        return Err(Error::InvalidParameter(format!("tolerance {tol} must be finite and positive")));
    }
    let m_star = geometric_regime_start(ell, omega);
    let ratio = (omega as f64 - 1.0) / omega as f64;
    let mut chain = MissProbabilities::new(omega);
    let mut value = 0.0;
    let mut m: u64 = 0;
    loop {
        let term = not_all_recovered(chain.gamma(), ell);
        value += term;
        if term < tol && m > m_star {
            let tail_bound = if omega == 1 {
                0.0
            } else {
                ell as f64 * (omega as f64).powi(2) * ratio.powf((m + 1) as f64)
            };
            return Ok(SeriesEstimate { value, tail_bound, terms: m + 1 });
        }
        chain.draw();
        m += 1;
    }
}

/// `E(ℓ, ω)`, the expected number of reads to recover a length-ℓ
/// ω-composite sequence.
pub fn expected_coverage(ell: u64, omega: u32, tol: f64) -> Result<f64> {
    expected_coverage_series(ell, omega, tol).map(|s| s.value)
}

/// `E(ℓ, 2) = 2 + Σ_{r=1}^{ℓ} C(ℓ,r) (-1)^{r+1} / (2^r - 1)` in exact arithmetic.
pub fn expected_coverage_closed_w2_exact(ell: u64) -> Result<BigRational> {
    if ell == 0 {
        return Err(Error::InvalidParameter("sequence length ℓ must be at least 1".into()));
    }
    if ell > CLOSED_W2_MAX_ELL {
        return Err(Error::UnsupportedRange(format!(
            "closed form for ω=2 is evaluated exactly only up to ℓ={CLOSED_W2_MAX_ELL}; \
             use expected_coverage for ℓ={ell}"
        )));
    }
    let mut acc = BigRational::from_integer(BigInt::from(2));
    for r in 1..=ell {
        let num = BigInt::from_biguint(Sign::Plus, binomial(ell, r));
        let den = (BigInt::one() << r) - BigInt::one();
        let term = BigRational::new(num, den);
        if r % 2 == 1 {
            acc += term;
        } else {
            acc -= term;
        }
    }
    Ok(acc)
}

/// Float value of [`expected_coverage_closed_w2_exact`].
pub fn expected_coverage_closed_w2(ell: u64) -> Result<f64> {
    let exact = expected_coverage_closed_w2_exact(ell)?;
    Ok(rational_to_f64(&exact))
}

/// Lower and upper bounds on `E(ℓ, ω)` for ω ≥ 2. For ω = 2 the sharper
/// dedicated pair `1 + log₂ℓ + 1/(ℓ ln 2) ≤ E ≤ 2 + log₂ℓ + 1/ln 2` is used.
pub fn coverage_bounds(ell: u64, omega: u32) -> Result<BoundPair> {
    check_ell_omega(ell, omega)?;
    if omega < 2 {
        return Err(Error::InvalidParameter("coverage bounds need ω ≥ 2".into()));
    }
    let l = ell as f64;
    let ln2 = std::f64::consts::LN_2;
    if omega == 2 {
        return Ok(BoundPair {
            lower: 1.0 + l.log2() + 1.0 / (l * ln2),
            upper: 2.0 + l.log2() + 1.0 / ln2,
        });
    }
    let w = omega as f64;
    let base = (w / (w - 1.0)).log2();
    Ok(BoundPair {
        lower: l.log2() / base + std::f64::consts::LOG2_E / (l * base),
        upper: 1.0 + (w * l).log2() / base + w,
    })
}

/// Bounds `(H_n/λ, 1 + H_n/λ)` on the mean of the maximum of `n` IID
/// geometric variables with success probability `p`, `λ = ln(1/(1-p))`.
pub fn geometric_max_bounds(n: u64, p: f64) -> Result<BoundPair> {
    if n == 0 {
        return Err(Error::InvalidParameter("need at least one variable".into()));
    }
    if !(p > 0.0 && p < 1.0) {
        return Err(Error::InvalidParameter(format!("success probability {p} must lie in (0, 1)")));
    }
    let lambda = -(-p).ln_1p();
    let h = harmonic(n) / lambda;
    Ok(BoundPair { lower: h, upper: 1.0 + h })
}

fn signed(v: BigUint) -> BigInt {
    BigInt::from_biguint(Sign::Plus, v)
}

/// `α(m, r, j)` for every `j = 1..=C(m, r)`: the number of `j`-element sets
/// of distinct `r`-subsets of an `m`-set whose union is the whole set,
/// by inclusion-exclusion over the uncovered elements.
pub fn alpha_row(r: u64, m: u64) -> Vec<BigUint> {
    let width = binomial(m, r).to_usize().unwrap_or(usize::MAX);
    let mut acc = vec![BigInt::zero(); width];
    for i in 0..=m {
        let n_subsets = binomial(m - i, r);
        let upto = n_subsets.to_usize().unwrap_or(usize::MAX).min(width);
        if upto == 0 {
            continue;
        }
        let weight = signed(binomial(m, i));
        let row = binomial_row(&n_subsets, upto);
        for (j, c) in row.into_iter().enumerate().skip(1) {
            let term = &weight * signed(c);
            if i % 2 == 0 {
                acc[j - 1] += term;
            } else {
                acc[j - 1] -= term;
            }
        }
    }
    acc.into_iter()
        .map(|v| v.to_biguint().expect("set counts are nonnegative"))
        .collect()
}

/// `α(ℓ, r, m, j)`: number of `j`-sets of `r`-subsets of `[ℓ]` whose union is
/// a fixed `m`-subset.
pub fn alpha_count(ell: u64, r: u64, m: u64, j: u64) -> Result<BigUint> {
    check_r(ell, r)?;
    if m == 0 || m > ell {
        return Err(Error::InvalidParameter(format!("m={m} must lie in 1..={ell}")));
    }
    let max_j = binomial(ell, r);
    if j == 0 || BigUint::from(j) > max_j {
        return Err(Error::InvalidParameter(format!("j={j} must lie in 1..=C(ℓ,r)={max_j}")));
    }
    let mut acc = BigInt::zero();
    for i in 0..=m {
        let n_subsets = binomial(m - i, r);
        let c = binomial_big(&n_subsets, j);
        let term = signed(binomial(m, i)) * signed(c);
        if i % 2 == 0 {
            acc += term;
        } else {
            acc -= term;
        }
    }
    Ok(acc.to_biguint().expect("set counts are nonnegative"))
}

/// `C(n, j)` for a big `n` and machine-size `j`.
fn binomial_big(n: &BigUint, j: u64) -> BigUint {
    if BigUint::from(j) > *n {
        return BigUint::zero();
    }
    let mut acc = BigUint::one();
    for t in 0..j {
        acc = acc * (n - BigUint::from(t)) / BigUint::from(t + 1);
    }
    acc
}

/// Per-`m` integer weights `C(ℓ,m) Σ_j (-1)^{j+1} α(m, r, j)` of the
/// partial-recovery sum, indexed by `m = 0..=ℓ`.
pub fn partial_coefficients(ell: u64, r: u64) -> Result<Vec<BigInt>> {
    check_r(ell, r)?;
    let mut coefs = vec![BigInt::zero(); ell as usize + 1];
    for m in r..=ell {
        let signed_total = alpha_row(r, m)
            .into_iter()
            .enumerate()
            .fold(BigInt::zero(), |acc, (idx, a)| {
                // idx = j - 1
                if idx % 2 == 0 {
                    acc + signed(a)
                } else {
                    acc - signed(a)
                }
            });
        coefs[m as usize] = signed(binomial(ell, m)) * signed_total;
    }
    Ok(coefs)
}

fn partial_work(ell: u64, r: u64) -> f64 {
    let mut work = 0.0;
    for m in r..=ell {
        for k in r..=m {
            work += binomial(k, r).to_f64().unwrap_or(f64::INFINITY);
        }
    }
    work
}

/// `E(ℓ, ω; r)`: expected reads until at least `r` of the ℓ indices are
/// recovered, as the alternating sum `Σ_m c_m E(m, ω)` with exact integer
/// weights `c_m` from [`partial_coefficients`].
///
/// Refuses (`UnsupportedRange`) when `C(ℓ, r)` exceeds
/// [`PARTIAL_MAX_SUBSETS`], or when the weights are so large that float
/// rounding in the combination could exceed 1e-8. Monte Carlo simulation is
/// the supported route there.
pub fn expected_coverage_partial(ell: u64, omega: u32, r: u64, tol: f64) -> Result<f64> {
    check_ell_omega(ell, omega)?;
    check_r(ell, r)?;
    if !tol.is_finite() || tol <= 0.0 {
        return Err(Error::InvalidParameter(format!("tolerance {tol} must be finite and positive")));
    }
    let subsets = binomial(ell, r);
    if subsets > BigUint::from(PARTIAL_MAX_SUBSETS) {
        return Err(Error::UnsupportedRange(format!(
            "C(ℓ,r)={subsets} exceeds {PARTIAL_MAX_SUBSETS}; estimate E(ℓ,ω;r) by simulation"
        )));
    }
    // |c_m| = C(ℓ,m) C(m-1,r-1); reject ill-conditioned combinations up front
    let e_max = expected_coverage(ell, omega, 1e-6)? + 1.0;
    let weight_sum: f64 = (r..=ell)
        .map(|m| (ln_biguint(&binomial(ell, m)) + ln_biguint(&binomial(m - 1, r - 1))).exp())
        .sum();
    let rounding = weight_sum * e_max * 8.0 * f64::EPSILON;
    if !rounding.is_finite() || rounding > PARTIAL_MAX_ROUNDING {
        return Err(Error::UnsupportedRange(format!(
            "alternating sum for ℓ={ell}, r={r} loses precision in floating point; \
             estimate E(ℓ,ω;r) by simulation"
        )));
    }
    if partial_work(ell, r) > PARTIAL_MAX_WORK {
        return Err(Error::UnsupportedRange(format!(
            "partial-recovery sum for ℓ={ell}, r={r} is too large to aggregate exactly; \
             estimate E(ℓ,ω;r) by simulation"
        )));
    }
    let inner_tol = (tol / weight_sum).max(1e-16);
    let coefs = partial_coefficients(ell, r)?;
    let mut total = 0.0;
    for (m, c) in coefs.iter().enumerate().skip(1) {
        if c.is_zero() {
            continue;
        }
        let e = expected_coverage(m as u64, omega, inner_tol)?;
        total += c.to_f64().expect("weights checked above") * e;
    }
    Ok(total)
}

/// `RA(ℓ, ω, k) = k E(ℓ, ω)`: expected reads to recover one labelled
/// sequence out of `k` sampled uniformly.
pub fn random_access_expectation(ell: u64, omega: u32, k: u64, tol: f64) -> Result<f64> {
    if k == 0 {
        return Err(Error::InvalidParameter("strand count k must be at least 1".into()));
    }
    Ok(k as f64 * expected_coverage(ell, omega, tol)?)
}

/// Least-squares slope and intercept of `E(ℓ, ω)` against `log₂ ℓ`.
pub fn log_fit(ells: &[u64], omega: u32, tol: f64) -> Result<(f64, f64)> {
    if ells.len() < 2 {
        return Err(Error::InvalidParameter("a fit needs at least two points".into()));
    }
    let points = ells
        .iter()
        .map(|&l| Ok(((l as f64).log2(), expected_coverage(l, omega, tol)?)))
        .collect::<Result<Vec<_>>>()?;
    let n = points.len() as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / n;
    let my = points.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = points.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let slope = sxy / sxx;
    Ok((slope, my - slope * mx))
}

/// The slope `1 / log₂(ω/(ω-1))` of `E(ℓ, ω)` in `log₂ ℓ`.
pub fn asymptotic_slope(omega: u32) -> Result<f64> {
    if omega < 2 {
        return Err(Error::InvalidParameter("slope is defined for ω ≥ 2".into()));
    }
    let w = omega as f64;
    Ok(1.0 / (w / (w - 1.0)).log2())
}
